/*
 * Copyright (C) 2026 The amdet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AMDET_IO_HPP
#define AMDET_IO_HPP

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>

#include "amdet/common.hpp"

namespace amdet {

struct FileError : Error {
    using Error::Error;
};

inline Bytes read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FileError("cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw FileError("read failure on " + path);
    return data;
}

inline std::string read_text_file(const std::string& path) {
    Bytes data = read_file(path);
    return std::string(data.begin(), data.end());
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw FileError("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw FileError("write failure on " + path);
}

/// "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z".
inline UnixTime parse_iso8601(std::string_view s) {
    auto num = [&](std::size_t at, std::size_t len) -> int {
        if (at + len > s.size()) throw Error("timestamp too short: " + std::string(s));
        int v = 0;
        auto res = std::from_chars(s.data() + at, s.data() + at + len, v);
        if (res.ec != std::errc() || res.ptr != s.data() + at + len)
            throw Error("bad timestamp: " + std::string(s));
        return v;
    };
    int y = num(0, 4), mo = num(5, 2), d = num(8, 2);
    if (s[4] != '-' || s[7] != '-') throw Error("bad timestamp: " + std::string(s));
    int h = 0, mi = 0, sec = 0;
    if (s.size() > 10) {
        if (s[10] != 'T' && s[10] != ' ') throw Error("bad timestamp: " + std::string(s));
        h = num(11, 2);
        mi = num(14, 2);
        sec = num(17, 2);
        if (s[13] != ':' || s[16] != ':') throw Error("bad timestamp: " + std::string(s));
        if (s.size() > 19 && s.substr(19) != "Z")
            throw Error("bad timestamp suffix: " + std::string(s));
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60)
        throw Error("timestamp component out of range: " + std::string(s));
    return civil_to_unix(y, mo, d, h, mi, sec);
}

inline std::string format_iso8601(UnixTime t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    // civil-from-days, inverse of days_from_civil
    std::int64_t z = days + 719468;
    std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    unsigned d = doy - (153 * mp + 2) / 5 + 1;
    unsigned m = mp + (mp < 10 ? 3 : -9);
    y += (m <= 2);

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace amdet

#endif  // AMDET_IO_HPP
