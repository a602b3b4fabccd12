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

// Labeled feature-vector datasets and their CSV persistence.
// Feature CSV: header "id,label,f0,...,f{n-1}", label 0=benign 1=malicious,
// bits as 0/1. Dataset manifest CSV: header "apk_path,label".

#ifndef AMDET_DATASET_HPP
#define AMDET_DATASET_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amdet/common.hpp"
#include "amdet/features.hpp"

namespace amdet::eval {

struct LabeledDataset {
    std::vector<std::string> ids;
    std::vector<features::FeatureVector> vectors;
    std::vector<int> labels;  // 0 = benign, 1 = malicious

    std::size_t size() const { return ids.size(); }

    std::size_t width() const { return vectors.empty() ? 0 : vectors[0].bits.size(); }

    void push(std::string id, features::FeatureVector v, int label) {
        ids.push_back(std::move(id));
        vectors.push_back(std::move(v));
        labels.push_back(label);
    }
};

/// Bits presented to classifiers as real values 0.0/1.0.
inline std::vector<std::vector<double>> to_real_matrix(const LabeledDataset& data) {
    std::vector<std::vector<double>> xs;
    xs.reserve(data.size());
    for (const auto& v : data.vectors) {
        std::vector<double> row;
        row.reserve(v.bits.size());
        for (std::uint8_t b : v.bits) row.push_back(b ? 1.0 : 0.0);
        xs.push_back(std::move(row));
    }
    return xs;
}

inline std::string write_feature_csv(const LabeledDataset& data, std::size_t width_hint = 0) {
    std::size_t width = data.size() ? data.width() : width_hint;
    std::string out = "id,label";
    for (std::size_t i = 0; i < width; ++i) out += ",f" + std::to_string(i);
    out.push_back('\n');
    for (std::size_t r = 0; r < data.size(); ++r) {
        out += data.ids[r];
        out.push_back(',');
        out += std::to_string(data.labels[r]);
        for (std::uint8_t b : data.vectors[r].bits) {
            out.push_back(',');
            out.push_back(b ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(pos));
            break;
        }
        fields.emplace_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

}  // namespace detail

inline LabeledDataset read_feature_csv(std::string_view text) {
    LabeledDataset data;
    std::size_t pos = 0;
    std::size_t width = 0;
    bool header_seen = false;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line);
        if (!header_seen) {
            if (fields.size() < 3 || fields[0] != "id" || fields[1] != "label")
                throw CsvParseError("feature CSV must start with header id,label,f0,...");
            for (std::size_t i = 2; i < fields.size(); ++i)
                if (fields[i] != "f" + std::to_string(i - 2))
                    throw CsvParseError("bad feature column name: " + fields[i]);
            width = fields.size() - 2;
            header_seen = true;
            continue;
        }
        if (fields.size() != width + 2)
            throw CsvParseError("line " + std::to_string(line_no) + ": expected " +
                                std::to_string(width + 2) + " fields");
        int label;
        if (fields[1] == "0")
            label = 0;
        else if (fields[1] == "1")
            label = 1;
        else
            throw CsvParseError("line " + std::to_string(line_no) + ": label must be 0 or 1");
        features::FeatureVector v;
        v.app_id = fields[0];
        v.bits.reserve(width);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            if (fields[i] == "0")
                v.bits.push_back(0);
            else if (fields[i] == "1")
                v.bits.push_back(1);
            else
                throw CsvParseError("line " + std::to_string(line_no) + ": bits must be 0 or 1");
        }
        data.push(fields[0], std::move(v), label);
    }
    if (!header_seen) throw CsvParseError("feature CSV is empty");
    return data;
}

}  // namespace amdet::eval

namespace amdet::cli {

struct ManifestRow {
    std::string apk_path;
    int label = 0;
};

struct DatasetManifest {
    std::vector<ManifestRow> rows;
    std::string source;
};

inline DatasetManifest parse_dataset_manifest(std::string_view text, std::string source = {}) {
    DatasetManifest manifest;
    manifest.source = std::move(source);
    std::size_t pos = 0;
    bool header_seen = false;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = eval::detail::split_csv_line(line);
        if (!header_seen) {
            if (fields.size() != 2 || fields[0] != "apk_path" || fields[1] != "label")
                throw ManifestParseError("manifest must start with header apk_path,label");
            header_seen = true;
            continue;
        }
        if (fields.size() != 2)
            throw ManifestParseError("line " + std::to_string(line_no) + ": expected 2 fields");
        if (fields[0].empty())
            throw ManifestParseError("line " + std::to_string(line_no) + ": empty apk_path");
        ManifestRow row;
        row.apk_path = fields[0];
        if (fields[1] == "0")
            row.label = 0;
        else if (fields[1] == "1")
            row.label = 1;
        else
            throw ManifestParseError("line " + std::to_string(line_no) + ": label must be 0 or 1");
        manifest.rows.push_back(std::move(row));
    }
    if (!header_seen) throw ManifestParseError("manifest is empty");
    return manifest;
}

}  // namespace amdet::cli

#endif  // AMDET_DATASET_HPP
