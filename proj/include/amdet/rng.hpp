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

#ifndef AMDET_RNG_HPP
#define AMDET_RNG_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "amdet/common.hpp"

namespace amdet {

// Deterministic RNG used everywhere a seed appears in a contract.
// mt19937_64 output is fixed by the standard; the real/int mappings are
// implemented here instead of <random> distributions so that a given seed
// produces the same stream on every toolchain.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double unit_real() {
        return static_cast<double>(u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(u64()) * n) >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Stratified train/valid index partition: per class, a seeded shuffle
/// followed by a rounded split. Both folds keep at least one sample of
/// each class; index lists are returned sorted.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_split_indices(const std::vector<int>& labels, double ratio,
                         std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0)
        throw InsufficientData("split ratio must be in (0,1)");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int y = labels[i];
        if (y != 0 && y != 1) throw InsufficientData("labels must be 0 or 1");
        by_class[y].push_back(i);
    }
    if (by_class[0].size() < 2 || by_class[1].size() < 2)
        throw InsufficientData("need at least 2 samples per class to split");

    DetRng rng(seed);
    std::vector<std::size_t> train, valid;
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        std::size_t n = cls.size();
        auto want = static_cast<std::size_t>(
            static_cast<double>(n) * ratio + 0.5);
        if (want < 1) want = 1;
        if (want > n - 1) want = n - 1;
        train.insert(train.end(), cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(want));
        valid.insert(valid.end(), cls.begin() + static_cast<std::ptrdiff_t>(want), cls.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(valid.begin(), valid.end());
    return {std::move(train), std::move(valid)};
}

}  // namespace amdet

#endif  // AMDET_RNG_HPP
