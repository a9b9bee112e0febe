// Copyright 2026 The qpmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qpmpc/qsim/phase_sum.hpp"

namespace qpmpc::qsim::detail {

/// Unnormalized in-place DFT of length 2^bits:
///   out[k] = sum_j in[j] * exp(sign * 2 pi i j k / 2^bits),  sign = +1 or -1.
inline void fft_in_place(std::vector<Complex> &data, unsigned bits, int sign) {
    const std::size_t n = std::size_t{1} << bits;
    if (data.size() != n) throw InvalidInput("fft length mismatch");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (unsigned s = 1; s <= bits; ++s) {
        const std::size_t len = std::size_t{1} << s;
        const std::size_t half = len >> 1;
        const unsigned stride_shift = bits - s;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t m = 0; m < half; ++m) {
                const std::uint64_t a = static_cast<std::uint64_t>(m) << stride_shift;
                const Complex w = unit_root(sign > 0 ? a : (std::uint64_t{0} - a), bits);
                const Complex t = w * data[start + m + half];
                const Complex u = data[start + m];
                data[start + m] = u + t;
                data[start + m + half] = u - t;
            }
        }
    }
}

}  // namespace qpmpc::qsim::detail
