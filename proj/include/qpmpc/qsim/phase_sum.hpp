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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "qpmpc/error.hpp"

namespace qpmpc::qsim {

using Complex = std::complex<double>;

/// exp(2 pi i a / 2^bits). Tables are cached per thread for bits <= 20.
inline Complex unit_root(std::uint64_t a, unsigned bits) {
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    a &= mask;
    if (bits <= 20) {
        thread_local std::vector<std::vector<Complex>> tables(21);
        auto &table = tables[bits];
        if (table.empty()) {
            const std::size_t d = std::size_t{1} << bits;
            table.resize(d);
            for (std::size_t k = 0; k < d; ++k)
                table[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
        }
        return table[a];
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(a), -static_cast<int>(bits)));
}

/// Sum of 2^bits-th roots of unity, kept as (numerator, multiplicity) pairs
/// sorted by numerator. Evaluates to sum_r mult_r * exp(2 pi i a_r / 2^bits).
class PhaseSum {
  public:
    using Part = std::pair<std::uint64_t, std::uint64_t>;

    PhaseSum() = default;
    explicit PhaseSum(unsigned bits, std::uint64_t numerator = 0) : bits_(bits) {
        parts_.emplace_back(numerator & mask(), 1);
    }

    unsigned bits() const noexcept { return bits_; }
    std::uint64_t denominator() const noexcept { return std::uint64_t{1} << bits_; }
    const std::vector<Part> &parts() const noexcept { return parts_; }
    bool empty() const noexcept { return parts_.empty(); }

    /// Number of roots summed, counting multiplicity.
    std::uint64_t root_count() const noexcept {
        std::uint64_t n = 0;
        for (const auto &p : parts_) n += p.second;
        return n;
    }

    /// Multiply by exp(2 pi i delta / 2^bits).
    void rotate(std::uint64_t delta) {
        delta &= mask();
        if (delta == 0) return;
        for (auto &p : parts_) p.first = (p.first + delta) & mask();
        if (parts_.size() > 1) std::sort(parts_.begin(), parts_.end());
    }

    /// Re-express over a finer denominator 2^new_bits.
    void lift(unsigned new_bits) {
        if (new_bits < bits_) throw InvalidInput("PhaseSum::lift cannot coarsen the denominator");
        for (auto &p : parts_) p.first <<= (new_bits - bits_);
        bits_ = new_bits;
    }

    /// Append `other` rotated by delta. Call normalize() after a batch.
    void accumulate(const PhaseSum &other, std::uint64_t delta) {
        if (other.bits_ != bits_) throw InvalidInput("PhaseSum denominators differ");
        for (const auto &p : other.parts_) parts_.emplace_back((p.first + delta) & mask(), p.second);
    }

    /// Sort and merge equal numerators.
    void normalize() {
        std::sort(parts_.begin(), parts_.end());
        std::size_t out = 0;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (out > 0 && parts_[out - 1].first == parts_[i].first)
                parts_[out - 1].second += parts_[i].second;
            else
                parts_[out++] = parts_[i];
        }
        parts_.resize(out);
    }

    Complex evaluate() const {
        Complex acc{0.0, 0.0};
        for (const auto &p : parts_) acc += static_cast<double>(p.second) * unit_root(p.first, bits_);
        return acc;
    }

  private:
    std::uint64_t mask() const noexcept { return (std::uint64_t{1} << bits_) - 1; }

    unsigned bits_ = 0;
    std::vector<Part> parts_;
};

}  // namespace qpmpc::qsim
