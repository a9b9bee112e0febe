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

/**
 * @file
 * Reference state-vector backend. Plain amplitude arrays, plain loops, and a
 * direct O(4^w) Fourier sum per register: deliberately unrelated to the
 * sparse engine so the two can cross-check each other.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/qsim/distribution.hpp"
#include "qpmpc/qsim/layout.hpp"
#include "qpmpc/qsim/sparse_state.hpp"

namespace qpmpc::qsim {

inline constexpr unsigned kDenseMaxWidth = 20;

class DenseState {
  public:
    explicit DenseState(RegisterLayout layout) : layout_(std::move(layout)) {
        const unsigned total = layout_.total_width();
        if (total == 0) throw InvalidInput("layout has zero total width");
        if (total > kDenseMaxWidth) throw InvalidInput("dense backend limited to 20 qubits");
        amps_.assign(std::size_t{1} << total, Complex{0.0, 0.0});
        std::size_t index = 0;
        for (std::size_t r = 0; r < layout_.size(); ++r) index |= layout_.at(r).initial << offset(r);
        amps_[index] = 1.0;
    }

    /// Wrap an explicit amplitude vector (length 2^total_width).
    DenseState(RegisterLayout layout, std::vector<Complex> amps) : layout_(std::move(layout)), amps_(std::move(amps)) {
        if (layout_.total_width() > kDenseMaxWidth) throw InvalidInput("dense backend limited to 20 qubits");
        if (amps_.size() != (std::size_t{1} << layout_.total_width()))
            throw InvalidInput("amplitude vector length does not match layout");
    }

    const RegisterLayout &layout() const noexcept { return layout_; }
    const std::vector<Complex> &amplitudes() const noexcept { return amps_; }

    double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) s += std::norm(a);
        return s;
    }

    std::uint64_t read(std::size_t index, std::size_t reg) const {
        return (index >> offset(reg)) & mask(reg);
    }

    void add_register(RegisterSpec spec) {
        const unsigned old_total = layout_.total_width();
        const std::uint64_t init = spec.initial;
        layout_.add(std::move(spec));
        if (layout_.total_width() > kDenseMaxWidth) throw InvalidInput("dense backend limited to 20 qubits");
        std::vector<Complex> next(std::size_t{1} << layout_.total_width(), Complex{0.0, 0.0});
        for (std::size_t i = 0; i < amps_.size(); ++i) next[i | (init << old_total)] = amps_[i];
        amps_ = std::move(next);
    }

    /// Hadamard on each qubit of `reg`; works on arbitrary input states.
    void apply_hadamard(std::string_view reg) {
        const std::size_t r = layout_.index_of(reg);
        const double s = 1.0 / std::sqrt(2.0);
        for (unsigned b = 0; b < layout_.at(r).width; ++b) {
            const std::size_t bit = std::size_t{1} << (offset(r) + b);
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if (i & bit) continue;
                const Complex a0 = amps_[i], a1 = amps_[i | bit];
                amps_[i] = s * (a0 + a1);
                amps_[i | bit] = s * (a0 - a1);
            }
        }
    }

    /// QFT (sign +) or QFT^dagger (sign -) of `reg`, by direct summation.
    void apply_fourier(std::string_view reg, Basis direction) {
        if (direction == Basis::computational) return;
        const std::size_t r = layout_.index_of(reg);
        const double sign = direction == Basis::fourier ? 1.0 : -1.0;
        const unsigned w = layout_.at(r).width;
        const std::size_t n = std::size_t{1} << w;
        const std::size_t off = offset(r);
        const std::size_t reg_mask = (n - 1) << off;
        const double norm = 1.0 / std::sqrt(static_cast<double>(n));
        std::vector<Complex> next(amps_.size(), Complex{0.0, 0.0});
        for (std::size_t base = 0; base < amps_.size(); ++base) {
            if (base & reg_mask) continue;
            for (std::size_t k = 0; k < n; ++k) {
                Complex acc{0.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex a = amps_[base | (j << off)];
                    if (a == Complex{0.0, 0.0}) continue;
                    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                                         static_cast<double>(n);
                    acc += a * Complex{std::cos(angle), std::sin(angle)};
                }
                next[base | (k << off)] = norm * acc;
            }
        }
        amps_ = std::move(next);
    }

    void apply_cnot_copy(std::string_view src, std::string_view dst) {
        const std::size_t s = layout_.index_of(src), d = layout_.index_of(dst);
        if (s == d || layout_.at(s).width != layout_.at(d).width) throw InvalidInput("apply_cnot_copy: bad registers");
        permute([&](std::size_t i) { return i ^ (read(i, s) << offset(d)); });
    }

    void apply_phase_power(std::string_view ctrl, std::uint64_t x, unsigned m) {
        const std::size_t c = layout_.index_of(ctrl);
        const double denom = std::ldexp(1.0, static_cast<int>(m));
        const std::uint64_t mod_mask = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            const std::uint64_t e = (x * read(i, c)) & mod_mask;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / denom;
            amps_[i] *= Complex{std::cos(angle), std::sin(angle)};
        }
    }

    void apply_mod_mult(std::string_view reg, std::uint64_t q) {
        if ((q & 1) == 0) throw InvalidInput("apply_mod_mult: even multiplier is not unitary");
        const std::size_t r = layout_.index_of(reg);
        permute([&](std::size_t i) {
            const std::uint64_t v = read(i, r);
            const std::uint64_t nv = (v * q) & mask(r);
            return (i & ~(mask(r) << offset(r))) | (nv << offset(r));
        });
    }

    void apply_oracle(std::string_view in, std::string_view out, const IntFunction &f) {
        const std::size_t a = layout_.index_of(in), b = layout_.index_of(out);
        permute([&](std::size_t i) {
            const std::uint64_t y = f(read(i, a));
            if (y & ~mask(b)) throw InvalidInput("apply_oracle: f output exceeds register width");
            return i ^ (y << offset(b));
        });
    }

    MeasurementDistribution distribution_of(std::string_view reg, Basis basis) const {
        DenseState copy = *this;
        copy.apply_fourier(reg, basis);
        const std::size_t r = layout_.index_of(reg);
        MeasurementDistribution dist{basis, layout_.at(r).width, {}};
        if (basis != Basis::computational)
            for (std::uint64_t k = 0; k <= mask(r); ++k) dist.probabilities[k] = 0.0;
        for (std::size_t i = 0; i < copy.amps_.size(); ++i) {
            const double p = std::norm(copy.amps_[i]);
            if (p > 0.0 || basis != Basis::computational) dist.probabilities[copy.read(i, r)] += p;
        }
        return dist;
    }

    /// Apply the basis change, keep the branch with `reg` == outcome, and
    /// renormalize. Returns the branch probability.
    double project(std::string_view reg, Basis basis, std::uint64_t outcome) {
        apply_fourier(reg, basis);
        const std::size_t r = layout_.index_of(reg);
        double p = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (read(i, r) == outcome)
                p += std::norm(amps_[i]);
            else
                amps_[i] = 0.0;
        }
        if (p <= 0.0) throw InvalidInput("project: outcome has probability zero");
        const double s = 1.0 / std::sqrt(p);
        for (auto &a : amps_) a *= s;
        return p;
    }

  private:
    unsigned offset(std::size_t reg) const {
        unsigned off = 0;
        for (std::size_t i = 0; i < reg; ++i) off += layout_.at(i).width;
        return off;
    }
    std::uint64_t mask(std::size_t reg) const { return (std::uint64_t{1} << layout_.at(reg).width) - 1; }

    template <typename Map>
    void permute(Map index_map) {
        std::vector<Complex> next(amps_.size(), Complex{0.0, 0.0});
        for (std::size_t i = 0; i < amps_.size(); ++i) next[index_map(i)] += amps_[i];
        amps_ = std::move(next);
    }

    RegisterLayout layout_;
    std::vector<Complex> amps_;
};

/// Numeric image of a sparse state on the dense index space.
inline DenseState dense_mirror(const SparseState &sparse) {
    const auto &layout = sparse.layout();
    if (layout.total_width() > kDenseMaxWidth) throw InvalidInput("dense_mirror: total width over 20 qubits");
    std::vector<Complex> amps(std::size_t{1} << layout.total_width(), Complex{0.0, 0.0});
    for (std::size_t t = 0; t < sparse.term_count(); ++t) {
        std::size_t index = 0;
        unsigned off = 0;
        for (std::size_t r = 0; r < layout.size(); ++r) {
            index |= sparse.value(t, r) << off;
            off += layout.at(r).width;
        }
        amps[index] += sparse.amplitude(t);
    }
    return DenseState(layout, std::move(amps));
}

/// Max absolute amplitude difference after aligning global phase on the
/// largest dense amplitude.
inline double backend_deviation(const SparseState &sparse, const DenseState &dense) {
    const auto &ls = sparse.layout();
    const auto &ld = dense.layout();
    if (ls.size() != ld.size()) throw InvalidInput("backend_deviation: layouts differ");
    for (std::size_t r = 0; r < ls.size(); ++r)
        if (ls.at(r).name != ld.at(r).name || ls.at(r).width != ld.at(r).width)
            throw InvalidInput("backend_deviation: layouts differ");
    const DenseState mirror = dense_mirror(sparse);
    const auto &a = mirror.amplitudes();
    const auto &b = dense.amplitudes();
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < b.size(); ++i)
        if (std::abs(b[i]) > std::abs(b[pivot])) pivot = i;
    Complex align{1.0, 0.0};
    if (std::abs(a[pivot]) > 0.0 && std::abs(b[pivot]) > 0.0) {
        align = a[pivot] / b[pivot];
        align /= std::abs(align);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - align * b[i]));
    return worst;
}

}  // namespace qpmpc::qsim
