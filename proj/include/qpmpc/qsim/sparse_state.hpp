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
 * Superpositions stored as a list of computational-basis terms, each
 * carrying an exact sum of roots of unity, times one real normalization.
 *
 * Every state the protocols build has this shape: Hadamard/QFT fan-outs from
 * a definite register, permutations (CNOT, modular multiplication, oracles)
 * and diagonal phases. A Fourier transform of a register is only ever
 * followed by a measurement of that register, so it is evaluated fused with
 * the measurement, one class of the remaining registers at a time.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/qsim/distribution.hpp"
#include "qpmpc/qsim/fft.hpp"
#include "qpmpc/qsim/layout.hpp"
#include "qpmpc/qsim/phase_sum.hpp"

namespace qpmpc::qsim {

struct MeasureResult {
    std::uint64_t outcome = 0;
    double probability = 0.0;
};

/// Tolerance on the norm before a measurement is attempted.
inline constexpr double kNormTolerance = 1e-9;

class SparseState {
  public:
    /// Upper bound on stored terms; fan-outs beyond it are refused.
    static constexpr std::size_t kMaxTerms = std::size_t{1} << 24;

    /// Single term holding every register at its declared initial value.
    /// `phase_bits` fixes the phase denominator 2^phase_bits; operations that
    /// need a finer one lift it.
    explicit SparseState(RegisterLayout layout, unsigned phase_bits = 0)
        : layout_(std::move(layout)), phase_bits_(phase_bits) {
        if (layout_.empty() || layout_.total_width() == 0) throw InvalidInput("layout has zero total width");
        if (phase_bits_ > kMaxRegisterWidth) throw InvalidInput("phase denominator too large");
        for (const auto &r : layout_) values_.push_back(r.initial);
        amps_.emplace_back(phase_bits_, 0);
    }

    const RegisterLayout &layout() const noexcept { return layout_; }
    void set_owner(std::string_view reg, int owner) { layout_.set_owner(reg, owner); }
    unsigned phase_bits() const noexcept { return phase_bits_; }
    double global_scale() const noexcept { return scale_; }
    std::size_t term_count() const noexcept { return amps_.size(); }
    std::size_t register_count() const noexcept { return layout_.size(); }

    std::span<const std::uint64_t> basis(std::size_t term) const {
        return {values_.data() + term * stride(), stride()};
    }
    std::uint64_t value(std::size_t term, std::size_t reg) const { return values_[term * stride() + reg]; }
    const PhaseSum &phase_sum(std::size_t term) const { return amps_.at(term); }
    Complex amplitude(std::size_t term) const { return scale_ * amps_.at(term).evaluate(); }

    /// Amplitude of a basis assignment (zero if absent). Linear scan.
    Complex amplitude_of(std::span<const std::uint64_t> assignment) const {
        if (assignment.size() != stride()) throw InvalidInput("assignment arity does not match layout");
        for (std::size_t t = 0; t < term_count(); ++t)
            if (std::equal(assignment.begin(), assignment.end(), basis(t).begin())) return amplitude(t);
        return {0.0, 0.0};
    }

    double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) s += std::norm(a.evaluate());
        return s * scale_ * scale_;
    }

    /// Value shared by every term, if any.
    std::optional<std::uint64_t> definite_value(std::string_view reg) const {
        const std::size_t r = layout_.index_of(reg);
        const std::uint64_t v0 = value(0, r);
        for (std::size_t t = 1; t < term_count(); ++t)
            if (value(t, r) != v0) return std::nullopt;
        return v0;
    }

    /// Structural exactness: every amplitude is a non-empty sum of
    /// 2^phase_bits-th roots of unity with in-range numerators.
    bool is_exact() const {
        for (const auto &a : amps_) {
            if (a.empty() || a.bits() != phase_bits_) return false;
            for (const auto &[num, mult] : a.parts())
                if (num >= a.denominator() || mult == 0) return false;
        }
        return true;
    }

    /// Refine the phase denominator to at least 2^bits.
    void ensure_phase_bits(unsigned bits) {
        if (bits <= phase_bits_) return;
        if (bits > kMaxRegisterWidth) throw InvalidInput("phase denominator too large");
        for (auto &a : amps_) a.lift(bits);
        phase_bits_ = bits;
    }

    /// Tensor a fresh register, at its initial value, onto the state.
    void add_register(RegisterSpec spec) {
        const std::uint64_t init = spec.initial;
        const std::size_t old_stride = stride();
        layout_.add(std::move(spec));
        std::vector<std::uint64_t> next;
        next.reserve(term_count() * stride());
        for (std::size_t t = 0; t < term_count(); ++t) {
            next.insert(next.end(), values_.begin() + t * old_stride, values_.begin() + (t + 1) * old_stride);
            next.push_back(init);
        }
        values_ = std::move(next);
    }

    /// H on every qubit of `reg`, which must hold 0 in every term.
    void apply_hadamard_uniform(std::string_view reg) {
        const std::size_t r = layout_.index_of(reg);
        for (std::size_t t = 0; t < term_count(); ++t)
            if (value(t, r) != 0)
                throw Unsupported("apply_hadamard_uniform: register '" + std::string(reg) +
                                  "' is not definitely |0>");
        fan_out(r, 0, +1);
    }

    /// QFT (or QFT^dagger) of a register that holds the same value x in
    /// every term: |x> -> 2^{-w/2} sum_j exp(+-2 pi i x j / 2^w) |j>.
    void apply_fourier_definite(std::string_view reg, Basis direction) {
        if (direction == Basis::computational) throw InvalidInput("apply_fourier_definite needs a Fourier direction");
        const std::size_t r = layout_.index_of(reg);
        const auto x = definite_value(reg);
        if (!x) throw Unsupported("apply_fourier_definite: register '" + std::string(reg) + "' is not definite");
        fan_out(r, *x, direction == Basis::fourier ? +1 : -1);
    }

    /// dst <- dst XOR src, per term.
    void apply_cnot_copy(std::string_view src, std::string_view dst) {
        const std::size_t s = layout_.index_of(src), d = layout_.index_of(dst);
        if (s == d) throw InvalidInput("apply_cnot_copy: source and target must differ");
        if (layout_.at(s).width != layout_.at(d).width) throw InvalidInput("apply_cnot_copy: width mismatch");
        for (std::size_t t = 0; t < term_count(); ++t) at(t, d) ^= at(t, s);
    }

    /// Phase exp(2 pi i x * value(ctrl) / 2^m), per term.
    void apply_phase_power(std::string_view ctrl, std::uint64_t x, unsigned m) {
        const std::size_t c = layout_.index_of(ctrl);
        if (m > kMaxRegisterWidth) throw InvalidInput("apply_phase_power: modulus too large");
        ensure_phase_bits(m);
        const unsigned shift = phase_bits_ - m;
        for (std::size_t t = 0; t < term_count(); ++t) amps_[t].rotate((x * value(t, c)) << shift);
    }

    /// value(reg) <- value(reg) * q mod 2^width, per term. q must be odd.
    void apply_mod_mult(std::string_view reg, std::uint64_t q) {
        if ((q & 1) == 0) throw InvalidInput("apply_mod_mult: even multiplier is not unitary");
        const std::size_t r = layout_.index_of(reg);
        const std::uint64_t mask = width_mask(r);
        for (std::size_t t = 0; t < term_count(); ++t) at(t, r) = (at(t, r) * q) & mask;
    }

    /// out <- out XOR f(in), per term.
    void apply_oracle(std::string_view in, std::string_view out, const IntFunction &f) {
        const std::size_t i = layout_.index_of(in), o = layout_.index_of(out);
        if (i == o) throw InvalidInput("apply_oracle: input and output registers must differ");
        const std::uint64_t mask = width_mask(o);
        for (std::size_t t = 0; t < term_count(); ++t) {
            const std::uint64_t y = f(value(t, i));
            if (y & ~mask) throw InvalidInput("apply_oracle: f output exceeds register '" + std::string(out) + "'");
            at(t, o) ^= y;
        }
    }

    /// Exact outcome law of `reg` in the requested basis; no collapse.
    MeasurementDistribution distribution_of(std::string_view reg, Basis basis) const {
        const std::size_t r = layout_.index_of(reg);
        MeasurementDistribution dist{basis, layout_.at(r).width, {}};
        if (basis == Basis::computational) {
            for (std::size_t t = 0; t < term_count(); ++t)
                dist.probabilities[value(t, r)] += std::norm(amplitude(t));
            return dist;
        }
        const std::vector<double> p = fourier_probabilities(r, basis == Basis::fourier ? +1 : -1);
        for (std::size_t k = 0; k < p.size(); ++k) dist.probabilities.emplace_hint(dist.probabilities.end(), k, p[k]);
        return dist;
    }

    /// Collapse `reg` onto `outcome` in the given basis. Returns the outcome's
    /// probability. For Fourier bases the remaining registers keep exact
    /// residual amplitudes; classes whose residual is numerically zero are
    /// dropped.
    double project(std::string_view reg, Basis basis, std::uint64_t outcome) {
        const std::size_t r = layout_.index_of(reg);
        if (outcome & ~width_mask(r)) throw InvalidInput("project: outcome exceeds register width");
        if (basis == Basis::computational) return project_computational(r, outcome);
        return project_fourier(r, basis == Basis::fourier ? +1 : -1, outcome);
    }

    /// Sample `reg` in the computational basis and collapse.
    MeasureResult measure_register(std::string_view reg, Rng &rng) { return measure(reg, Basis::computational, rng); }

    /// Apply QFT / QFT^dagger to `reg`, sample it, and collapse.
    MeasureResult fourier_measure(std::string_view reg, Basis direction, Rng &rng) {
        if (direction == Basis::computational) throw InvalidInput("fourier_measure needs a Fourier direction");
        return measure(reg, direction, rng);
    }

    /// Sample and collapse. Fourier outcomes are drawn as a mixture: first a
    /// class of the other registers by its weight, then k from that class's
    /// own transform. Same law as distribution_of, one transform per draw.
    MeasureResult measure(std::string_view reg, Basis basis, Rng &rng) {
        check_normalized();
        std::uint64_t k = 0;
        if (basis == Basis::computational)
            k = distribution_of(reg, basis).sample(rng);
        else
            k = sample_fourier(layout_.index_of(reg), basis == Basis::fourier ? +1 : -1, rng);
        const double p = project(reg, basis, k);
        return {k, p};
    }

  private:
    std::size_t stride() const noexcept { return layout_.size(); }
    std::uint64_t &at(std::size_t term, std::size_t reg) { return values_[term * stride() + reg]; }
    std::uint64_t width_mask(std::size_t reg) const { return (std::uint64_t{1} << layout_.at(reg).width) - 1; }

    void check_normalized() const {
        const double n = norm();
        if (std::abs(n - 1.0) > kNormTolerance)
            throw InvalidInput("state is not normalized (norm " + std::to_string(n) + ")");
    }

    // Replace register r (definite x in the callers) by a uniform fan-out over
    // its values with phases sign * x * j / 2^w.
    void fan_out(std::size_t r, std::uint64_t x, int sign) {
        const unsigned w = layout_.at(r).width;
        const std::size_t fan = std::size_t{1} << w;
        if (w >= 40 || term_count() * fan > kMaxTerms) throw Unsupported("fan-out exceeds the sparse term limit");
        ensure_phase_bits(w);
        const unsigned shift = phase_bits_ - w;
        std::vector<std::uint64_t> next_values;
        std::vector<PhaseSum> next_amps;
        next_values.reserve(term_count() * fan * stride());
        next_amps.reserve(term_count() * fan);
        for (std::size_t t = 0; t < term_count(); ++t) {
            for (std::uint64_t j = 0; j < fan; ++j) {
                const auto row = basis(t);
                next_values.insert(next_values.end(), row.begin(), row.end());
                next_values[next_values.size() - stride() + r] = j;
                PhaseSum a = amps_[t];
                const std::uint64_t delta = (x * j) << shift;
                a.rotate(sign > 0 ? delta : std::uint64_t{0} - delta);
                next_amps.push_back(std::move(a));
            }
        }
        values_ = std::move(next_values);
        amps_ = std::move(next_amps);
        scale_ /= std::sqrt(static_cast<double>(fan));
    }

    // Term indices grouped by the joint value of every register except r.
    std::vector<std::vector<std::size_t>> classes_excluding(std::size_t r) const {
        if (layout_.total_width() - layout_.at(r).width <= 64) return classes_by_packed_key(r);
        std::vector<std::size_t> order(term_count());
        std::iota(order.begin(), order.end(), 0);
        auto less = [&](std::size_t a, std::size_t b) {
            for (std::size_t c = 0; c < stride(); ++c) {
                if (c == r) continue;
                const auto va = value(a, c), vb = value(b, c);
                if (va != vb) return va < vb;
            }
            return value(a, r) < value(b, r);
        };
        auto same = [&](std::size_t a, std::size_t b) {
            for (std::size_t c = 0; c < stride(); ++c)
                if (c != r && value(a, c) != value(b, c)) return false;
            return true;
        };
        std::sort(order.begin(), order.end(), less);
        std::vector<std::vector<std::size_t>> classes;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i == 0 || !same(order[i - 1], order[i])) classes.emplace_back();
            classes.back().push_back(order[i]);
        }
        return classes;
    }

    // Same grouping, with the other registers packed into one 64-bit key.
    std::vector<std::vector<std::size_t>> classes_by_packed_key(std::size_t r) const {
        struct Entry {
            std::uint64_t key, j;
            std::size_t term;
        };
        std::vector<Entry> entries(term_count());
        for (std::size_t t = 0; t < term_count(); ++t) {
            std::uint64_t key = 0;
            for (std::size_t c = 0; c < stride(); ++c) {
                if (c == r) continue;
                const unsigned w = layout_.at(c).width;
                key = (w == 64 ? 0 : key << w) | value(t, c);
            }
            entries[t] = {key, value(t, r), t};
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry &a, const Entry &b) { return a.key != b.key ? a.key < b.key : a.j < b.j; });
        std::vector<std::vector<std::size_t>> classes;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i == 0 || entries[i].key != entries[i - 1].key) classes.emplace_back();
            classes.back().push_back(entries[i].term);
        }
        return classes;
    }

    // p(k) = scale^2 / 2^w * sum_classes |sum_j a_j exp(sign 2 pi i j k / 2^w)|^2.
    // Small classes go through their autocorrelation (one shared transform at
    // the end), large ones through a per-class transform.
    std::vector<double> fourier_probabilities(std::size_t r, int sign) const {
        const unsigned w = layout_.at(r).width;
        if (w > 30) throw Unsupported("Fourier measurement of a register wider than 30 qubits");
        const std::size_t n = std::size_t{1} << w;
        const std::uint64_t mask = n - 1;
        std::vector<double> p(n, 0.0);
        std::vector<Complex> autocorr(n, Complex{0.0, 0.0});
        bool used_autocorr = false;
        std::vector<Complex> buffer;

        for (const auto &cls : classes_excluding(r)) {
            const std::size_t k = cls.size();
            std::vector<std::pair<std::uint64_t, Complex>> a;
            a.reserve(k);
            for (std::size_t t : cls) a.emplace_back(value(t, r), amps_[t].evaluate());
            const double autocorr_cost = static_cast<double>(k) * static_cast<double>(k);
            const double fft_cost = 4.0 * static_cast<double>(n) * static_cast<double>(w + 1);
            if (autocorr_cost <= fft_cost) {
                used_autocorr = true;
                for (const auto &[j1, a1] : a)
                    for (const auto &[j2, a2] : a) autocorr[(j1 - j2) & mask] += a1 * std::conj(a2);
            } else {
                buffer.assign(n, Complex{0.0, 0.0});
                for (const auto &[j, amp] : a) buffer[j] = amp;
                detail::fft_in_place(buffer, w, sign);
                for (std::size_t q = 0; q < n; ++q) p[q] += std::norm(buffer[q]);
            }
        }
        if (used_autocorr) {
            detail::fft_in_place(autocorr, w, sign);
            for (std::size_t q = 0; q < n; ++q) p[q] += autocorr[q].real();
        }
        const double factor = scale_ * scale_ / static_cast<double>(n);
        for (double &x : p) x = std::max(0.0, x * factor);
        return p;
    }

    std::uint64_t sample_fourier(std::size_t r, int sign, Rng &rng) const {
        const unsigned w = layout_.at(r).width;
        if (w > 30) throw Unsupported("Fourier measurement of a register wider than 30 qubits");
        const auto classes = classes_excluding(r);
        std::vector<double> weight(classes.size(), 0.0);
        double total = 0.0;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            for (std::size_t t : classes[c]) weight[c] += std::norm(amps_[t].evaluate());
            total += weight[c];
        }
        double target = uniform01(rng) * total;
        std::size_t pick = 0;
        while (pick + 1 < classes.size() && target >= weight[pick]) target -= weight[pick++];

        const std::size_t n = std::size_t{1} << w;
        std::vector<Complex> buffer(n, Complex{0.0, 0.0});
        for (std::size_t t : classes[pick]) buffer[value(t, r)] = amps_[t].evaluate();
        detail::fft_in_place(buffer, w, sign);
        double mass = 0.0;
        for (const auto &z : buffer) mass += std::norm(z);
        double u = uniform01(rng) * mass;
        std::size_t k = 0;
        // Walk to the first outcome whose cumulative mass exceeds u, skipping
        // outcomes that are zero up to rounding.
        std::size_t last_nonzero = 0;
        for (; k < n; ++k) {
            const double q = std::norm(buffer[k]);
            if (q <= 1e-24 * mass) continue;
            last_nonzero = k;
            if (u < q) return k;
            u -= q;
        }
        return last_nonzero;
    }

    double project_computational(std::size_t r, std::uint64_t outcome) {
        std::vector<std::uint64_t> next_values;
        std::vector<PhaseSum> next_amps;
        double kept = 0.0;
        for (std::size_t t = 0; t < term_count(); ++t) {
            if (value(t, r) != outcome) continue;
            const auto row = basis(t);
            next_values.insert(next_values.end(), row.begin(), row.end());
            kept += std::norm(amps_[t].evaluate());
            next_amps.push_back(std::move(amps_[t]));
        }
        const double p = kept * scale_ * scale_;
        if (next_amps.empty() || p <= 0.0) throw InvalidInput("project: outcome has probability zero");
        values_ = std::move(next_values);
        amps_ = std::move(next_amps);
        scale_ /= std::sqrt(p);
        return p;
    }

    double project_fourier(std::size_t r, int sign, std::uint64_t outcome) {
        const unsigned w = layout_.at(r).width;
        ensure_phase_bits(w);
        const unsigned shift = phase_bits_ - w;
        std::vector<std::uint64_t> next_values;
        std::vector<PhaseSum> next_amps;
        double kept = 0.0;
        for (const auto &cls : classes_excluding(r)) {
            PhaseSum acc = build_residual(cls, r, sign, outcome, shift);
            const Complex z = acc.evaluate();
            // Exact cancellations leave rounding noise proportional to the
            // number of roots summed.
            if (std::abs(z) <= 1e-12 * static_cast<double>(acc.root_count())) continue;
            kept += std::norm(z);
            const auto row = basis(cls.front());
            next_values.insert(next_values.end(), row.begin(), row.end());
            next_values[next_values.size() - stride() + r] = outcome;
            next_amps.push_back(std::move(acc));
        }
        const double n = static_cast<double>(std::uint64_t{1} << w);
        const double p = kept * scale_ * scale_ / n;
        if (next_amps.empty() || p <= 0.0) throw InvalidInput("project: outcome has probability zero");
        values_ = std::move(next_values);
        amps_ = std::move(next_amps);
        scale_ = scale_ / std::sqrt(n) / std::sqrt(p);
        return p;
    }

    PhaseSum build_residual(const std::vector<std::size_t> &cls, std::size_t r, int sign, std::uint64_t outcome,
                            unsigned shift) const {
        PhaseSum acc = amps_[cls.front()];
        acc.rotate(residual_rotation(value(cls.front(), r), sign, outcome, shift));
        for (std::size_t i = 1; i < cls.size(); ++i) {
            const std::size_t t = cls[i];
            acc.accumulate(amps_[t], residual_rotation(value(t, r), sign, outcome, shift));
        }
        acc.normalize();
        return acc;
    }

    static std::uint64_t residual_rotation(std::uint64_t j, int sign, std::uint64_t outcome, unsigned shift) {
        const std::uint64_t delta = (j * outcome) << shift;
        return sign > 0 ? delta : std::uint64_t{0} - delta;
    }

    RegisterLayout layout_;
    unsigned phase_bits_ = 0;
    double scale_ = 1.0;
    std::vector<std::uint64_t> values_;  // term-major, one column per register
    std::vector<PhaseSum> amps_;
};

}  // namespace qpmpc::qsim
