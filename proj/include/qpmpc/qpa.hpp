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
 * Quantum period finding: uniform superposition, oracle, inverse QFT on the
 * input register, continued-fraction recovery of the candidate period, and a
 * classical f(T1) == f(0) check, repeated until a candidate passes.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/qsim/sparse_state.hpp"
#include "qpmpc/random.hpp"

namespace qpmpc::qpa {

inline constexpr unsigned kDefaultMaxRounds = 64;

struct QpaConfig {
    unsigned v = 1;  // output bits of f; the period is below 2^v
    unsigned u = 3;  // input bits; at least 2v + 1
    unsigned max_rounds = kDefaultMaxRounds;
    std::uint64_t seed = 0;
};

struct QpaResult {
    std::uint64_t period = 0;
    unsigned rounds_used = 0;
    std::vector<std::uint64_t> phi_samples;
    std::vector<std::uint64_t> candidates;
};

/// Smallest input width that lets continued fractions resolve l/T for T < 2^v.
constexpr unsigned choose_u(unsigned v) { return 2 * v + 1; }

inline void validate(const QpaConfig &config) {
    if (config.v < 1) throw InvalidInput("qpa: v must be >= 1");
    if (config.u < choose_u(config.v)) throw InvalidInput("qpa: u must be >= 2v + 1");
    if (config.u > 24) throw InvalidInput("qpa: u above 24 is beyond the sparse engine");
    if (config.max_rounds < 1) throw InvalidInput("qpa: max_rounds must be >= 1");
}

/// sum_j |j>_h |f(j)>_t / 2^{u/2}, the state just before the Fourier readout.
inline qsim::SparseState prepare_period_state(const IntFunction &f, unsigned u, unsigned v) {
    qsim::SparseState state(qsim::RegisterLayout{{"h", u}, {"t", v}}, u);
    state.apply_hadamard_uniform("h");
    state.apply_oracle("h", "t", f);
    return state;
}

struct RoundOutcome {
    std::uint64_t phi = 0;
    Fraction fraction;
};

inline RoundOutcome run_round(const IntFunction &f, unsigned u, unsigned v, Rng &rng) {
    auto state = prepare_period_state(f, u, v);
    const auto measured = state.fourier_measure("h", qsim::Basis::fourier_inverse, rng);
    return {measured.outcome, cf_recover(measured.outcome, std::uint64_t{1} << u, std::uint64_t{1} << v)};
}

/// Repeat rounds until a candidate T1 satisfies f(T1) == f(0).
inline QpaResult run_qpa(const IntFunction &f, const QpaConfig &config) {
    validate(config);
    Rng rng(config.seed);
    QpaResult result;
    const std::uint64_t f0 = f(0);
    std::uint64_t best = 1;
    for (unsigned round = 1; round <= config.max_rounds; ++round) {
        const auto outcome = run_round(f, config.u, config.v, rng);
        const std::uint64_t candidate = outcome.fraction.denominator;
        result.phi_samples.push_back(outcome.phi);
        result.candidates.push_back(candidate);
        result.rounds_used = round;
        best = std::max(best, candidate);
        if (f(candidate) == f0) {
            result.period = candidate;
            return result;
        }
    }
    throw RoundsExhausted("qpa: no candidate passed f(T1) == f(0) in " + std::to_string(config.max_rounds) +
                              " rounds",
                          best, config.max_rounds);
}

/// Fraction of single rounds on f(j) = j mod period whose continued-fraction
/// denominator is exactly `period`. The pre-measurement state does not depend
/// on the round, so it is built once and only the readout is resampled.
inline double single_round_success_rate(std::uint64_t period, unsigned v, std::uint64_t trials, std::uint64_t seed) {
    if (period < 1 || period >= (std::uint64_t{1} << v)) throw InvalidInput("single_round_success_rate: need 1 <= T < 2^v");
    if (trials == 0) throw InvalidInput("single_round_success_rate: trials must be positive");
    const unsigned u = choose_u(v);
    const auto state = prepare_period_state([period](std::uint64_t j) { return j % period; }, u, v);
    const auto dist = state.distribution_of("h", qsim::Basis::fourier_inverse);
    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const std::uint64_t phi = dist.sample(rng);
        hits += cf_recover(phi, std::uint64_t{1} << u, std::uint64_t{1} << v).denominator == period;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

/// The exact probability that one round yields denominator `period`.
inline double exact_single_round_success(std::uint64_t period, unsigned v) {
    const unsigned u = choose_u(v);
    const auto state = prepare_period_state([period](std::uint64_t j) { return j % period; }, u, v);
    const auto dist = state.distribution_of("h", qsim::Basis::fourier_inverse);
    double p = 0.0;
    for (const auto &[phi, prob] : dist.probabilities)
        if (cf_recover(phi, std::uint64_t{1} << u, std::uint64_t{1} << v).denominator == period) p += prob;
    return p;
}

}  // namespace qpmpc::qpa
