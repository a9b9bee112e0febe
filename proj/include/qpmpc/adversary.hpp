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
 * Semi-honest attacks on the LCM protocol and vote-count leakage analysis.
 *
 * Attacks run as observers inside an unmodified protocol round and record
 * the exact outcome law of what the attacker could measure at that moment,
 * next to the law it would have if the attacker learned nothing beyond what
 * the protocol reveals anyway.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/harness/metrics.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/protocols/qov.hpp"
#include "qpmpc/protocols/smqlcmc.hpp"
#include "qpmpc/qsim/distribution.hpp"

namespace qpmpc::adversary {

enum class AttackKind { direct, pre_period, post_period };

inline std::string_view to_string(AttackKind k) {
    switch (k) {
        case AttackKind::direct: return "direct";
        case AttackKind::pre_period: return "pre_period";
        case AttackKind::post_period: return "post_period";
    }
    return "?";
}

/// When a direct measurement happens relative to the QPA readout.
enum class AttackTiming { before_qpa, after_qpa };

/// e_i (the attacker's own oracle output) or the shared carrier (h for P0, t otherwise).
enum class DirectTarget { oracle_output, carrier };

/// Pre-period instants: P0 right after its copy, the attacker's own turn
/// (oracle applied, still holding t), or P0 before uncomputing.
enum class PreInstant { after_copy, own_turn, before_uncompute };

struct AttackContext {
    std::vector<std::uint64_t> inputs;
    unsigned m = 3;
    std::uint64_t seed = 0;
    std::uint64_t M = protocols::kDefaultVoteRange;
    bool force = false;
};

struct AttackReport {
    AttackKind kind = AttackKind::direct;
    int attacker = 0;
    std::string instant;
    std::string target_register;
    qsim::MeasurementDistribution observed;
    qsim::MeasurementDistribution reference;
    double max_deviation = 0.0;
    double tv_distance = 0.0;
    unsigned u = 0;
    std::uint64_t period = 0;              // lcm of the inputs; analysis knowledge
    bool period_divides_domain = false;    // T | 2^u
    std::optional<std::uint64_t> qpa_outcome;  // k; only P0 knows it in the protocol
};

namespace detail {

class Hook : public protocols::ProtocolObserver {
  public:
    std::function<void(protocols::Session &, const protocols::CheckpointInfo &)> checkpoint;
    std::function<void(protocols::Session &, int, const std::string &)> received;

    void on_checkpoint(protocols::Session &s, const protocols::CheckpointInfo &info) override {
        if (checkpoint) checkpoint(s, info);
    }
    void on_register_received(protocols::Session &s, int party, const std::string &reg) override {
        if (received) received(s, party, reg);
    }
};

inline protocols::LcmConfig round_config(const AttackContext &ctx) {
    protocols::LcmConfig cfg;
    cfg.m = ctx.m;
    cfg.M = ctx.M;
    cfg.seed = ctx.seed;
    cfg.force = ctx.force;
    return cfg;
}

inline void check_attacker(const AttackContext &ctx, int attacker) {
    if (attacker < 0 || static_cast<std::size_t>(attacker) >= ctx.inputs.size())
        throw InvalidInput("attacker id " + std::to_string(attacker) + " is not a party");
}

// `report` is filled by the hook while the round runs.
inline AttackReport run_round_with(const AttackContext &ctx, Hook &hook, AttackReport &report) {
    protocols::Transcript log;
    protocols::run_lcm_round(ctx.inputs, round_config(ctx), 1, log, &hook);
    report.u = protocols::lcm_input_width(ctx.inputs.size(), ctx.m);
    report.period = lcm_many(ctx.inputs);
    report.period_divides_domain = ((std::uint64_t{1} << report.u) % report.period) == 0;
    if (report.observed.probabilities.empty()) throw InvalidInput("attack instant never reached");
    report.max_deviation = harness::max_pointwise_deviation(report.observed, report.reference);
    report.tv_distance = harness::tv_distance(report.observed, report.reference);
    return report;
}

}  // namespace detail

inline qsim::MeasurementDistribution uniform_distribution(qsim::Basis basis, unsigned width) {
    qsim::MeasurementDistribution d{basis, width, {}};
    const std::uint64_t n = std::uint64_t{1} << width;
    for (std::uint64_t k = 0; k < n; ++k) d.probabilities.emplace_hint(d.probabilities.end(), k, 1.0 / static_cast<double>(n));
    return d;
}

/// Law of j mod x for uniform j in [0, 2^u): residue Y has ceil((2^u - Y) / x) preimages.
inline qsim::MeasurementDistribution truncated_residue_law(std::uint64_t x, unsigned u, unsigned width) {
    qsim::MeasurementDistribution d{qsim::Basis::computational, width, {}};
    const std::uint64_t n = std::uint64_t{1} << u;
    for (std::uint64_t y = 0; y < x && y < n; ++y)
        d.probabilities[y] = static_cast<double>((n - y + x - 1) / x) / static_cast<double>(n);
    return d;
}

/// 1/T at (k + r 2^u / T) mod 2^u, rounded to the nearest integer when T does not divide 2^u.
inline qsim::MeasurementDistribution shifted_comb(std::uint64_t k, std::uint64_t period, unsigned u, qsim::Basis basis) {
    qsim::MeasurementDistribution d{basis, u, {}};
    const std::uint64_t n = std::uint64_t{1} << u;
    for (std::uint64_t r = 0; r < period; ++r) {
        const auto offset = static_cast<std::uint64_t>(std::llround(static_cast<double>(r) * static_cast<double>(n) / static_cast<double>(period)));
        d.probabilities[(k + offset) % n] += 1.0 / static_cast<double>(period);
    }
    return d;
}

/// Mass of `d` within `radius` (cyclically) of the comb points of shifted_comb.
inline double mass_near_comb(const qsim::MeasurementDistribution &d, std::uint64_t k, std::uint64_t period, unsigned u,
                             std::uint64_t radius) {
    const std::uint64_t n = std::uint64_t{1} << u;
    std::set<std::uint64_t> near;
    for (const auto &kv : shifted_comb(k, period, u, d.basis).probabilities)
        for (std::uint64_t dlt = 0; dlt <= 2 * radius; ++dlt) near.insert((kv.first + n - radius + dlt) % n);
    double mass = 0.0;
    for (auto s : near) mass += d.probability(s);
    return mass;
}

/// Attacker measures its own e_i or the carrier it holds in the computational basis.
inline AttackReport attack_direct(const AttackContext &ctx, int attacker, AttackTiming when,
                                  DirectTarget target = DirectTarget::oracle_output) {
    detail::check_attacker(ctx, attacker);
    const unsigned u = protocols::lcm_input_width(ctx.inputs.size(), ctx.m);
    const std::string reg = target == DirectTarget::oracle_output ? protocols::party_register("e", attacker)
                                                                  : (attacker == 0 ? "h" : "t");
    AttackReport report;
    report.kind = AttackKind::direct;
    report.attacker = attacker;
    report.target_register = reg;
    report.instant = when == AttackTiming::before_qpa ? "before_qpa" : "after_qpa";

    detail::Hook hook;
    hook.checkpoint = [&](protocols::Session &s, const protocols::CheckpointInfo &info) {
        const bool before = when == AttackTiming::before_qpa && info.kind == protocols::Checkpoint::oracle_applied &&
                            info.party == attacker;
        const bool after = when == AttackTiming::after_qpa && info.kind == protocols::Checkpoint::qpa_completed;
        if (!before && !after) return;
        report.observed = s.observe(attacker, reg, qsim::Basis::computational);
        if (after) report.qpa_outcome = info.value;
        if (target == DirectTarget::oracle_output) {
            report.reference = truncated_residue_law(ctx.inputs[attacker], u, ctx.m);
        } else if (before) {
            report.reference = uniform_distribution(qsim::Basis::computational, u);
        } else {
            report.reference = {qsim::Basis::computational, u, {{info.value, 1.0}}};
        }
    };
    return detail::run_round_with(ctx, hook, report);
}

/// Attacker measures the register it holds in the QFT^dagger basis before
/// the period-finding readout. Reference: exactly uniform.
inline AttackReport attack_pre_period(const AttackContext &ctx, int attacker,
                                      PreInstant instant = PreInstant::own_turn) {
    detail::check_attacker(ctx, attacker);
    if (instant != PreInstant::own_turn && attacker != 0)
        throw InvalidInput("wrong protocol phase: only P0 holds a register at that instant");
    const unsigned u = protocols::lcm_input_width(ctx.inputs.size(), ctx.m);
    const std::string reg = attacker == 0 ? "h" : "t";
    const protocols::Checkpoint at = instant == PreInstant::after_copy     ? protocols::Checkpoint::copy_prepared
                                     : instant == PreInstant::own_turn     ? protocols::Checkpoint::oracle_applied
                                                                           : protocols::Checkpoint::before_uncompute;
    AttackReport report;
    report.kind = AttackKind::pre_period;
    report.attacker = attacker;
    report.target_register = reg;
    report.instant = instant == PreInstant::after_copy ? "after_copy"
                     : instant == PreInstant::own_turn ? "own_turn"
                                                       : "before_uncompute";
    report.reference = uniform_distribution(qsim::Basis::fourier_inverse, u);

    detail::Hook hook;
    hook.checkpoint = [&](protocols::Session &s, const protocols::CheckpointInfo &info) {
        if (info.kind != at || info.party != attacker) return;
        report.observed = s.observe(attacker, reg, qsim::Basis::fourier_inverse);
    };
    return detail::run_round_with(ctx, hook, report);
}

/// Attacker copies t into a private register while holding it, and after the
/// readout looks at the copy in the Fourier basis.
inline AttackReport attack_post_period(const AttackContext &ctx, int attacker) {
    detail::check_attacker(ctx, attacker);
    const unsigned u = protocols::lcm_input_width(ctx.inputs.size(), ctx.m);
    const std::string copy = protocols::party_register("copy", attacker);
    AttackReport report;
    report.kind = AttackKind::post_period;
    report.attacker = attacker;
    report.target_register = copy;
    report.instant = "after_qpa";
    bool copied = false;

    auto take_copy = [&](protocols::Session &s) {
        s.prepare(attacker, copy, u);
        s.cnot(attacker, "t", copy);
        copied = true;
    };
    detail::Hook hook;
    hook.received = [&](protocols::Session &s, int party, const std::string &reg) {
        if (party == attacker && reg == "t" && !copied && attacker != 0) take_copy(s);
    };
    hook.checkpoint = [&](protocols::Session &s, const protocols::CheckpointInfo &info) {
        if (info.kind == protocols::Checkpoint::copy_prepared && attacker == 0) take_copy(s);
        if (info.kind != protocols::Checkpoint::qpa_completed) return;
        if (!copied) throw InvalidInput("post-period attack: no copy was taken");
        report.qpa_outcome = info.value;
        report.observed = s.observe(attacker, copy, qsim::Basis::fourier);
        report.reference = shifted_comb(info.value, lcm_many(ctx.inputs), u, qsim::Basis::fourier);
    };
    return detail::run_round_with(ctx, hook, report);
}

// ---- vote-count leakage ----

struct LeakageReport {
    std::uint64_t z = 0;
    unsigned m_vote = 0;
    std::uint64_t M = 0;
    unsigned n = 0;
    bool vote_passed = false;  // z == 0: nothing beyond the output itself
    unsigned m1 = 0;           // two-adic valuation of z (0 when z == 0)
    bool leak_flag = false;    // 2^m1 > M
    std::uint64_t lambda_low = 0;
    std::uint64_t lambda_high = 0;
};

/// What P0 can infer about the number of "no" votes from z alone.
/// z = q Y mod 2^m_vote with q odd and Y < 2^m_vote, so 2^m1 divides Y, and
/// Y <= lambda M gives lambda >= 2^m1 / M.
inline LeakageReport leakage_probe(std::uint64_t z, unsigned m_vote, std::uint64_t M, unsigned n) {
    if (m_vote < 1 || m_vote > 63) throw InvalidInput("leakage_probe: m_vote must be in [1, 63]");
    if (z >> m_vote) throw InvalidInput("leakage_probe: z must be below 2^m_vote");
    if (M < 1 || n < 1) throw InvalidInput("leakage_probe: M and n must be positive");
    LeakageReport r{z, m_vote, M, n};
    if (z == 0) {
        r.vote_passed = true;
        return r;
    }
    r.m1 = two_adic_valuation(z);
    const std::uint64_t p = std::uint64_t{1} << r.m1;
    r.leak_flag = p > M;
    r.lambda_low = std::max<std::uint64_t>(1, (p + M - 1) / M);
    r.lambda_high = n;
    return r;
}

enum class MaskMode { uniform, unit };

/// Monte Carlo of the leak flag with `lambda` "no" voters among n. Draws the
/// masks and q exactly as the vote does and forms z = q * sum x mod 2^m_vote
/// classically. In `unit` mode every mask is 1, so sum x = lambda.
/// Throws InvariantBreach if a probe ever excludes the true lambda.
inline double estimate_leak_probability(unsigned n, std::uint64_t M, unsigned lambda, std::uint64_t trials,
                                        std::uint64_t seed, MaskMode mode = MaskMode::uniform) {
    if (lambda < 1 || lambda > n) throw InvalidInput("estimate_leak_probability: need 1 <= lambda <= n");
    if (trials == 0) throw InvalidInput("estimate_leak_probability: trials must be positive");
    if (M < 2) throw InvalidInput("estimate_leak_probability: M must be >= 2");
    const unsigned m = protocols::vote_width(n, M);
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    std::uint64_t leaks = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        std::uint64_t y = 0;
        for (unsigned i = 0; i < lambda; ++i) y += mode == MaskMode::unit ? 1 : 1 + uniform_below(rng, M);
        const std::uint64_t q = random_odd(m, rng);
        const auto r = leakage_probe((q * y) & mask, m, M, n);
        if (r.vote_passed || lambda < r.lambda_low || lambda > r.lambda_high)
            throw InvariantBreach("leakage bound excludes the true number of no votes");
        leaks += r.leak_flag;
    }
    return static_cast<double>(leaks) / static_cast<double>(trials);
}

/// Same estimate, every trial running the full quantum vote (slower).
inline double estimate_leak_probability_via_protocol(unsigned n, std::uint64_t M, unsigned lambda,
                                                     std::uint64_t trials, std::uint64_t seed) {
    if (lambda < 1 || lambda > n) throw InvalidInput("estimate_leak_probability: need 1 <= lambda <= n");
    if (trials == 0) throw InvalidInput("estimate_leak_probability: trials must be positive");
    std::vector<int> votes(n, 1);
    for (unsigned i = 0; i < lambda; ++i) votes[i] = 0;
    std::uint64_t leaks = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto r = protocols::run_qov(votes, M, derive_seed(seed, t));
        const auto probe = leakage_probe(r.outcome.z, r.outcome.m_vote, M, n);
        if (probe.vote_passed || lambda < probe.lambda_low)
            throw InvariantBreach("leakage bound excludes the true number of no votes");
        leaks += probe.leak_flag;
    }
    return static_cast<double>(leaks) / static_cast<double>(trials);
}

}  // namespace qpmpc::adversary
