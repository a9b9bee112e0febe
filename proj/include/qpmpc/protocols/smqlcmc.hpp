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
 * Secure multiparty least common multiple. Each party holds f_i(j) = j mod x_i;
 * the concatenation f = f_0 || ... || f_(n-1) has period lcm(x_i). One round
 * runs distributed period finding on f (t carries the input copy from party
 * to party, each attaching its own output register e_i), broadcasts the
 * candidate T1, and lets a one-vote-down vote on "x_i divides T1" decide
 * whether to accept it.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/protocols/qov.hpp"
#include "qpmpc/protocols/session.hpp"
#include "qpmpc/protocols/transcript.hpp"
#include "qpmpc/qpa.hpp"

namespace qpmpc::protocols {

/// Largest input width u = 2nm + 1 accepted without `force`.
inline constexpr unsigned kLcmGuardBits = 17;
inline constexpr std::uint64_t kDefaultVoteRange = 16;

struct LcmConfig {
    unsigned m = 1;
    std::uint64_t M = kDefaultVoteRange;
    unsigned max_rounds = qpa::kDefaultMaxRounds;
    std::uint64_t seed = 0;
    bool force = false;
};

struct LcmOutcome {
    std::uint64_t y = 0;
    unsigned rounds = 0;
    std::vector<std::uint64_t> candidate_history;
};

struct LcmResult {
    LcmOutcome outcome;
    Transcript transcript;
};

struct LcmRoundResult {
    std::uint64_t phi = 0;
    std::uint64_t candidate = 0;
    VoteOutcome vote;
    bool accepted = false;
};

constexpr unsigned lcm_input_width(std::size_t n, unsigned m) { return static_cast<unsigned>(2 * n * m + 1); }

inline bool vote_bit(std::uint64_t x, std::uint64_t t1) {
    if (x < 1 || t1 < 1) throw InvalidInput("vote_bit: x and T1 must be positive");
    return t1 % x == 0;
}

/// f(j) = (j mod x_0) | (j mod x_1) << m | ...
inline IntFunction connected_function(std::span<const std::uint64_t> xs, unsigned m) {
    if (xs.empty() || m < 1 || xs.size() * m > 64) throw InvalidInput("connected_function: bad field layout");
    for (auto x : xs)
        if (x < 1 || (x >> m)) throw InvalidInput("connected_function: moduli must lie in [1, 2^m)");
    std::vector<std::uint64_t> moduli(xs.begin(), xs.end());
    return [moduli, m](std::uint64_t j) {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < moduli.size(); ++i) out |= (j % moduli[i]) << (i * m);
        return out;
    };
}

inline void validate_lcm(std::span<const std::uint64_t> inputs, const LcmConfig &cfg) {
    if (inputs.size() < 2) throw InvalidInput("lcm needs at least 2 parties");
    if (cfg.m < 1) throw InvalidInput("lcm: m must be >= 1");
    if (cfg.max_rounds < 1) throw InvalidInput("lcm: max_rounds must be >= 1");
    for (auto x : inputs)
        if (x < 1 || (x >> cfg.m))
            throw InvalidInput("lcm input " + std::to_string(x) + " outside [1, 2^" + std::to_string(cfg.m) + ")");
    const unsigned u = lcm_input_width(inputs.size(), cfg.m);
    if (u > kLcmGuardBits && !cfg.force)
        throw InvalidInput("lcm: u = 2nm + 1 = " + std::to_string(u) + " exceeds the engine guard of " +
                           std::to_string(kLcmGuardBits) + " (2^" + std::to_string(u) +
                           " terms); pass force to run anyway");
    if (u > 24) throw InvalidInput("lcm: u = " + std::to_string(u) + " is beyond the sparse engine even with force");
}

/// One round: distributed period finding, candidate broadcast, vote.
/// Throws ProtocolReject if t is not |0> at the uncompute check.
inline LcmRoundResult run_lcm_round(std::span<const std::uint64_t> inputs, const LcmConfig &cfg, unsigned round,
                                    Transcript &log, ProtocolObserver *observer = nullptr) {
    validate_lcm(inputs, cfg);
    const int n = static_cast<int>(inputs.size());
    const unsigned m = cfg.m;
    const unsigned u = lcm_input_width(inputs.size(), m);
    const std::uint64_t round_seed = derive_seed(cfg.seed, round);

    log.append(EventKind::stage, kNoParty, "qpa", {round});
    Session s({inputs.begin(), inputs.end()}, round_seed, u, &log, observer);

    s.prepare(0, "h", u);
    s.prepare(0, "t", u);
    s.hadamard(0, "h");
    s.cnot(0, "h", "t");
    s.checkpoint(Checkpoint::copy_prepared, 0);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t x = inputs[i];
        const std::string e = party_register("e", i);
        s.prepare(i, e, m);
        s.oracle(i, "t", e, [x](std::uint64_t j) { return j % x; });
        s.checkpoint(Checkpoint::oracle_applied, i);
        s.send(i, (i + 1) % n, "t");
    }

    s.checkpoint(Checkpoint::before_uncompute, 0);
    s.cnot(0, "h", "t");
    if (const auto t = s.measure(0, "t"); t != 0) throw ProtocolReject("lcm: t measured nonzero at uncompute", t);
    LcmRoundResult r;
    r.phi = s.fourier_measure(0, "h", qsim::Basis::fourier_inverse);
    r.candidate = cf_recover(r.phi, std::uint64_t{1} << u, std::uint64_t{1} << (n * m)).denominator;
    s.broadcast(0, "qpa_done", 1);
    s.checkpoint(Checkpoint::qpa_completed, 0, r.phi);

    // Step 5: everyone reads out and discards its e_i.
    for (int i = 0; i < n; ++i) s.measure(i, party_register("e", i));
    s.broadcast(0, "T1", r.candidate);

    std::vector<int> votes(n);
    for (int i = 0; i < n; ++i) votes[i] = vote_bit(inputs[i], r.candidate) ? 1 : 0;
    r.vote = run_qov_into(votes, cfg.M, derive_seed(round_seed, 0x766f7465), round, log, nullptr);
    r.accepted = r.vote.y;
    return r;
}

/// Repeat rounds until the vote passes. A rejected round is abandoned and
/// counts towards max_rounds.
inline LcmResult run_smqlcmc(std::span<const std::uint64_t> inputs, const LcmConfig &cfg,
                             ProtocolObserver *observer = nullptr) {
    validate_lcm(inputs, cfg);
    LcmResult result;
    std::uint64_t best = 1;
    for (unsigned round = 1; round <= cfg.max_rounds; ++round) {
        result.transcript.append(EventKind::round, kNoParty, "-", {round});
        result.outcome.rounds = round;
        try {
            const auto r = run_lcm_round(inputs, cfg, round, result.transcript, observer);
            result.outcome.candidate_history.push_back(r.candidate);
            best = std::max(best, r.candidate);
            if (r.accepted) {
                result.outcome.y = r.candidate;
                result.transcript.append(EventKind::end, kNoParty, "-");
                return result;
            }
        } catch (const ProtocolReject &) {
            // Restart with fresh randomness.
        }
    }
    throw RoundsExhausted("lcm: no candidate accepted in " + std::to_string(cfg.max_rounds) + " rounds", best,
                          cfg.max_rounds);
}

}  // namespace qpmpc::protocols
