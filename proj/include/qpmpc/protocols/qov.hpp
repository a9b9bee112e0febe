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
 * Quantum one-vote-down vote. Each "no" voter masks its vote as a random
 * x_i in [1, M], each "yes" voter uses 0; the summation circuit computes
 * z = q * sum x_i mod 2^m_vote with P1's random odd q hiding the sum, and
 * the vote passes iff z == 0.
 *
 * Routing: P0 -> P1 (multiply by q, phase) -> P0 (phase) -> P2 -> ... ->
 * P(n-1) -> P1 (multiply by q^-1) -> P0. With two parties P0 hands t straight
 * back to P1 for the unmasking.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/protocols/session.hpp"
#include "qpmpc/protocols/smqs.hpp"
#include "qpmpc/protocols/transcript.hpp"

namespace qpmpc::protocols {

struct VoteOutcome {
    std::uint64_t z = 0;
    bool y = false;
    unsigned m_vote = 0;
};

/// Ground truth for analysis; never part of what parties see.
struct VoteDiagnostics {
    std::vector<std::uint64_t> masks;  // x_i
    std::uint64_t q = 1;
};

struct QovResult {
    VoteOutcome outcome;
    Transcript transcript;
    VoteDiagnostics diagnostics;
};

/// floor(log2(n M)) + 1, so that 2^m_vote > n M >= sum x_i.
inline unsigned vote_width(std::size_t n, std::uint64_t M) {
    if (n == 0 || M == 0) throw InvalidInput("vote_width: n and M must be positive");
    return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(n) * M));
}

/// Runs the vote inside a fresh session appending to `log`. `round` labels
/// the stage event.
inline VoteOutcome run_qov_into(std::span<const int> votes, std::uint64_t M, std::uint64_t seed, unsigned round,
                                Transcript &log, ProtocolObserver *observer, VoteDiagnostics *diagnostics = nullptr) {
    const int n = static_cast<int>(votes.size());
    if (n < 2) throw InvalidInput("vote needs at least 2 parties");
    if (M < 2) throw InvalidInput("vote masking range M must be >= 2");
    for (int c : votes)
        if (c != 0 && c != 1) throw InvalidInput("votes must be 0 or 1");
    const unsigned m = vote_width(votes.size(), M);
    if (m > kMaxSumBits) throw InvalidInput("vote width floor(log2(nM)) + 1 exceeds 20 bits");

    std::vector<std::uint64_t> secrets(votes.begin(), votes.end());
    Session s(secrets, seed, m, &log, observer);
    log.append(EventKind::stage, kNoParty, "qov", {round});

    // Masking, each party from its own stream.
    std::vector<std::uint64_t> x(n, 0);
    for (int i = 0; i < n; ++i)
        if (votes[i] == 0) x[i] = 1 + uniform_below(s.rng(i), M);
    const std::uint64_t q = random_odd(m, s.rng(1));
    if (diagnostics) *diagnostics = {x, q};

    auto add_phase = [&](int i) {
        const std::string e = party_register("e", i);
        s.prepare(i, e, m, x[i]);
        s.controlled_phase(i, "t", e, m);
        s.checkpoint(Checkpoint::oracle_applied, i);
    };

    s.prepare(0, "h", m);
    s.prepare(0, "t", m);
    s.fourier(0, "h", qsim::Basis::fourier);
    s.cnot(0, "h", "t");
    s.checkpoint(Checkpoint::copy_prepared, 0);
    s.send(0, 1, "t");

    s.modmul(1, "t", q);
    add_phase(1);
    s.send(1, 0, "t");

    add_phase(0);
    if (n >= 3) {
        s.send(0, 2, "t");
        for (int i = 2; i < n; ++i) {
            add_phase(i);
            s.send(i, i + 1 <= n - 1 ? i + 1 : 1, "t");
        }
    } else {
        s.send(0, 1, "t");
    }

    s.modmul(1, "t", mod_inverse(q, std::uint64_t{1} << m));
    s.send(1, 0, "t");

    s.checkpoint(Checkpoint::before_uncompute, 0);
    s.cnot(0, "h", "t");
    if (const auto t = s.measure(0, "t"); t != 0) throw ProtocolReject("vote: t measured nonzero at uncompute", t);
    VoteOutcome out;
    out.m_vote = m;
    out.z = s.fourier_measure(0, "h", qsim::Basis::fourier_inverse);
    out.y = out.z == 0;
    s.broadcast(0, "y", out.y ? 1 : 0);
    return out;
}

inline QovResult run_qov(std::span<const int> votes, std::uint64_t M, std::uint64_t seed,
                         ProtocolObserver *observer = nullptr) {
    QovResult result;
    result.transcript.append(EventKind::round, kNoParty, "-", {1});
    result.outcome = run_qov_into(votes, M, seed, 1, result.transcript, observer, &result.diagnostics);
    result.transcript.append(EventKind::end, kNoParty, "-");
    return result;
}

}  // namespace qpmpc::protocols
