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
 * Secure multiparty quantum summation. P0 encodes x0 in the Fourier basis of
 * h and entangles a copy t; t travels P0 -> P1 -> ... -> P(n-1) -> P0, each
 * party adding its phase exp(2 pi i j x_i / 2^m); P0 uncomputes t, checks it
 * reads 0 and reads sum x_k mod 2^m off h with QFT^dagger.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/protocols/session.hpp"
#include "qpmpc/protocols/transcript.hpp"

namespace qpmpc::protocols {

inline constexpr unsigned kMaxSumBits = 20;

struct SmqsResult {
    std::uint64_t sum = 0;
    Transcript transcript;
};

inline std::string party_register(const char *stem, int party) { return stem + std::to_string(party); }

inline SmqsResult run_smqs(std::span<const std::uint64_t> inputs, unsigned m, std::uint64_t seed,
                           ProtocolObserver *observer = nullptr) {
    const int n = static_cast<int>(inputs.size());
    if (n < 2) throw InvalidInput("summation needs at least 2 parties");
    if (m < 1 || m > kMaxSumBits) throw InvalidInput("summation width m must be in [1, 20]");
    for (auto x : inputs)
        if (x >> m) throw InvalidInput("summation input " + std::to_string(x) + " does not fit in " + std::to_string(m) + " bits");

    SmqsResult result;
    Transcript &log = result.transcript;
    Session s({inputs.begin(), inputs.end()}, seed, m, &log, observer);
    log.append(EventKind::round, kNoParty, "-", {1});
    log.append(EventKind::stage, kNoParty, "smqs", {1});

    s.prepare(0, "h", m, inputs[0]);
    s.prepare(0, "t", m);
    s.fourier(0, "h", qsim::Basis::fourier);
    s.cnot(0, "h", "t");
    s.checkpoint(Checkpoint::copy_prepared, 0);
    s.send(0, 1, "t");

    for (int i = 1; i < n; ++i) {
        const std::string e = party_register("e", i);
        s.prepare(i, e, m, inputs[i]);
        s.controlled_phase(i, "t", e, m);
        s.checkpoint(Checkpoint::oracle_applied, i);
        s.send(i, (i + 1) % n, "t");
    }

    s.checkpoint(Checkpoint::before_uncompute, 0);
    s.cnot(0, "h", "t");
    if (const auto t = s.measure(0, "t"); t != 0) throw ProtocolReject("summation: t measured nonzero at uncompute", t);
    result.sum = s.fourier_measure(0, "h", qsim::Basis::fourier_inverse);
    s.broadcast(0, "y", result.sum);
    log.append(EventKind::end, kNoParty, "-");
    return result;
}

}  // namespace qpmpc::protocols
