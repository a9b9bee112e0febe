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

// Two parties compute lcm(4, 6) = 12. Prints each round, the first round's
// transcript, per-stage costs, and what a curious P1 sees at its turn.

#include <cstdio>
#include <iostream>
#include <vector>

#include "qpmpc/adversary.hpp"
#include "qpmpc/harness/cost.hpp"
#include "qpmpc/protocols/smqlcmc.hpp"

int main() {
    using namespace qpmpc;
    const std::vector<std::uint64_t> inputs{4, 6};
    protocols::LcmConfig cfg;
    cfg.m = 3;
    cfg.seed = 2026;

    const auto result = protocols::run_smqlcmc(inputs, cfg);
    std::printf("inputs 4, 6 (m = 3, u = %u qubits)\n", protocols::lcm_input_width(inputs.size(), cfg.m));
    for (std::size_t r = 0; r < result.outcome.candidate_history.size(); ++r)
        std::printf("  round %zu: candidate %llu\n", r + 1,
                    static_cast<unsigned long long>(result.outcome.candidate_history[r]));
    std::printf("output y = %llu after %u round(s)\n\n", static_cast<unsigned long long>(result.outcome.y),
                result.outcome.rounds);

    std::cout << "first round transcript (kind, party, register, payload):\n";
    for (const auto &e : result.transcript.events()) {
        if (e.kind == protocols::EventKind::round && e.payload.at(0) > 1) break;
        std::cout << "  " << protocols::to_string(e.kind) << '\t' << e.party << '\t' << e.reg;
        for (auto p : e.payload) std::cout << '\t' << p;
        std::cout << '\n';
    }

    const auto cost = harness::cost_summary(result.transcript);
    std::cout << "\ncost per stage:\n";
    for (const auto &st : cost.stages)
        std::printf("  round %llu %-4s ops %3llu  sends %llu  qubits %3llu  measurements %llu\n",
                    static_cast<unsigned long long>(st.round), st.stage.c_str(),
                    static_cast<unsigned long long>(st.counts.operator_applications),
                    static_cast<unsigned long long>(st.counts.register_transfers),
                    static_cast<unsigned long long>(st.counts.qubits_transferred),
                    static_cast<unsigned long long>(st.counts.measurements));

    const auto pre = adversary::attack_pre_period({inputs, cfg.m, cfg.seed}, 1);
    std::printf("\nP1 measures t in the Fourier basis at its turn: %zu outcomes, max deviation from uniform %.2g\n",
                pre.observed.probabilities.size(), pre.max_deviation);
    return 0;
}
