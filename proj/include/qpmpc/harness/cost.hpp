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
 * Cost accounting from transcripts. Time is counted as operator
 * applications, communication as register hand-overs and qubits moved.
 * The modeled elementary-gate count charges w^2 per operator on a w-qubit
 * register (QFT and the phase operators decompose into O(w^2) controlled
 * rotations).
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/protocols/qov.hpp"
#include "qpmpc/protocols/smqlcmc.hpp"
#include "qpmpc/protocols/smqs.hpp"
#include "qpmpc/protocols/transcript.hpp"

namespace qpmpc::harness {

struct CostCounts {
    std::uint64_t operator_applications = 0;
    std::uint64_t register_transfers = 0;
    std::uint64_t qubits_transferred = 0;
    std::uint64_t measurements = 0;
    std::uint64_t broadcasts = 0;
    std::uint64_t modeled_gate_count = 0;

    CostCounts &operator+=(const CostCounts &o) {
        operator_applications += o.operator_applications;
        register_transfers += o.register_transfers;
        qubits_transferred += o.qubits_transferred;
        measurements += o.measurements;
        broadcasts += o.broadcasts;
        modeled_gate_count += o.modeled_gate_count;
        return *this;
    }
    bool operator==(const CostCounts &) const = default;
};

struct StageCost {
    std::string stage;
    std::uint64_t round = 0;
    CostCounts counts;
    bool operator==(const StageCost &) const = default;
};

struct CostSummary {
    CostCounts totals;
    std::uint64_t rounds = 0;
    std::vector<StageCost> stages;
    bool operator==(const CostSummary &) const = default;
};

inline CostSummary cost_summary(const protocols::Transcript &t) {
    using protocols::EventKind;
    if (!t.empty() && !t.complete()) throw InvalidInput("cost_summary: transcript is truncated (no end event)");
    CostSummary s;
    for (const auto &e : t.events()) {
        if (e.kind == EventKind::round) {
            ++s.rounds;
            continue;
        }
        if (e.kind == EventKind::stage) {
            s.stages.push_back({e.reg, e.payload.empty() ? 0 : e.payload[0], {}});
            continue;
        }
        CostCounts c;
        if (protocols::is_operator(e.kind)) {
            const std::uint64_t w = e.payload.empty() ? 0 : e.payload[0];
            c.operator_applications = 1;
            c.modeled_gate_count = w * w;
        } else if (e.kind == EventKind::send) {
            c.register_transfers = 1;
            c.qubits_transferred = e.payload.size() > 1 ? e.payload[1] : 0;
        } else if (e.kind == EventKind::measure) {
            c.measurements = 1;
        } else if (e.kind == EventKind::broadcast) {
            c.broadcasts = 1;
        }
        s.totals += c;
        if (!s.stages.empty()) s.stages.back().counts += c;
    }
    return s;
}

/// Counts restricted to stages with the given label.
inline CostCounts stage_totals(const CostSummary &s, std::string_view stage) {
    CostCounts c;
    for (const auto &st : s.stages)
        if (st.stage == stage) c += st.counts;
    return c;
}

enum class ScalingProtocol { smqs, lcm_round };

struct ScalingSpec {
    ScalingProtocol protocol = ScalingProtocol::smqs;
    unsigned n_min = 2, n_max = 5;
    unsigned m_min = 2, m_max = 5;
    std::uint64_t seed = 0;
    bool force = false;
};

struct ScalingRow {
    std::string protocol;
    unsigned n = 0;
    unsigned m = 0;
    unsigned width = 0;  // m for summation, u = 2nm + 1 for an lcm round
    CostCounts counts;   // summation: whole run; lcm: period-finding stage of one round
};

/// One seeded run per (n, m); inputs are all ones so every configuration is valid.
inline std::vector<ScalingRow> cost_scaling(const ScalingSpec &spec) {
    if (spec.n_min < 2 || spec.n_max < spec.n_min || spec.m_min < 1 || spec.m_max < spec.m_min)
        throw InvalidInput("cost_scaling: need 2 <= n_min <= n_max and 1 <= m_min <= m_max");
    std::vector<ScalingRow> rows;
    for (unsigned n = spec.n_min; n <= spec.n_max; ++n)
        for (unsigned m = spec.m_min; m <= spec.m_max; ++m) {
            const std::vector<std::uint64_t> inputs(n, 1);
            ScalingRow row;
            row.n = n;
            row.m = m;
            if (spec.protocol == ScalingProtocol::smqs) {
                row.protocol = "smqs";
                row.width = m;
                row.counts = cost_summary(protocols::run_smqs(inputs, m, spec.seed).transcript).totals;
            } else {
                row.protocol = "lcm_round";
                protocols::LcmConfig cfg;
                cfg.m = m;
                cfg.seed = spec.seed;
                cfg.force = spec.force;
                row.width = protocols::lcm_input_width(n, m);
                protocols::Transcript log;
                protocols::run_lcm_round(inputs, cfg, 1, log);
                log.append(protocols::EventKind::end, protocols::kNoParty, "-");
                row.counts = stage_totals(cost_summary(log), "qpa");
            }
            rows.push_back(row);
        }
    return rows;
}

}  // namespace qpmpc::harness
