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
#include <cstdint>
#include <set>

#include "qpmpc/error.hpp"
#include "qpmpc/qsim/distribution.hpp"

namespace qpmpc::harness {

inline void require_same_space(const qsim::MeasurementDistribution &p, const qsim::MeasurementDistribution &q) {
    if (p.width != q.width || p.basis != q.basis)
        throw InvalidInput("distributions live on different outcome spaces");
}

/// Outcomes listed by either distribution.
inline std::set<std::uint64_t> joint_outcomes(const qsim::MeasurementDistribution &p,
                                              const qsim::MeasurementDistribution &q) {
    std::set<std::uint64_t> out;
    for (const auto &kv : p.probabilities) out.insert(kv.first);
    for (const auto &kv : q.probabilities) out.insert(kv.first);
    return out;
}

/// (1/2) sum_k |p(k) - q(k)|.
inline double tv_distance(const qsim::MeasurementDistribution &p, const qsim::MeasurementDistribution &q) {
    require_same_space(p, q);
    double s = 0.0;
    for (auto k : joint_outcomes(p, q)) s += std::abs(p.probability(k) - q.probability(k));
    return std::min(1.0, 0.5 * s);
}

inline double max_pointwise_deviation(const qsim::MeasurementDistribution &p, const qsim::MeasurementDistribution &q) {
    require_same_space(p, q);
    double d = 0.0;
    for (auto k : joint_outcomes(p, q)) d = std::max(d, std::abs(p.probability(k) - q.probability(k)));
    return d;
}

}  // namespace qpmpc::harness
