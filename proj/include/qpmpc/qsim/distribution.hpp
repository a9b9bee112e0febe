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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/random.hpp"

namespace qpmpc::qsim {

/// Measurement basis. `fourier` applies QFT before a computational readout,
/// `fourier_inverse` applies QFT^dagger.
enum class Basis { computational, fourier, fourier_inverse };

inline std::string_view to_string(Basis b) {
    switch (b) {
        case Basis::computational: return "computational";
        case Basis::fourier: return "fourier";
        case Basis::fourier_inverse: return "fourier_inverse";
    }
    return "?";
}

inline Basis basis_from_string(std::string_view s) {
    if (s == "computational") return Basis::computational;
    if (s == "fourier") return Basis::fourier;
    if (s == "fourier_inverse") return Basis::fourier_inverse;
    throw InvalidInput("unknown basis '" + std::string(s) + "'");
}

/// Outcome law of one register. Outcomes not present have probability zero;
/// the outcome space is [0, 2^width).
struct MeasurementDistribution {
    Basis basis = Basis::computational;
    unsigned width = 0;
    std::map<std::uint64_t, double> probabilities;

    double probability(std::uint64_t outcome) const {
        const auto it = probabilities.find(outcome);
        return it == probabilities.end() ? 0.0 : it->second;
    }

    double total() const {
        double s = 0.0;
        for (const auto &[k, p] : probabilities) s += p;
        return s;
    }

    /// Outcomes whose probability exceeds `eps`, ascending.
    std::vector<std::uint64_t> support(double eps = 1e-12) const {
        std::vector<std::uint64_t> out;
        for (const auto &[k, p] : probabilities)
            if (p > eps) out.push_back(k);
        return out;
    }

    /// Inverse-CDF draw over outcomes in ascending order.
    std::uint64_t sample(Rng &rng) const {
        if (probabilities.empty()) throw InvalidInput("cannot sample an empty distribution");
        const double target = uniform01(rng) * total();
        double acc = 0.0;
        std::uint64_t last_positive = probabilities.begin()->first;
        for (const auto &[k, p] : probabilities) {
            if (p <= 0.0) continue;
            acc += p;
            last_positive = k;
            if (acc > target) return k;
        }
        return last_positive;
    }
};

}  // namespace qpmpc::qsim
