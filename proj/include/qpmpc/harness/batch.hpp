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
 * Seeded trial batches. Trial i runs with derive_seed(master, i); trials run
 * on worker threads and are merged in index order, so the aggregate does not
 * depend on scheduling.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/harness/cost.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/protocols/qov.hpp"
#include "qpmpc/protocols/smqlcmc.hpp"
#include "qpmpc/protocols/smqs.hpp"
#include "qpmpc/qpa.hpp"
#include "qpmpc/random.hpp"

namespace qpmpc::harness {

enum class ProtocolKind { smqs, qov, lcm, qpa };

inline std::string_view to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::smqs: return "smqs";
        case ProtocolKind::qov: return "qov";
        case ProtocolKind::lcm: return "lcm";
        case ProtocolKind::qpa: return "qpa";
    }
    return "?";
}

inline ProtocolKind protocol_from_string(std::string_view s) {
    for (auto k : {ProtocolKind::smqs, ProtocolKind::qov, ProtocolKind::lcm, ProtocolKind::qpa})
        if (to_string(k) == s) return k;
    throw InvalidInput("unknown protocol '" + std::string(s) + "' (smqs|qov|lcm|qpa)");
}

/// inputs: summands (smqs), votes 0/1 (qov), x_i (lcm), or the single
/// modulus T of f(j) = j mod T (qpa).
struct RunSpec {
    ProtocolKind protocol = ProtocolKind::lcm;
    std::vector<std::uint64_t> inputs;
    unsigned m = 3;
    std::uint64_t M = protocols::kDefaultVoteRange;
    unsigned v = 4;
    unsigned max_rounds = qpa::kDefaultMaxRounds;
    bool force = false;
};

struct TrialBatch {
    RunSpec spec;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency

    std::uint64_t trial_seed(std::uint64_t index) const { return derive_seed(master_seed, index); }
};

struct TrialOutcome {
    std::uint64_t output = 0;
    unsigned rounds = 0;
    CostSummary cost;
};

struct BatchStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate = 0.0;
    double mean_rounds = 0.0;
    std::uint64_t expected_output = 0;
    std::map<std::uint64_t, std::uint64_t> histogram;  // output -> count
    CostCounts total_cost;
    std::uint64_t total_rounds = 0;
};

/// Classical ground truth for a spec.
inline std::uint64_t expected_output(const RunSpec &spec) {
    switch (spec.protocol) {
        case ProtocolKind::smqs: {
            std::uint64_t s = 0;
            for (auto x : spec.inputs) s += x;
            return s & ((std::uint64_t{1} << spec.m) - 1);
        }
        case ProtocolKind::qov:
            return std::all_of(spec.inputs.begin(), spec.inputs.end(), [](std::uint64_t c) { return c == 1; });
        case ProtocolKind::lcm: return lcm_many(spec.inputs);
        case ProtocolKind::qpa: {
            const std::uint64_t T = spec.inputs.at(0);
            return brute_force_period([T](std::uint64_t j) { return j % T; }, qpa::choose_u(spec.v)).period;
        }
    }
    return 0;
}

inline void validate(const RunSpec &spec) {
    if (spec.protocol == ProtocolKind::qpa) {
        if (spec.inputs.size() != 1) throw InvalidInput("qpa batch: inputs must be the single modulus T");
        if (spec.inputs[0] < 1 || spec.inputs[0] >= (std::uint64_t{1} << spec.v))
            throw InvalidInput("qpa batch: need 1 <= T < 2^v");
    } else if (spec.inputs.size() < 2) {
        throw InvalidInput("batch: protocols need at least 2 parties");
    }
    if (spec.protocol == ProtocolKind::qov)
        for (auto c : spec.inputs)
            if (c > 1) throw InvalidInput("qov batch: votes must be 0 or 1");
}

inline TrialOutcome run_trial(const RunSpec &spec, std::uint64_t seed) {
    TrialOutcome out;
    switch (spec.protocol) {
        case ProtocolKind::smqs: {
            const auto r = protocols::run_smqs(spec.inputs, spec.m, seed);
            out.output = r.sum;
            out.rounds = 1;
            out.cost = cost_summary(r.transcript);
            break;
        }
        case ProtocolKind::qov: {
            const std::vector<int> votes(spec.inputs.begin(), spec.inputs.end());
            const auto r = protocols::run_qov(votes, spec.M, seed);
            out.output = r.outcome.y;
            out.rounds = 1;
            out.cost = cost_summary(r.transcript);
            break;
        }
        case ProtocolKind::lcm: {
            protocols::LcmConfig cfg;
            cfg.m = spec.m;
            cfg.M = spec.M;
            cfg.max_rounds = spec.max_rounds;
            cfg.seed = seed;
            cfg.force = spec.force;
            const auto r = protocols::run_smqlcmc(spec.inputs, cfg);
            out.output = r.outcome.y;
            out.rounds = r.outcome.rounds;
            out.cost = cost_summary(r.transcript);
            break;
        }
        case ProtocolKind::qpa: {
            const std::uint64_t T = spec.inputs[0];
            qpa::QpaConfig cfg;
            cfg.v = spec.v;
            cfg.u = qpa::choose_u(spec.v);
            cfg.max_rounds = spec.max_rounds;
            cfg.seed = seed;
            const auto r = qpa::run_qpa([T](std::uint64_t j) { return j % T; }, cfg);
            out.output = r.period;
            out.rounds = r.rounds_used;
            out.cost.rounds = r.rounds_used;  // no transcript; single-party routine
            break;
        }
    }
    return out;
}

namespace detail {

/// Same error class, message prefixed with the trial index.
[[noreturn]] inline void rethrow_for_trial(std::exception_ptr ep, std::uint64_t index) {
    const std::string prefix = "trial " + std::to_string(index) + ": ";
    try {
        std::rethrow_exception(ep);
    } catch (const ProtocolReject &e) {
        throw ProtocolReject(prefix + e.what(), e.observed());
    } catch (const RoundsExhausted &e) {
        throw RoundsExhausted(prefix + e.what(), e.best_candidate(), e.rounds());
    } catch (const Unsupported &e) {
        throw Unsupported(prefix + e.what());
    } catch (const InvalidInput &e) {
        throw InvalidInput(prefix + e.what());
    } catch (const std::exception &e) {
        throw InvariantBreach(prefix + e.what());
    }
}

}  // namespace detail

inline std::vector<TrialOutcome> run_trials(const TrialBatch &batch) {
    if (batch.trials == 0) throw InvalidInput("run_batch: empty batch (0 trials)");
    validate(batch.spec);
    std::vector<TrialOutcome> outcomes(batch.trials);
    std::vector<std::exception_ptr> errors(batch.trials);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i; (i = next.fetch_add(1)) < batch.trials;) {
            try {
                outcomes[i] = run_trial(batch.spec, batch.trial_seed(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = batch.threads ? batch.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, batch.trials));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (std::uint64_t i = 0; i < batch.trials; ++i)
        if (errors[i]) detail::rethrow_for_trial(errors[i], i);
    return outcomes;
}

inline BatchStats aggregate(const RunSpec &spec, const std::vector<TrialOutcome> &outcomes) {
    BatchStats s;
    s.trials = outcomes.size();
    s.expected_output = expected_output(spec);
    for (const auto &o : outcomes) {
        s.successes += o.output == s.expected_output;
        s.total_rounds += o.rounds;
        ++s.histogram[o.output];
        s.total_cost += o.cost.totals;
    }
    if (s.trials) {
        s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
        s.mean_rounds = static_cast<double>(s.total_rounds) / static_cast<double>(s.trials);
    }
    return s;
}

inline BatchStats run_batch(const TrialBatch &batch) { return aggregate(batch.spec, run_trials(batch)); }

}  // namespace qpmpc::harness
