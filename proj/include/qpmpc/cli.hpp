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
 * The qpmpc command line. run_cli is callable in-process so tests can drive
 * it without spawning; tools/qpmpc.cpp is a thin main around it.
 *
 * Exit codes: 0 success, 1 usage or configuration, 2 protocol reject,
 * 3 rounds exhausted, 4 internal invariant breach.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>  // vendored CLI11

#include "qpmpc/adversary.hpp"
#include "qpmpc/error.hpp"
#include "qpmpc/harness/batch.hpp"
#include "qpmpc/harness/cost.hpp"
#include "qpmpc/harness/report.hpp"
#include "qpmpc/protocols/qov.hpp"
#include "qpmpc/protocols/smqlcmc.hpp"
#include "qpmpc/protocols/smqs.hpp"
#include "qpmpc/qpa.hpp"

namespace qpmpc::cli {

using harness::Json;
using harness::Report;
using harness::ReportFormat;

enum ExitCode : int { kOk = 0, kUsage = 1, kReject = 2, kExhausted = 3, kBreach = 4 };

inline int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_input:
        case ErrorKind::unsupported: return kUsage;
        case ErrorKind::protocol_reject: return kReject;
        case ErrorKind::rounds_exhausted: return kExhausted;
        case ErrorKind::invariant_breach: return kBreach;
    }
    return kBreach;
}

// ---- value parsing ----

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    const auto *end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end)
        throw InvalidInput(std::string(what) + ": '" + std::string(s) + "' is not a decimal integer");
    return v;
}

/// "3,5,6" -> {3, 5, 6}. Decimal only.
inline std::vector<std::uint64_t> parse_list(std::string_view s, std::string_view what) {
    std::vector<std::uint64_t> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(parse_u64(s.substr(start, comma - start), what));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// "2:5" -> {2, 5}; "3" -> {3, 3}.
inline std::pair<unsigned, unsigned> parse_range(std::string_view s, std::string_view what) {
    const auto colon = s.find(':');
    const auto lo = parse_u64(s.substr(0, colon), what);
    const auto hi = colon == std::string_view::npos ? lo : parse_u64(s.substr(colon + 1), what);
    if (hi < lo || hi > 64) throw InvalidInput(std::string(what) + ": bad range '" + std::string(s) + "'");
    return {static_cast<unsigned>(lo), static_cast<unsigned>(hi)};
}

// ---- options ----

struct Options {
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string out;
    std::string config;

    std::string inputs;
    std::string votes;
    unsigned bits = 3;
    std::uint64_t M = protocols::kDefaultVoteRange;
    unsigned max_rounds = qpa::kDefaultMaxRounds;
    bool force = false;
    bool debug = false;

    std::uint64_t modulus = 0;
    unsigned v = 0;  // 0: bit width of the modulus

    std::string kind;
    int attacker = 1;
    std::string when = "before";
    std::string instant = "own_turn";
    std::string target = "oracle_output";

    unsigned n = 0;
    unsigned lambda = 0;
    std::uint64_t trials = 10000;
    std::string mode = "uniform";
    bool via_protocol = false;

    std::string sweep = "batch";
    std::string protocol = "lcm";
    std::string n_range = "2:4";
    std::string m_range = "1:4";
    unsigned threads = 0;
};

inline void add_common(CLI::App &sub, Options &o) {
    sub.add_option("--seed", o.seed, "Master seed (falls back to QPMPC_SEED, then 0)");
    sub.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub.add_option("--out", o.out, "Write the report to this path instead of standard output");
    sub.add_option("--config", o.config, "JSON file whose keys mirror the flags; explicit flags win");
}

inline void build_app(CLI::App &app, Options &o) {
    app.require_subcommand(1);
    app.fallthrough(false);

    auto *sum = app.add_subcommand("sum", "Secure modulo summation");
    sum->add_option("--inputs", o.inputs, "Comma-separated inputs x_i < 2^bits")->required();
    sum->add_option("--bits", o.bits, "Register width m");
    add_common(*sum, o);

    auto *vote = app.add_subcommand("vote", "Anonymous AND vote");
    vote->add_option("--votes", o.votes, "Comma-separated votes, 1 = yes, 0 = no")->required();
    vote->add_option("--M", o.M, "Mask range");
    vote->add_flag("--debug", o.debug, "Also print z and what P0 can infer from it");
    add_common(*vote, o);

    auto *lcm = app.add_subcommand("lcm", "Secure least common multiple");
    lcm->add_option("--inputs", o.inputs, "Comma-separated inputs 1 <= x_i < 2^bits")->required();
    lcm->add_option("--bits", o.bits, "Input width m");
    lcm->add_option("--M", o.M, "Mask range of the acceptance vote");
    lcm->add_option("--max-rounds", o.max_rounds, "Repetition cap");
    lcm->add_flag("--force", o.force, "Allow 2nm+1 above the 17-qubit guard (hard limit 24)");
    add_common(*lcm, o);

    auto *qpa = app.add_subcommand("qpa", "Period finding on f(j) = j mod T");
    qpa->add_option("--modulus", o.modulus, "The period T")->required();
    qpa->add_option("--v", o.v, "Output bits of f (default: bit width of T)");
    qpa->add_option("--max-rounds", o.max_rounds, "Repetition cap");
    add_common(*qpa, o);

    auto *attack = app.add_subcommand("attack", "Semi-honest attacks on one lcm round");
    attack->add_option("--kind", o.kind, "Attack")->required()->check(CLI::IsMember({"direct", "pre", "post"}));
    attack->add_option("--inputs", o.inputs, "Comma-separated inputs")->required();
    attack->add_option("--bits", o.bits, "Input width m");
    attack->add_option("--attacker", o.attacker, "Attacking party id");
    attack->add_option("--when", o.when, "direct: before or after period finding")
        ->check(CLI::IsMember({"before", "after"}));
    attack->add_option("--instant", o.instant, "pre: after_copy, own_turn or before_uncompute")
        ->check(CLI::IsMember({"after_copy", "own_turn", "before_uncompute"}));
    attack->add_option("--target", o.target, "direct: oracle_output or carrier")
        ->check(CLI::IsMember({"oracle_output", "carrier"}));
    attack->add_option("--M", o.M, "Mask range of the acceptance vote");
    attack->add_flag("--force", o.force, "Allow 2nm+1 above the 17-qubit guard");
    add_common(*attack, o);

    auto *leak = app.add_subcommand("leakage", "Monte Carlo of the vote-count leak flag");
    leak->add_option("--n", o.n, "Number of voters")->required();
    leak->add_option("--M", o.M, "Mask range");
    leak->add_option("--lambda", o.lambda, "Number of no votes")->required();
    leak->add_option("--trials", o.trials, "Trials");
    leak->add_option("--mode", o.mode, "Mask law")->check(CLI::IsMember({"uniform", "unit"}));
    leak->add_flag("--via-protocol", o.via_protocol, "Run the full quantum vote per trial");
    add_common(*leak, o);

    auto *bench = app.add_subcommand("bench", "Seeded batches and cost-scaling tables");
    bench->add_option("--sweep", o.sweep, "batch or scaling")->check(CLI::IsMember({"batch", "scaling"}));
    bench->add_option("--protocol", o.protocol, "batch: smqs|qov|lcm|qpa; scaling: smqs|lcm");
    bench->add_option("--inputs", o.inputs, "batch: inputs (votes for qov, the modulus for qpa)");
    bench->add_option("--bits", o.bits, "batch: width m");
    bench->add_option("--M", o.M, "batch: mask range");
    bench->add_option("--v", o.v, "batch qpa: output bits");
    bench->add_option("--max-rounds", o.max_rounds, "batch: repetition cap");
    bench->add_flag("--force", o.force, "Allow 2nm+1 above the 17-qubit guard");
    bench->add_option("--trials", o.trials, "batch: trial count");
    bench->add_option("--threads", o.threads, "batch: worker threads (0 = all cores; results do not depend on it)");
    bench->add_option("--n-range", o.n_range, "scaling: party counts lo:hi");
    bench->add_option("--m-range", o.m_range, "scaling: widths lo:hi");
    add_common(*bench, o);
}

// ---- --config ----

inline std::string config_value(const Json &v, const std::string &key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned() || v.is_number_integer()) return v.dump();
    if (v.is_array()) {
        std::string out;
        for (const auto &x : v) {
            if (!x.is_number_unsigned()) throw InvalidInput("config '" + key + "': arrays must hold non-negative integers");
            out += (out.empty() ? "" : ",") + x.dump();
        }
        return out;
    }
    throw InvalidInput("config '" + key + "': unsupported value " + v.dump());
}

/// True when `args` spells out --name or --name=value.
inline bool has_flag(const std::vector<std::string> &args, const std::string &name) {
    const std::string flag = "--" + name;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string &a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Flags for every config key whose option is not spelled out in `args`.
inline std::vector<std::string> config_args(const CLI::App &sub, const std::string &path,
                                            const std::vector<std::string> &args) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw InvalidInput("config file must hold a JSON object");
    std::vector<std::string> extra;
    for (const auto &[key, value] : doc.items()) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        if (name == "config") throw InvalidInput("config files cannot nest --config");
        const auto *opt = sub.get_option_no_throw("--" + name);
        if (!opt) throw InvalidInput("config key '" + key + "' is not a flag of '" + sub.get_name() + "'");
        if (has_flag(args, name)) continue;
        if (value.is_boolean()) {
            if (opt->get_expected_min() != 0) throw InvalidInput("config '" + key + "' is not a switch");
            if (value.get<bool>()) extra.push_back("--" + name);
            continue;
        }
        extra.push_back("--" + name);
        extra.push_back(config_value(value, key));
    }
    return extra;
}

// ---- commands ----

struct Context {
    Options opt;
    bool seed_explicit = false;
};

inline Json base_config(const std::string &command, const Context &c) {
    return Json{{"command", command}, {"seed", c.opt.seed}};
}

/// Scalar result fields as key,value rows.
inline harness::Table kv_table(const Json &result) {
    harness::Table t{{"key", "value"}, {}};
    for (const auto &[k, v] : result.items()) t.rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    return t;
}

inline Report cmd_sum(const Context &c) {
    const auto xs = parse_list(c.opt.inputs, "--inputs");
    if (xs.size() < 2) throw InvalidInput("sum needs at least 2 inputs");
    Report r;
    r.command = "sum";
    r.config = base_config("sum", c);
    r.config["inputs"] = xs;
    r.config["n"] = xs.size();
    r.config["bits"] = c.opt.bits;
    const auto res = protocols::run_smqs(xs, c.opt.bits, c.opt.seed);
    const auto cost = harness::cost_summary(res.transcript);
    r.result["sum"] = res.sum;
    r.result["register_transfers"] = cost.totals.register_transfers;
    r.result["qubits_transferred"] = cost.totals.qubits_transferred;
    r.result["operator_applications"] = cost.totals.operator_applications;
    r.result["transcript_events"] = res.transcript.size();
    r.table = kv_table(r.result);
    return r;
}

inline Report cmd_vote(const Context &c) {
    const auto raw = parse_list(c.opt.votes, "--votes");
    if (raw.size() < 2) throw InvalidInput("vote needs at least 2 votes");
    if (c.opt.M < 2) throw InvalidInput("--M must be >= 2");
    std::vector<int> votes;
    for (auto v : raw) {
        if (v > 1) throw InvalidInput("votes must be 0 or 1");
        votes.push_back(static_cast<int>(v));
    }
    Report r;
    r.command = "vote";
    r.config = base_config("vote", c);
    r.config["votes"] = raw;
    r.config["n"] = votes.size();
    r.config["M"] = c.opt.M;
    r.config["m_vote"] = protocols::vote_width(votes.size(), c.opt.M);
    r.config["debug"] = c.opt.debug;
    const auto res = protocols::run_qov(votes, c.opt.M, c.opt.seed);
    r.result["y"] = static_cast<int>(res.outcome.y);
    if (c.opt.debug) {
        r.result["z"] = res.outcome.z;
        r.result["leakage"] =
            harness::to_json(adversary::leakage_probe(res.outcome.z, res.outcome.m_vote, c.opt.M, votes.size()));
    }
    r.table = kv_table(r.result);
    return r;
}

inline Report cmd_lcm(const Context &c) {
    const auto xs = parse_list(c.opt.inputs, "--inputs");
    protocols::LcmConfig cfg;
    cfg.m = c.opt.bits;
    cfg.M = c.opt.M;
    cfg.max_rounds = c.opt.max_rounds;
    cfg.seed = c.opt.seed;
    cfg.force = c.opt.force;
    Report r;
    r.command = "lcm";
    r.config = base_config("lcm", c);
    r.config["inputs"] = xs;
    r.config["n"] = xs.size();
    r.config["bits"] = cfg.m;
    r.config["u"] = protocols::lcm_input_width(xs.size(), cfg.m);
    r.config["M"] = cfg.M;
    r.config["m_vote"] = xs.empty() ? 0u : protocols::vote_width(xs.size(), cfg.M);
    r.config["max_rounds"] = cfg.max_rounds;
    r.config["force"] = cfg.force;
    const auto res = protocols::run_smqlcmc(xs, cfg);
    const auto cost = harness::cost_summary(res.transcript);
    r.result["y"] = res.outcome.y;
    r.result["rounds"] = res.outcome.rounds;
    r.result["candidate_history"] = res.outcome.candidate_history;
    r.result["register_transfers"] = cost.totals.register_transfers;
    r.result["qubits_transferred"] = cost.totals.qubits_transferred;
    r.result["operator_applications"] = cost.totals.operator_applications;
    r.table = kv_table(r.result);
    return r;
}

inline Report cmd_qpa(const Context &c) {
    const std::uint64_t T = c.opt.modulus;
    if (T < 1) throw InvalidInput("--modulus must be >= 1");
    qpa::QpaConfig cfg;
    cfg.v = c.opt.v ? c.opt.v : std::max(1u, static_cast<unsigned>(std::bit_width(T)));
    if (cfg.v < 64 && T >> cfg.v) throw InvalidInput("--modulus must be below 2^v");
    cfg.u = qpa::choose_u(cfg.v);
    cfg.max_rounds = c.opt.max_rounds;
    cfg.seed = c.opt.seed;
    Report r;
    r.command = "qpa";
    r.config = base_config("qpa", c);
    r.config["modulus"] = T;
    r.config["v"] = cfg.v;
    r.config["u"] = cfg.u;
    r.config["max_rounds"] = cfg.max_rounds;
    const auto res = qpa::run_qpa([T](std::uint64_t j) { return j % T; }, cfg);
    r.result["period"] = res.period;
    r.result["rounds"] = res.rounds_used;
    r.result["phi_samples"] = res.phi_samples;
    r.result["candidates"] = res.candidates;
    r.table = kv_table(r.result);
    return r;
}

inline Report cmd_attack(const Context &c) {
    adversary::AttackContext ctx;
    ctx.inputs = parse_list(c.opt.inputs, "--inputs");
    ctx.m = c.opt.bits;
    ctx.seed = c.opt.seed;
    ctx.M = c.opt.M;
    ctx.force = c.opt.force;
    protocols::validate_lcm(ctx.inputs, adversary::detail::round_config(ctx));
    Report r;
    r.command = "attack";
    r.config = base_config("attack", c);
    r.config["kind"] = c.opt.kind;
    r.config["inputs"] = ctx.inputs;
    r.config["n"] = ctx.inputs.size();
    r.config["bits"] = ctx.m;
    r.config["u"] = protocols::lcm_input_width(ctx.inputs.size(), ctx.m);
    r.config["attacker"] = c.opt.attacker;
    adversary::AttackReport rep;
    if (c.opt.kind == "direct") {
        r.config["when"] = c.opt.when;
        r.config["target"] = c.opt.target;
        rep = adversary::attack_direct(
            ctx, c.opt.attacker, c.opt.when == "before" ? adversary::AttackTiming::before_qpa : adversary::AttackTiming::after_qpa,
            c.opt.target == "carrier" ? adversary::DirectTarget::carrier : adversary::DirectTarget::oracle_output);
    } else if (c.opt.kind == "pre") {
        r.config["instant"] = c.opt.instant;
        const auto instant = c.opt.instant == "after_copy"   ? adversary::PreInstant::after_copy
                             : c.opt.instant == "own_turn"   ? adversary::PreInstant::own_turn
                                                             : adversary::PreInstant::before_uncompute;
        rep = adversary::attack_pre_period(ctx, c.opt.attacker, instant);
    } else {
        rep = adversary::attack_post_period(ctx, c.opt.attacker);
    }
    r.result = harness::to_json(rep);
    r.table = harness::comparison_table(rep.observed, rep.reference);
    return r;
}

inline Report cmd_leakage(const Context &c) {
    const auto &o = c.opt;
    Report r;
    r.command = "leakage";
    r.config = base_config("leakage", c);
    r.config["n"] = o.n;
    r.config["M"] = o.M;
    r.config["m_vote"] = o.n ? protocols::vote_width(o.n, o.M) : 0u;
    r.config["lambda"] = o.lambda;
    r.config["trials"] = o.trials;
    r.config["mode"] = o.mode;
    r.config["via_protocol"] = o.via_protocol;
    const double freq =
        o.via_protocol ? adversary::estimate_leak_probability_via_protocol(o.n, o.M, o.lambda, o.trials, o.seed)
                       : adversary::estimate_leak_probability(o.n, o.M, o.lambda, o.trials, o.seed,
                                                              o.mode == "unit" ? adversary::MaskMode::unit
                                                                               : adversary::MaskMode::uniform);
    const double p = 1.0 / static_cast<double>(o.M);
    const double bound = p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(o.trials));
    r.result["leak_frequency"] = harness::real(freq);
    r.result["bound"] = harness::real(bound);
    r.result["below_bound"] = freq < bound;
    r.table = kv_table(r.result);
    return r;
}

inline Report cmd_bench(const Context &c) {
    const auto &o = c.opt;
    Report r;
    r.command = "bench";
    r.config = base_config("bench", c);
    r.config["sweep"] = o.sweep;
    if (o.sweep == "scaling") {
        harness::ScalingSpec spec;
        if (o.protocol == "smqs") spec.protocol = harness::ScalingProtocol::smqs;
        else if (o.protocol == "lcm") spec.protocol = harness::ScalingProtocol::lcm_round;
        else throw InvalidInput("scaling sweeps support --protocol smqs or lcm");
        std::tie(spec.n_min, spec.n_max) = parse_range(o.n_range, "--n-range");
        std::tie(spec.m_min, spec.m_max) = parse_range(o.m_range, "--m-range");
        spec.seed = o.seed;
        spec.force = o.force;
        r.config["protocol"] = o.protocol;
        r.config["n_range"] = o.n_range;
        r.config["m_range"] = o.m_range;
        r.config["force"] = o.force;
        const auto rows = harness::cost_scaling(spec);
        r.result["scaling"] = harness::to_json(rows);
        r.table = harness::scaling_table(rows);
        return r;
    }
    harness::TrialBatch batch;
    batch.spec.protocol = harness::protocol_from_string(o.protocol);
    batch.spec.inputs = parse_list(o.inputs, "--inputs");
    batch.spec.m = o.bits;
    batch.spec.M = o.M;
    batch.spec.max_rounds = o.max_rounds;
    batch.spec.force = o.force;
    if (batch.spec.protocol == harness::ProtocolKind::qpa && !batch.spec.inputs.empty())
        batch.spec.v = o.v ? o.v : std::max(1u, static_cast<unsigned>(std::bit_width(batch.spec.inputs[0])));
    batch.trials = o.trials;
    batch.master_seed = o.seed;
    batch.threads = o.threads;
    const Json spec_json = harness::to_json(batch.spec);
    for (const auto &[k, v] : spec_json.items()) r.config[k] = v;
    r.config["trials"] = batch.trials;
    const auto stats = harness::run_batch(batch);
    r.result["batch"] = harness::to_json(stats);
    r.table = harness::histogram_table(stats);
    return r;
}

inline Report dispatch(const std::string &command, const Context &c) {
    if (command == "sum") return cmd_sum(c);
    if (command == "vote") return cmd_vote(c);
    if (command == "lcm") return cmd_lcm(c);
    if (command == "qpa") return cmd_qpa(c);
    if (command == "attack") return cmd_attack(c);
    if (command == "leakage") return cmd_leakage(c);
    if (command == "bench") return cmd_bench(c);
    throw InvalidInput("unknown command '" + command + "'");
}

// ---- entry point ----

namespace detail {

/// Parses `args` (without the program name). Returns the selected subcommand name.
inline std::string parse(CLI::App &app, const std::vector<std::string> &args) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    for (const auto *sub : app.get_subcommands()) return sub->get_name();
    return {};
}

inline void print_config(const Report &r, std::ostream &os, const char *prefix) {
    for (const auto &[k, v] : r.config.items())
        os << prefix << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

}  // namespace detail

/// `env_seed` is the value of QPMPC_SEED, or null.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
                   const char *env_seed = std::getenv("QPMPC_SEED")) {
    Context ctx;
    std::string command;
    CLI::App app{"qpmpc: simulated quantum secure multiparty protocols", "qpmpc"};
    build_app(app, ctx.opt);
    try {
        std::vector<std::string> full = args;
        // --config is resolved before parsing so required flags may come from it.
        const auto sub_it = std::find_if(args.begin(), args.end(),
                                         [&](const std::string &a) { return app.get_subcommand_no_throw(a) != nullptr; });
        if (sub_it != args.end()) {
            const std::vector<std::string> rest(sub_it + 1, args.end());
            for (std::size_t i = 0; i < rest.size(); ++i) {
                std::string path;
                if (rest[i] == "--config" && i + 1 < rest.size()) path = rest[i + 1];
                else if (rest[i].rfind("--config=", 0) == 0) path = rest[i].substr(9);
                if (path.empty()) continue;
                const auto extra = config_args(*app.get_subcommand(*sub_it), path, rest);
                full.insert(full.end(), extra.begin(), extra.end());
                break;
            }
        }
        command = detail::parse(app, full);
        ctx.seed_explicit = app.get_subcommand(command)->get_option("--seed")->count() > 0;
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    try {
        if (!ctx.seed_explicit) {
            if (env_seed && *env_seed) {
                ctx.opt.seed = parse_u64(env_seed, "QPMPC_SEED");
            } else {
                err << "warning: no --seed given; using seed 0\n";
                ctx.opt.seed = 0;
            }
        }
        const auto format = harness::format_from_string(ctx.opt.format);
        const Report report = dispatch(command, ctx);
        const bool to_stdout = ctx.opt.out.empty() || ctx.opt.out == "-";
        if (!to_stdout) {
            detail::print_config(report, out, "");
            harness::emit_report(report, format, ctx.opt.out, out);
            out << "report written to " << ctx.opt.out << '\n';
        } else {
            // JSON carries the config inside the document and text prints it
            // first; CSV keeps stdout parseable and sends it to stderr.
            if (format == ReportFormat::csv) detail::print_config(report, err, "# ");
            harness::emit_report(report, format, "-", out);
        }
        return kOk;
    } catch (const RoundsExhausted &e) {
        err << "error: " << e.what() << " (best candidate " << e.best_candidate() << ")\n";
        return kExhausted;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kBreach;
    }
}

inline int run_cli(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace qpmpc::cli
