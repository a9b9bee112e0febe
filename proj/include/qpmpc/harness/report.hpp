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
 * Report documents and their JSON / CSV / text renderings. Layouts are
 * described in docs/formats.md. Reals are rounded to 12 significant digits
 * before rendering and keys keep insertion order, so equal inputs give equal
 * bytes.
 */

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "qpmpc/adversary.hpp"
#include "qpmpc/error.hpp"
#include "qpmpc/harness/batch.hpp"
#include "qpmpc/harness/cost.hpp"
#include "qpmpc/qsim/distribution.hpp"

namespace qpmpc::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char *kReportSchema = "qpmpc.report/1";

enum class ReportFormat { text, json, csv };

inline ReportFormat format_from_string(std::string_view s) {
    if (s == "text") return ReportFormat::text;
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw InvalidInput("unknown format '" + std::string(s) + "' (text|json|csv)");
}

inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// x rounded to 12 significant digits.
inline double round12(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

inline Json real(double x) { return round12(x); }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::string command;
    Json config = Json::object();
    Json result = Json::object();
    Table table;  // the CSV view
};

// ---- JSON builders ----

inline Json to_json(const CostCounts &c) {
    return Json{{"operator_applications", c.operator_applications},
                {"register_transfers", c.register_transfers},
                {"qubits_transferred", c.qubits_transferred},
                {"measurements", c.measurements},
                {"broadcasts", c.broadcasts},
                {"modeled_gate_count", c.modeled_gate_count}};
}

inline Json to_json(const CostSummary &s) {
    Json stages = Json::array();
    for (const auto &st : s.stages)
        stages.push_back(Json{{"stage", st.stage}, {"round", st.round}, {"counts", to_json(st.counts)}});
    return Json{{"totals", to_json(s.totals)}, {"rounds", s.rounds}, {"stages", std::move(stages)}};
}

inline Json to_json(const qsim::MeasurementDistribution &d) {
    Json probs = Json::array();
    for (const auto &[k, p] : d.probabilities) probs.push_back(Json{{"outcome", k}, {"probability", real(p)}});
    return Json{{"basis", std::string(qsim::to_string(d.basis))}, {"width", d.width}, {"probabilities", std::move(probs)}};
}

inline Json to_json(const RunSpec &spec) {
    return Json{{"protocol", std::string(to_string(spec.protocol))},
                {"inputs", spec.inputs},
                {"m", spec.m},
                {"M", spec.M},
                {"v", spec.v},
                {"max_rounds", spec.max_rounds},
                {"force", spec.force}};
}

inline Json to_json(const BatchStats &s) {
    Json hist = Json::array();
    for (const auto &[out, count] : s.histogram)
        hist.push_back(Json{{"outcome", out},
                            {"count", count},
                            {"probability", real(static_cast<double>(count) / static_cast<double>(s.trials))}});
    return Json{{"trials", s.trials},
                {"successes", s.successes},
                {"success_rate", real(s.success_rate)},
                {"mean_rounds", real(s.mean_rounds)},
                {"expected_output", s.expected_output},
                {"total_rounds", s.total_rounds},
                {"histogram", std::move(hist)},
                {"total_cost", to_json(s.total_cost)}};
}

inline Json to_json(const adversary::AttackReport &r) {
    Json j{{"kind", std::string(adversary::to_string(r.kind))},
           {"attacker", r.attacker},
           {"instant", r.instant},
           {"target_register", r.target_register},
           {"u", r.u},
           {"period", r.period},
           {"period_divides_domain", r.period_divides_domain},
           {"max_deviation", real(r.max_deviation)},
           {"tv_distance", real(r.tv_distance)}};
    // k is known to P0 only; reported for analysis.
    j["qpa_outcome"] = r.qpa_outcome ? Json(*r.qpa_outcome) : Json(nullptr);
    j["qpa_outcome_test_only"] = true;
    j["observed"] = to_json(r.observed);
    j["reference"] = to_json(r.reference);
    return j;
}

inline Json to_json(const adversary::LeakageReport &r) {
    return Json{{"z", r.z},
                {"m_vote", r.m_vote},
                {"M", r.M},
                {"n", r.n},
                {"vote_passed", r.vote_passed},
                {"m1", r.m1},
                {"leak_flag", r.leak_flag},
                {"lambda_low", r.lambda_low},
                {"lambda_high", r.lambda_high}};
}

inline Json to_json(const std::vector<ScalingRow> &rows) {
    Json out = Json::array();
    for (const auto &r : rows)
        out.push_back(Json{{"protocol", r.protocol},
                           {"n", r.n},
                           {"m", r.m},
                           {"width", r.width},
                           {"counts", to_json(r.counts)}});
    return out;
}

// ---- CSV tables ----

inline Table histogram_table(const BatchStats &s) {
    Table t{{"outcome", "probability"}, {}};
    for (const auto &[out, count] : s.histogram)
        t.rows.push_back({std::to_string(out), format_real(static_cast<double>(count) / static_cast<double>(s.trials))});
    return t;
}

inline Table distribution_table(const qsim::MeasurementDistribution &d) {
    Table t{{"outcome", "probability"}, {}};
    for (const auto &[k, p] : d.probabilities) t.rows.push_back({std::to_string(k), format_real(p)});
    return t;
}

/// Observed vs reference over the union of both supports.
inline Table comparison_table(const qsim::MeasurementDistribution &observed,
                              const qsim::MeasurementDistribution &reference) {
    Table t{{"outcome", "observed", "reference"}, {}};
    for (auto k : joint_outcomes(observed, reference))
        t.rows.push_back({std::to_string(k), format_real(observed.probability(k)), format_real(reference.probability(k))});
    return t;
}

inline Table scaling_table(const std::vector<ScalingRow> &rows) {
    Table t{{"protocol", "n", "m", "width", "operator_applications", "register_transfers", "qubits_transferred",
             "measurements", "broadcasts", "modeled_gate_count"},
            {}};
    for (const auto &r : rows)
        t.rows.push_back({r.protocol, std::to_string(r.n), std::to_string(r.m), std::to_string(r.width),
                          std::to_string(r.counts.operator_applications), std::to_string(r.counts.register_transfers),
                          std::to_string(r.counts.qubits_transferred), std::to_string(r.counts.measurements),
                          std::to_string(r.counts.broadcasts), std::to_string(r.counts.modeled_gate_count)});
    return t;
}

// ---- rendering ----

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string render_csv(const Table &t) {
    if (t.header.empty()) throw InvalidInput("report has no tabular view");
    std::string out;
    auto line = [&out](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
        out += '\n';
    };
    line(t.header);
    for (const auto &r : t.rows) {
        if (r.size() != t.header.size()) throw InvariantBreach("csv row width differs from header");
        line(r);
    }
    return out;
}

inline Json report_document(const Report &r) {
    return Json{{"schema", kReportSchema}, {"command", r.command}, {"config", r.config}, {"result", r.result}};
}

inline std::string render_json(const Report &r) { return report_document(r).dump(2) + "\n"; }

inline constexpr std::size_t kTextValueLimit = 160;

inline void render_text_value(std::string &out, const std::string &key, const Json &v, int depth = 1) {
    out += std::string(2 * depth, ' ') + key + ":";
    if (v.is_object()) {
        out += '\n';
        for (const auto &[k, child] : v.items()) render_text_value(out, k, child, depth + 1);
        return;
    }
    out += ' ';
    if (v.is_string()) {
        out += v.get<std::string>();
    } else {
        const auto compact = v.dump();
        out += compact.size() <= kTextValueLimit ? compact : "<" + std::to_string(v.size()) + " entries; see --format json>";
    }
    out += '\n';
}

/// "key: value" lines; objects nest by indentation, long arrays are summarized.
inline std::string render_config_text(const Report &r) {
    std::string out = "config:\n";
    for (const auto &[k, v] : r.config.items()) render_text_value(out, k, v);
    return out;
}

inline std::string render_result_text(const Report &r) {
    std::string out = r.command + ":\n";
    for (const auto &[k, v] : r.result.items()) render_text_value(out, k, v);
    return out;
}

inline std::string render(const Report &r, ReportFormat f) {
    switch (f) {
        case ReportFormat::json: return render_json(r);
        case ReportFormat::csv: return render_csv(r.table);
        case ReportFormat::text: return render_config_text(r) + render_result_text(r);
    }
    return {};
}

/// Writes to `destination`, or to standard output when it is empty or "-".
inline void emit_report(const Report &r, ReportFormat f, const std::string &destination, std::ostream &out = std::cout) {
    const std::string bytes = render(r, f);
    if (destination.empty() || destination == "-") {
        out << bytes;
        out.flush();
        return;
    }
    std::ofstream file(destination, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidInput("cannot write report to '" + destination + "'");
    file << bytes;
    file.close();
    if (!file) throw InvalidInput("failed writing report to '" + destination + "'");
}

/// Structural check of a parsed report document against the layout in
/// docs/formats.md. Returns an empty string when valid.
inline std::string check_report_document(const Json &doc) {
    if (!doc.is_object()) return "document is not an object";
    if (!doc.contains("schema") || doc["schema"] != kReportSchema) return "missing or wrong schema tag";
    if (!doc.contains("command") || !doc["command"].is_string()) return "missing command";
    if (!doc.contains("config") || !doc["config"].is_object()) return "missing config object";
    if (!doc.contains("result") || !doc["result"].is_object()) return "missing result object";
    if (!doc["config"].contains("seed") || !doc["config"]["seed"].is_number_unsigned()) return "config.seed missing";
    const auto &res = doc["result"];
    if (res.contains("batch")) {
        const auto &b = res["batch"];
        for (const char *key : {"trials", "successes", "success_rate", "mean_rounds", "histogram", "total_cost"})
            if (!b.contains(key)) return std::string("batch.") + key + " missing";
        for (const auto &h : b["histogram"])
            if (!h.contains("outcome") || !h.contains("count") || !h.contains("probability"))
                return "malformed histogram entry";
    }
    return {};
}

}  // namespace qpmpc::harness
