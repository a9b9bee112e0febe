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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpmpc/cli.hpp"

namespace qpmpc::cli {
namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const char *env_seed = nullptr) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err, env_seed);
    r.out = out.str();
    r.err = err.str();
    return r;
}

Json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return Json::parse(r.out);
}

bool contains(const std::string &hay, const std::string &needle) { return hay.find(needle) != std::string::npos; }

// Minimal RFC 4180 reader: quoted fields, doubled quotes, LF records.
std::vector<std::vector<std::string>> read_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows(1);
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') field += '"', ++i;
            else if (c == '"') quoted = false;
            else field += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            rows.back().push_back(field), field.clear();
        } else if (c == '\n') {
            rows.back().push_back(field), field.clear();
            rows.emplace_back();
        } else {
            field += c;
        }
    }
    rows.pop_back();
    return rows;
}

// ---- subcommand examples ----

TEST(Cli, Sum) {
    EXPECT_EQ(run_json({"sum", "--inputs", "3,5,6", "--bits", "5", "--seed", "1"})["result"]["sum"], 14);
    EXPECT_EQ(run_json({"sum", "--inputs", "31,1", "--bits", "5", "--seed", "1"})["result"]["sum"], 0);
    const auto bad = run({"sum", "--inputs", "3", "--bits", "5", "--seed", "1"});
    EXPECT_EQ(bad.code, kUsage);
    EXPECT_TRUE(contains(bad.err, "at least 2"));
    EXPECT_TRUE(contains(run({"sum", "--inputs", "3,5,6", "--bits", "5", "--seed", "1"}).out, "  sum: 14\n"));
}

TEST(Cli, Vote) {
    EXPECT_EQ(run_json({"vote", "--votes", "1,1,1", "--M", "8", "--seed", "1"})["result"]["y"], 1);
    const auto no = run_json({"vote", "--votes", "1,0", "--M", "8", "--seed", "1", "--debug"});
    EXPECT_EQ(no["result"]["y"], 0);
    EXPECT_TRUE(no["result"].contains("z"));
    EXPECT_EQ(no["result"]["leakage"]["z"], no["result"]["z"]);
    EXPECT_FALSE(run_json({"vote", "--votes", "1,0", "--M", "8", "--seed", "1"})["result"].contains("z"));
    EXPECT_EQ(run({"vote", "--votes", "1", "--seed", "1"}).code, kUsage);
    EXPECT_EQ(run({"vote", "--votes", "1,2", "--seed", "1"}).code, kUsage);
}

TEST(Cli, Lcm) {
    EXPECT_EQ(run_json({"lcm", "--inputs", "4,6", "--bits", "3", "--seed", "2"})["result"]["y"], 12);
    const auto ones = run_json({"lcm", "--inputs", "1,1", "--bits", "2", "--seed", "2"});
    EXPECT_EQ(ones["result"]["y"], 1);
    EXPECT_EQ(ones["result"]["rounds"], 1);
    const auto guard = run({"lcm", "--inputs", "3,5,7", "--bits", "3", "--seed", "2"});
    EXPECT_EQ(guard.code, kUsage);
    EXPECT_TRUE(contains(guard.err, "19")) << guard.err;
    EXPECT_TRUE(contains(guard.err, "force")) << guard.err;
}

TEST(Cli, LcmForceAboveGuard) {
    const auto r = run_json({"lcm", "--inputs", "2,3,5", "--bits", "3", "--seed", "3", "--force"});
    EXPECT_EQ(r["result"]["y"], 30);
    EXPECT_EQ(r["config"]["u"], 19);
}

TEST(Cli, Qpa) {
    const auto r = run_json({"qpa", "--modulus", "3", "--v", "2", "--seed", "4"});
    EXPECT_EQ(r["result"]["period"], 3);
    EXPECT_EQ(r["config"]["u"], 5);
    EXPECT_EQ(run({"qpa", "--modulus", "5", "--v", "2", "--seed", "4"}).code, kUsage);
}

TEST(Cli, AttackPre) {
    const auto r = run_json({"attack", "--kind", "pre", "--inputs", "2,3", "--seed", "5"});
    EXPECT_LT(r["result"]["max_deviation"].get<double>(), 1e-9);
    EXPECT_EQ(r["result"]["kind"], "pre_period");
    const auto wrong = run({"attack", "--kind", "pre", "--inputs", "2,3", "--attacker", "1", "--instant",
                            "after_copy", "--seed", "5"});
    EXPECT_EQ(wrong.code, kUsage);
    EXPECT_TRUE(contains(wrong.err, "wrong protocol phase"));
}

TEST(Cli, AttackPostAndDirect) {
    const auto post = run_json({"attack", "--kind", "post", "--inputs", "2,4", "--seed", "5"});
    EXPECT_LT(post["result"]["max_deviation"].get<double>(), 1e-9);
    EXPECT_TRUE(post["result"]["qpa_outcome"].is_number());
    EXPECT_EQ(post["result"]["qpa_outcome_test_only"], true);
    const auto direct = run_json({"attack", "--kind", "direct", "--inputs", "3,5", "--attacker", "1", "--seed", "5"});
    EXPECT_LT(direct["result"]["max_deviation"].get<double>(), 1e-9);
    EXPECT_EQ(run({"attack", "--kind", "sideways", "--inputs", "2,3"}).code, kUsage);
}

TEST(Cli, Leakage) {
    const auto r = run_json({"leakage", "--n", "8", "--M", "16", "--lambda", "3", "--trials", "10000", "--seed", "6"});
    EXPECT_EQ(r["result"]["below_bound"], true);
    EXPECT_LT(r["result"]["leak_frequency"].get<double>(), 0.0625 + 3 * std::sqrt(0.0625 * 0.9375 / 1e4));
    EXPECT_EQ(r["config"]["m_vote"], 8);
}

TEST(Cli, BenchBatchAndScaling) {
    const auto b = run_json({"bench", "--protocol", "lcm", "--inputs", "4,6", "--trials", "8", "--seed", "7"});
    EXPECT_EQ(b["result"]["batch"]["success_rate"], 1.0);
    EXPECT_EQ(harness::check_report_document(b), "");
    const auto s = run({"bench", "--sweep", "scaling", "--protocol", "smqs", "--n-range", "2:3", "--m-range", "4",
                        "--format", "csv", "--seed", "1"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto rows = read_csv(s.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0][0], "protocol");
    EXPECT_EQ(rows[2][6], "12");  // n=3, m=4 -> 3 transfers of 4 qubits
    EXPECT_EQ(run({"bench", "--protocol", "lcm", "--inputs", "4,6", "--trials", "0", "--seed", "7"}).code, kUsage);
}

// ---- exit codes and parsing ----

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"lcm", "--inputs", "5,7", "--max-rounds", "1", "--seed", "1"}).code, kExhausted);
    EXPECT_EQ(run({"frobnicate"}).code, kUsage);
    EXPECT_EQ(run({}).code, kUsage);
    EXPECT_EQ(run({"sum", "--inputs", "1,2", "--bogus"}).code, kUsage);
    EXPECT_EQ(run({"sum", "--help"}).code, kOk);
    EXPECT_EQ(exit_code_for(ErrorKind::protocol_reject), kReject);
    EXPECT_EQ(exit_code_for(ErrorKind::invariant_breach), kBreach);
    EXPECT_EQ(exit_code_for(ErrorKind::unsupported), kUsage);
}

TEST(Cli, DecimalListsOnly) {
    EXPECT_EQ(parse_list("3,5,6", "x"), (std::vector<std::uint64_t>{3, 5, 6}));
    EXPECT_THROW(parse_list("0x3,1", "x"), InvalidInput);
    EXPECT_THROW(parse_list("1,,2", "x"), InvalidInput);
    EXPECT_THROW(parse_list("-1,2", "x"), InvalidInput);
    EXPECT_THROW(parse_list("1, 2", "x"), InvalidInput);
    EXPECT_EQ(parse_range("2:5", "r"), (std::pair<unsigned, unsigned>{2, 5}));
    EXPECT_THROW(parse_range("5:2", "r"), InvalidInput);
}

// ---- seeds and config ----

TEST(Cli, SeedFallbacks) {
    const auto flagged = run({"qpa", "--modulus", "5", "--seed", "3"}, "9");
    EXPECT_TRUE(contains(flagged.out, "  seed: 3\n"));
    const auto env = run({"qpa", "--modulus", "5"}, "9");
    EXPECT_TRUE(contains(env.out, "  seed: 9\n"));
    EXPECT_EQ(env.err, "");
    const auto none = run({"qpa", "--modulus", "5"});
    EXPECT_TRUE(contains(none.out, "  seed: 0\n"));
    EXPECT_TRUE(contains(none.err, "warning"));
    EXPECT_EQ(run({"qpa", "--modulus", "5"}, "abc").code, kUsage);
}

TEST(Cli, ConfigFileMirrorsFlags) {
    const auto path = std::filesystem::temp_directory_path() / "qpmpc_cli_config.json";
    std::ofstream(path) << R"({"inputs": [4, 6], "bits": 3, "seed": 11, "max_rounds": 64, "force": false})";
    const auto from_file = run({"lcm", "--config", path.string()});
    const auto from_flags = run({"lcm", "--inputs", "4,6", "--bits", "3", "--seed", "11", "--max-rounds", "64"});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_EQ(from_file.out, from_flags.out);
    // Explicit flags win.
    const auto override = run_json({"lcm", "--config", path.string(), "--inputs", "2,3"});
    EXPECT_EQ(override["result"]["y"], 6);
    EXPECT_EQ(override["config"]["seed"], 11);
    std::ofstream(path) << R"({"bogus": 1})";
    EXPECT_EQ(run({"lcm", "--inputs", "2,3", "--config", path.string()}).code, kUsage);
    std::ofstream(path) << "{not json";
    EXPECT_EQ(run({"lcm", "--inputs", "2,3", "--config", path.string()}).code, kUsage);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"lcm", "--inputs", "2,3", "--config", "/nonexistent/cfg.json"}).code, kUsage);
}

TEST(Cli, EffectiveConfigPrintedFirst) {
    const auto r = run({"lcm", "--inputs", "2,3", "--bits", "3", "--seed", "1"});
    EXPECT_EQ(r.out.rfind("config:\n", 0), 0u);
    for (const char *key : {"  seed: 1\n", "  u: 13\n", "  m_vote: 6\n"}) EXPECT_TRUE(contains(r.out, key)) << key;
    EXPECT_LT(r.out.find("m_vote"), r.out.find("  y: 6"));
    const auto doc = run_json({"vote", "--votes", "1,1", "--seed", "1"});
    EXPECT_EQ(doc.begin().key(), "schema");
    EXPECT_EQ(std::next(doc.begin(), 2).key(), "config");
    const auto csv = run({"vote", "--votes", "1,1", "--seed", "1", "--format", "csv"});
    EXPECT_EQ(csv.err.rfind("# command: vote\n", 0), 0u);
}

// ---- output formats ----

const std::vector<std::vector<std::string>> kInvocations = {
    {"sum", "--inputs", "3,5,6", "--bits", "5", "--seed", "8"},
    {"vote", "--votes", "1,0,1", "--M", "8", "--debug", "--seed", "8"},
    {"lcm", "--inputs", "4,6", "--bits", "3", "--seed", "8"},
    {"qpa", "--modulus", "7", "--seed", "8"},
    {"attack", "--kind", "post", "--inputs", "2,4", "--seed", "8"},
    {"leakage", "--n", "4", "--M", "4", "--lambda", "2", "--trials", "500", "--seed", "8"},
    {"bench", "--protocol", "smqs", "--inputs", "1,2,3", "--bits", "4", "--trials", "5", "--seed", "8"},
};

TEST(Cli, JsonValidatesAgainstLayout) {
    for (const auto &args : kInvocations) {
        const auto doc = run_json(args);
        EXPECT_EQ(harness::check_report_document(doc), "") << args[0];
        EXPECT_EQ(doc["command"], args[0]);
    }
}

TEST(Cli, CsvRoundTripsThroughGenericReader) {
    for (auto args : kInvocations) {
        args.insert(args.end(), {"--format", "csv"});
        const auto r = run(args);
        ASSERT_EQ(r.code, 0) << r.err;
        const auto rows = read_csv(r.out);
        ASSERT_GE(rows.size(), 2u) << args[0];
        for (const auto &row : rows) EXPECT_EQ(row.size(), rows[0].size()) << args[0];
        harness::Table t{rows[0], {rows.begin() + 1, rows.end()}};
        EXPECT_EQ(harness::render_csv(t), r.out) << args[0];
    }
}

TEST(Cli, ByteIdenticalRepeats) {
    for (const char *format : {"text", "json", "csv"})
        for (auto args : kInvocations) {
            args.insert(args.end(), {"--format", format});
            const auto a = run(args), b = run(args);
            EXPECT_EQ(a.code, 0);
            EXPECT_EQ(a.out, b.out) << args[0] << " " << format;
            EXPECT_EQ(a.err, b.err);
        }
}

TEST(Cli, OutFile) {
    const auto path = std::filesystem::temp_directory_path() / "qpmpc_cli_out.json";
    const auto r = run({"sum", "--inputs", "1,2", "--seed", "1", "--format", "json", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "report written to"));
    EXPECT_EQ(r.out.rfind("command: sum\n", 0), 0u);
    std::ifstream in(path);
    const auto doc = Json::parse(in);
    EXPECT_EQ(doc["result"]["sum"], 3);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"sum", "--inputs", "1,2", "--seed", "1", "--out", "/nonexistent/dir/r.json"}).code, kUsage);
}

}  // namespace
}  // namespace qpmpc::cli
