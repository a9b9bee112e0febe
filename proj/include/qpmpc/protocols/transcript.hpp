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
 * Protocol transcripts: an ordered event log with a line-oriented text form.
 *
 * One event per line, tab-separated: kind, party, register, then zero or more
 * decimal payload integers. The register field is "-" when an event names no
 * register; two-register operators write "src>dst". See docs/formats.md for
 * the payload of each kind.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpmpc/error.hpp"

namespace qpmpc::protocols {

enum class EventKind {
    stage,            // start of a sub-protocol segment; payload: round index
    round,            // start of a protocol round; payload: round index
    prepare,          // payload: width
    hadamard,         // payload: width
    fourier,          // payload: width
    fourier_inverse,  // payload: width
    cnot,             // payload: width
    phase,            // payload: modulus bits
    modmul,           // payload: width
    oracle,           // payload: output width
    send,             // payload: destination party, qubit count
    measure,          // payload: outcome
    broadcast,        // payload: value
    end,              // no payload
};

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::stage,   EventKind::round,  EventKind::prepare, EventKind::hadamard, EventKind::fourier,
    EventKind::fourier_inverse, EventKind::cnot, EventKind::phase, EventKind::modmul, EventKind::oracle,
    EventKind::send,    EventKind::measure, EventKind::broadcast, EventKind::end,
};

inline std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::stage: return "stage";
        case EventKind::round: return "round";
        case EventKind::prepare: return "prepare";
        case EventKind::hadamard: return "hadamard";
        case EventKind::fourier: return "fourier";
        case EventKind::fourier_inverse: return "fourier_inverse";
        case EventKind::cnot: return "cnot";
        case EventKind::phase: return "phase";
        case EventKind::modmul: return "modmul";
        case EventKind::oracle: return "oracle";
        case EventKind::send: return "send";
        case EventKind::measure: return "measure";
        case EventKind::broadcast: return "broadcast";
        case EventKind::end: return "end";
    }
    return "?";
}

inline std::optional<EventKind> event_kind_from_string(std::string_view s) {
    for (EventKind k : kAllEventKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

/// Operator applications, the events cost accounting counts as work.
inline bool is_operator(EventKind k) {
    switch (k) {
        case EventKind::hadamard:
        case EventKind::fourier:
        case EventKind::fourier_inverse:
        case EventKind::cnot:
        case EventKind::phase:
        case EventKind::modmul:
        case EventKind::oracle: return true;
        default: return false;
    }
}

inline constexpr int kNoParty = -1;

struct Event {
    EventKind kind = EventKind::end;
    int party = kNoParty;
    std::string reg = "-";
    std::vector<std::uint64_t> payload;

    bool operator==(const Event &) const = default;

    /// Registers named by the event ("a>b" names two).
    std::vector<std::string> registers() const {
        if (reg == "-") return {};
        const auto gt = reg.find('>');
        if (gt == std::string::npos) return {reg};
        return {reg.substr(0, gt), reg.substr(gt + 1)};
    }
};

class Transcript {
  public:
    void append(Event e) { events_.push_back(std::move(e)); }
    void append(EventKind kind, int party, std::string reg, std::vector<std::uint64_t> payload = {}) {
        events_.push_back({kind, party, std::move(reg), std::move(payload)});
    }
    void append_all(const Transcript &other) { events_.insert(events_.end(), other.events_.begin(), other.events_.end()); }

    const std::vector<Event> &events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }

    /// A transcript is complete when its last event is `end`.
    bool complete() const { return !events_.empty() && events_.back().kind == EventKind::end; }

    std::size_t count(EventKind kind) const {
        std::size_t n = 0;
        for (const auto &e : events_) n += e.kind == kind;
        return n;
    }

    std::string serialize() const {
        std::string out;
        for (const auto &e : events_) {
            out += to_string(e.kind);
            out += '\t';
            out += std::to_string(e.party);
            out += '\t';
            out += e.reg;
            for (auto p : e.payload) {
                out += '\t';
                out += std::to_string(p);
            }
            out += '\n';
        }
        return out;
    }

    static Transcript parse(std::string_view text) {
        Transcript t;
        std::size_t line_no = 0;
        while (!text.empty()) {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::size_t start = 0;
            while (true) {
                const auto tab = line.find('\t', start);
                fields.emplace_back(line.substr(start, tab - start));
                if (tab == std::string_view::npos) break;
                start = tab + 1;
            }
            const auto bad = [&](const std::string &why) {
                return InvalidInput("transcript line " + std::to_string(line_no) + ": " + why);
            };
            if (fields.size() < 3) throw bad("expected at least 3 fields");
            const auto kind = event_kind_from_string(fields[0]);
            if (!kind) throw bad("unknown event kind '" + fields[0] + "'");
            Event e;
            e.kind = *kind;
            try {
                std::size_t used = 0;
                e.party = std::stoi(fields[1], &used);
                if (used != fields[1].size()) throw bad("bad party field");
                for (std::size_t i = 3; i < fields.size(); ++i) {
                    if (fields[i].empty() || fields[i][0] == '-') throw bad("bad payload field");
                    e.payload.push_back(std::stoull(fields[i], &used));
                    if (used != fields[i].size()) throw bad("bad payload field");
                }
            } catch (const std::logic_error &) {
                throw bad("non-numeric field");
            }
            e.reg = fields[2];
            t.append(std::move(e));
        }
        return t;
    }

  private:
    std::vector<Event> events_;
};

/// Replay ownership through the transcript: registers belong to the party
/// that prepared them, move with `send`, and may only be operated on or
/// measured by their current holder. Each `stage` starts a fresh register
/// namespace. Returns the first violation, if any.
inline std::optional<std::string> find_ownership_violation(const Transcript &t) {
    std::vector<std::pair<std::string, int>> owner;
    auto lookup = [&](const std::string &name) -> int * {
        for (auto &[n, o] : owner)
            if (n == name) return &o;
        return nullptr;
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Event &e = t.events()[i];
        const std::string where = "event " + std::to_string(i) + " (" + std::string(to_string(e.kind)) + ")";
        if (e.kind == EventKind::stage) {
            owner.clear();
            continue;
        }
        if (e.kind == EventKind::prepare) {
            if (lookup(e.reg)) return where + ": register '" + e.reg + "' prepared twice";
            owner.emplace_back(e.reg, e.party);
            continue;
        }
        if (!is_operator(e.kind) && e.kind != EventKind::send && e.kind != EventKind::measure) continue;
        for (const auto &r : e.registers()) {
            int *o = lookup(r);
            if (!o) return where + ": unknown register '" + r + "'";
            if (*o != e.party)
                return where + ": party " + std::to_string(e.party) + " acts on '" + r + "' held by " + std::to_string(*o);
        }
        if (e.kind == EventKind::send) {
            if (e.payload.empty()) return where + ": send without destination";
            *lookup(e.reg) = static_cast<int>(e.payload[0]);
        }
    }
    return std::nullopt;
}

}  // namespace qpmpc::protocols
