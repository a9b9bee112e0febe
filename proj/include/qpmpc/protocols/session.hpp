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
 * A protocol session: one shared quantum state, n parties with their own
 * random streams, ownership-checked register operations, and a transcript.
 * Observers hook into register hand-overs and named checkpoints; this is how
 * attacks are run against unmodified protocol code.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/numtheory.hpp"
#include "qpmpc/protocols/transcript.hpp"
#include "qpmpc/qsim/sparse_state.hpp"
#include "qpmpc/random.hpp"

namespace qpmpc::protocols {

enum class Checkpoint {
    copy_prepared,     // P0 has h, t entangled and nothing else applied
    oracle_applied,    // a party has applied its oracle or phase and still holds t
    before_uncompute,  // t is back with P0, before the uncompute CNOT
    qpa_completed,     // h measured; value = outcome phi
};

inline std::string_view to_string(Checkpoint c) {
    switch (c) {
        case Checkpoint::copy_prepared: return "copy_prepared";
        case Checkpoint::oracle_applied: return "oracle_applied";
        case Checkpoint::before_uncompute: return "before_uncompute";
        case Checkpoint::qpa_completed: return "qpa_completed";
    }
    return "?";
}

struct CheckpointInfo {
    Checkpoint kind;
    int party = 0;
    std::uint64_t value = 0;
};

class Session;

/// Callbacks run synchronously inside the protocol. Defaults do nothing.
class ProtocolObserver {
  public:
    virtual ~ProtocolObserver() = default;
    virtual void on_register_received(Session &, int /*party*/, const std::string & /*reg*/) {}
    virtual void on_checkpoint(Session &, const CheckpointInfo &) {}
};

struct Party {
    int id = 0;
    std::uint64_t secret = 0;
    Rng rng;
};

class Session {
  public:
    /// Party i draws from derive_seed(seed, i). `transcript` may be null.
    Session(std::vector<std::uint64_t> secrets, std::uint64_t seed, unsigned phase_bits, Transcript *transcript,
            ProtocolObserver *observer = nullptr)
        : phase_bits_(phase_bits), transcript_(transcript), observer_(observer) {
        for (std::size_t i = 0; i < secrets.size(); ++i)
            parties_.push_back({static_cast<int>(i), secrets[i], Rng(derive_seed(seed, i))});
    }

    std::size_t party_count() const noexcept { return parties_.size(); }
    Party &party(int id) { return parties_.at(check_party(id)); }
    Rng &rng(int id) { return party(id).rng; }

    bool has_register(std::string_view reg) const {
        return state_ && state_->layout().find(reg) != qsim::RegisterLayout::npos;
    }
    int owner(std::string_view reg) const { return state().layout()[reg].owner; }

    std::vector<std::string> owned_registers(int id) const {
        std::vector<std::string> out;
        if (!state_) return out;
        for (const auto &r : state_->layout())
            if (r.owner == id) out.push_back(r.name);
        return out;
    }

    const qsim::SparseState &state() const {
        if (!state_) throw InvalidInput("session has no registers yet");
        return *state_;
    }

    // ---- operations, each logged and ownership-checked ----

    void prepare(int id, const std::string &name, unsigned width, std::uint64_t initial = 0) {
        check_party(id);
        qsim::RegisterSpec spec{name, width, id, initial};
        if (!state_)
            state_.emplace(qsim::RegisterLayout{spec}, phase_bits_);
        else
            state_->add_register(spec);
        log(EventKind::prepare, id, name, {width});
    }

    void hadamard(int id, const std::string &reg) {
        require_owner(id, reg);
        state_->apply_hadamard_uniform(reg);
        log(EventKind::hadamard, id, reg, {width(reg)});
    }

    /// QFT or QFT^dagger of a register holding a definite value.
    void fourier(int id, const std::string &reg, qsim::Basis direction) {
        require_owner(id, reg);
        state_->apply_fourier_definite(reg, direction);
        log(direction == qsim::Basis::fourier ? EventKind::fourier : EventKind::fourier_inverse, id, reg, {width(reg)});
    }

    void cnot(int id, const std::string &src, const std::string &dst) {
        require_owner(id, src);
        require_owner(id, dst);
        state_->apply_cnot_copy(src, dst);
        log(EventKind::cnot, id, src + ">" + dst, {width(dst)});
    }

    void phase(int id, const std::string &reg, std::uint64_t x, unsigned m) {
        require_owner(id, reg);
        state_->apply_phase_power(reg, x, m);
        log(EventKind::phase, id, reg, {m});
    }

    /// Phase exp(2 pi i j x / 2^m) on |j>_reg, x read from the definite
    /// register `value_reg`.
    void controlled_phase(int id, const std::string &reg, const std::string &value_reg, unsigned m) {
        require_owner(id, reg);
        require_owner(id, value_reg);
        const auto x = state_->definite_value(value_reg);
        if (!x) throw InvariantBreach("register '" + value_reg + "' does not hold a definite value");
        state_->apply_phase_power(reg, *x, m);
        log(EventKind::phase, id, reg + ">" + value_reg, {m});
    }

    void modmul(int id, const std::string &reg, std::uint64_t q) {
        require_owner(id, reg);
        state_->apply_mod_mult(reg, q);
        log(EventKind::modmul, id, reg, {width(reg)});
    }

    void oracle(int id, const std::string &in, const std::string &out, const IntFunction &f) {
        require_owner(id, in);
        require_owner(id, out);
        state_->apply_oracle(in, out, f);
        log(EventKind::oracle, id, in + ">" + out, {width(out)});
    }

    void send(int from, int to, const std::string &reg) {
        require_owner(from, reg);
        check_party(to);
        state_->set_owner(reg, to);
        log(EventKind::send, from, reg, {static_cast<std::uint64_t>(to), width(reg)});
        if (observer_) observer_->on_register_received(*this, to, reg);
    }

    std::uint64_t measure(int id, const std::string &reg) {
        require_owner(id, reg);
        const auto r = state_->measure_register(reg, rng(id));
        log(EventKind::measure, id, reg, {r.outcome});
        return r.outcome;
    }

    /// Apply QFT / QFT^dagger to `reg` and read it out.
    std::uint64_t fourier_measure(int id, const std::string &reg, qsim::Basis direction) {
        require_owner(id, reg);
        const auto r = state_->fourier_measure(reg, direction, rng(id));
        log(direction == qsim::Basis::fourier ? EventKind::fourier : EventKind::fourier_inverse, id, reg, {width(reg)});
        log(EventKind::measure, id, reg, {r.outcome});
        return r.outcome;
    }

    void broadcast(int id, const std::string &label, std::uint64_t value) {
        check_party(id);
        log(EventKind::broadcast, id, label, {value});
    }

    void checkpoint(Checkpoint kind, int id, std::uint64_t value = 0) {
        if (observer_) observer_->on_checkpoint(*this, {kind, id, value});
    }

    /// Outcome law `id` would see measuring a register it holds. Analysis
    /// only: no collapse, not logged.
    qsim::MeasurementDistribution observe(int id, const std::string &reg, qsim::Basis basis) const {
        if (!has_register(reg)) throw InvalidInput("register '" + reg + "' does not exist at this point");
        if (owner(reg) != id)
            throw InvalidInput("party " + std::to_string(id) + " does not own register '" + reg + "'");
        return state_->distribution_of(reg, basis);
    }

  private:
    std::size_t check_party(int id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= parties_.size())
            throw InvalidInput("no party " + std::to_string(id));
        return static_cast<std::size_t>(id);
    }

    void require_owner(int id, const std::string &reg) const {
        check_party(id);
        if (!has_register(reg)) throw InvariantBreach("register '" + reg + "' does not exist");
        if (owner(reg) != id)
            throw InvariantBreach("party " + std::to_string(id) + " acted on register '" + reg + "' held by party " +
                                  std::to_string(owner(reg)));
    }

    std::uint64_t width(const std::string &reg) const { return state_->layout()[reg].width; }

    void log(EventKind kind, int id, const std::string &reg, std::vector<std::uint64_t> payload) {
        if (transcript_) transcript_->append(kind, id, reg, std::move(payload));
    }

    unsigned phase_bits_;
    Transcript *transcript_;
    ProtocolObserver *observer_;
    std::vector<Party> parties_;
    std::optional<qsim::SparseState> state_;
};

}  // namespace qpmpc::protocols
