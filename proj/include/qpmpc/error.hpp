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
#include <stdexcept>
#include <string>

namespace qpmpc {

/// Coarse failure classes. The CLI maps them onto process exit codes.
enum class ErrorKind {
    invalid_input,      // bad arguments, malformed layouts, precondition violations
    unsupported,        // valid request outside what the sparse engine represents
    protocol_reject,    // the |0> check on t failed
    rounds_exhausted,   // repetition cap reached without an accepted answer
    invariant_breach,   // internal consistency check failed
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

class InvalidInput : public Error {
  public:
    explicit InvalidInput(const std::string &what) : Error(ErrorKind::invalid_input, what) {}
};

class Unsupported : public Error {
  public:
    explicit Unsupported(const std::string &what) : Error(ErrorKind::unsupported, what) {}
};

class ProtocolReject : public Error {
  public:
    ProtocolReject(const std::string &what, std::uint64_t observed)
        : Error(ErrorKind::protocol_reject, what), observed_(observed) {}

    /// Value read from t at the uncompute check.
    std::uint64_t observed() const noexcept { return observed_; }

  private:
    std::uint64_t observed_;
};

class RoundsExhausted : public Error {
  public:
    RoundsExhausted(const std::string &what, std::uint64_t best_candidate, unsigned rounds)
        : Error(ErrorKind::rounds_exhausted, what), best_candidate_(best_candidate), rounds_(rounds) {}

    std::uint64_t best_candidate() const noexcept { return best_candidate_; }
    unsigned rounds() const noexcept { return rounds_; }

  private:
    std::uint64_t best_candidate_;
    unsigned rounds_;
};

class InvariantBreach : public Error {
  public:
    explicit InvariantBreach(const std::string &what) : Error(ErrorKind::invariant_breach, what) {}
};

}  // namespace qpmpc
