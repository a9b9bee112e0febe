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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "qpmpc/error.hpp"

namespace qpmpc::qsim {

inline constexpr int kNoOwner = -1;
inline constexpr unsigned kMaxRegisterWidth = 62;

struct RegisterSpec {
    std::string name;
    unsigned width = 0;
    int owner = kNoOwner;
    std::uint64_t initial = 0;
};

/// Ordered named registers. Register order fixes the column order of basis
/// assignments and, in the dense backend, the bit order (first register is
/// least significant).
class RegisterLayout {
  public:
    RegisterLayout() = default;
    RegisterLayout(std::initializer_list<RegisterSpec> specs) {
        for (const auto &s : specs) add(s);
    }

    std::size_t add(RegisterSpec spec) {
        if (spec.name.empty()) throw InvalidInput("register name must be non-empty");
        if (spec.width < 1 || spec.width > kMaxRegisterWidth)
            throw InvalidInput("register '" + spec.name + "' width must be in [1, 62]");
        if (find(spec.name) != npos) throw InvalidInput("duplicate register name '" + spec.name + "'");
        if (spec.initial >> spec.width) throw InvalidInput("initial value of '" + spec.name + "' exceeds its width");
        regs_.push_back(std::move(spec));
        return regs_.size() - 1;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t find(std::string_view name) const noexcept {
        for (std::size_t i = 0; i < regs_.size(); ++i)
            if (regs_[i].name == name) return i;
        return npos;
    }

    std::size_t index_of(std::string_view name) const {
        const std::size_t i = find(name);
        if (i == npos) throw InvalidInput("unknown register '" + std::string(name) + "'");
        return i;
    }

    const RegisterSpec &at(std::size_t i) const { return regs_.at(i); }
    const RegisterSpec &operator[](std::string_view name) const { return regs_[index_of(name)]; }

    void set_owner(std::string_view name, int owner) { regs_[index_of(name)].owner = owner; }

    std::size_t size() const noexcept { return regs_.size(); }
    bool empty() const noexcept { return regs_.empty(); }

    unsigned total_width() const noexcept {
        unsigned w = 0;
        for (const auto &r : regs_) w += r.width;
        return w;
    }

    auto begin() const noexcept { return regs_.begin(); }
    auto end() const noexcept { return regs_.end(); }

  private:
    std::vector<RegisterSpec> regs_;
};

}  // namespace qpmpc::qsim
