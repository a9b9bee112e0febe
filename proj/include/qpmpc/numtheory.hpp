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
 * Integer kernel: gcd/lcm, inverses modulo powers of two, continued-fraction
 * recovery of Fourier peaks, and brute-force period oracles.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qpmpc/error.hpp"
#include "qpmpc/random.hpp"

namespace qpmpc {

/// Reduced fraction numerator/denominator.
struct Fraction {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    friend bool operator==(const Fraction &, const Fraction &) = default;
};

struct PeriodOracleResult {
    std::uint64_t period = 1;
    bool verified = false;  // f(period) == f(0)
};

using IntFunction = std::function<std::uint64_t(std::uint64_t)>;

constexpr bool is_power_of_two(std::uint64_t x) noexcept { return x != 0 && (x & (x - 1)) == 0; }

/// Two-adic valuation; v2(0) is reported as 64.
constexpr unsigned two_adic_valuation(std::uint64_t x) noexcept {
    if (x == 0) return 64;
    unsigned k = 0;
    while ((x & 1) == 0) {
        x >>= 1;
        ++k;
    }
    return k;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    if (a == 0 && b == 0) throw InvalidInput("gcd(0, 0) is undefined");
    while (b != 0) {
        const std::uint64_t r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) throw InvalidInput("lcm requires positive integers");
    const std::uint64_t step = a / gcd(a, b);
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(step, b, &out)) throw InvalidInput("lcm overflows 64 bits");
    return out;
}

/// Least common multiple of a non-empty sequence, folded pairwise.
inline std::uint64_t lcm_many(std::span<const std::uint64_t> xs) {
    if (xs.empty()) throw InvalidInput("lcm_many of an empty sequence");
    std::uint64_t acc = 1;
    for (std::uint64_t x : xs) {
        if (x == 0) throw InvalidInput("lcm_many requires every element >= 1");
        acc = lcm(acc, x);
    }
    return acc;
}

/// Inverse of odd `q` modulo `modulus` = 2^m. Result lies in (0, modulus).
inline std::uint64_t mod_inverse(std::uint64_t q, std::uint64_t modulus) {
    if (!is_power_of_two(modulus) || modulus < 2) throw InvalidInput("modulus must be 2^m with m >= 1");
    if ((q & 1) == 0) throw InvalidInput("even q has no inverse modulo a power of two");
    // Newton iteration doubles the number of correct low bits each step:
    // q*q == 1 (mod 8) for odd q, so 3 -> 6 -> 12 -> 24 -> 48 -> 96 bits.
    std::uint64_t inv = q;
    for (int i = 0; i < 5; ++i) inv *= 2 - q * inv;
    return inv & (modulus - 1);
}

/// Last continued-fraction convergent of phi / two_pow_u whose denominator is
/// strictly below `denom_bound`. phi == 0 gives 0/1.
inline Fraction cf_recover(std::uint64_t phi, std::uint64_t two_pow_u, std::uint64_t denom_bound) {
    if (!is_power_of_two(two_pow_u)) throw InvalidInput("cf_recover: two_pow_u must be a power of two");
    if (phi >= two_pow_u) throw InvalidInput("cf_recover: phi must be below two_pow_u");
    if (denom_bound < 1) throw InvalidInput("cf_recover: denom_bound must be >= 1");

    // Convergent recurrences p_k = a_k p_{k-1} + p_{k-2}, same for q.
    std::uint64_t p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    std::uint64_t p_cur = 0, q_cur = 1;    // p_0/q_0 with a_0 = floor(phi / 2^u) = 0
    std::uint64_t num = phi, den = two_pow_u;
    Fraction best{0, 1};
    while (num != 0) {
        // Continue the expansion of num/den (here the reciprocal step).
        const std::uint64_t a = den / num;
        const std::uint64_t r = den % num;
        const std::uint64_t p_next = a * p_cur + p_prev;
        const std::uint64_t q_next = a * q_cur + q_prev;
        if (q_next >= denom_bound) break;
        best = {p_next, q_next};
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        den = num;
        num = r;
    }
    return best;
}

/// Smallest T >= 1 with f(j) == f(j mod T) on [0, 2^u), by linear scan.
/// Throws if the only such T is the whole domain (no repetition observed).
inline PeriodOracleResult brute_force_period(const IntFunction &f, unsigned u) {
    if (u >= 32) throw InvalidInput("brute_force_period: domain too large to scan");
    const std::uint64_t size = std::uint64_t{1} << u;
    std::vector<std::uint64_t> table(size);
    for (std::uint64_t j = 0; j < size; ++j) table[j] = f(j);
    for (std::uint64_t period = 1; period < size; ++period) {
        bool ok = true;
        for (std::uint64_t j = period; j < size && ok; ++j) ok = table[j] == table[j - period];
        if (ok) return {period, table[period] == table[0]};
    }
    throw InvalidInput("brute_force_period: no repetition within a domain of " + std::to_string(size));
}

/// Uniform odd integer in [1, 2^m).
inline std::uint64_t random_odd(unsigned m, Rng &rng) {
    if (m < 1 || m > 64) throw InvalidInput("random_odd: bit width must be in [1, 64]");
    const unsigned half_bits = m - 1;
    const std::uint64_t r = half_bits == 0 ? 0 : (rng() >> (64 - half_bits));
    return 2 * r + 1;
}

/// Euler's totient, by trial division.
inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

/// Number of bits needed to hold values in [0, x].
constexpr unsigned bit_width_of(std::uint64_t x) noexcept {
    unsigned w = 0;
    while (x != 0) {
        x >>= 1;
        ++w;
    }
    return w;
}

}  // namespace qpmpc
