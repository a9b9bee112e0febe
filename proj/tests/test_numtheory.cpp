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

#include "qpmpc/numtheory.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "test_util.hpp"

namespace qpmpc {
namespace {

// Exhaustive residue scan; the independent route for mod_inverse.
std::uint64_t inverse_by_scan(std::uint64_t q, std::uint64_t modulus) {
    for (std::uint64_t c = 1; c < modulus; ++c)
        if ((q * c) % modulus == 1) return c;
    return 0;
}

// All convergents of num/den via exact integer expansion, as (p, q) pairs.
std::vector<Fraction> convergents(std::uint64_t num, std::uint64_t den) {
    std::vector<std::uint64_t> terms;
    while (den != 0) {
        terms.push_back(num / den);
        const std::uint64_t r = num % den;
        num = den;
        den = r;
    }
    std::vector<Fraction> out;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        // Evaluate [a_0; ..., a_k] from the back.
        std::uint64_t p = terms[k], q = 1;
        for (std::size_t i = k; i-- > 0;) {
            std::swap(p, q);
            p += terms[i] * q;
        }
        out.push_back({p, q});
    }
    return out;
}

TEST(Gcd, Examples) {
    EXPECT_EQ(gcd(12, 18), 6u);
    EXPECT_EQ(gcd(1, 97), 1u);
    EXPECT_EQ(gcd(0, 5), 5u);
    EXPECT_THROW(gcd(0, 0), InvalidInput);
}

TEST(LcmMany, Examples) {
    const std::vector<std::uint64_t> a{4, 6}, b{1}, c{3, 5, 7};
    EXPECT_EQ(lcm_many(a), 12u);
    EXPECT_EQ(lcm_many(b), 1u);
    EXPECT_EQ(lcm_many(c), 105u);
}

TEST(LcmMany, Errors) {
    EXPECT_THROW(lcm_many(std::vector<std::uint64_t>{}), InvalidInput);
    EXPECT_THROW(lcm_many(std::vector<std::uint64_t>{3, 0}), InvalidInput);
    EXPECT_THROW(lcm_many(std::vector<std::uint64_t>{1ULL << 40, (1ULL << 40) - 1}), InvalidInput);
}

TEST(LcmMany, GcdProductIdentity) {
    for (std::uint64_t a = 1; a <= 60; ++a)
        for (std::uint64_t b = 1; b <= 60; ++b) {
            const std::vector<std::uint64_t> ab{a, b};
            EXPECT_EQ(gcd(a, b) * lcm_many(ab), a * b);
        }
}

TEST(LcmMany, OrderInvariantAndIdempotent) {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint64_t> xs(1 + uniform_below(rng, 5));
        for (auto &x : xs) x = 1 + uniform_below(rng, 30);
        const std::uint64_t base = lcm_many(xs);
        auto shuffled = xs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(lcm_many(shuffled), base);
        auto doubled = xs;
        doubled.insert(doubled.end(), xs.begin(), xs.end());
        EXPECT_EQ(lcm_many(doubled), base);
    }
}

TEST(ModInverse, Examples) {
    EXPECT_EQ(mod_inverse(1, 16), 1u);
    EXPECT_EQ(mod_inverse(3, 16), inverse_by_scan(3, 16));
    EXPECT_EQ(mod_inverse(3, 16), 11u);
    EXPECT_EQ(mod_inverse(5, 8), inverse_by_scan(5, 8));
    EXPECT_EQ(mod_inverse(5, 8), 5u);
    EXPECT_THROW(mod_inverse(4, 16), InvalidInput);
    EXPECT_THROW(mod_inverse(3, 12), InvalidInput);
}

TEST(ModInverse, ExhaustiveUpToTenBits) {
    for (unsigned m = 1; m <= 10; ++m) {
        const std::uint64_t modulus = 1ULL << m;
        for (std::uint64_t q = 1; q < modulus; q += 2) {
            const std::uint64_t inv = mod_inverse(q, modulus);
            ASSERT_GT(inv, 0u);
            ASSERT_LT(inv, modulus);
            ASSERT_EQ((q * inv) % modulus, 1u) << "q=" << q << " m=" << m;
            ASSERT_EQ(inv, inverse_by_scan(q, modulus));
        }
    }
}

TEST(CfRecover, Examples) {
    EXPECT_EQ(cf_recover(1024, 2048, 8), (Fraction{1, 2}));
    EXPECT_EQ(cf_recover(0, 2048, 8), (Fraction{0, 1}));

    // Oracle: the last convergent with denominator < 8 from a direct expansion.
    const auto all = convergents(1365, 2048);
    Fraction expected{0, 1};
    for (const auto &c : all)
        if (c.denominator < 8) expected = c;
    EXPECT_EQ(expected, (Fraction{2, 3}));
    EXPECT_EQ(cf_recover(1365, 2048, 8), expected);
    EXPECT_LE(std::abs(1365.0 / 2048.0 - 2.0 / 3.0), 1.0 / 4096.0);
}

TEST(CfRecover, MatchesDirectConvergentExpansion) {
    for (std::uint64_t phi = 0; phi < 512; ++phi)
        for (std::uint64_t bound : {2u, 5u, 16u, 33u}) {
            Fraction expected{0, 1};
            for (const auto &c : convergents(phi, 512))
                if (c.denominator < bound) expected = c;
            ASSERT_EQ(cf_recover(phi, 512, bound), expected) << phi << " " << bound;
        }
}

TEST(CfRecover, RecoversReducedFractionWhenUIsLargeEnough) {
    for (unsigned v = 1; v <= 5; ++v) {
        const unsigned u = 2 * v + 1;
        const std::uint64_t two_u = 1ULL << u;
        for (std::uint64_t period = 1; period < (1ULL << v); ++period)
            for (std::uint64_t l = 0; l < period; ++l) {
                const auto phi = static_cast<std::uint64_t>(std::llround(static_cast<double>(two_u * l) / period)) % two_u;
                const std::uint64_t g = std::gcd(l, period);
                const Fraction got = cf_recover(phi, two_u, period + 1);
                ASSERT_EQ(got, (Fraction{l / g, period / g})) << "v=" << v << " T=" << period << " l=" << l;
            }
    }
}

TEST(CfRecover, PreconditionErrors) {
    EXPECT_THROW(cf_recover(2048, 2048, 8), InvalidInput);
    EXPECT_THROW(cf_recover(1, 2047, 8), InvalidInput);
    EXPECT_THROW(cf_recover(1, 2048, 0), InvalidInput);
}

TEST(BruteForcePeriod, Examples) {
    EXPECT_EQ(brute_force_period([](std::uint64_t j) { return j % 5; }, 6).period, 5u);
    EXPECT_EQ(brute_force_period([](std::uint64_t) { return std::uint64_t{0}; }, 4).period, 1u);
    const auto connected = [](std::uint64_t j) { return (j % 2) | ((j % 3) << 8); };
    const auto r = brute_force_period(connected, 6);
    EXPECT_EQ(r.period, 6u);
    EXPECT_TRUE(r.verified);
    EXPECT_EQ(r.period, lcm_many(std::vector<std::uint64_t>{2, 3}));
}

TEST(BruteForcePeriod, NoRepetitionInDomain) {
    EXPECT_THROW(brute_force_period([](std::uint64_t j) { return j; }, 4), InvalidInput);
}

// Connected functions of residues have the lcm as their period.
TEST(BruteForcePeriod, ConnectedFunctionPeriodIsLcm) {
    std::vector<std::uint64_t> xs;
    const auto check = [&] {
        const auto f = [&](std::uint64_t j) {
            std::uint64_t out = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) out |= (j % xs[i]) << (3 * i);
            return out;
        };
        ASSERT_EQ(brute_force_period(f, 9).period, lcm_many(xs));
    };
    for (std::uint64_t a = 1; a <= 7; ++a) {
        xs = {a};
        check();
        for (std::uint64_t b = 1; b <= 7; ++b) {
            xs = {a, b};
            check();
            for (std::uint64_t c = 1; c <= 7; ++c) {
                xs = {a, b, c};
                check();
            }
        }
    }
}

TEST(RandomOdd, Examples) {
    Rng rng(123);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(random_odd(1, rng), 1u);
    const std::uint64_t v = random_odd(4, rng);
    EXPECT_EQ(v % 2, 1u);
    EXPECT_LT(v, 16u);
    EXPECT_THROW(random_odd(0, rng), InvalidInput);
}

TEST(RandomOdd, UniformOverOddResidues) {
    Rng rng(2024);
    const int draws = 10000;
    std::vector<int> counts(16, 0);
    for (int i = 0; i < draws; ++i) ++counts[random_odd(4, rng)];
    std::vector<int> odd;
    for (int k = 0; k < 16; ++k) {
        if (k % 2 == 0)
            EXPECT_EQ(counts[k], 0);
        else
            odd.push_back(counts[k]);
    }
    for (int c : odd) test::expect_frequency_within_sigma(c, draws, 1.0 / 8.0, 5.0);
    EXPECT_LT(test::chi_square_uniform(odd), test::kChiSquare7Dof999);
}

TEST(RandomOdd, Deterministic) {
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(random_odd(12, a), random_odd(12, b));
}

TEST(EulerPhi, SmallValues) {
    const std::vector<std::uint64_t> expected{1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4, 12, 6, 8};
    for (std::uint64_t n = 1; n <= 15; ++n) {
        std::uint64_t count = 0;
        for (std::uint64_t k = 0; k < n; ++k) count += std::gcd(k, n) == 1;
        EXPECT_EQ(euler_phi(n), count);
        EXPECT_EQ(euler_phi(n), expected[n - 1]);
    }
}

}  // namespace
}  // namespace qpmpc
