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

#include "qpmpc/adversary.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qpmpc/qsim/dense_state.hpp"
#include "test_util.hpp"

namespace qpmpc::adversary {
namespace {

using Inputs = std::vector<std::uint64_t>;
constexpr unsigned kU = 13;  // 2nm + 1 for n = 2, m = 3
constexpr std::uint64_t kDomain = std::uint64_t{1} << kU;

AttackContext ctx(Inputs xs, std::uint64_t seed = 0) { return {std::move(xs), 3, seed}; }

// Residue frequencies of j mod x by scanning the domain.
std::vector<double> residue_scan(std::uint64_t x) {
    std::vector<double> p(x, 0.0);
    for (std::uint64_t j = 0; j < kDomain; ++j) p[j % x] += 1.0 / kDomain;
    return p;
}

// Fourier law of the attacker's copy after the readout returned k, from the
// closed form: terms j with equal f share a residue c mod T, so each class
// contributes a geometric sum |sum_{r < N_c} w^{r T d}|^2 with d = s - k.
std::vector<double> post_period_law(std::uint64_t period, std::uint64_t k) {
    std::vector<double> p(kDomain, 0.0);
    double total = 0.0;
    for (std::uint64_t s = 0; s < kDomain; ++s) {
        const std::uint64_t d = (s + kDomain - k) % kDomain;
        for (std::uint64_t c = 0; c < period; ++c) {
            const std::uint64_t count = (kDomain - c + period - 1) / period;
            const double theta = 2.0 * std::numbers::pi * static_cast<double>((period * d) % kDomain) / kDomain;
            double mag2;
            if (std::abs(std::sin(theta / 2)) < 1e-15)
                mag2 = static_cast<double>(count * count);
            else
                mag2 = std::pow(std::sin(count * theta / 2) / std::sin(theta / 2), 2);
            p[s] += mag2;
        }
        total += p[s];
    }
    for (auto &x : p) x /= total;
    return p;
}

// ---- direct measurement ----

TEST(AttackDirect, PowerOfTwoModulusIsExactlyUniform) {
    const auto r = attack_direct(ctx({4, 6}), 0, AttackTiming::before_qpa);
    EXPECT_EQ(r.target_register, "e0");
    for (std::uint64_t y = 0; y < 4; ++y) EXPECT_NEAR(r.observed.probability(y), 0.25, 1e-9);
    EXPECT_LT(r.max_deviation, 1e-9);
}

TEST(AttackDirect, ResidueLawMatchesPreimageCounts) {
    for (std::uint64_t x : {3u, 5u, 6u, 7u}) {
        const auto r = attack_direct(ctx({2, x}, x), 1, AttackTiming::before_qpa);
        const auto scan = residue_scan(x);
        for (std::uint64_t y = 0; y < x; ++y) {
            EXPECT_NEAR(r.observed.probability(y), scan[y], 1e-9);
            EXPECT_NEAR(r.reference.probability(y), scan[y], 1e-15);
        }
        EXPECT_LT(r.max_deviation, 1e-9);
        EXPECT_LT(r.tv_distance, 1e-9);
    }
}

TEST(AttackDirect, UnitModulusIsPointMass) {
    const auto r = attack_direct(ctx({1, 5}), 0, AttackTiming::before_qpa);
    EXPECT_EQ(r.observed.support(), std::vector<std::uint64_t>{0});
    EXPECT_NEAR(r.observed.probability(0), 1.0, 1e-12);
}

TEST(AttackDirect, CarrierMidProtocolIsUniform) {
    const auto r = attack_direct(ctx({3, 5}), 1, AttackTiming::before_qpa, DirectTarget::carrier);
    EXPECT_EQ(r.target_register, "t");
    EXPECT_EQ(r.observed.probabilities.size(), kDomain);
    EXPECT_LT(r.max_deviation, 1e-9);
}

TEST(AttackDirect, AfterReadoutWithDividingPeriod) {
    const auto r = attack_direct(ctx({2, 4}, 5), 1, AttackTiming::after_qpa);
    ASSERT_TRUE(r.qpa_outcome.has_value());
    EXPECT_TRUE(r.period_divides_domain);
    EXPECT_LT(r.max_deviation, 1e-9);
}

TEST(AttackDirect, CarrierIsNotHeldAfterReadout) {
    EXPECT_THROW(attack_direct(ctx({3, 5}), 1, AttackTiming::after_qpa, DirectTarget::carrier), InvalidInput);
    const auto p0 = attack_direct(ctx({3, 5}), 0, AttackTiming::after_qpa, DirectTarget::carrier);
    EXPECT_EQ(p0.observed.support(), std::vector<std::uint64_t>{*p0.qpa_outcome});
    EXPECT_THROW(attack_direct(ctx({3, 5}), 2, AttackTiming::before_qpa), InvalidInput);
}

// ---- pre-period ----

TEST(AttackPrePeriod, UniformForEveryHolder) {
    for (const Inputs &xs : {Inputs{2, 3}, Inputs{2, 4}, Inputs{3, 5}}) {
        for (int attacker : {0, 1}) {
            const auto r = attack_pre_period(ctx(xs), attacker);
            EXPECT_EQ(r.observed.probabilities.size(), kDomain);
            EXPECT_LT(r.max_deviation, 1e-9) << xs[0] << "," << xs[1] << " attacker " << attacker;
        }
        EXPECT_LT(attack_pre_period(ctx(xs), 0, PreInstant::after_copy).max_deviation, 1e-9);
        EXPECT_LT(attack_pre_period(ctx(xs), 0, PreInstant::before_uncompute).max_deviation, 1e-9);
    }
}

TEST(AttackPrePeriod, WrongPhase) {
    EXPECT_THROW(attack_pre_period(ctx({2, 3}), 1, PreInstant::before_uncompute), InvalidInput);
    EXPECT_THROW(attack_pre_period(ctx({2, 3}), 1, PreInstant::after_copy), InvalidInput);
}

// On the dense backend: H|0> alone has a point-mass QFT^dagger law, and the
// copy into t is what makes h look uniform.
TEST(AttackPrePeriod, CopyMakesCarrierFourierFlatOnDenseBackend) {
    qsim::DenseState alone(qsim::RegisterLayout{{"h", 5}, {"t", 5}});
    alone.apply_hadamard("h");
    EXPECT_NEAR(alone.distribution_of("h", qsim::Basis::fourier_inverse).probability(0), 1.0, 1e-12);
    alone.apply_cnot_copy("h", "t");
    const auto flat = alone.distribution_of("h", qsim::Basis::fourier_inverse);
    for (std::uint64_t k = 0; k < 32; ++k) EXPECT_NEAR(flat.probability(k), 1.0 / 32, 1e-12);
}

// ---- post-period ----

TEST(AttackPostPeriod, DividingPeriodGivesShiftedComb) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto r = attack_post_period(ctx({2, 4}, seed), 1);
        ASSERT_TRUE(r.qpa_outcome.has_value());
        const std::uint64_t k = *r.qpa_outcome;
        const auto support = r.observed.support(1e-9);
        ASSERT_EQ(support.size(), 4u);
        for (auto s : support) {
            EXPECT_EQ((s + kDomain - k) % (kDomain / 4), 0u);
            EXPECT_NEAR(r.observed.probability(s), 0.25, 1e-9);
        }
        EXPECT_LT(r.max_deviation, 1e-9);
    }
}

TEST(AttackPostPeriod, TrivialPeriodIsPointMassAtK) {
    const auto r = attack_post_period(ctx({1, 1}), 1);
    EXPECT_EQ(r.observed.support(1e-9), std::vector<std::uint64_t>{*r.qpa_outcome});
}

TEST(AttackPostPeriod, FirstPartyCopiesAtItsOwnTurn) {
    const auto r = attack_post_period(ctx({4, 2}, 3), 0);
    EXPECT_LT(r.max_deviation, 1e-9);
}

TEST(AttackPostPeriod, NonDividingPeriodMatchesClosedForm) {
    const auto r = attack_post_period(ctx({2, 3}, 1), 1);
    EXPECT_FALSE(r.period_divides_domain);
    const auto law = post_period_law(6, *r.qpa_outcome);
    for (std::uint64_t s = 0; s < kDomain; ++s) ASSERT_NEAR(r.observed.probability(s), law[s], 1e-9) << s;
    // Most, not all, of the mass sits next to the six ideal points; the tails
    // follow the Fejer-type kernel.
    const double near = mass_near_comb(r.observed, *r.qpa_outcome, 6, kU, 1);
    EXPECT_GT(near, 0.85);
    EXPECT_LT(near, 0.99);
}

// ---- leakage ----

TEST(LeakageProbe, Examples) {
    const auto a = leakage_probe(24, 8, 16, 8);
    EXPECT_EQ(a.m1, 3u);
    EXPECT_FALSE(a.leak_flag);
    const auto b = leakage_probe(64, 8, 16, 8);
    EXPECT_EQ(b.m1, 6u);
    EXPECT_TRUE(b.leak_flag);
    EXPECT_EQ(b.lambda_low, 4u);
    EXPECT_EQ(b.lambda_high, 8u);
    const auto c = leakage_probe(37, 8, 16, 5);
    EXPECT_EQ(c.m1, 0u);
    EXPECT_EQ(c.lambda_low, 1u);
    EXPECT_EQ(c.lambda_high, 5u);
    const auto d = leakage_probe(0, 8, 16, 5);
    EXPECT_TRUE(d.vote_passed);
    EXPECT_FALSE(d.leak_flag);
    EXPECT_THROW(leakage_probe(256, 8, 16, 5), InvalidInput);
}

// Exhaustive over mask tuples and odd q: the bound always contains lambda.
TEST(LeakageProbe, BoundIsSound) {
    for (unsigned n = 1; n <= 4; ++n)
        for (std::uint64_t M : {2u, 4u, 8u}) {
            const unsigned m = protocols::vote_width(n, M);
            for (unsigned lambda = 1; lambda <= n; ++lambda)
                for (std::uint64_t y = lambda; y <= lambda * M; ++y)
                    for (std::uint64_t q = 1; q < (1u << m); q += 2) {
                        const auto r = leakage_probe((q * y) % (1u << m), m, M, n);
                        ASSERT_FALSE(r.vote_passed);
                        ASSERT_GE(lambda, r.lambda_low);
                        ASSERT_LE(lambda, r.lambda_high);
                    }
        }
}

// P(leak) by enumerating all M^lambda mask tuples; q is odd so it does not
// change the two-adic valuation.
double exact_leak_probability(std::uint64_t M, unsigned lambda) {
    std::vector<std::uint64_t> x(lambda, 1);
    std::uint64_t leaks = 0, total = 0;
    while (true) {
        std::uint64_t y = 0;
        for (auto v : x) y += v;
        leaks += (std::uint64_t{1} << two_adic_valuation(y)) > M;
        ++total;
        std::size_t i = 0;
        while (i < lambda && x[i] == M) x[i++] = 1;
        if (i == lambda) break;
        ++x[i];
    }
    return static_cast<double>(leaks) / static_cast<double>(total);
}

TEST(LeakProbability, MonteCarloAgainstEnumeration) {
    struct Case {
        unsigned n;
        std::uint64_t M;
        unsigned lambda;
    };
    for (const Case c : {Case{8, 16, 3}, Case{4, 4, 1}, Case{8, 8, 5}, Case{4, 4, 2}}) {
        const double exact = exact_leak_probability(c.M, c.lambda);
        EXPECT_LT(exact, 1.0 / static_cast<double>(c.M));
        const double freq = estimate_leak_probability(c.n, c.M, c.lambda, 10000, 7);
        test::expect_frequency_within_sigma(std::lround(freq * 10000), 10000, exact, 5.0);
        const double bound = 1.0 / c.M + 3.0 * std::sqrt((1.0 / c.M) * (1.0 - 1.0 / c.M) / 10000);
        EXPECT_LT(freq, bound);
    }
}

TEST(LeakProbability, UnitMasks) {
    EXPECT_EQ(estimate_leak_probability(8, 2, 4, 100, 1, MaskMode::unit), 1.0);
    EXPECT_EQ(estimate_leak_probability(8, 2, 3, 100, 1, MaskMode::unit), 0.0);
    EXPECT_EQ(estimate_leak_probability(8, 4, 8, 100, 1, MaskMode::unit), 1.0);
    EXPECT_EQ(estimate_leak_probability(8, 8, 8, 100, 1, MaskMode::unit), 0.0);
}

TEST(LeakProbability, QuantumVoteAgreesWithEnumeration) {
    const double exact = exact_leak_probability(4, 2);
    const double freq = estimate_leak_probability_via_protocol(4, 4, 2, 2000, 3);
    test::expect_frequency_within_sigma(std::lround(freq * 2000), 2000, exact, 5.0);
}

TEST(LeakProbability, Errors) {
    EXPECT_THROW(estimate_leak_probability(4, 4, 0, 10, 0), InvalidInput);
    EXPECT_THROW(estimate_leak_probability(4, 4, 5, 10, 0), InvalidInput);
    EXPECT_THROW(estimate_leak_probability(4, 4, 2, 0, 0), InvalidInput);
}

}  // namespace
}  // namespace qpmpc::adversary
