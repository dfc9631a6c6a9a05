#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "qnr/baseline.hpp"

using namespace qnr;

TEST(SingleCallSampler, ExactSuccessIsThreeQuarters) {
    for (std::uint64_t p : {3, 5, 7, 17, 41, 257, 65537}) {
        EXPECT_EQ(algorithm2_exact_success(p), (Rational{3, 4})) << p;
    }
    EXPECT_THROW(algorithm2_exact_success(15), InvalidArgument);
}

TEST(SingleCallSampler, ExactSuccessMatchesPairEnumeration) {
    // Independent count over every (x, y) pair.
    for (std::uint64_t p : {17, 41}) {
        std::uint64_t wins = 0;
        for (std::uint64_t x = 1; x < p; ++x) {
            for (std::uint64_t y = 1; y < p; ++y) {
                const std::uint64_t out = jacobi(static_cast<std::int64_t>(x), static_cast<std::int64_t>(p)) == -1 ? x : y;
                wins += jacobi(static_cast<std::int64_t>(out), static_cast<std::int64_t>(p)) == -1;
            }
        }
        EXPECT_EQ(Rational::reduced(wins, (p - 1) * (p - 1)), algorithm2_exact_success(p));
    }
}

TEST(SingleCallSampler, SingleJacobiCallAndNonresidueKept) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
        std::mt19937_64 peek = rng;
        const std::uint64_t x = 1 + detail::uniform_below(peek, 16);
        const auto out = algorithm2_sample(17, rng);
        EXPECT_EQ(out.jacobi_calls_used, 1u);
        EXPECT_GE(out.candidate, 1u);
        EXPECT_LE(out.candidate, 16u);
        if (jacobi(static_cast<std::int64_t>(x), 17) == -1) { EXPECT_EQ(out.candidate, x); }
    }
}

TEST(SingleCallSampler, MonteCarloWithinThreeSigma) {
    for (std::uint64_t p : {17, 41, 257}) {
        const std::uint64_t trials = 200000;
        const double rate = algorithm2_success_rate(p, trials, 99 + p);
        EXPECT_NEAR(rate, 0.75, 3 * std::sqrt(0.75 * 0.25 / trials)) << p;
    }
    EXPECT_EQ(algorithm2_success_rate(17, 1000, 3), algorithm2_success_rate(17, 1000, 3));
}

TEST(AdviceSampler, EnumerationIsUniform) {
    for (std::uint64_t p = 3; p <= 257; p += 2) {
        if (!is_prime(p)) continue;
        for (auto advice : qnr_set(p)) {
            std::map<std::uint64_t, int> hits;
            for (std::uint64_t r = 1; r < p; ++r) ++hits[algorithm4_image(p, advice, r)];
            const auto q = qnr_set_bruteforce(p);
            ASSERT_EQ(hits.size(), q.size()) << p;
            for (auto x : q) ASSERT_EQ(hits[x], 2) << p << " " << x;
        }
    }
}

TEST(AdviceSampler, Examples) {
    EXPECT_EQ(algorithm4_image(17, 3, 1), 3u);
    const auto q41 = qnr_set_bruteforce(41);
    const std::set<std::uint64_t> qs(q41.begin(), q41.end());
    std::mt19937_64 rng(1);
    for (int t = 0; t < 500; ++t) EXPECT_TRUE(qs.count(algorithm4_sample(41, q41.front(), rng)));
    EXPECT_EQ(algorithm4_sample(41, 3, 77), algorithm4_sample(41, 3, 77));
    EXPECT_THROW(algorithm4_sample(17, 2, 1), InvalidArgument);
    EXPECT_THROW(algorithm4_sample(17, 0, 1), InvalidArgument);
}

TEST(ReverseTrick, ProducesExactlyTheNonresidues) {
    std::set<std::uint64_t> out;
    for (int bits = 0; bits < 8; ++bits) {
        const auto y = qnr17_reverse_trick(bits & 4, bits & 2, bits & 1);
        EXPECT_EQ(jacobi(static_cast<std::int64_t>(y), 17), -1) << y;
        out.insert(y);
    }
    EXPECT_EQ(out, (std::set<std::uint64_t>{3, 5, 6, 7, 10, 11, 12, 14}));
}

TEST(ReverseTrick, ZeroCoordinateGivesResiduesAndZero) {
    std::set<std::uint64_t> out;
    for (int bits = 0; bits < 8; ++bits) {
        const auto y = qnr17_reverse_trick(bits & 4, bits & 2, bits & 1, false);
        EXPECT_NE(jacobi(static_cast<std::int64_t>(y), 17), -1) << y;
        out.insert(y);
    }
    EXPECT_EQ(out, (std::set<std::uint64_t>{0, 1, 2, 4, 8, 9, 13, 15}));
}

TEST(UniformBelow, CoversRange) {
    std::mt19937_64 rng(0);
    std::map<std::uint64_t, int> seen;
    for (int t = 0; t < 7000; ++t) ++seen[detail::uniform_below(rng, 7)];
    EXPECT_EQ(seen.size(), 7u);
    for (auto [v, n] : seen) EXPECT_NEAR(n, 1000, 150) << v;
}
