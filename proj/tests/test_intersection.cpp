#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "dhl/errors.hpp"
#include "dhl/intersection.hpp"
#include "dhl/paths.hpp"
#include "dhl/stats.hpp"

using namespace dhl;
using namespace dhl::intersection;

namespace {
const LatticeParams P23{2, 3};
}

TEST_CASE("PGF recursion against pair enumeration") {
    auto g1 = intersection_pgf(P23, 1);
    REQUIRE(g1.coeff.size() == 4);
    CHECK(g1.coeff[0] == BigRational(1, 2));
    CHECK(g1.coeff[1] == 0);
    CHECK(g1.coeff[2] == 0);
    CHECK(g1.coeff[3] == BigRational(1, 2));

    auto g2 = intersection_pgf(P23, 2);
    CHECK(g2.coeff[0] == BigRational(9, 16));

    // full histogram over 16x16 pairs
    auto all = paths::enumerate_paths(P23, 2);
    std::map<std::uint64_t, int> hist;
    for (auto& p : all)
        for (auto& q : all) hist[paths::shared_bonds(p, q)]++;
    for (std::size_t k = 0; k < g2.coeff.size(); ++k) {
        int count = hist.count(k) ? hist[k] : 0;
        CHECK(BigRational(count, 256) == g2.coeff[k]);
    }

    // normalization g_n(1) = 1 exactly
    for (int n = 0; n <= 5; ++n) CHECK(intersection_pgf(P23, n).at(BigRational(1)) == 1);

    CHECK_THROWS_AS(intersection_pgf(P23, 12), SizeCapError);
}

TEST_CASE("MGF values and consistency with the PGF") {
    CHECK(mgf_phi(P23, 0, 0.0) == 1.0);
    for (int n = 0; n <= 8; ++n) CHECK(mgf_phi(P23, n, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    // phi_1(1) = 1/2 + e^2/2, from g_1(exp(t b/s))
    CHECK(mgf_phi(P23, 1, 1.0) == doctest::Approx(0.5 + std::exp(2.0) / 2).epsilon(1e-13));

    // finite-difference derivative at 0 is the martingale mean 1
    for (int n = 0; n <= 10; ++n) {
        double h = 1e-6;
        double d = (mgf_phi(P23, n, h) - mgf_phi(P23, n, -h)) / (2 * h);
        CHECK(std::fabs(d - 1.0) < 1e-6);
    }

    // phi_n(t) = g_n(exp(t (b/s)^n))
    for (int n = 0; n <= 6; ++n) {
        auto g = intersection_pgf(P23, n);
        for (double t : {-5.0, -2.0, -0.5, 0.0, 0.7, 1.3, 2.0}) {
            double lhs = mgf_phi(P23, n, t);
            double rhs = g.at(std::exp(t * std::pow(2.0 / 3.0, n)));
            CHECK(std::fabs(lhs - rhs) < 1e-12 * std::max(1.0, std::fabs(rhs)));
        }
    }

    CHECK_THROWS_AS(mgf_phi(P23, 0, 1000.0), std::range_error);
}

TEST_CASE("limit MGF") {
    CHECK(mgf_phi_limit(P23, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    // t -> -infinity limit is the no-intersection probability 1 - p
    double p = extinction_probability(P23);
    CHECK(mgf_phi_limit(P23, -1e8) == doctest::Approx(1.0 - p).epsilon(1e-10));
    // monotone in n at fixed positive t (conditional Jensen)
    double prev = mgf_phi(P23, 0, 1.0);
    for (int n = 1; n <= 12; ++n) {
        double cur = mgf_phi(P23, n, 1.0);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    CHECK_THROWS_AS(mgf_phi_limit(P23, 50.0), DivergenceError);
    CHECK_THROWS_AS(mgf_phi_limit(LatticeParams{2, 2}, 0.5), RegimeError);
}

TEST_CASE("extinction probability") {
    double p = extinction_probability(P23);
    CHECK(std::fabs(p - (3.0 - std::sqrt(5.0)) / 2) < 1e-12);
    CHECK(std::fabs(extinction_map(P23, p) - p) < 1e-12);
    CHECK(extinction_map(P23, 0.0) == 0.0);
    CHECK_THROWS_AS(extinction_probability(LatticeParams{2, 2}), RegimeError);
    CHECK_THROWS_AS(extinction_probability(LatticeParams{3, 2}), RegimeError);
}

TEST_CASE("exact martingale moments") {
    for (int n = 0; n <= 10; ++n) {
        auto m = martingale_moments(P23, n, 3);
        CHECK(m[0] == 1);
        CHECK(m[1] == second_moment_recursion(P23, n));
    }
    // E[m_1^2] = 2 from the two-outcome law at n = 1
    CHECK(martingale_moments(P23, 1, 2)[1] == 2);
    // third moment at n = 1: m = 2 w.p. 1/2, so E[m^3] = 4
    CHECK(martingale_moments(P23, 1, 3)[2] == 4);

    // v_n approaches 4 geometrically at rate 2/3: v_n - 4 = -3 (2/3)^n
    for (int n = 0; n <= 20; ++n)
        CHECK(second_moment_recursion(P23, n) - 4 ==
              BigRational(-3) * rpow(BigRational(2, 3), std::uint64_t(n)));
    CHECK(second_moment_limit(P23) == 4);

    // moments against direct enumeration at n = 2
    auto all = paths::enumerate_paths(P23, 2);
    BigRational m2 = 0, m3 = 0;
    BigRational mu(1, 256);
    for (auto& p : all)
        for (auto& q : all) {
            BigRational m = BigRational(paths::shared_bonds(p, q)) * BigRational(4, 9);
            m2 += m * m * mu;
            m3 += m * m * m * mu;
        }
    auto exact = martingale_moments(P23, 2, 3);
    CHECK(exact[1] == m2);
    CHECK(exact[2] == m3);
}

TEST_CASE("extinction consistency of the PGF at zero") {
    // P[N^(n) = 0] is nondecreasing with limit 1 - p; exact for small n
    // (the exact denominators grow like b^(s^n), so the limit is checked
    // with the same value recursion in doubles)
    BigRational prev = -1;
    for (int n = 0; n <= 6; ++n) {
        BigRational cur = pgf_at_zero(P23, n);
        CHECK(cur >= prev);
        CHECK(cur == intersection_pgf(P23, n).coeff[0]);
        prev = cur;
    }
    double x = 0.0;
    for (int n = 0; n < 60; ++n) x = 0.5 + x * x * x / 2;
    double p = extinction_probability(P23);
    CHECK(x == doctest::Approx(1.0 - p).epsilon(1e-11));
}

TEST_CASE("survival-conditioned chain") {
    auto law = survival_offspring_law(P23);
    double mean = 0.0, total = 0.0;
    for (int l = 1; l <= 3; ++l) {
        CHECK(law[std::size_t(l)] > 0);
        mean += l * law[std::size_t(l)];
        total += law[std::size_t(l)];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(1.5).epsilon(1e-12));  // s/b = s^h

    // empirical offspring frequencies at one generation
    SplitRng rng(101);
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t trials = 1000000;
    for (std::uint64_t i = 0; i < trials; ++i) {
        auto traj = simulate_survival_conditioned(P23, 1, rng);
        REQUIRE(traj[0] == 1);
        REQUIRE(traj[1] >= 1);
        counts[traj[1]]++;
    }
    for (int l = 1; l <= 3; ++l) {
        double freq = double(counts[std::size_t(l)]) / double(trials);
        double se = std::sqrt(law[std::size_t(l)] * (1 - law[std::size_t(l)]) / double(trials));
        CHECK(std::fabs(freq - law[std::size_t(l)]) <= 3 * se);
    }

    // whole trajectories stay positive
    for (int i = 0; i < 100; ++i) {
        auto traj = simulate_survival_conditioned(P23, 10, rng);
        for (auto count : traj) CHECK(count >= 1);
    }
    CHECK_THROWS_AS(simulate_survival_conditioned(LatticeParams{2, 2}, 3, rng), RegimeError);
}

TEST_CASE("Hausdorff exponent and its Monte Carlo estimate") {
    CHECK(hausdorff_exponent(P23) == doctest::Approx(0.3690702464).epsilon(1e-9));
    CHECK(hausdorff_exponent(LatticeParams{2, 2}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(hausdorff_exponent(LatticeParams{3, 2}), RegimeError);

    SplitRng rng(103);
    double est = estimate_dimension_mc(P23, 10, 2000, rng);
    CHECK(std::fabs(est - hausdorff_exponent(P23)) < 0.05);
}
