#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "dhl/intersection.hpp"
#include "dhl/lattice.hpp"
#include "dhl/paths.hpp"
#include "dhl/rng.hpp"
#include "dhl/stats.hpp"

using namespace dhl;
using namespace dhl::paths;

namespace {
const LatticeParams P23{2, 3};

// chi-square(15) 0.999 quantile, used with pinned seeds
constexpr double kChi2_15 = 37.70;
}  // namespace

TEST_CASE("edge_at matches the construction") {
    SplitRng rng(5);
    // n = 1: path with top choice i visits edges (i, 1..s)
    for (int i = 1; i <= 2; ++i) {
        CoarsePath p(P23, 1, {std::uint8_t(i)});
        for (std::uint64_t k = 1; k <= 3; ++k) {
            auto e = p.edge_at(k);
            CHECK(e.word.size() == 1);
            CHECK(e.word[0].branch == i);
            CHECK(e.word[0].segment == int(k));
        }
    }
    CHECK_THROWS_AS(CoarsePath(P23, 1, {1}).edge_at(4), std::out_of_range);

    // pi~ interval of the k-th bond is [(k-1)/s^n, k/s^n]
    for (int n = 1; n <= 3; ++n) {
        auto p = sample_uniform_path(P23, n, rng);
        std::uint64_t sn = P23.segments(n);
        for (std::uint64_t k = 1; k <= sn; ++k) {
            auto [lo, hi] = lattice::projective_interval(P23, p.edge_at(k));
            CHECK(lo == BigRational(k - 1, sn));
            CHECK(hi == BigRational(k, sn));
        }
    }
    // the spec's concrete spot check
    CoarsePath p(P23, 2, {1, 2, 1, 2});
    auto [lo5, hi5] = lattice::projective_interval(P23, p.edge_at(5));
    CHECK(lo5 == BigRational(4, 9));
    CHECK(hi5 == BigRational(5, 9));
}

TEST_CASE("trace indices are the distinct bonds in chain order") {
    SplitRng rng(9);
    for (int n = 1; n <= 3; ++n) {
        auto p = sample_uniform_path(P23, n, rng);
        auto tr = p.trace_indices();
        REQUIRE(tr.size() == P23.segments(n));
        for (std::uint64_t k = 1; k <= tr.size(); ++k)
            CHECK(tr[k - 1] == p.edge_at(k).index(P23));
        auto sorted = tr;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
}

TEST_CASE("uniform sampling hits every path with the right frequency") {
    SplitRng rng(21);
    // n = 1: two branches, binomial check
    std::uint64_t trials = 100000, ones = 0;
    for (std::uint64_t i = 0; i < trials; ++i)
        if (sample_uniform_path(P23, 1, rng).choices[0] == 1) ++ones;
    double se = std::sqrt(0.25 / double(trials));
    CHECK(std::fabs(double(ones) / double(trials) - 0.5) <= 3 * se);

    // n = 2: all 16 paths within 3 s.e. of 1/16; chi-square as a summary
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t trials2 = 400000;
    for (std::uint64_t i = 0; i < trials2; ++i)
        counts[path_ordinal(sample_uniform_path(P23, 2, rng))]++;
    REQUIRE(counts.size() == 16);
    std::vector<double> observed, expected;
    double se2 = std::sqrt((1.0 / 16) * (15.0 / 16) / double(trials2));
    for (auto& [ord, c] : counts) {
        CHECK(std::fabs(double(c) / double(trials2) - 1.0 / 16) <= 3 * se2);
        observed.push_back(double(c));
        expected.push_back(double(trials2) / 16);
    }
    CHECK(chi_square_stat(observed, expected) < kChi2_15);
}

TEST_CASE("coarsen truncates the decision tree") {
    SplitRng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = sample_uniform_path(P23, 3, rng);
        CHECK(p.coarsen(3) == p);
        CHECK(p.coarsen(0).choices.empty());
        CHECK(p.coarsen(2).coarsen(1) == p.coarsen(1));
        // level-1 ancestor of any bond in segment j is edge_at(coarse, j)
        auto c1 = p.coarsen(1);
        for (std::uint64_t k = 1; k <= 27; ++k) {
            std::uint64_t j = (k - 1) / 9 + 1;
            auto ancestor = c1.edge_at(j);
            CHECK(ancestor.is_ancestor_of(p.edge_at(k)));
        }
    }
    CHECK_THROWS(sample_uniform_path(P23, 1, rng).coarsen(2));
}

TEST_CASE("refine is a conditionally uniform inverse of coarsen") {
    SplitRng rng(41);
    for (int trial = 0; trial < 2000; ++trial) {
        auto p = sample_uniform_path(P23, 1, rng);
        CHECK(p.refine(1, rng) == p);
        auto q = p.refine(3, rng);
        CHECK(q.coarsen(1) == p);
    }
    // law check: refine(uniform level 1, 2) is uniform over the 16 paths
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t trials = 400000;
    for (std::uint64_t i = 0; i < trials; ++i) {
        auto p = sample_uniform_path(P23, 1, rng);
        counts[path_ordinal(p.refine(2, rng))]++;
    }
    std::vector<double> observed, expected;
    for (auto& [ord, c] : counts) {
        observed.push_back(double(c));
        expected.push_back(double(trials) / 16);
    }
    REQUIRE(observed.size() == 16);
    CHECK(chi_square_stat(observed, expected) < kChi2_15);
}

TEST_CASE("shared bonds: exact law by enumeration") {
    auto all1 = enumerate_paths(P23, 1);
    REQUIRE(all1.size() == 2);
    std::map<std::uint64_t, int> law1;
    for (auto& p : all1)
        for (auto& q : all1) law1[shared_bonds(p, q)]++;
    CHECK(law1[0] == 2);
    CHECK(law1[3] == 2);  // N in {0, 3}, each with probability 1/2

    // n = 2: the 16x16 enumeration must reproduce the PGF exactly
    auto all2 = enumerate_paths(P23, 2);
    std::map<std::uint64_t, BigRational> law2;
    for (auto& p : all2)
        for (auto& q : all2) law2[shared_bonds(p, q)] += BigRational(1, 256);
    auto g2 = intersection::intersection_pgf(P23, 2);
    for (std::size_t k = 0; k < g2.coeff.size(); ++k) {
        BigRational expected = g2.coeff[k];
        BigRational got = law2.count(k) ? law2[k] : BigRational(0);
        CHECK(got == expected);
    }
    // self-intersection
    for (auto& p : all2) CHECK(shared_bonds(p, p) == 9);
    CHECK_THROWS(shared_bonds(all1[0], all2[0]));
}

TEST_CASE("shared-bond law is exchangeable") {
    // the law of N(p0, q) under uniform q does not depend on p0
    for (int n = 1; n <= 2; ++n) {
        auto all = enumerate_paths(P23, n);
        std::map<std::uint64_t, int> reference;
        for (auto& q : all) reference[shared_bonds(all[0], q)]++;
        for (auto& p0 : all) {
            std::map<std::uint64_t, int> law;
            for (auto& q : all) law[shared_bonds(p0, q)]++;
            CHECK(law == reference);
        }
    }
}

TEST_CASE("martingale mean via enumeration and PGF derivative") {
    for (int n = 1; n <= 2; ++n) {
        auto all = enumerate_paths(P23, n);
        BigRational mean = 0;
        BigRational mu(1, BigInt(all.size()) * all.size());
        for (auto& p : all)
            for (auto& q : all) mean += BigRational(shared_bonds(p, q)) * mu;
        CHECK(mean * rpow(BigRational(2, 3), std::uint64_t(n)) == 1);
    }
    for (int n = 0; n <= 10; ++n)
        CHECK(intersection::pgf_derivative_at_one(P23, n) *
                  rpow(BigRational(2, 3), std::uint64_t(n)) ==
              1);
}

TEST_CASE("counting paths through cell sets") {
    CHECK(count_paths_through(CellSet(P23, 2, {})) == 16);
    CHECK(count_paths_through(CellSet(P23, 1, {lattice::EdgeAddress::parse("1.1")})) == 1);
    CHECK(count_paths_through(CellSet(P23, 1, {lattice::EdgeAddress::parse("1.1"),
                                               lattice::EdgeAddress::parse("2.1")})) == 0);

    // brute force oracle over random cell sets
    SplitRng rng(55);
    for (int n = 2; n <= 3; ++n) {
        auto all = enumerate_paths(P23, n);
        for (int trial = 0; trial < 40; ++trial) {
            int size = 1 + int(rng.uniform_int(3));
            std::vector<lattice::EdgeAddress> cells;
            for (int i = 0; i < size; ++i)
                cells.push_back(lattice::EdgeAddress::from_index(
                    P23, n, rng.uniform_int(std::uint32_t(P23.cells(n)))));
            CellSet S(P23, n, cells);
            BigInt brute = 0;
            for (auto& p : all) {
                auto tr = p.trace_indices();
                std::sort(tr.begin(), tr.end());
                bool through = true;
                for (auto& c : S.cells)
                    if (!std::binary_search(tr.begin(), tr.end(), c.index(P23))) through = false;
                if (through) ++brute;
            }
            CHECK(count_paths_through(S) == brute);

            // cylinder-restricted count against the same oracle
            auto sigma = sample_uniform_path(P23, 1, rng);
            BigInt brute_cyl = 0;
            for (auto& p : all) {
                if (!(p.coarsen(1) == sigma)) continue;
                auto tr = p.trace_indices();
                std::sort(tr.begin(), tr.end());
                bool through = true;
                for (auto& c : S.cells)
                    if (!std::binary_search(tr.begin(), tr.end(), c.index(P23))) through = false;
                if (through) ++brute_cyl;
            }
            CHECK(count_paths_through_in_cylinder(S, sigma) == brute_cyl);
        }
    }
}

TEST_CASE("conditioned sampling is exactly uniform on Gamma_S") {
    SplitRng rng(77);
    // unique support
    CellSet forced(P23, 1, {lattice::EdgeAddress::parse("1.2")});
    for (int i = 0; i < 50; ++i)
        CHECK(sample_path_through(forced, rng).choices[0] == 1);

    // empty support throws
    CellSet empty_support(P23, 1, {lattice::EdgeAddress::parse("1.1"),
                                   lattice::EdgeAddress::parse("2.2")});
    CHECK_THROWS_AS(sample_path_through(empty_support, rng), std::invalid_argument);

    // |S| = 2 at n = 2: frequencies match the exact uniform law
    CellSet S(P23, 2, {lattice::EdgeAddress::parse("1.1/1.1"),
                       lattice::EdgeAddress::parse("1.3/2.2")});
    BigInt support = count_paths_through(S);
    REQUIRE(support > 0);
    auto all = enumerate_paths(P23, 2);
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t trials = 100000;
    for (std::uint64_t i = 0; i < trials; ++i)
        counts[path_ordinal(sample_path_through(S, rng))]++;
    CHECK(counts.size() == support.convert_to<std::size_t>());
    double p_each = 1.0 / to_double(BigRational(support));
    double se = std::sqrt(p_each * (1 - p_each) / double(trials));
    for (auto& [ord, c] : counts)
        CHECK(std::fabs(double(c) / double(trials) - p_each) <= 3 * se);

    // unconstrained sampling agrees with the uniform law (chi-square)
    CellSet none(P23, 2, {});
    std::map<std::uint64_t, std::uint64_t> free_counts;
    for (std::uint64_t i = 0; i < 160000; ++i)
        free_counts[path_ordinal(sample_path_through(none, rng))]++;
    std::vector<double> obs, exp_counts;
    for (auto& [ord, c] : free_counts) {
        obs.push_back(double(c));
        exp_counts.push_back(160000.0 / 16);
    }
    REQUIRE(obs.size() == 16);
    CHECK(chi_square_stat(obs, exp_counts) < kChi2_15);
}

TEST_CASE("level cap is enforced and configurable") {
    int old = max_path_level();
    set_max_path_level(4);
    CHECK_THROWS_AS(CoarsePath(P23, 5, std::vector<std::uint8_t>(P23.decision_count(5), 1)),
                    SizeCapError);
    set_max_path_level(old);
}
