#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dhl/chaos.hpp"
#include "dhl/gmc.hpp"
#include "dhl/intersection.hpp"
#include "dhl/paths.hpp"
#include "dhl/stats.hpp"

using namespace dhl;
using namespace dhl::chaos;

namespace {
const LatticeParams P23{2, 3};

paths::CellSet cells_of(const LatticeParams& params, int n, std::vector<std::string> words) {
    std::vector<lattice::EdgeAddress> cells;
    for (auto& w : words) cells.push_back(lattice::EdgeAddress::parse(w));
    return paths::CellSet(params, n, std::move(cells));
}

// Independent class-counting oracle for gamma: distinct word prefixes per
// level, summed as |S| - classes.
std::uint64_t gamma_oracle(const paths::CellSet& S) {
    std::uint64_t value = 0;
    for (int k = 0;; ++k) {
        std::vector<std::string> prefixes;
        for (const auto& c : S.cells) {
            std::string p;
            for (int i = 0; i < k && i < c.level(); ++i)
                p += std::to_string(c.word[std::size_t(i)].branch) + "." +
                     std::to_string(c.word[std::size_t(i)].segment) + "/";
            prefixes.push_back(p);
        }
        std::sort(prefixes.begin(), prefixes.end());
        prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());
        if (prefixes.size() == S.cells.size()) break;
        value += S.cells.size() - prefixes.size();
    }
    return value;
}
}  // namespace

TEST_CASE("gamma: spec cases and the class-count oracle") {
    CHECK(gamma(cells_of(P23, 2, {"1.1/2.2"})).value == 0);
    // same branch, distinct level-1 classes: only the k=0 term contributes
    auto g1 = gamma(cells_of(P23, 2, {"1.1/1.1", "1.2/2.1"}));
    CHECK(g1.value == 1);
    CHECK(g1.stabilization_level == 1);
    // separation only at level 2: terms 1 + 1
    auto g2 = gamma(cells_of(P23, 2, {"1.1/1.1", "1.1/2.1"}));
    CHECK(g2.value == 2);
    CHECK(g2.stabilization_level == 2);

    SplitRng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        int size = 1 + int(rng.uniform_int(3));
        std::vector<lattice::EdgeAddress> cells;
        for (int i = 0; i < size; ++i)
            cells.push_back(
                lattice::EdgeAddress::from_index(P23, 3, rng.uniform_int(std::uint32_t(216))));
        paths::CellSet S(P23, 3, std::move(cells));
        CHECK(gamma(S).value == gamma_oracle(S));
    }
}

TEST_CASE("gamma ties the conditioned-path density to the counting") {
    // b^{n|S| - gamma_n(S)} mu(G_S) = 1 whenever Gamma_S is nonempty
    SplitRng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + int(rng.uniform_int(2));
        int size = 1 + int(rng.uniform_int(3));
        std::vector<lattice::EdgeAddress> cells;
        for (int i = 0; i < size; ++i)
            cells.push_back(lattice::EdgeAddress::from_index(
                P23, n, rng.uniform_int(std::uint32_t(P23.cells(n)))));
        paths::CellSet S(P23, n, std::move(cells));
        BigInt through = paths::count_paths_through(S);
        if (through == 0) continue;
        BigRational mu_gs = BigRational(through, lattice::path_count(P23, n));
        std::uint64_t exponent = std::uint64_t(n) * S.cells.size() - gamma(S).value;
        CHECK(BigRational(ipow(BigInt(2), exponent)) * mu_gs == 1);
    }
}

TEST_CASE("rho density") {
    auto all = paths::enumerate_paths(P23, 1);
    // k = 0: empty product
    CHECK(rho_density(paths::CellSet(P23, 1, {}), all[0]) == 1);
    // one on-trace cell contributes b^n
    CHECK(rho_density(cells_of(P23, 1, {"1.2"}), all[0]) == 2);
    CHECK(rho_density(cells_of(P23, 1, {"1.2"}), all[1]) == 0);
    // cells on two branches: zero for every path
    auto split = cells_of(P23, 1, {"1.1", "2.2"});
    for (auto& p : all) CHECK(rho_density(split, p) == 0);
}

TEST_CASE("rho measure: cylinders and normalization") {
    auto branch1 = paths::path_from_ordinal(P23, 1, 0);
    auto branch2 = paths::path_from_ordinal(P23, 1, 1);
    auto S = cells_of(P23, 1, {"1.2"});
    CHECK(rho_measure(S, PathEvent::all()) == 1);
    CHECK(rho_measure(S, PathEvent::of({branch1})) == 1);
    CHECK(rho_measure(S, PathEvent::of({branch2})) == 0);
    // empty support gives the zero measure
    CHECK(rho_measure(cells_of(P23, 1, {"1.1", "2.1"}), PathEvent::all()) == 0);

    // integral identity: sum_x rho({x}; A) nu(x) = mu(A)
    for (int n = 1; n <= 2; ++n) {
        for (auto A : {PathEvent::all(), PathEvent::of({branch1})}) {
            BigRational total = 0;
            BigRational nu(1, ipow(BigInt(6), std::uint64_t(n)));
            for (std::uint64_t c = 0; c < P23.cells(n); ++c) {
                paths::CellSet single(P23, n, {lattice::EdgeAddress::from_index(P23, n, c)});
                total += rho_measure(single, A) * nu;
            }
            CHECK(total == A.measure(P23));
        }
    }
}

TEST_CASE("rho measure equals the tuple density on distinct cells") {
    SplitRng rng(7);
    auto branch1 = paths::path_from_ordinal(P23, 1, 0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + int(rng.uniform_int(3));
        int size = 1 + int(rng.uniform_int(3));
        std::vector<std::uint64_t> idx;
        std::vector<lattice::EdgeAddress> cells;
        for (int i = 0; i < size; ++i) {
            std::uint64_t c = rng.uniform_int(std::uint32_t(P23.cells(n)));
            idx.push_back(c);
            cells.push_back(lattice::EdgeAddress::from_index(P23, n, c));
        }
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) continue;
        paths::CellSet S(P23, n, cells);
        for (auto A : {PathEvent::all(), PathEvent::of({branch1})})
            CHECK(rho_measure(S, A) == rho_tuple(P23, n, idx, A));
    }
}

TEST_CASE("tuple density handles repeated cells by the product rule") {
    // a doubled cell multiplies the density by b^n, never zeroes it
    for (std::uint64_t c : {0ull, 3ull, 5ull}) {
        BigRational once = rho_tuple(P23, 1, {c}, PathEvent::all());
        BigRational twice = rho_tuple(P23, 1, {c, c}, PathEvent::all());
        CHECK(twice == once * 2);
    }
}

TEST_CASE("marginalization and total-mass identities are exactly zero") {
    auto branch1 = paths::path_from_ordinal(P23, 1, 0);
    for (int n = 1; n <= 2; ++n)
        for (int k = 1; k <= 3; ++k) {
            auto repA = consistency_check(P23, k, n, PathEvent::all());
            CHECK(repA.max_marginal_residual == 0);
            CHECK(repA.total_mass_residual == 0);
            auto repC = consistency_check(P23, k, n, PathEvent::of({branch1}));
            CHECK(repC.max_marginal_residual == 0);
            CHECK(repC.total_mass_residual == 0);
        }
    CHECK_THROWS_AS(consistency_check(P23, 3, 3, PathEvent::all(), 1000), SizeCapError);
}

TEST_CASE("chaos partial sums against the explicit Hermite tuple expansion") {
    // order terms at n = 1 via the direct Wick/Hermite formula over cell
    // tuples: I_k = sum over ordered tuples of rho(tuple) prod sqrt(nu)
    // He_{multiplicity}(zeta)
    int n = 1;
    double v = std::pow(2.0 / 3.0, n);
    double sqrt_nu = std::pow(6.0, -0.5 * n);
    auto he = [](int m, double z) {
        switch (m) {
            case 0: return 1.0;
            case 1: return z;
            case 2: return z * z - 1.0;
            default: return z * z * z - 3.0 * z;
        }
    };
    for (int trial = 0; trial < 5; ++trial) {
        auto tree = gmc::NoiseTree::sample(P23, n, 900 + std::uint64_t(trial));
        double beta = 0.4;
        auto sum = chaos_partial_sum(tree, n, beta, PathEvent::all(), 3);
        std::uint64_t cells = P23.cells(n);
        std::vector<double> zeta(cells);
        for (std::uint64_t c = 0; c < cells; ++c)
            zeta[c] = tree.xi[std::size_t(n)][c] / std::sqrt(v);

        double fact = 1.0;
        for (int k = 0; k <= 3; ++k) {
            if (k > 0) fact *= k;
            // iterate ordered tuples (c_1..c_k)
            std::vector<std::uint64_t> tuple(std::size_t(k), 0);
            double ik = 0.0;
            for (;;) {
                std::vector<std::uint64_t> sorted = tuple;
                std::sort(sorted.begin(), sorted.end());
                double wick = 1.0;
                for (std::size_t i = 0; i < sorted.size();) {
                    std::size_t j = i;
                    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
                    wick *= he(int(j - i), zeta[sorted[i]]);
                    i = j;
                }
                ik += to_double(rho_tuple(P23, n, tuple, PathEvent::all())) *
                      std::pow(sqrt_nu, k) * wick;
                if (k == 0) break;
                std::size_t pos = tuple.size();
                while (pos > 0 && tuple[pos - 1] == cells - 1) tuple[--pos] = 0;
                if (pos == 0) break;
                ++tuple[pos - 1];
            }
            double expected = std::pow(beta, k) / fact * ik;
            CHECK(sum.per_order[std::size_t(k)] == doctest::Approx(expected).epsilon(1e-11));
        }
    }
}

TEST_CASE("partial sums: base cases and statistics") {
    auto tree = gmc::NoiseTree::sample(P23, 1, 42);
    // beta = 0: only the order-0 term survives
    auto flat = chaos_partial_sum(tree, 1, 0.0, PathEvent::all(), 3);
    CHECK(flat.total == 1.0);
    CHECK(flat.per_order[1] == 0.0);

    // E[S_K] = mu(A), and chaos orders are centered and orthogonal
    auto branch1 = paths::path_from_ordinal(P23, 1, 0);
    RunningStat mean_sk, cov12, var1, var2;
    double beta = 0.5;
    for (std::uint64_t i = 0; i < 50000; ++i) {
        auto t = gmc::NoiseTree::sample(P23, 1, SplitRng(47).derive(i).next_u64());
        auto s = chaos_partial_sum(t, 1, beta, PathEvent::all(), 2);
        auto s_cyl = chaos_partial_sum(t, 1, beta, PathEvent::of({branch1}), 2);
        mean_sk.add(s_cyl.total);
        cov12.add(s.per_order[1] * s.per_order[2]);
        var1.add(s.per_order[1] * s.per_order[1]);
        var2.add(s.per_order[2] * s.per_order[2]);
    }
    CHECK(std::fabs(mean_sk.mean - 0.5) <= 3 * mean_sk.std_error());
    CHECK(std::fabs(cov12.mean) <= 3 * cov12.std_error());
    CHECK(std::fabs(var1.mean - chaos_order_variance(P23, 1, beta, 1)) <= 3 * var1.std_error());
    CHECK(std::fabs(var2.mean - chaos_order_variance(P23, 1, beta, 2)) <= 3 * var2.std_error());
}

TEST_CASE("truncation variance: exact tail against the moment subtraction") {
    for (int order = 0; order <= 3; ++order) {
        double beta = 0.3;
        double tail = truncation_variance_exact(P23, 1, beta, order);
        // independent route: E[Z^2] - sum_{k <= K} beta^{2k} E[m^k] / k!
        double ez2 = gmc::two_replica_moment(P23, 1, beta);
        double partial = 1.0;
        auto moments = intersection::martingale_moments(P23, 1, 3);
        double fact = 1.0;
        for (int k = 1; k <= order; ++k) {
            fact *= k;
            partial += std::pow(beta, 2 * k) * to_double(moments[std::size_t(k) - 1]) / fact;
        }
        CHECK(tail == doctest::Approx(ez2 - partial).epsilon(1e-9));
        CHECK(tail > 0);
    }
    // the tail vanishes as the truncation order grows
    CHECK(truncation_variance_exact(P23, 1, 0.3, 12) < 1e-16);
}
