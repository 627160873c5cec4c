#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dhl/lattice.hpp"
#include "dhl/rng.hpp"

using namespace dhl;
using namespace dhl::lattice;

namespace {

VertexAddress random_vertex(const LatticeParams& params, int max_gen, SplitRng& rng) {
    std::uint32_t pick = rng.uniform_int(16);
    if (pick == 0) return VertexAddress::root_a();
    if (pick == 1) return VertexAddress::root_b();
    int g = 1 + int(rng.uniform_int(std::uint32_t(max_gen)));
    std::uint64_t prefix = rng.uniform_int(std::uint32_t(params.cells(g - 1)));
    int branch = 1 + int(rng.uniform_int(std::uint32_t(params.b)));
    int cut = 1 + int(rng.uniform_int(std::uint32_t(params.s - 1)));
    return VertexAddress::interior(EdgeAddress::from_index(params, g - 1, prefix), branch, cut);
}

}  // namespace

TEST_CASE("edge and path counts") {
    LatticeParams p23{2, 3};
    CHECK(edge_count(p23, 0) == 1);
    CHECK(edge_count(p23, 2) == 36);
    CHECK(edge_count(LatticeParams{3, 4}, 3) == 1728);

    CHECK(path_count(p23, 0) == 1);
    CHECK(path_count(p23, 1) == 2);
    CHECK(path_count(p23, 2) == 16);
    // doubly exponential growth stays exact
    CHECK(path_count(p23, 3) == BigInt(1) << 13);
}

TEST_CASE("cell measures are exact and additive") {
    LatticeParams params{2, 3};
    for (int n = 0; n <= 3; ++n) {
        BigRational total = 0;
        for (std::uint64_t c = 0; c < params.cells(n); ++c)
            total += EdgeAddress::from_index(params, n, c).measure(params);
        CHECK(total == 1);
    }
    // bs children partition the parent measure
    EdgeAddress e = EdgeAddress::parse("1.2/2.1");
    BigRational children = 0;
    for (int i = 1; i <= params.b; ++i)
        for (int j = 1; j <= params.s; ++j) {
            EdgeAddress child = e;
            child.word.push_back({i, j});
            children += child.measure(params);
        }
    CHECK(children == e.measure(params));
    // one more letter divides the measure by bs
    CHECK(similitude(params, {1, 1}, e).measure(params) * (params.b * params.s) ==
          e.measure(params));
}

TEST_CASE("projective coordinates") {
    LatticeParams params{2, 3};
    CHECK(projective_coordinate(params, VertexAddress::root_a()) == 0);
    CHECK(projective_coordinate(params, VertexAddress::root_b()) == 1);

    auto [lo, hi] = projective_interval(params, EdgeAddress::parse("1.2"));
    CHECK(lo == BigRational(1, 3));
    CHECK(hi == BigRational(2, 3));

    CHECK(projective_coordinate(params, VertexAddress::interior(EdgeAddress{}, 1, 1)) ==
          BigRational(1, 3));

    // generation-n coordinates are multiples of s^-n
    SplitRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto v = random_vertex(params, 4, rng);
        if (v.is_root()) continue;
        BigRational c = projective_coordinate(params, v);
        BigRational scaled = c * ipow(BigInt(3), std::uint64_t(v.generation()));
        CHECK(boost::multiprecision::denominator(scaled) == 1);
    }
}

TEST_CASE("address serialization round-trips") {
    LatticeParams params{2, 3};
    CHECK(EdgeAddress::parse("").level() == 0);
    CHECK(EdgeAddress::parse("1.2/2.3").to_string() == "1.2/2.3");
    CHECK(VertexAddress::parse("A").to_string() == "A");
    CHECK(VertexAddress::parse("1.2:2,1").to_string() == "1.2:2,1");
    CHECK(VertexAddress::parse(":1,1").generation() == 1);

    SplitRng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_vertex(params, 5, rng);
        CHECK(VertexAddress::parse(v.to_string()) == v);
    }
    CHECK_THROWS_AS(VertexAddress::parse("1.2"), AddressError);
}

TEST_CASE("metric basics") {
    LatticeParams params{2, 3};
    for (int n = 1; n <= 4; ++n)
        CHECK(metric_distance(params, VertexAddress::root_a(), VertexAddress::root_b(), n) == 1);

    // midpoints of the two branches of D_1^{2,2} can only connect through
    // a root, giving distance 1
    LatticeParams p22{2, 2};
    auto m1 = VertexAddress::interior(EdgeAddress{}, 1, 1);
    auto m2 = VertexAddress::interior(EdgeAddress{}, 2, 1);
    CHECK(metric_distance(p22, m1, m2, 1) == 1);
    CHECK(metric_distance(p22, m1, m2, 3) == 1);

    CHECK_THROWS_AS(metric_distance(params, VertexAddress::interior(EdgeAddress{}, 1, 1),
                                    VertexAddress::root_a(), 0),
                    AddressError);
}

TEST_CASE("metric axioms and level consistency") {
    LatticeParams params{2, 3};
    SplitRng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        auto x = random_vertex(params, 3, rng);
        auto y = random_vertex(params, 3, rng);
        auto z = random_vertex(params, 3, rng);
        BigRational dxy = metric_distance(params, x, y, 3);
        BigRational dyx = metric_distance(params, y, x, 3);
        BigRational dyz = metric_distance(params, y, z, 3);
        BigRational dxz = metric_distance(params, x, z, 3);
        CHECK(dxy == dyx);
        CHECK(dxz <= dxy + dyz);
        CHECK((dxy == 0) == (x == y));
        // refining a bond into s shorter bonds preserves geodesics
        CHECK(metric_distance(params, x, y, 4) == dxy);
        CHECK(metric_distance(params, x, y, 5) == dxy);
    }
}

TEST_CASE("projective map is 1-Lipschitz for the metric") {
    LatticeParams params{2, 3};
    SplitRng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        auto x = random_vertex(params, 3, rng);
        auto y = random_vertex(params, 3, rng);
        BigRational gap = projective_coordinate(params, x) - projective_coordinate(params, y);
        if (gap < 0) gap = -gap;
        CHECK(gap <= metric_distance(params, x, y, 3));
    }
}

TEST_CASE("similitudes contract the metric by exactly 1/s") {
    LatticeParams params{2, 3};
    SplitRng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        auto x = random_vertex(params, 3, rng);
        auto y = random_vertex(params, 3, rng);
        Letter letter{1 + int(rng.uniform_int(2)), 1 + int(rng.uniform_int(3))};
        BigRational base = metric_distance(params, x, y, 3);
        BigRational image = metric_distance(params, similitude(params, letter, x),
                                            similitude(params, letter, y), 4);
        CHECK(image * params.s == base);
    }
    // roots map onto the cell corners
    CHECK(similitude(params, {1, 1}, VertexAddress::root_a()) == VertexAddress::root_a());
    CHECK(similitude(params, {2, 2}, VertexAddress::root_a()) ==
          VertexAddress::interior(EdgeAddress{}, 2, 1));
    CHECK(similitude(params, {1, 3}, VertexAddress::root_b()) == VertexAddress::root_b());
    CHECK(similitude(params, {1, 1}, VertexAddress::root_b()) ==
          VertexAddress::interior(EdgeAddress{}, 1, 1));
}

TEST_CASE("dimension formula and covering counts") {
    LatticeParams p23{2, 3};
    CHECK(lattice_dimension(p23) == doctest::Approx(1.6309297536).epsilon(1e-9));
    CHECK(lattice_dimension(LatticeParams{2, 2}) == doctest::Approx(2.0));
    for (int n = 1; n <= 4; ++n) {
        double covering = std::log(to_double(BigRational(edge_count(p23, n)))) /
                          std::log(std::pow(3.0, n));
        CHECK(covering == doctest::Approx(lattice_dimension(p23)).epsilon(1e-13));
    }
}

TEST_CASE("bond endpoints resolve to canonical vertices") {
    LatticeParams params{2, 3};
    // level-1 bond (1,1) runs from A to the first cut vertex of branch 1
    auto [l1, r1] = bond_endpoints(EdgeAddress::parse("1.1"), params);
    CHECK(l1 == VertexAddress::root_a());
    CHECK(r1 == VertexAddress::interior(EdgeAddress{}, 1, 1));
    auto [l2, r2] = bond_endpoints(EdgeAddress::parse("2.3"), params);
    CHECK(l2 == VertexAddress::interior(EdgeAddress{}, 2, 2));
    CHECK(r2 == VertexAddress::root_b());
    // endpoints of a bond are one hop apart
    SplitRng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto e = EdgeAddress::from_index(params, 3, rng.uniform_int(std::uint32_t(params.cells(3))));
        auto [l, r] = bond_endpoints(e, params);
        CHECK(metric_distance(params, l, r, 3) == BigRational(1, 27));
    }
}
