#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dhl/lattice.hpp"
#include "dhl/params.hpp"
#include "dhl/rational.hpp"
#include "dhl/rng.hpp"

namespace dhl::paths {

// Soft memory bound on path level (decision vectors grow like s^n).
int max_path_level();
void set_max_path_level(int n);

// A level-n coarse directed path, stored as its branch decisions in
// depth-first order: one top-level choice, then the s sub-diamond
// subtrees in segment order, each laid out recursively. Immutable in use.
struct CoarsePath {
    LatticeParams params;
    int level = 0;
    std::vector<std::uint8_t> choices;  // values in 1..b, length (s^n-1)/(s-1)

    CoarsePath() = default;
    CoarsePath(LatticeParams params, int level, std::vector<std::uint8_t> choices);

    // k-th bond of the chain, k = 1..s^n.
    lattice::EdgeAddress edge_at(std::uint64_t k) const;

    // All s^n bond indices from A to B, letter-major cell indexing.
    std::vector<std::uint64_t> trace_indices() const;

    // [p]_m: truncate the decision tree to depth m <= level.
    CoarsePath coarsen(int m) const;

    // Uniform refinement to level N >= level, conditionally uniform given
    // this path as its coarsening.
    CoarsePath refine(int N, SplitRng& rng) const;

    BigRational measure() const;  // mu(p) = 1/|Gamma_n|

    std::string to_string() const;  // branch digits in slot order
    static CoarsePath parse(const LatticeParams& params, int level, const std::string& text);

    friend bool operator==(const CoarsePath&, const CoarsePath&) = default;
};

// Shared-bond count N^(n) between two paths of equal params and level.
std::uint64_t shared_bonds(const CoarsePath& p, const CoarsePath& q);

CoarsePath sample_uniform_path(const LatticeParams& params, int n, SplitRng& rng);

// All level-n paths in decision-vector (mixed radix, first slot most
// significant) order. Desk-scale n only.
std::vector<CoarsePath> enumerate_paths(const LatticeParams& params, int n);
CoarsePath path_from_ordinal(const LatticeParams& params, int n, std::uint64_t ordinal);
std::uint64_t path_ordinal(const CoarsePath& p);

// A finite set of distinct level-n cells.
struct CellSet {
    LatticeParams params;
    int level = 0;
    std::vector<lattice::EdgeAddress> cells;  // sorted by index, deduplicated

    CellSet() = default;
    CellSet(LatticeParams params, int level, std::vector<lattice::EdgeAddress> cells);

    std::size_t size() const { return cells.size(); }
};

// Exact number of level-n paths whose trace contains every cell of S;
// 0 when the cells force two branches in one sub-diamond.
BigInt count_paths_through(const CellSet& S);

// Paths through S restricted to the cylinder of a level-m coarse path.
BigInt count_paths_through_in_cylinder(const CellSet& S, const CoarsePath& cylinder);

// Exact uniform sample over the paths counted above (mu_S at level n).
// Throws std::invalid_argument when Gamma_S is empty.
CoarsePath sample_path_through(const CellSet& S, SplitRng& rng);

}  // namespace dhl::paths
