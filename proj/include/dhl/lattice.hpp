#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dhl/params.hpp"
#include "dhl/rational.hpp"

namespace dhl::lattice {

// One refinement letter: branch i in {1..b}, segment j in {1..s}.
struct Letter {
    int branch = 1;
    int segment = 1;
    friend bool operator==(const Letter&, const Letter&) = default;
};

// Hierarchical cell address: a finite word of letters. The empty word is
// the whole lattice; a level-n word names one of the (bs)^n level-n cells.
struct EdgeAddress {
    std::vector<Letter> word;

    EdgeAddress() = default;
    explicit EdgeAddress(std::vector<Letter> w) : word(std::move(w)) {}

    int level() const { return int(word.size()); }

    // Letter-major linear index among level-n cells.
    std::uint64_t index(const LatticeParams& params) const;
    static EdgeAddress from_index(const LatticeParams& params, int level, std::uint64_t index);

    // Cell measure nu = (bs)^(-level), exact.
    BigRational measure(const LatticeParams& params) const;

    EdgeAddress parent() const;
    bool is_ancestor_of(const EdgeAddress& other) const;

    std::string to_string() const;  // "i1.j1/i2.j2/..."; empty word -> ""
    static EdgeAddress parse(const std::string& text);

    friend bool operator==(const EdgeAddress&, const EdgeAddress&) = default;
};

// A vertex is either a root (A or B) or a generation-g interior vertex
// named by (level g-1 prefix cell, branch, cut), cut in {1..s-1}.
struct VertexAddress {
    enum class Root { A, B };

    struct Interior {
        EdgeAddress prefix;
        int branch = 1;
        int cut = 1;
        friend bool operator==(const Interior&, const Interior&) = default;
    };

    std::variant<Root, Interior> v;

    static VertexAddress root_a() { return {Root::A}; }
    static VertexAddress root_b() { return {Root::B}; }
    static VertexAddress interior(EdgeAddress prefix, int branch, int cut);

    bool is_root() const { return std::holds_alternative<Root>(v); }

    // Roots have generation 0; an interior vertex with a level-(g-1)
    // prefix has generation g.
    int generation() const;

    std::string to_string() const;  // "A", "B", or "<prefix>:i,c"
    static VertexAddress parse(const std::string& text);

    friend bool operator==(const VertexAddress&, const VertexAddress&) = default;
};

// --- counting -------------------------------------------------------------

BigInt edge_count(const LatticeParams& params, int n);   // (bs)^n
BigInt path_count(const LatticeParams& params, int n);   // b^((s^n-1)/(s-1))

// --- projective coordinate -------------------------------------------------

// pi~ of a vertex; roots map to 0 and 1.
BigRational projective_coordinate(const LatticeParams& params, const VertexAddress& v);

// pi~ interval of a level-n cell: [lo, lo + s^(-n)].
std::pair<BigRational, BigRational> projective_interval(const LatticeParams& params,
                                                        const EdgeAddress& e);

// --- similitudes ------------------------------------------------------------

// Contractive shift S_{i,j}: prepends the letter; level/generation grows by 1.
EdgeAddress similitude(const LatticeParams& params, Letter letter, const EdgeAddress& e);
VertexAddress similitude(const LatticeParams& params, Letter letter, const VertexAddress& v);

// --- metric ------------------------------------------------------------------

// Endpoints of a level-n bond, resolved to canonical vertex addresses.
std::pair<VertexAddress, VertexAddress> bond_endpoints(const EdgeAddress& e,
                                                       const LatticeParams& params);

// Level-n metric graph (every bond has length s^(-n)); built on demand and
// memoized per (params, n). Immutable once built except for the BFS cache,
// which is guarded internally.
//
// Only vertices are addressable. A general point is represented by its
// enclosing level-n cell: approximating it by either endpoint of that bond
// perturbs any distance by at most 2 s^(-n).
class MetricGraph {
  public:
    static std::shared_ptr<const MetricGraph> get(const LatticeParams& params, int n);

    int level() const { return n_; }
    std::size_t vertex_count() const { return adjacency_.size(); }

    std::uint32_t vertex_id(const VertexAddress& v) const;

    // Geodesic distance in bond hops (BFS; per-source results memoized).
    std::uint32_t hop_distance(std::uint32_t from, std::uint32_t to) const;

  private:
    MetricGraph(const LatticeParams& params, int n);

    LatticeParams params_;
    int n_;
    std::vector<std::uint64_t> generation_offset_;
    std::vector<std::vector<std::uint32_t>> adjacency_;

    struct BfsCache;
    std::shared_ptr<BfsCache> cache_;
};

// Geodesic distance between two vertices of generation <= n, computed on
// D_n with bond length s^(-n). Exact rational.
BigRational metric_distance(const LatticeParams& params, const VertexAddress& v1,
                            const VertexAddress& v2, int n);

// --- dimension ----------------------------------------------------------------

double lattice_dimension(const LatticeParams& params);  // 1 + ln b / ln s

}  // namespace dhl::lattice
