#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dhl/gmc.hpp"
#include "dhl/params.hpp"
#include "dhl/paths.hpp"
#include "dhl/rational.hpp"

namespace dhl::chaos {

// gamma(S) = sum_k (|S| - #level-k ancestor classes), with the k=0 term
// |S| - 1; terms vanish once every cell sits in its own class.
struct GammaResult {
    std::uint64_t value = 0;
    int stabilization_level = 0;  // smallest k with |classes_k| = |S|
};

GammaResult gamma(const paths::CellSet& S);

// A union of level-m path cylinders; empty optional means all paths.
struct PathEvent {
    int level = 0;
    std::optional<std::vector<paths::CoarsePath>> members;

    static PathEvent all() { return PathEvent{}; }
    static PathEvent of(std::vector<paths::CoarsePath> cylinders);

    BigRational measure(const LatticeParams& params) const;
};

// r_k at a level-n path: b^{n|S|} when every cell lies on the trace, 0
// otherwise (including coincident query cells, which the distinctness
// convention zeroes).
BigRational rho_density(const paths::CellSet& S, const paths::CoarsePath& p);

// rho_k(S; A) = b^{gamma_n(S)} mu_S^{(n)}(A); 0 when Gamma_S is empty.
BigRational rho_measure(const paths::CellSet& S, const PathEvent& A);

// Tuple-density form b^{n k} mu(A cap G_{set}), defined for ordered cell
// tuples with repeats; this is the product-of-Y densities the finite-level
// marginalization identities hold for exactly. Coincides with rho_measure
// on distinct tuples.
BigRational rho_tuple(const LatticeParams& params, int n,
                      const std::vector<std::uint64_t>& cells, const PathEvent& A);

struct ConsistencyReport {
    int k = 0;
    int n = 0;
    BigRational max_marginal_residual;  // identity (i), exact
    BigRational total_mass_residual;    // identity (ii), exact
    bool exact() const { return max_marginal_residual == 0 && total_mass_residual == 0; }
};

inline constexpr std::uint64_t kDefaultTupleCap = 30'000'000;

ConsistencyReport consistency_check(const LatticeParams& params, int k, int n, const PathEvent& A,
                                    std::uint64_t tuple_cap = kDefaultTupleCap);

// Truncated chaos expansion of the level-n mass on the event A, evaluated
// on one field realization; per_order[r] is the order-r term, so repeated
// cells ride on the Taylor (Hermite) weights automatically.
struct ChaosPartialSum {
    double total = 0.0;
    std::vector<double> per_order;
};

ChaosPartialSum chaos_partial_sum(const gmc::NoiseTree& tree, int n, double beta,
                                  const PathEvent& A, int max_order);

// E[(Z_n - S_K)^2]: the exact chaos tail from the shared-bond PGF.
double truncation_variance_exact(const LatticeParams& params, int n, double beta, int max_order);

// Var of the order-k chaos term over the field: beta^{2k} E[m_n^k] / k!.
double chaos_order_variance(const LatticeParams& params, int n, double beta, int order);

}  // namespace dhl::chaos
