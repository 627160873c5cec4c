#pragma once

#include <cstdint>
#include <vector>

#include "dhl/cascade.hpp"
#include "dhl/params.hpp"
#include "dhl/paths.hpp"
#include "dhl/rng.hpp"
#include "dhl/stats.hpp"

namespace dhl::gmc {

// Leveled Gaussian field xi_e = <W, b^k chi_e>: level-k entries are iid
// N(0, (b/s)^k) and every parent equals the (1/b)-sum of its children
// exactly. Sampled top-down by the conditional Gaussian bridge, with one
// keyed draw per cell, so deepening a tree never perturbs shallower levels.
struct NoiseTree {
    LatticeParams params;
    int depth = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> xi;  // xi[k][cell], k = 0..depth

    static NoiseTree sample(const LatticeParams& params, int n, std::uint64_t seed);
    static NoiseTree zeros(const LatticeParams& params, int n);

    // Same seed, deeper field; levels <= depth are bit-identical.
    NoiseTree extended(int new_depth) const;

    // Deepen by one level with bridge draws from the given rng instead of
    // the keyed stream (for conditional-law checks against a fixed tree).
    NoiseTree extended_random(SplitRng& rng) const;

    NoiseTree truncated(int m) const;

    // max |xi_e - (1/b) sum children| over all non-leaf cells.
    double consistency_residual() const;
};

// <W, psi> for a level-k cell function psi: sum psi_e xi_e / b^k.
double pair_field(const NoiseTree& tree, const std::vector<double>& psi, int k);

// ||psi||^2 in L2(nu) for a level-k cell function.
double cell_function_norm_sq(const LatticeParams& params, const std::vector<double>& psi, int k);

// log dM^(n)/dmu at a path: beta * sum_trace xi - (beta^2/2) s^n (b/s)^n.
double gmc_log_weight(const NoiseTree& tree, const paths::CoarsePath& p, double beta);

// Leaf log-weights beta xi_e - (beta^2/2)(b/s)^n over level-n cells.
std::vector<double> leaf_log_weights(const NoiseTree& tree, int n, double beta);

double total_log_mass(const NoiseTree& tree, int n, double beta);
double total_mass(const NoiseTree& tree, int n, double beta);
double cylinder_mass(const NoiseTree& tree, const paths::CoarsePath& cylinder, int n, double beta);

// Per-edge Gaussian pair-interaction exponent beta^2 (b/s)^n.
double pair_interaction_exponent(const LatticeParams& params, int n, double beta);

// Exact replica moments E[Z^2], E[Z^3] via the hierarchical recursions.
double two_replica_moment(const LatticeParams& params, int n, double beta);
double three_replica_moment(const LatticeParams& params, int n, double beta);

struct MartingaleReport {
    std::uint64_t trials = 0;
    double mean_diff = 0.0;  // mean of Z_{n+1} - Z_n
    double se_diff = 0.0;
    double regression_slope = 0.0;  // Z_{n+1} on Z_n, contracts to 1
};

MartingaleReport refinement_martingale_check(const LatticeParams& params, int n, double beta,
                                             std::uint64_t trials, std::uint64_t seed);

// Conditional version: inner Monte Carlo over bridge refinements of one
// fixed tree; the mean reproduces that tree's Z_n.
struct ConditionalReport {
    double z_n = 0.0;
    double inner_mean = 0.0;
    double inner_se = 0.0;
};

ConditionalReport conditional_refinement_check(const NoiseTree& tree, double beta,
                                               std::uint64_t inner_trials, std::uint64_t seed);

struct CompositionReport {
    double m1_direct = 1.0, m1_composed = 1.0;
    double m2_direct = 0.0, m2_composed = 0.0;
    double m3_direct = 0.0, m3_composed = 0.0;
    double max_moment_diff = 0.0;
};

// Moments 1..3 of (a) the level-(n+1) mass at beta sqrt(s/b) against
// (b) the (1/b)-sum of s-fold products of independent level-n masses at
// beta. Equal in distribution; the exact recursions agree to roundoff.
CompositionReport composition_check(const LatticeParams& params, int n, double beta);

// Total-mass samples for distributional checks.
std::vector<double> sample_total_masses(const LatticeParams& params, int n, double beta,
                                        std::uint64_t count, std::uint64_t seed);
std::vector<double> sample_composed_masses(const LatticeParams& params, int n, double beta,
                                           std::uint64_t count, std::uint64_t seed);

struct ShiftReport {
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double exact = 0.0;  // integral of exp(beta <Y_p, psi>) d mu
};

// E[Z_n exp(<W,psi> - ||psi||^2/2)] against the exact tilted path average.
ShiftReport shift_identity_check(const LatticeParams& params, int n, double beta,
                                 const std::vector<double>& psi, int psi_level,
                                 std::uint64_t trials, std::uint64_t seed);

struct FractionalReport {
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double bound = 0.0;  // exp(-beta^2/8)
};

FractionalReport fractional_moment_mc(const LatticeParams& params, int n, double beta,
                                      std::uint64_t trials, std::uint64_t seed);

// Largest level-m cylinder share of the total mass for one realization.
double max_cylinder_share(const NoiseTree& tree, int n, int m, double beta);

// Median of the max level-m share over independent trees, one entry per
// beta; the localization diagnostic.
std::vector<double> median_max_share(const LatticeParams& params, int n, int m,
                                     const std::vector<double>& betas, std::uint64_t tree_count,
                                     std::uint64_t seed);

// Exact E[int int exp(alpha m_n) M(dp) M(dq)] = g_n(exp((alpha+beta^2)(b/s)^n)).
double tilted_intersection_moment(const LatticeParams& params, int n, double beta, double alpha);

struct TiltedMcReport {
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double exact = 0.0;
};

TiltedMcReport tilted_intersection_moment_mc(const LatticeParams& params, int n, double beta,
                                             double alpha, std::uint64_t trials,
                                             std::uint64_t seed);

}  // namespace dhl::gmc
