#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dhl/params.hpp"
#include "dhl/rng.hpp"

namespace dhl::polymer {

// Edge-weight families with mean 0, variance 1, and closed-form Lambda(beta).
enum class WeightKind { gaussian, rademacher, centered_uniform };

WeightKind weight_kind_from_string(const std::string& name);
std::string to_string(WeightKind kind);

struct WeightDistribution {
    WeightKind kind = WeightKind::gaussian;

    double log_mgf(double beta) const;  // ln Lambda(beta) = ln E[exp(beta w)]
    double mgf(double beta) const;

    // ln(Lambda(m beta) / Lambda(beta)^m), the per-edge m-replica factor;
    // evaluated through small-argument series so beta -> 0 keeps relative
    // precision.
    double log_lambda(int m, double beta) const;

    double sample(SplitRng& rng) const;
};

struct Environment {
    LatticeParams params;
    int level = 0;
    std::uint64_t seed = 0;
    WeightKind kind = WeightKind::gaussian;
    std::vector<double> omega;  // i.i.d. over level-n cells

    static Environment sample(const LatticeParams& params, int n, WeightKind kind,
                              std::uint64_t seed);
};

// Normalized partition function Z = (1/|Gamma_n|) sum_p prod_k
// exp(beta w)/Lambda(beta); E[Z] = 1.
double partition_log(const Environment& env, double beta);
double partition_function(const Environment& env, double beta);

// beta_n = beta (b/s)^{n/2}; the intermediate-disorder temperature.
double intermediate_disorder_beta(const LatticeParams& params, int n, double beta);

// Exact E[Z^m] for m in {2,3} via the hierarchical replica recursions.
double replica_moment_exact(const LatticeParams& params, int n, WeightKind kind, double beta,
                            int m);

// E[Z^m] at the intermediate-disorder temperature beta_n = beta (b/s)^{n/2}.
// The squared temperature is formed directly as beta^2 (b/s)^n, so for
// Gaussian weights the replica factor exp(m(m-1) beta_n^2 / 2) is the
// bit-identical twin of the level-n chaos factor and the moments agree
// exactly, not just to roundoff-amplified tolerance.
double replica_moment_intermediate(const LatticeParams& params, int n, WeightKind kind,
                                   double beta, int m);

struct ConvergenceRow {
    int n = 0;
    double exact_m2 = 0.0, exact_m3 = 0.0;  // polymer at beta_n
    double gmc_m2 = 0.0, gmc_m3 = 0.0;      // level-n Gaussian chaos at beta
    double err_m2 = 0.0, err_m3 = 0.0;
};

std::vector<ConvergenceRow> convergence_experiment(const LatticeParams& params, double beta,
                                                   WeightKind kind,
                                                   const std::vector<int>& n_list);

}  // namespace dhl::polymer
