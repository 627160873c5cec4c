#include "dhl/polymer.hpp"

#include <cmath>
#include <stdexcept>

#include "dhl/cascade.hpp"
#include "dhl/gmc.hpp"

namespace dhl::polymer {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415059;

// ln cosh x with a series branch: the direct formula loses all relative
// precision once x^2/2 drops near the ulp of ln 2.
double log_cosh(double x) {
    double a = std::fabs(x);
    if (a < 1e-2) {
        double x2 = a * a;
        return x2 * (0.5 + x2 * (-1.0 / 12.0 + x2 * (1.0 / 45.0 - x2 * 17.0 / 2520.0)));
    }
    return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321214582;
}

// ln(sinh x / x), even in x.
double log_sinhc(double x) {
    double a = std::fabs(x);
    if (a < 1e-2) {
        double x2 = a * a;
        return x2 * (1.0 / 6.0 + x2 * (-1.0 / 180.0 + x2 * (1.0 / 2835.0)));
    }
    return std::log(std::sinh(a) / a);
}

}  // namespace

WeightKind weight_kind_from_string(const std::string& name) {
    if (name == "gaussian") return WeightKind::gaussian;
    if (name == "rademacher") return WeightKind::rademacher;
    if (name == "centered-uniform" || name == "uniform") return WeightKind::centered_uniform;
    throw std::invalid_argument("unknown weight distribution: " + name);
}

std::string to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::gaussian: return "gaussian";
        case WeightKind::rademacher: return "rademacher";
        case WeightKind::centered_uniform: return "centered-uniform";
    }
    return "?";
}

double WeightDistribution::log_mgf(double beta) const {
    switch (kind) {
        case WeightKind::gaussian: return 0.5 * beta * beta;
        case WeightKind::rademacher: return log_cosh(beta);
        case WeightKind::centered_uniform: return log_sinhc(kSqrt3 * beta);
    }
    return 0.0;
}

double WeightDistribution::mgf(double beta) const { return std::exp(log_mgf(beta)); }

double WeightDistribution::log_lambda(int m, double beta) const {
    if (m < 2) throw std::invalid_argument("log_lambda: m >= 2");
    return log_mgf(m * beta) - double(m) * log_mgf(beta);
}

double WeightDistribution::sample(SplitRng& rng) const {
    switch (kind) {
        case WeightKind::gaussian: return rng.normal();
        case WeightKind::rademacher: return (rng.next_u64() & 1) ? 1.0 : -1.0;
        case WeightKind::centered_uniform: return (2.0 * rng.uniform01() - 1.0) * kSqrt3;
    }
    return 0.0;
}

Environment Environment::sample(const LatticeParams& params, int n, WeightKind kind,
                                std::uint64_t seed) {
    Environment env;
    env.params = params;
    env.level = n;
    env.seed = seed;
    env.kind = kind;
    WeightDistribution dist{kind};
    std::uint64_t count = params.cells(n);
    env.omega.resize(count);
    SplitRng base(seed);
    for (std::uint64_t c = 0; c < count; ++c) {
        SplitRng r = base.derive(c);
        env.omega[c] = dist.sample(r);
    }
    return env;
}

double partition_log(const Environment& env, double beta) {
    WeightDistribution dist{env.kind};
    double log_norm = dist.log_mgf(beta);
    std::vector<double> leaf(env.omega.size());
    for (std::uint64_t c = 0; c < leaf.size(); ++c) leaf[c] = beta * env.omega[c] - log_norm;
    return cascade::log_mass(env.params, env.level, std::move(leaf));
}

double partition_function(const Environment& env, double beta) {
    return std::exp(partition_log(env, beta));
}

double intermediate_disorder_beta(const LatticeParams& params, int n, double beta) {
    params.require_gmc_regime("intermediate_disorder_beta");
    return beta * std::pow(params.ratio(), 0.5 * n);
}

double replica_moment_exact(const LatticeParams& params, int n, WeightKind kind, double beta,
                            int m) {
    if (m != 2 && m != 3) throw std::invalid_argument("replica_moment_exact: m in {2,3}");
    WeightDistribution dist{kind};
    double leaf2 = dist.log_lambda(2, beta);
    if (m == 2) return cascade::pair_moment(params, n, leaf2);
    return cascade::triple_moment(params, n, leaf2, dist.log_lambda(3, beta)).second;
}

double replica_moment_intermediate(const LatticeParams& params, int n, WeightKind kind,
                                   double beta, int m) {
    if (m != 2 && m != 3) throw std::invalid_argument("replica_moment_intermediate: m in {2,3}");
    double beta_n_sq = gmc::pair_interaction_exponent(params, n, beta);
    if (kind == WeightKind::gaussian) {
        // log lambda_m(beta_n) = m(m-1)/2 beta_n^2 exactly
        if (m == 2) return cascade::pair_moment(params, n, beta_n_sq);
        return cascade::triple_moment(params, n, beta_n_sq, 3.0 * beta_n_sq).second;
    }
    return replica_moment_exact(params, n, kind, std::sqrt(beta_n_sq), m);
}

std::vector<ConvergenceRow> convergence_experiment(const LatticeParams& params, double beta,
                                                   WeightKind kind,
                                                   const std::vector<int>& n_list) {
    params.require_gmc_regime("convergence_experiment");
    std::vector<ConvergenceRow> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        ConvergenceRow row;
        row.n = n;
        row.exact_m2 = replica_moment_intermediate(params, n, kind, beta, 2);
        row.exact_m3 = replica_moment_intermediate(params, n, kind, beta, 3);
        row.gmc_m2 = gmc::two_replica_moment(params, n, beta);
        row.gmc_m3 = gmc::three_replica_moment(params, n, beta);
        row.err_m2 = std::fabs(row.exact_m2 - row.gmc_m2);
        row.err_m3 = std::fabs(row.exact_m3 - row.gmc_m3);
        out.push_back(row);
    }
    return out;
}

}  // namespace dhl::polymer
