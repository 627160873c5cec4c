#pragma once

#include <cstdint>
#include <vector>

#include "dhl/params.hpp"
#include "dhl/rational.hpp"
#include "dhl/rng.hpp"

namespace dhl::intersection {

// PGF of the shared-bond count N^(n) for an independent uniform path pair:
// g_0(z) = z, g_{n+1}(z) = (b-1)/b + g_n(z)^s / b. Exact coefficients.
struct Pgf {
    LatticeParams params;
    int level = 0;
    std::vector<BigRational> coeff;  // coeff[k] = P[N^(n) = k], degree s^n

    BigRational at(const BigRational& z) const;
    double at(double z) const;
    BigRational derivative_at_one() const;
};

inline constexpr std::uint64_t kDefaultPgfDegreeCap = 100000;

Pgf intersection_pgf(const LatticeParams& params, int n,
                     std::uint64_t degree_cap = kDefaultPgfDegreeCap);

// P[N^(n) = 0] by the value recursion (cheap at any n).
BigRational pgf_at_zero(const LatticeParams& params, int n);

// One step of the shifted-by-one moment recursion: given w = u - 1,
// returns u' - 1 for u' = ((b-1) + u^s)/b. Evaluating all the hierarchical
// recursions in the shifted variable keeps relative precision when u is
// within an ulp of 1, which is the regime of every deep-level leaf.
double shifted_recursion_step(const LatticeParams& params, double w);

// phi_n(t) = E[exp(t m_n)] with m_n = (b/s)^n N^(n).
struct MgfEvaluator {
    LatticeParams params;
    double tol = 1e-13;
    int max_level = 400;

    double phi(int n, double t) const;  // throws std::range_error on overflow
    double phi_limit(double t) const;   // throws DivergenceError when no limit is reached
};

double mgf_phi(const LatticeParams& params, int n, double t);
double mgf_phi_limit(const LatticeParams& params, double t);

// Fixed point of G(x) = (1/b)[1 - (1-x)^s] in (0,1); needs s > b.
double extinction_map(const LatticeParams& params, double x);
double extinction_probability(const LatticeParams& params);

// Exact raw moments E[m_n^k] for k = 1..order (order <= 3); the first is
// 1 identically (mean-one martingale).
std::vector<BigRational> martingale_moments(const LatticeParams& params, int n, int order);

// g_n'(1), exact.
BigRational pgf_derivative_at_one(const LatticeParams& params, int n);

// v_n from v_{k+1} = b(s-1)/s + (b/s) v_k, v_0 = 1 (the second moment of
// m_n), and its limit b(s-1)/(s-b).
BigRational second_moment_recursion(const LatticeParams& params, int n);
BigRational second_moment_limit(const LatticeParams& params);

// Survival-conditioned branching chain: N~_0 = 1, offspring law
// P[l] = C(s,l) p^l (1-p)^(s-l) / (1 - (1-p)^s), l in 1..s.
std::vector<double> survival_offspring_law(const LatticeParams& params);
std::vector<std::uint64_t> simulate_survival_conditioned(const LatticeParams& params, int n,
                                                         SplitRng& rng);

// h = (log s - log b)/log s, and its Monte Carlo estimate from the growth
// rate of survivor counts.
double hausdorff_exponent(const LatticeParams& params);
double estimate_dimension_mc(const LatticeParams& params, int n, std::uint64_t samples,
                             SplitRng& rng);

}  // namespace dhl::intersection
