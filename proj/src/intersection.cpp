#include "dhl/intersection.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "dhl/errors.hpp"

namespace dhl::intersection {

namespace {

std::vector<BigRational> poly_mul(const std::vector<BigRational>& a,
                                  const std::vector<BigRational>& b) {
    std::vector<BigRational> out(a.size() + b.size() - 1, BigRational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Truncated Taylor jet around z = 1 with exact rational coefficients;
// enough for moments up to order 3 without materializing the polynomial.
struct Jet {
    std::array<BigRational, 4> c{BigRational(0), BigRational(0), BigRational(0), BigRational(0)};

    static Jet variable() {
        Jet j;
        j.c[0] = 1;
        j.c[1] = 1;
        return j;
    }

    Jet operator*(const Jet& o) const {
        Jet r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; i + j < 4; ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
};

}  // namespace

BigRational Pgf::at(const BigRational& z) const {
    BigRational acc = 0;
    for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * z + coeff[k];
    return acc;
}

double Pgf::at(double z) const {
    double acc = 0;
    for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * z + to_double(coeff[k]);
    return acc;
}

BigRational Pgf::derivative_at_one() const {
    BigRational acc = 0;
    for (std::size_t k = 1; k < coeff.size(); ++k) acc += BigRational(k) * coeff[k];
    return acc;
}

Pgf intersection_pgf(const LatticeParams& params, int n, std::uint64_t degree_cap) {
    if (n < 0) throw std::invalid_argument("intersection_pgf: n >= 0");
    std::uint64_t degree = params.segments(n);
    if (degree > degree_cap) throw SizeCapError("intersection_pgf: degree s^n exceeds cap");

    std::vector<BigRational> g{BigRational(0), BigRational(1)};  // g_0(z) = z
    BigRational inv_b(1, params.b);
    BigRational off(params.b - 1, params.b);
    for (int k = 0; k < n; ++k) {
        std::vector<BigRational> p = g;
        for (int e = 1; e < params.s; ++e) p = poly_mul(p, g);
        for (auto& c : p) c *= inv_b;
        p[0] += off;
        g = std::move(p);
    }
    return Pgf{params, n, std::move(g)};
}

BigRational pgf_at_zero(const LatticeParams& params, int n) {
    BigRational x = 0;  // g_0(0)
    BigRational off(params.b - 1, params.b);
    for (int k = 0; k < n; ++k) x = off + rpow(x, params.s) / params.b;
    return x;
}

double shifted_recursion_step(const LatticeParams& params, double w) {
    // ((1+w)^s - 1)/b expanded binomially; exact in the limit w -> 0 where
    // pow(1+w, s) - 1 would cancel catastrophically.
    double term = w;
    double sum = 0.0;
    for (int j = 1; j <= params.s; ++j) {
        double binom = 1.0;
        for (int i = 0; i < j; ++i) binom *= double(params.s - i) / double(i + 1);
        sum += binom * term;
        term *= w;
    }
    return sum / double(params.b);
}

double MgfEvaluator::phi(int n, double t) const {
    if (n < 0) throw std::invalid_argument("phi: n >= 0");
    double leaf = t * std::pow(params.ratio(), n);
    if (leaf > 700.0) throw std::range_error("phi: exp overflow at the leaf");
    double w = std::expm1(leaf);
    for (int k = 0; k < n; ++k) {
        w = shifted_recursion_step(params, w);
        if (!(w < 1e300)) throw std::range_error("phi: iterate overflow (large positive t)");
    }
    return 1.0 + w;
}

double MgfEvaluator::phi_limit(double t) const {
    params.require_gmc_regime("phi_limit");
    double prev = phi(0, t);
    for (int n = 1; n <= max_level; ++n) {
        double cur;
        try {
            cur = phi(n, t);
        } catch (const std::range_error&) {
            throw DivergenceError("phi_limit: iterate overflow, no finite limit detected");
        }
        if (std::fabs(cur - prev) < tol) return cur;
        prev = cur;
    }
    throw DivergenceError("phi_limit: Cauchy test failed at the iteration cap");
}

double mgf_phi(const LatticeParams& params, int n, double t) {
    return MgfEvaluator{params}.phi(n, t);
}

double mgf_phi_limit(const LatticeParams& params, double t) {
    return MgfEvaluator{params}.phi_limit(t);
}

double extinction_map(const LatticeParams& params, double x) {
    return (1.0 - std::pow(1.0 - x, params.s)) / double(params.b);
}

double extinction_probability(const LatticeParams& params) {
    params.require_gmc_regime("extinction_probability");
    double x = 1.0;
    for (int i = 0; i < 10000; ++i) {
        double next = extinction_map(params, x);
        if (std::fabs(next - x) < 1e-16) return next;
        x = next;
    }
    return x;
}

std::vector<BigRational> martingale_moments(const LatticeParams& params, int n, int order) {
    if (order < 1 || order > 3) throw std::invalid_argument("martingale_moments: order in 1..3");
    Jet g = Jet::variable();
    BigRational inv_b(1, params.b);
    BigRational off(params.b - 1, params.b);
    for (int k = 0; k < n; ++k) {
        Jet p = g;
        for (int e = 1; e < params.s; ++e) p = p * g;
        for (auto& c : p.c) c *= inv_b;
        p.c[0] += off;
        g = p;
    }
    // Factorial moments from Taylor coefficients at 1, then raw moments.
    BigRational d1 = g.c[1];
    BigRational d2 = 2 * g.c[2];
    BigRational d3 = 6 * g.c[3];
    BigRational en1 = d1;
    BigRational en2 = d2 + d1;
    BigRational en3 = d3 + 3 * d2 + d1;
    BigRational scale = BigRational(params.b, params.s);
    std::vector<BigRational> out;
    out.push_back(rpow(scale, std::uint64_t(n)) * en1);
    if (order >= 2) out.push_back(rpow(scale, 2 * std::uint64_t(n)) * en2);
    if (order >= 3) out.push_back(rpow(scale, 3 * std::uint64_t(n)) * en3);
    return out;
}

BigRational pgf_derivative_at_one(const LatticeParams& params, int n) {
    Jet g = Jet::variable();
    BigRational inv_b(1, params.b);
    BigRational off(params.b - 1, params.b);
    for (int k = 0; k < n; ++k) {
        Jet p = g;
        for (int e = 1; e < params.s; ++e) p = p * g;
        for (auto& c : p.c) c *= inv_b;
        p.c[0] += off;
        g = p;
    }
    return g.c[1];
}

BigRational second_moment_recursion(const LatticeParams& params, int n) {
    BigRational v = 1;
    BigRational a(BigInt(params.b) * (params.s - 1), params.s);
    BigRational r(params.b, params.s);
    for (int k = 0; k < n; ++k) v = a + r * v;
    return v;
}

BigRational second_moment_limit(const LatticeParams& params) {
    params.require_gmc_regime("second_moment_limit");
    return BigRational(BigInt(params.b) * (params.s - 1), params.s - params.b);
}

std::vector<double> survival_offspring_law(const LatticeParams& params) {
    params.require_gmc_regime("survival_offspring_law");
    double p = extinction_probability(params);
    double denom = 1.0 - std::pow(1.0 - p, params.s);
    std::vector<double> law(std::size_t(params.s) + 1, 0.0);
    double binom = 1.0;
    for (int l = 1; l <= params.s; ++l) {
        binom *= double(params.s - l + 1) / double(l);
        law[std::size_t(l)] =
            binom * std::pow(p, l) * std::pow(1.0 - p, params.s - l) / denom;
    }
    return law;
}

std::vector<std::uint64_t> simulate_survival_conditioned(const LatticeParams& params, int n,
                                                         SplitRng& rng) {
    std::vector<double> law = survival_offspring_law(params);
    std::vector<double> cdf(law.size(), 0.0);
    double acc = 0.0;
    for (std::size_t l = 1; l < law.size(); ++l) {
        acc += law[l];
        cdf[l] = acc;
    }
    cdf.back() = 1.0;

    std::vector<std::uint64_t> traj;
    traj.reserve(std::size_t(n) + 1);
    std::uint64_t count = 1;
    traj.push_back(count);
    for (int gen = 1; gen <= n; ++gen) {
        std::uint64_t next = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            double u = rng.uniform01();
            int l = 1;
            while (l < params.s && u > cdf[std::size_t(l)]) ++l;
            next += std::uint64_t(l);
        }
        count = next;
        traj.push_back(count);
        if (count > (1ull << 40)) throw SizeCapError("simulate_survival_conditioned: population blow-up");
    }
    return traj;
}

double hausdorff_exponent(const LatticeParams& params) {
    // s = b sits on the boundary where the formula degenerates to 0.
    if (params.s < params.b) throw RegimeError("hausdorff_exponent: requires s >= b");
    return (std::log(double(params.s)) - std::log(double(params.b))) / std::log(double(params.s));
}

double estimate_dimension_mc(const LatticeParams& params, int n, std::uint64_t samples,
                             SplitRng& rng) {
    params.require_gmc_regime("estimate_dimension_mc");
    std::vector<double> sums(std::size_t(n) + 1, 0.0);
    for (std::uint64_t i = 0; i < samples; ++i) {
        SplitRng run = rng.derive(i);
        auto traj = simulate_survival_conditioned(params, n, run);
        for (std::size_t k = 0; k < traj.size(); ++k) sums[k] += double(traj[k]);
    }
    std::vector<double> xs, ys;
    for (int k = 1; k <= n; ++k) {
        xs.push_back(double(k));
        ys.push_back(std::log(sums[std::size_t(k)] / double(samples)));
    }
    // ln E[N~_k] = const + h k ln s, so the slope over k, divided by ln s,
    // estimates h.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return (sxy / sxx) / std::log(double(params.s));
}

}  // namespace dhl::intersection
