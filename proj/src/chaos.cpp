#include "dhl/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dhl/errors.hpp"
#include "dhl/intersection.hpp"

namespace dhl::chaos {

namespace {

// Ancestor-class profile of a small index tuple: c[k] = number of distinct
// level-k prefixes, plus the branch-consistency flag (cells sharing a
// level-k cell must continue into the same branch for a common path to
// exist).
struct TupleProfile {
    bool consistent = true;
    int separation = 0;                  // first k with all prefixes distinct
    std::vector<std::uint64_t> classes;  // c[k], k = 0..n
};

TupleProfile profile(const LatticeParams& params, int n, std::vector<std::uint64_t> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    TupleProfile pr;
    pr.classes.assign(std::size_t(n) + 1, 0);
    std::uint64_t bs = std::uint64_t(params.b) * params.s;
    std::uint64_t div = 1;
    for (int i = 0; i < n; ++i) div *= bs;  // (bs)^n
    std::uint64_t sz = cells.size();
    pr.separation = 0;
    for (int k = 0; k <= n; ++k) {
        // prefixes at level k (cells sorted, so prefixes arrive sorted too)
        std::uint64_t distinct = sz ? 1 : 0;
        for (std::uint64_t i = 1; i < sz; ++i)
            if (cells[i] / div != cells[i - 1] / div) ++distinct;
        pr.classes[std::size_t(k)] = distinct;
        if (distinct == sz && pr.separation == 0 && k > 0) pr.separation = k;
        if (distinct == sz && k == 0) pr.separation = 0;
        // branch consistency at this node level: within one level-k class,
        // the next letter's branch must agree (k < n only)
        if (k < n) {
            std::uint64_t next_div = div / bs;
            for (std::uint64_t i = 1; i < sz; ++i) {
                if (cells[i] / div != cells[i - 1] / div) continue;
                std::uint64_t a = (cells[i] / next_div) % bs;
                std::uint64_t b = (cells[i - 1] / next_div) % bs;
                if (a / std::uint64_t(params.s) != b / std::uint64_t(params.s))
                    pr.consistent = false;
            }
        }
        div /= bs;
    }
    return pr;
}

// Event prepared for fast compatibility tests: per cylinder, the sorted
// level-m trace indices.
struct PreparedEvent {
    int level = 0;
    bool all = true;
    std::vector<std::vector<std::uint64_t>> traces;
};

PreparedEvent prepare(const PathEvent& A) {
    PreparedEvent pe;
    pe.level = A.level;
    if (!A.members) return pe;
    pe.all = false;
    pe.traces.reserve(A.members->size());
    for (const auto& sigma : *A.members) {
        auto tr = sigma.trace_indices();
        std::sort(tr.begin(), tr.end());
        pe.traces.push_back(std::move(tr));
    }
    return pe;
}

// mu(A cap G_{set}) as an exact power-of-b sum; 0 when inconsistent.
BigRational mu_event_through(const LatticeParams& params, int n,
                             const std::vector<std::uint64_t>& cells, const TupleProfile& pr,
                             const PreparedEvent& A) {
    if (!pr.consistent) return BigRational(0);
    if (A.all) {
        std::uint64_t forced = 0;
        for (int k = 0; k < n; ++k) forced += pr.classes[std::size_t(k)];
        return BigRational(1, ipow(BigInt(params.b), forced));
    }
    int m = A.level;
    std::uint64_t forced_below = 0;
    for (int k = m; k < n; ++k) forced_below += pr.classes[std::size_t(k)];
    std::uint64_t exponent = params.decision_count(m) + forced_below;
    BigRational per_cyl(1, ipow(BigInt(params.b), exponent));

    // Level-m ancestors of the cells, deduplicated.
    std::uint64_t shift = 1;
    for (int i = 0; i < n - m; ++i) shift *= std::uint64_t(params.b) * params.s;
    std::vector<std::uint64_t> anc;
    anc.reserve(cells.size());
    for (auto c : cells) anc.push_back(c / shift);
    std::sort(anc.begin(), anc.end());
    anc.erase(std::unique(anc.begin(), anc.end()), anc.end());

    BigRational total(0);
    for (const auto& trace : A.traces) {
        bool compat = true;
        for (auto a : anc)
            if (!std::binary_search(trace.begin(), trace.end(), a)) {
                compat = false;
                break;
            }
        if (compat) total += per_cyl;
    }
    return total;
}

}  // namespace

GammaResult gamma(const paths::CellSet& S) {
    GammaResult out;
    if (S.cells.empty()) return out;
    std::vector<std::uint64_t> idx;
    idx.reserve(S.cells.size());
    for (const auto& c : S.cells) idx.push_back(c.index(S.params));
    TupleProfile pr = profile(S.params, S.level, idx);
    std::uint64_t sz = S.cells.size();
    for (int k = 0; k <= S.level; ++k) out.value += sz - pr.classes[std::size_t(k)];
    out.stabilization_level = pr.separation;
    return out;
}

PathEvent PathEvent::of(std::vector<paths::CoarsePath> cylinders) {
    if (cylinders.empty()) throw std::invalid_argument("PathEvent::of: empty cylinder list");
    PathEvent e;
    e.level = cylinders.front().level;
    for (const auto& c : cylinders)
        if (c.level != e.level) throw std::invalid_argument("PathEvent: mixed cylinder levels");
    e.members = std::move(cylinders);
    return e;
}

BigRational PathEvent::measure(const LatticeParams& params) const {
    if (!members) return BigRational(1);
    return BigRational(members->size()) / BigRational(lattice::path_count(params, level));
}

BigRational rho_density(const paths::CellSet& S, const paths::CoarsePath& p) {
    if (S.level != p.level || !(S.params == p.params))
        throw std::invalid_argument("rho_density: level/params mismatch");
    auto trace = p.trace_indices();
    std::sort(trace.begin(), trace.end());
    for (const auto& cell : S.cells)
        if (!std::binary_search(trace.begin(), trace.end(), cell.index(S.params)))
            return BigRational(0);
    return BigRational(ipow(BigInt(S.params.b), std::uint64_t(S.level) * S.cells.size()));
}

BigRational rho_measure(const paths::CellSet& S, const PathEvent& A) {
    BigInt through = paths::count_paths_through(S);
    if (through == 0) return BigRational(0);
    GammaResult g = gamma(S);
    BigInt within;
    if (!A.members) {
        within = through;
    } else {
        within = 0;
        for (const auto& sigma : *A.members)
            within += paths::count_paths_through_in_cylinder(S, sigma);
    }
    return BigRational(ipow(BigInt(S.params.b), g.value)) * BigRational(within, through);
}

BigRational rho_tuple(const LatticeParams& params, int n,
                      const std::vector<std::uint64_t>& cells, const PathEvent& A) {
    TupleProfile pr = profile(params, n, cells);
    PreparedEvent pe = prepare(A);
    return BigRational(ipow(BigInt(params.b), std::uint64_t(n) * cells.size())) *
           mu_event_through(params, n, cells, pr, pe);
}

ConsistencyReport consistency_check(const LatticeParams& params, int k, int n, const PathEvent& A,
                                    std::uint64_t tuple_cap) {
    if (k < 1) throw std::invalid_argument("consistency_check: k >= 1");
    std::uint64_t cells = params.cells(n);
    std::uint64_t tuples = 1;
    for (int i = 0; i < k; ++i) {
        if (tuples > tuple_cap / cells) throw SizeCapError("consistency_check: tuple cap");
        tuples *= cells;
    }

    PreparedEvent pe = prepare(A);
    BigRational nu(1, ipow(BigInt(params.b) * params.s, std::uint64_t(n)));
    BigRational nu_outer = rpow(nu, std::uint64_t(k - 1));
    BigInt bpow_k = ipow(BigInt(params.b), std::uint64_t(n) * std::uint64_t(k));
    BigInt bpow_km1 = ipow(BigInt(params.b), std::uint64_t(n) * std::uint64_t(k - 1));

    ConsistencyReport rep;
    rep.k = k;
    rep.n = n;

    std::vector<std::uint64_t> outer(std::size_t(k) - 1, 0);
    BigRational total(0);
    for (;;) {
        // rho of the outer (k-1)-tuple
        std::vector<std::uint64_t> t(outer.begin(), outer.end());
        TupleProfile pr_outer = profile(params, n, t);
        BigRational rho_outer =
            BigRational(bpow_km1) * mu_event_through(params, n, t, pr_outer, pe);

        // marginalize the k-th slot
        BigRational inner(0);
        t.push_back(0);
        for (std::uint64_t x = 0; x < cells; ++x) {
            t.back() = x;
            TupleProfile pr = profile(params, n, t);
            inner += BigRational(bpow_k) * mu_event_through(params, n, t, pr, pe) * nu;
        }
        BigRational residual = inner - rho_outer;
        if (abs(residual) > rep.max_marginal_residual) rep.max_marginal_residual = abs(residual);
        total += inner * nu_outer;

        // next outer tuple
        std::size_t pos = outer.size();
        while (pos > 0 && outer[pos - 1] == cells - 1) outer[--pos] = 0;
        if (pos == 0) break;
        ++outer[pos - 1];
    }
    rep.total_mass_residual = abs(total - A.measure(params));
    return rep;
}

ChaosPartialSum chaos_partial_sum(const gmc::NoiseTree& tree, int n, double beta,
                                  const PathEvent& A, int max_order) {
    if (max_order < 0) throw std::invalid_argument("chaos_partial_sum: max_order >= 0");
    const LatticeParams& params = tree.params;
    if (n > tree.depth) throw std::invalid_argument("chaos_partial_sum: tree depth insufficient");
    BigInt gamma_count = lattice::path_count(params, n);
    if (gamma_count > BigInt(1) << 24) throw SizeCapError("chaos_partial_sum: too many paths");
    std::uint64_t path_total = gamma_count.convert_to<std::uint64_t>();

    std::vector<std::uint64_t> member_ordinals;
    if (A.members) {
        member_ordinals.reserve(A.members->size());
        for (const auto& sigma : *A.members) member_ordinals.push_back(paths::path_ordinal(sigma));
        std::sort(member_ordinals.begin(), member_ordinals.end());
    }

    double v = std::pow(params.ratio(), n);
    double mu_p = std::pow(double(params.b), -double(params.decision_count(n)));
    std::size_t terms = std::size_t(max_order) + 1;
    std::vector<double> acc(terms, 0.0);
    std::vector<double> poly(terms), next(terms);

    const std::vector<double>& xi = tree.xi[std::size_t(n)];
    for (std::uint64_t po = 0; po < path_total; ++po) {
        paths::CoarsePath p = paths::path_from_ordinal(params, n, po);
        if (A.members) {
            std::uint64_t mo = paths::path_ordinal(p.coarsen(A.level));
            if (!std::binary_search(member_ordinals.begin(), member_ordinals.end(), mo)) continue;
        }
        std::fill(poly.begin(), poly.end(), 0.0);
        poly[0] = 1.0;
        for (std::uint64_t cell : p.trace_indices()) {
            // cell factor exp(xi beta - v beta^2 / 2) as a truncated series
            double a = xi[cell];
            std::fill(next.begin(), next.end(), 0.0);
            // series coefficients t_r of the cell factor, convolved on the fly
            double t_prev = 0.0, t_cur = 1.0;
            for (std::size_t r = 0; r < terms; ++r) {
                if (t_cur != 0.0)
                    for (std::size_t q = 0; q + r < terms; ++q) next[q + r] += poly[q] * t_cur;
                double t_next = (a * t_cur - v * t_prev) / double(r + 1);
                t_prev = t_cur;
                t_cur = t_next;
            }
            std::swap(poly, next);
        }
        for (std::size_t r = 0; r < terms; ++r) acc[r] += mu_p * poly[r];
    }

    ChaosPartialSum out;
    out.per_order.resize(terms);
    double bpow = 1.0;
    for (std::size_t r = 0; r < terms; ++r) {
        out.per_order[r] = acc[r] * bpow;
        bpow *= beta;
        out.total += out.per_order[r];
    }
    return out;
}

double truncation_variance_exact(const LatticeParams& params, int n, double beta, int max_order) {
    intersection::Pgf g = intersection::intersection_pgf(params, n);
    double x = gmc::pair_interaction_exponent(params, n, beta);
    double tail = 0.0;
    for (std::size_t j = 0; j < g.coeff.size(); ++j) {
        if (g.coeff[j] == 0) continue;
        double y = x * double(j);
        // sum_{k > K} y^k / k!, forward series, no cancellation
        double term = 1.0;
        for (int k = 1; k <= max_order + 1; ++k) term *= y / double(k);
        double sum = 0.0;
        for (int k = max_order + 1; term > 0.0; ++k) {
            sum += term;
            term *= y / double(k + 1);
            if (term < 1e-18 * (sum + 1e-300)) break;
        }
        tail += to_double(g.coeff[j]) * sum;
    }
    return tail;
}

double chaos_order_variance(const LatticeParams& params, int n, double beta, int order) {
    if (order == 0) return 0.0;
    if (order > 3) throw std::invalid_argument("chaos_order_variance: order <= 3");
    auto moments = intersection::martingale_moments(params, n, order);
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= double(i);
    return std::pow(beta, 2 * order) * to_double(moments[std::size_t(order) - 1]) / fact;
}

}  // namespace dhl::chaos
