#include "dhl/gmc.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "dhl/errors.hpp"
#include "dhl/intersection.hpp"

namespace dhl::gmc {

namespace {

// One bridge step: children of level k get variance (b/s)^(k+1) marginals
// with the single linear constraint that their (1/b)-sum reproduce the
// parent. eta are the free draws.
void bridge_level(const LatticeParams& params, const std::vector<double>& parent,
                  std::vector<double>& child, int parent_level,
                  const std::function<double(std::uint64_t)>& draw) {
    int bs = params.b * params.s;
    double sigma = std::pow(params.ratio(), 0.5 * (parent_level + 1));
    child.resize(parent.size() * std::uint64_t(bs));
    for (std::uint64_t c = 0; c < parent.size(); ++c) {
        std::uint64_t base = c * std::uint64_t(bs);
        double sum = 0.0;
        for (int t = 0; t < bs; ++t) {
            double eta = sigma * draw(base + std::uint64_t(t));
            child[base + std::uint64_t(t)] = eta;
            sum += eta;
        }
        double shift = (parent[c] - sum / params.b) / params.s;
        for (int t = 0; t < bs; ++t) child[base + std::uint64_t(t)] += shift;
    }
}

}  // namespace

NoiseTree NoiseTree::sample(const LatticeParams& params, int n, std::uint64_t seed) {
    NoiseTree t;
    t.params = params;
    t.depth = n;
    t.seed = seed;
    t.xi.resize(std::size_t(n) + 1);
    SplitRng root(seed);
    t.xi[0] = {root.derive(0, 0).normal()};
    for (int k = 0; k < n; ++k) {
        SplitRng level_rng(seed);
        bridge_level(params, t.xi[std::size_t(k)], t.xi[std::size_t(k) + 1], k,
                     [&](std::uint64_t cell) {
                         SplitRng r = level_rng.derive(std::uint64_t(k) + 1, cell);
                         return r.normal();
                     });
    }
    return t;
}

NoiseTree NoiseTree::zeros(const LatticeParams& params, int n) {
    NoiseTree t;
    t.params = params;
    t.depth = n;
    t.seed = 0;
    t.xi.resize(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) t.xi[std::size_t(k)].assign(params.cells(k), 0.0);
    return t;
}

NoiseTree NoiseTree::extended(int new_depth) const {
    if (new_depth < depth) throw std::invalid_argument("extended: new depth below current");
    NoiseTree t = *this;
    t.depth = new_depth;
    t.xi.resize(std::size_t(new_depth) + 1);
    for (int k = depth; k < new_depth; ++k) {
        SplitRng level_rng(seed);
        bridge_level(params, t.xi[std::size_t(k)], t.xi[std::size_t(k) + 1], k,
                     [&](std::uint64_t cell) {
                         SplitRng r = level_rng.derive(std::uint64_t(k) + 1, cell);
                         return r.normal();
                     });
    }
    return t;
}

NoiseTree NoiseTree::extended_random(SplitRng& rng) const {
    NoiseTree t = *this;
    t.depth = depth + 1;
    t.xi.resize(std::size_t(depth) + 2);
    bridge_level(params, t.xi[std::size_t(depth)], t.xi[std::size_t(depth) + 1], depth,
                 [&](std::uint64_t) { return rng.normal(); });
    return t;
}

NoiseTree NoiseTree::truncated(int m) const {
    if (m < 0 || m > depth) throw std::invalid_argument("truncated: bad depth");
    NoiseTree t = *this;
    t.depth = m;
    t.xi.resize(std::size_t(m) + 1);
    return t;
}

double NoiseTree::consistency_residual() const {
    double worst = 0.0;
    int bs = params.b * params.s;
    for (int k = 0; k < depth; ++k) {
        const auto& parent = xi[std::size_t(k)];
        const auto& child = xi[std::size_t(k) + 1];
        for (std::uint64_t c = 0; c < parent.size(); ++c) {
            double sum = 0.0;
            for (int t = 0; t < bs; ++t) sum += child[c * std::uint64_t(bs) + std::uint64_t(t)];
            worst = std::max(worst, std::fabs(parent[c] - sum / params.b));
        }
    }
    return worst;
}

double pair_field(const NoiseTree& tree, const std::vector<double>& psi, int k) {
    if (k > tree.depth) throw std::invalid_argument("pair_field: level exceeds tree depth");
    if (psi.size() != tree.params.cells(k)) throw std::invalid_argument("pair_field: psi size");
    double acc = 0.0;
    for (std::uint64_t c = 0; c < psi.size(); ++c) acc += psi[c] * tree.xi[std::size_t(k)][c];
    return acc / std::pow(double(tree.params.b), k);
}

double cell_function_norm_sq(const LatticeParams& params, const std::vector<double>& psi, int k) {
    double acc = 0.0;
    for (double v : psi) acc += v * v;
    return acc / std::pow(double(params.b) * params.s, k);
}

double gmc_log_weight(const NoiseTree& tree, const paths::CoarsePath& p, double beta) {
    int n = p.level;
    if (n > tree.depth) throw std::invalid_argument("gmc_log_weight: tree depth insufficient");
    double acc = 0.0;
    for (std::uint64_t cell : p.trace_indices()) acc += tree.xi[std::size_t(n)][cell];
    double norm_sq = double(tree.params.segments(n)) * std::pow(tree.params.ratio(), n);
    return beta * acc - 0.5 * beta * beta * norm_sq;
}

std::vector<double> leaf_log_weights(const NoiseTree& tree, int n, double beta) {
    if (n > tree.depth) throw std::invalid_argument("leaf_log_weights: tree depth insufficient");
    double half_var = 0.5 * beta * beta * std::pow(tree.params.ratio(), n);
    std::vector<double> logs(tree.xi[std::size_t(n)].size());
    for (std::uint64_t c = 0; c < logs.size(); ++c)
        logs[c] = beta * tree.xi[std::size_t(n)][c] - half_var;
    return logs;
}

double total_log_mass(const NoiseTree& tree, int n, double beta) {
    return cascade::log_mass(tree.params, n, leaf_log_weights(tree, n, beta));
}

double total_mass(const NoiseTree& tree, int n, double beta) {
    return std::exp(total_log_mass(tree, n, beta));
}

double cylinder_mass(const NoiseTree& tree, const paths::CoarsePath& cylinder, int n, double beta) {
    auto levels = cascade::subtree_log_masses(tree.params, n, leaf_log_weights(tree, n, beta));
    return std::exp(cascade::cylinder_log_mass(tree.params, levels, cylinder));
}

double pair_interaction_exponent(const LatticeParams& params, int n, double beta) {
    return beta * beta * std::pow(params.ratio(), n);
}

double two_replica_moment(const LatticeParams& params, int n, double beta) {
    return cascade::pair_moment(params, n, pair_interaction_exponent(params, n, beta));
}

double three_replica_moment(const LatticeParams& params, int n, double beta) {
    double v = std::pow(params.ratio(), n);
    return cascade::triple_moment(params, n, beta * beta * v, 3.0 * beta * beta * v).second;
}

MartingaleReport refinement_martingale_check(const LatticeParams& params, int n, double beta,
                                             std::uint64_t trials, std::uint64_t seed) {
    RunningStat diff;
    RunningStat zn_stat;
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        NoiseTree t = NoiseTree::sample(params, n, SplitRng(seed).derive(i).next_u64());
        double zn = total_mass(t, n, beta);
        double znp = total_mass(t.extended(n + 1), n + 1, beta);
        diff.add(znp - zn);
        zn_stat.add(zn);
        sx += zn;
        sy += znp;
        sxy += zn * znp;
        sxx += zn * zn;
    }
    MartingaleReport rep;
    rep.trials = trials;
    rep.mean_diff = diff.mean;
    rep.se_diff = diff.std_error();
    double num = sxy - sx * sy / double(trials);
    double den = sxx - sx * sx / double(trials);
    rep.regression_slope = num / den;
    return rep;
}

ConditionalReport conditional_refinement_check(const NoiseTree& tree, double beta,
                                               std::uint64_t inner_trials, std::uint64_t seed) {
    ConditionalReport rep;
    rep.z_n = total_mass(tree, tree.depth, beta);
    SplitRng rng(seed);
    RunningStat stat;
    for (std::uint64_t i = 0; i < inner_trials; ++i) {
        NoiseTree deeper = tree.extended_random(rng);
        stat.add(total_mass(deeper, deeper.depth, beta));
    }
    rep.inner_mean = stat.mean;
    rep.inner_se = stat.std_error();
    return rep;
}

CompositionReport composition_check(const LatticeParams& params, int n, double beta) {
    params.require_gmc_regime("composition_check");
    CompositionReport rep;
    double beta_up = beta * std::sqrt(double(params.s) / params.b);

    double v_direct = pair_interaction_exponent(params, n + 1, beta_up);
    double v_comp = pair_interaction_exponent(params, n, beta);
    rep.m2_direct = cascade::pair_moment(params, n + 1, v_direct);
    rep.m2_composed = cascade::pair_moment(params, n + 1, v_comp);  // one combine step past level n
    rep.m3_direct = cascade::triple_moment(params, n + 1, v_direct, 3.0 * v_direct).second;
    rep.m3_composed = cascade::triple_moment(params, n + 1, v_comp, 3.0 * v_comp).second;
    rep.max_moment_diff = std::max({std::fabs(rep.m1_direct - rep.m1_composed),
                                    std::fabs(rep.m2_direct - rep.m2_composed),
                                    std::fabs(rep.m3_direct - rep.m3_composed)});
    return rep;
}

std::vector<double> sample_total_masses(const LatticeParams& params, int n, double beta,
                                        std::uint64_t count, std::uint64_t seed) {
    std::vector<double> out(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        NoiseTree t = NoiseTree::sample(params, n, SplitRng(seed).derive(i).next_u64());
        out[i] = total_mass(t, n, beta);
    }
    return out;
}

std::vector<double> sample_composed_masses(const LatticeParams& params, int n, double beta,
                                           std::uint64_t count, std::uint64_t seed) {
    std::vector<double> out(count);
    int bs = params.b * params.s;
    std::vector<double> branch(std::size_t(params.b));
    for (std::uint64_t i = 0; i < count; ++i) {
        for (int i_branch = 0; i_branch < params.b; ++i_branch) branch[std::size_t(i_branch)] = 0.0;
        for (int t = 0; t < bs; ++t) {
            NoiseTree tree = NoiseTree::sample(
                params, n, SplitRng(seed).derive(i, std::uint64_t(t) + 1).next_u64());
            branch[std::size_t(t / params.s)] += total_log_mass(tree, n, beta);
        }
        out[i] = std::exp(cascade::logsumexp(branch.data(), params.b)) / params.b;
    }
    return out;
}

ShiftReport shift_identity_check(const LatticeParams& params, int n, double beta,
                                 const std::vector<double>& psi, int psi_level,
                                 std::uint64_t trials, std::uint64_t seed) {
    if (psi_level > n) throw std::invalid_argument("shift_identity_check: psi level exceeds n");
    if (psi.size() != params.cells(psi_level))
        throw std::invalid_argument("shift_identity_check: psi size");

    ShiftReport rep;
    // Exact side: the tilt exp(beta <Y_p, psi>) factorizes over the path's
    // level-k trace with per-cell factor exp(beta psi_e / s^k).
    double path_time = std::pow(double(params.s), -psi_level);
    std::vector<double> leaf(psi.size());
    for (std::uint64_t c = 0; c < psi.size(); ++c) leaf[c] = beta * path_time * psi[c];
    rep.exact = std::exp(cascade::log_mass(params, psi_level, std::move(leaf)));

    double norm_sq = cell_function_norm_sq(params, psi, psi_level);
    RunningStat stat;
    for (std::uint64_t i = 0; i < trials; ++i) {
        NoiseTree t = NoiseTree::sample(params, n, SplitRng(seed).derive(i).next_u64());
        double logz = total_log_mass(t, n, beta);
        double field = pair_field(t, psi, psi_level);
        stat.add(std::exp(logz + field - 0.5 * norm_sq));
    }
    rep.mc_mean = stat.mean;
    rep.mc_se = stat.std_error();
    return rep;
}

FractionalReport fractional_moment_mc(const LatticeParams& params, int n, double beta,
                                      std::uint64_t trials, std::uint64_t seed) {
    FractionalReport rep;
    rep.bound = std::exp(-beta * beta / 8.0);
    RunningStat stat;
    for (std::uint64_t i = 0; i < trials; ++i) {
        NoiseTree t = NoiseTree::sample(params, n, SplitRng(seed).derive(i).next_u64());
        stat.add(std::exp(0.5 * total_log_mass(t, n, beta)));
    }
    rep.mc_mean = stat.mean;
    rep.mc_se = stat.std_error();
    return rep;
}

double max_cylinder_share(const NoiseTree& tree, int n, int m, double beta) {
    if (m > n) throw std::invalid_argument("max_cylinder_share: m <= n required");
    auto levels = cascade::subtree_log_masses(tree.params, n, leaf_log_weights(tree, n, beta));
    double total = levels[0][0];
    double best = -1e300;
    BigInt count = lattice::path_count(tree.params, m);
    if (count > 1 << 20) throw SizeCapError("max_cylinder_share: too many level-m cylinders");
    std::uint64_t cnt = count.convert_to<std::uint64_t>();
    for (std::uint64_t o = 0; o < cnt; ++o) {
        paths::CoarsePath sigma = paths::path_from_ordinal(tree.params, m, o);
        best = std::max(best, cascade::cylinder_log_mass(tree.params, levels, sigma));
    }
    return std::exp(best - total);
}

std::vector<double> median_max_share(const LatticeParams& params, int n, int m,
                                     const std::vector<double>& betas, std::uint64_t tree_count,
                                     std::uint64_t seed) {
    std::vector<std::vector<double>> shares(betas.size());
    for (auto& s : shares) s.reserve(tree_count);
    for (std::uint64_t i = 0; i < tree_count; ++i) {
        NoiseTree t = NoiseTree::sample(params, n, SplitRng(seed).derive(i).next_u64());
        for (std::size_t bi = 0; bi < betas.size(); ++bi)
            shares[bi].push_back(max_cylinder_share(t, n, m, betas[bi]));
    }
    std::vector<double> out(betas.size());
    for (std::size_t bi = 0; bi < betas.size(); ++bi) out[bi] = median(shares[bi]);
    return out;
}

double tilted_intersection_moment(const LatticeParams& params, int n, double beta, double alpha) {
    double exponent = (alpha + beta * beta) * std::pow(params.ratio(), n);
    return cascade::pair_moment(params, n, exponent);
}

TiltedMcReport tilted_intersection_moment_mc(const LatticeParams& params, int n, double beta,
                                             double alpha, std::uint64_t trials,
                                             std::uint64_t seed) {
    TiltedMcReport rep;
    rep.exact = tilted_intersection_moment(params, n, beta, alpha);
    double scale = std::pow(params.ratio(), n);
    RunningStat stat;
    for (std::uint64_t i = 0; i < trials; ++i) {
        SplitRng rng = SplitRng(seed).derive(i);
        NoiseTree t = NoiseTree::sample(params, n, rng.next_u64());
        auto levels = cascade::subtree_log_masses(params, n, leaf_log_weights(t, n, beta));
        double z = std::exp(levels[0][0]);
        paths::CoarsePath p = cascade::sample_path(params, levels, rng);
        paths::CoarsePath q = cascade::sample_path(params, levels, rng);
        double m = scale * double(paths::shared_bonds(p, q));
        stat.add(z * z * std::exp(alpha * m));
    }
    rep.mc_mean = stat.mean;
    rep.mc_se = stat.std_error();
    return rep;
}

}  // namespace dhl::gmc
