#include "dhl/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dhl/intersection.hpp"

namespace dhl::cascade {

double logsumexp(const double* v, int count) {
    double m = v[0];
    for (int i = 1; i < count; ++i) m = std::max(m, v[i]);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (int i = 0; i < count; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

std::vector<std::vector<double>> subtree_log_masses(const LatticeParams& params, int level,
                                                    std::vector<double> leaf_logs) {
    if (leaf_logs.size() != params.cells(level))
        throw std::invalid_argument("subtree_log_masses: wrong leaf count");
    std::vector<std::vector<double>> out(std::size_t(level) + 1);
    out[std::size_t(level)] = std::move(leaf_logs);
    double log_b = std::log(double(params.b));
    std::vector<double> branch(std::size_t(params.b));
    for (int k = level - 1; k >= 0; --k) {
        const std::vector<double>& below = out[std::size_t(k) + 1];
        std::vector<double> cur(params.cells(k));
        for (std::uint64_t c = 0; c < cur.size(); ++c) {
            std::uint64_t base = c * std::uint64_t(params.b) * params.s;
            for (int i = 0; i < params.b; ++i) {
                double sum = 0.0;
                for (int j = 0; j < params.s; ++j)
                    sum += below[base + std::uint64_t(i) * params.s + std::uint64_t(j)];
                branch[std::size_t(i)] = sum;
            }
            cur[c] = logsumexp(branch.data(), params.b) - log_b;
        }
        out[std::size_t(k)] = std::move(cur);
    }
    return out;
}

double log_mass(const LatticeParams& params, int level, std::vector<double> leaf_logs) {
    return subtree_log_masses(params, level, std::move(leaf_logs))[0][0];
}

double cylinder_log_mass(const LatticeParams& params,
                         const std::vector<std::vector<double>>& levels,
                         const paths::CoarsePath& cylinder) {
    int m = cylinder.level;
    if (std::size_t(m) >= levels.size())
        throw std::invalid_argument("cylinder_log_mass: cylinder deeper than the mass tree");
    double total = -double(params.decision_count(m)) * std::log(double(params.b));
    for (std::uint64_t cell : cylinder.trace_indices()) total += levels[std::size_t(m)][cell];
    return total;
}

paths::CoarsePath sample_path(const LatticeParams& params,
                              const std::vector<std::vector<double>>& levels, SplitRng& rng) {
    int n = int(levels.size()) - 1;
    std::vector<std::uint8_t> choices(params.decision_count(n));
    std::vector<double> branch(std::size_t(params.b));
    std::vector<std::uint64_t> subtree(std::size_t(n) + 1, 0);
    for (int d = 1; d <= n; ++d) subtree[std::size_t(d)] = 1 + std::uint64_t(params.s) * subtree[std::size_t(d) - 1];

    auto rec = [&](auto&& self, std::uint64_t cell, int k, std::uint64_t off) -> void {
        if (k == n) return;
        std::uint64_t base = cell * std::uint64_t(params.b) * params.s;
        for (int i = 0; i < params.b; ++i) {
            double sum = 0.0;
            for (int j = 0; j < params.s; ++j)
                sum += levels[std::size_t(k) + 1][base + std::uint64_t(i) * params.s + std::uint64_t(j)];
            branch[std::size_t(i)] = sum;
        }
        double norm = logsumexp(branch.data(), params.b);
        double u = rng.uniform01();
        int pick = params.b - 1;
        double acc = 0.0;
        for (int i = 0; i < params.b; ++i) {
            acc += std::exp(branch[std::size_t(i)] - norm);
            if (u <= acc) {
                pick = i;
                break;
            }
        }
        choices[off] = std::uint8_t(pick + 1);
        int d = n - k;
        for (int j = 0; j < params.s; ++j)
            self(self, base + std::uint64_t(pick) * params.s + std::uint64_t(j), k + 1,
                 off + 1 + std::uint64_t(j) * subtree[std::size_t(d) - 1]);
    };
    rec(rec, 0, 0, 0);
    return paths::CoarsePath(params, n, std::move(choices));
}

double pair_moment(const LatticeParams& params, int n, double leaf_exponent) {
    double w = std::expm1(leaf_exponent);
    for (int k = 0; k < n; ++k) {
        w = intersection::shifted_recursion_step(params, w);
        if (!(w < 1e300)) throw std::range_error("pair_moment: iterate overflow");
    }
    return 1.0 + w;
}

std::pair<double, double> triple_moment(const LatticeParams& params, int n, double leaf2,
                                        double leaf3) {
    double w = std::expm1(leaf2);
    double q = std::expm1(leaf3);
    double b = double(params.b);
    for (int k = 0; k < n; ++k) {
        double bin_w = intersection::shifted_recursion_step(params, w) * b;  // (1+w)^s - 1
        double bin_q = intersection::shifted_recursion_step(params, q) * b;
        q = (bin_q + 3.0 * (b - 1.0) * bin_w) / (b * b);
        w = bin_w / b;
        if (!(w < 1e300) || !(q < 1e300)) throw std::range_error("triple_moment: iterate overflow");
    }
    return {1.0 + w, 1.0 + q};
}

}  // namespace dhl::cascade
