#pragma once

#include <cstdint>
#include <vector>

#include "dhl/params.hpp"
#include "dhl/paths.hpp"
#include "dhl/rng.hpp"

namespace dhl::cascade {

// Log-domain evaluation of the hierarchical average
//   Z(cell) = (1/b) sum_i prod_j Z(child i,j)
// from leaf log-weights at the given level. Returns the per-level subtree
// logs; [0] is the total, [level] the leaves.
std::vector<std::vector<double>> subtree_log_masses(const LatticeParams& params, int level,
                                                    std::vector<double> leaf_logs);

double log_mass(const LatticeParams& params, int level, std::vector<double> leaf_logs);

// Restriction of the total to the cylinder of a level-m coarse path: the
// cylinder's decision nodes are forced, everything below stays averaged.
double cylinder_log_mass(const LatticeParams& params,
                         const std::vector<std::vector<double>>& levels,
                         const paths::CoarsePath& cylinder);

// One path drawn from the normalized mass (branch weights proportional to
// the product of subtree masses along each branch).
paths::CoarsePath sample_path(const LatticeParams& params,
                              const std::vector<std::vector<double>>& levels, SplitRng& rng);

// E[Z^2] as the n-fold moment recursion from a per-edge pair factor
// exp(leaf_exponent). Evaluated in the shifted variable u-1 so deep
// levels, where the factor is within an ulp of 1, keep full relative
// precision. Throws std::range_error on overflow.
double pair_moment(const LatticeParams& params, int n, double leaf_exponent);

// (E[Z^2], E[Z^3]) from per-edge pair/triple factors exp(leaf2), exp(leaf3).
std::pair<double, double> triple_moment(const LatticeParams& params, int n, double leaf2,
                                        double leaf3);

double logsumexp(const double* v, int count);

}  // namespace dhl::cascade
