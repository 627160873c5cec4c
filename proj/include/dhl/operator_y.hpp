#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "dhl/params.hpp"
#include "dhl/rational.hpp"

namespace dhl::operator_y {

inline constexpr std::uint64_t kDefaultEntryCap = 10'000'000;

// Matrix of the path-averaging operator with respect to the orthonormal
// indicator bases chi_p / sqrt(mu(p)) (rows) and chi_e / sqrt(nu(e))
// (columns). rep_level fixes the bases; op_level <= rep_level selects
// Y^(op_level), i.e. the conditional coarse-graining of Y at that depth.
struct OperatorMatrix {
    LatticeParams params;
    int rep_level = 0;
    int op_level = 0;
    Eigen::MatrixXd m;  // |Gamma_rep| x |E_rep|
};

OperatorMatrix build_y_matrix(const LatticeParams& params, int n,
                              std::uint64_t entry_cap = kDefaultEntryCap);
OperatorMatrix build_y_matrix_at(const LatticeParams& params, int rep_level, int op_level,
                                 std::uint64_t entry_cap = kDefaultEntryCap);

// Singular values clustered into (value, multiplicity) pairs, padded with
// zeros up to the domain dimension |E_n|.
struct SpectralSummary {
    std::vector<std::pair<double, std::uint64_t>> values;  // descending
    double operator_norm = 0.0;
    double hs_norm = 0.0;  // Hilbert-Schmidt norm of the matrix itself
};

SpectralSummary singular_values(const OperatorMatrix& matrix, double cluster_tol = 1e-8);

// The spectrum the eigenstructure predicts: 1 with multiplicity b,
// s^{-(k-1)/2} with multiplicity (bs)^{k-1}(b-1) for 2 <= k <= n, zero on
// the rest of the domain.
std::vector<std::pair<double, std::uint64_t>> predicted_spectrum(const LatticeParams& params,
                                                                 int n);

// Rank of Y^(n): b + sum_{k=2..n} (bs)^{k-1}(b-1).
std::uint64_t predicted_rank(const LatticeParams& params, int n);

// Eigenvector family f_(e,l) for cells e of level k <= n-1 and l in 2..b,
// plus the constant direction, expressed in the rep_level-n orthonormal
// bases. The frame v^(l) completing v^(1) = (1,...,1)/sqrt(b) is the
// Helmert frame.
struct EigenvectorFamily {
    struct Member {
        int cell_level = 0;       // k; the constant uses cell_level = -1
        std::uint64_t cell = 0;   // level-k cell index
        int ell = 1;              // frame row, 2..b for non-constant members
        double eigenvalue = 1.0;  // s^{-k/2}
    };

    LatticeParams params;
    int level = 0;
    std::vector<Member> members;
    Eigen::MatrixXd frame;         // b x b, column l-1 = v^(l)
    Eigen::MatrixXd h_vectors;     // |E_n| x members
    Eigen::MatrixXd path_vectors;  // |Gamma_n| x members
};

EigenvectorFamily eigenbasis_f(const LatticeParams& params, int n,
                               std::uint64_t entry_cap = kDefaultEntryCap);

struct EigenActionReport {
    double max_action_residual = 0.0;  // max |Y f - lambda f_hat| entry
    double max_gram_residual = 0.0;    // max |F^T F - I| entry, cell side
};

EigenActionReport verify_eigenaction(const EigenvectorFamily& family,
                                     const OperatorMatrix& matrix);

// Orthogonal projection onto the eigen-directions through level m
// (constants plus cells of level <= m-1), in level-n cell coordinates.
Eigen::MatrixXd projection_matrix(const EigenvectorFamily& family, int m);

// K^(n)(p,q) = (b/s)^n N^(n)(p,q) over all path pairs.
Eigen::MatrixXd kernel_matrix(const LatticeParams& params, int n,
                              std::uint64_t entry_cap = kDefaultEntryCap);

// Hilbert-Schmidt data for Y^(n) (Y^(n))^*: exact finite sums and the
// closed-form limit b(s-1)/(s-b).
BigRational hs_norm_sq_exact(const LatticeParams& params, int n);
double hs_norm_yyt(const LatticeParams& params, int n);
double hs_limit(const LatticeParams& params);
BigRational hs_gap_sq_exact(const LatticeParams& params, int n);
double hs_gap(const LatticeParams& params, int n);  // (b/s)^{n/2} sqrt(s(b-1)/(s-b))

// Partial traces of Y^(n) (Y^(n))^*; unbounded in n (not trace class).
BigRational partial_trace(const LatticeParams& params, int n);

// Largest singular value of (Y^(N) - Y^(n)) in level-N coordinates.
double operator_norm_gap(const LatticeParams& params, int big_level, int small_level,
                         std::uint64_t entry_cap = kDefaultEntryCap);

}  // namespace dhl::operator_y
