#include "dhl/operator_y.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "dhl/errors.hpp"
#include "dhl/paths.hpp"

namespace dhl::operator_y {

namespace {

std::uint64_t gamma_count(const LatticeParams& params, int n) {
    BigInt c = lattice::path_count(params, n);
    if (c > BigInt(1) << 30) throw SizeCapError("operator matrix: too many paths");
    return c.convert_to<std::uint64_t>();
}

void check_cap(std::uint64_t rows, std::uint64_t cols, std::uint64_t cap, const char* where) {
    if (rows > cap / cols) throw SizeCapError(std::string(where) + ": |Gamma_n| * |E_n| exceeds cap");
}

// Singular values through the smaller Gram matrix; these spectra are
// exactly degenerate and the self-adjoint solver keeps them clean where a
// bidiagonalizing SVD of the wide matrix does not.
Eigen::VectorXd gram_singular_values(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd gram = m.rows() <= m.cols() ? Eigen::MatrixXd(m * m.transpose())
                                                : Eigen::MatrixXd(m.transpose() * m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues();  // ascending
    Eigen::VectorXd sv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        sv(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
    return sv;
}

}  // namespace

OperatorMatrix build_y_matrix(const LatticeParams& params, int n, std::uint64_t entry_cap) {
    return build_y_matrix_at(params, n, n, entry_cap);
}

OperatorMatrix build_y_matrix_at(const LatticeParams& params, int rep_level, int op_level,
                                 std::uint64_t entry_cap) {
    if (op_level < 0 || op_level > rep_level)
        throw std::invalid_argument("build_y_matrix_at: need 0 <= op_level <= rep_level");
    std::uint64_t rows = gamma_count(params, rep_level);
    std::uint64_t cols = params.cells(rep_level);
    check_cap(rows, cols, entry_cap, "build_y_matrix_at");

    // Entry(p, e) = sqrt(mu(p)) * b^op * (bs)^(-rep/2) on the level-rep
    // descendants of the op_level trace of [p]_op, zero elsewhere.
    double sqrt_mu = std::pow(double(params.b), -0.5 * double(params.decision_count(rep_level)));
    double value = sqrt_mu * std::pow(double(params.b), op_level) *
                   std::pow(double(params.b) * params.s, -0.5 * double(rep_level));
    std::uint64_t block = params.cells(rep_level - op_level);  // descendants per op-level cell

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(rows), Eigen::Index(cols));
    for (std::uint64_t pi = 0; pi < rows; ++pi) {
        paths::CoarsePath p = paths::path_from_ordinal(params, rep_level, pi);
        for (std::uint64_t cell : p.coarsen(op_level).trace_indices()) {
            std::uint64_t lo = cell * block;
            for (std::uint64_t e = lo; e < lo + block; ++e)
                m(Eigen::Index(pi), Eigen::Index(e)) = value;
        }
    }
    return OperatorMatrix{params, rep_level, op_level, std::move(m)};
}

SpectralSummary singular_values(const OperatorMatrix& matrix, double cluster_tol) {
    // Two-sided Jacobi: the predicted spectra contain exact zeros, which
    // Gram-based routes only resolve to sqrt(machine epsilon).
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix.m);
    Eigen::VectorXd sv = svd.singularValues();

    SpectralSummary out;
    out.operator_norm = sv.size() ? sv(0) : 0.0;
    out.hs_norm = matrix.m.norm();

    // Spectra here are exactly degenerate; cluster within tolerance and pad
    // zeros up to the domain dimension.
    std::uint64_t domain = std::uint64_t(matrix.m.cols());
    std::uint64_t counted = 0;
    for (Eigen::Index i = 0; i < sv.size();) {
        double v = sv(i);
        if (v < cluster_tol) break;  // remainder joins the zero cluster
        std::uint64_t mult = 0;
        while (i < sv.size() && std::fabs(sv(i) - v) <= cluster_tol) {
            ++mult;
            ++i;
        }
        out.values.emplace_back(v, mult);
        counted += mult;
    }
    if (counted < domain) out.values.emplace_back(0.0, domain - counted);
    return out;
}

std::vector<std::pair<double, std::uint64_t>> predicted_spectrum(const LatticeParams& params,
                                                                 int n) {
    std::vector<std::pair<double, std::uint64_t>> out;
    out.emplace_back(1.0, std::uint64_t(params.b));
    std::uint64_t rank = std::uint64_t(params.b);
    for (int k = 2; k <= n; ++k) {
        std::uint64_t mult = params.cells(k - 1) * std::uint64_t(params.b - 1);
        out.emplace_back(std::pow(double(params.s), -0.5 * (k - 1)), mult);
        rank += mult;
    }
    std::uint64_t domain = params.cells(n);
    if (rank < domain) out.emplace_back(0.0, domain - rank);
    return out;
}

std::uint64_t predicted_rank(const LatticeParams& params, int n) {
    std::uint64_t rank = std::uint64_t(params.b);
    for (int k = 2; k <= n; ++k) rank += params.cells(k - 1) * std::uint64_t(params.b - 1);
    return rank;
}

namespace {

// Helmert frame: v^(1) = (1,...,1)/sqrt(b); v^(l) supported on the first l
// coordinates with the sign pattern that keeps the frame orthonormal.
Eigen::MatrixXd helmert_frame(int b) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(b, b);
    for (int i = 0; i < b; ++i) f(i, 0) = 1.0 / std::sqrt(double(b));
    for (int l = 2; l <= b; ++l) {
        double norm = std::sqrt(double(l) * (l - 1));
        for (int i = 0; i < l - 1; ++i) f(i, l - 1) = 1.0 / norm;
        f(l - 1, l - 1) = -double(l - 1) / norm;
    }
    return f;
}

}  // namespace

EigenvectorFamily eigenbasis_f(const LatticeParams& params, int n, std::uint64_t entry_cap) {
    std::uint64_t rows = gamma_count(params, n);
    std::uint64_t cols = params.cells(n);
    check_cap(rows, cols, entry_cap, "eigenbasis_f");

    EigenvectorFamily fam;
    fam.params = params;
    fam.level = n;
    fam.frame = helmert_frame(params.b);

    std::size_t count = 1;
    for (int k = 0; k < n; ++k) count += params.cells(k) * std::size_t(params.b - 1);
    fam.members.reserve(count);
    fam.h_vectors = Eigen::MatrixXd::Zero(Eigen::Index(cols), Eigen::Index(count));
    fam.path_vectors = Eigen::MatrixXd::Zero(Eigen::Index(rows), Eigen::Index(count));

    double sqrt_nu = std::pow(double(params.b) * params.s, -0.5 * n);
    double sqrt_mu = std::pow(double(params.b), -0.5 * double(params.decision_count(n)));

    // Constant direction: Y 1 = 1.
    fam.members.push_back({-1, 0, 1, 1.0});
    for (std::uint64_t e = 0; e < cols; ++e) fam.h_vectors(Eigen::Index(e), 0) = sqrt_nu;
    for (std::uint64_t p = 0; p < rows; ++p) fam.path_vectors(Eigen::Index(p), 0) = sqrt_mu;

    // Precompute, per path ordinal and level k, the branch chosen inside
    // each level-k cell on its trace (only trace cells get a value).
    Eigen::Index col = 1;
    std::uint64_t bs = std::uint64_t(params.b) * params.s;
    for (int k = 0; k < n; ++k) {
        std::uint64_t cells_k = params.cells(k);
        std::uint64_t block = params.cells(n - k);  // level-n descendants per level-k cell
        double h_scale = std::pow(double(params.s) * params.b, 0.5 * k) *
                         std::sqrt(double(params.b)) * sqrt_nu;
        double p_scale = std::pow(double(params.b), 0.5 * k) * std::sqrt(double(params.b)) * sqrt_mu;
        double lambda = std::pow(double(params.s), -0.5 * k);

        for (std::uint64_t e = 0; e < cells_k; ++e) {
            for (int ell = 2; ell <= params.b; ++ell) {
                fam.members.push_back({k, e, ell, lambda});
                // Cell side: constant h_scale * v_i on descendants of e
                // whose next letter has branch i.
                std::uint64_t sub = block / bs;  // descendants per (branch, segment) child
                for (std::uint64_t t = 0; t < bs; ++t) {
                    int i = int(t / std::uint64_t(params.s));
                    double v = h_scale * fam.frame(i, ell - 1);
                    std::uint64_t lo = e * block + t * sub;
                    for (std::uint64_t c = lo; c < lo + sub; ++c)
                        fam.h_vectors(Eigen::Index(c), col) = v;
                }
                ++col;
            }
        }
        // Path side: fill by walking every path once per level.
        for (std::uint64_t pi = 0; pi < rows; ++pi) {
            paths::CoarsePath p = paths::path_from_ordinal(params, n, pi);
            paths::CoarsePath pk = p.coarsen(k + 1);
            // trace at level k+1 gives, for each level-k trace cell, the
            // chosen branch (the last letter's branch of its children).
            std::vector<std::uint64_t> tr = pk.trace_indices();
            for (std::uint64_t child : tr) {
                std::uint64_t cell_k = child / bs;
                int branch = int((child % bs) / std::uint64_t(params.s));
                // Columns for (k, cell_k, ell) start right after the ones
                // for smaller cells at this level.
                Eigen::Index base = col - Eigen::Index(cells_k * std::uint64_t(params.b - 1)) +
                                    Eigen::Index(cell_k * std::uint64_t(params.b - 1));
                for (int ell = 2; ell <= params.b; ++ell)
                    fam.path_vectors(Eigen::Index(pi), base + (ell - 2)) =
                        p_scale * fam.frame(branch, ell - 1);
            }
        }
    }
    return fam;
}

EigenActionReport verify_eigenaction(const EigenvectorFamily& family,
                                     const OperatorMatrix& matrix) {
    if (matrix.rep_level != family.level || matrix.op_level != family.level)
        throw std::invalid_argument("verify_eigenaction: matrix/family level mismatch");
    EigenActionReport rep;
    Eigen::MatrixXd action = matrix.m * family.h_vectors;
    for (Eigen::Index c = 0; c < action.cols(); ++c) {
        double lambda = family.members[std::size_t(c)].eigenvalue;
        double r = (action.col(c) - lambda * family.path_vectors.col(c)).cwiseAbs().maxCoeff();
        rep.max_action_residual = std::max(rep.max_action_residual, r);
    }
    Eigen::MatrixXd gram = family.h_vectors.transpose() * family.h_vectors;
    gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    rep.max_gram_residual = gram.cwiseAbs().maxCoeff();
    return rep;
}

Eigen::MatrixXd projection_matrix(const EigenvectorFamily& family, int m) {
    Eigen::Index cols = 0;
    for (const auto& mem : family.members)
        if (mem.cell_level < m) ++cols;
    Eigen::MatrixXd f(family.h_vectors.rows(), cols);
    Eigen::Index at = 0;
    for (Eigen::Index c = 0; c < Eigen::Index(family.members.size()); ++c)
        if (family.members[std::size_t(c)].cell_level < m) f.col(at++) = family.h_vectors.col(c);
    return f * f.transpose();
}

Eigen::MatrixXd kernel_matrix(const LatticeParams& params, int n, std::uint64_t entry_cap) {
    std::uint64_t rows = gamma_count(params, n);
    check_cap(rows, rows, entry_cap, "kernel_matrix");
    std::vector<paths::CoarsePath> all = paths::enumerate_paths(params, n);
    double scale = std::pow(params.ratio(), n);
    Eigen::MatrixXd k{Eigen::Index(rows), Eigen::Index(rows)};
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = i; j < rows; ++j) {
            double v = scale * double(paths::shared_bonds(all[i], all[j]));
            k(Eigen::Index(i), Eigen::Index(j)) = v;
            k(Eigen::Index(j), Eigen::Index(i)) = v;
        }
    return k;
}

BigRational hs_norm_sq_exact(const LatticeParams& params, int n) {
    // b + (b-1) sum_{j=1}^{n-1} (b/s)^j, the sum of squared eigenvalues of
    // Y^(n) (Y^(n))^* with multiplicities.
    BigRational r(params.b, params.s);
    BigRational sum = params.b;
    BigRational pw = 1;
    for (int j = 1; j <= n - 1; ++j) {
        pw *= r;
        sum += BigRational(params.b - 1) * pw;
    }
    return sum;
}

double hs_norm_yyt(const LatticeParams& params, int n) {
    return std::sqrt(to_double(hs_norm_sq_exact(params, n)));
}

double hs_limit(const LatticeParams& params) {
    params.require_gmc_regime("hs_limit");
    return std::sqrt(double(params.b) * (params.s - 1) / double(params.s - params.b));
}

BigRational hs_gap_sq_exact(const LatticeParams& params, int n) {
    params.require_gmc_regime("hs_gap_sq_exact");
    // Tail sum (b-1) sum_{j >= n} (b/s)^j = (b-1)(b/s)^n s/(s-b).
    BigRational r(params.b, params.s);
    return BigRational(params.b - 1) * rpow(r, std::uint64_t(n)) *
           BigRational(params.s, params.s - params.b);
}

double hs_gap(const LatticeParams& params, int n) {
    params.require_gmc_regime("hs_gap");
    return std::pow(params.ratio(), 0.5 * n) *
           std::sqrt(double(params.s) * (params.b - 1) / double(params.s - params.b));
}

BigRational partial_trace(const LatticeParams& params, int n) {
    // b + (b-1) sum_{k=2}^{n} b^{k-1}; diverges with n.
    BigRational sum = params.b;
    BigInt bp = 1;
    for (int k = 2; k <= n; ++k) {
        bp *= params.b;
        sum += BigRational(BigInt(params.b - 1) * bp);
    }
    return sum;
}

double operator_norm_gap(const LatticeParams& params, int big_level, int small_level,
                         std::uint64_t entry_cap) {
    OperatorMatrix yn = build_y_matrix_at(params, big_level, big_level, entry_cap);
    OperatorMatrix ym = build_y_matrix_at(params, big_level, small_level, entry_cap);
    return gram_singular_values(yn.m - ym.m)(0);
}

}  // namespace dhl::operator_y
