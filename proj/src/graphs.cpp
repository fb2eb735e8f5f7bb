#include "mlg/graphs.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "mlg/kernels.hpp"

namespace mlg {

namespace {

void check_square_symmetric(const Matrix& c, const char* what) {
    if (c.rows() != c.cols()) {
        throw SizeError(std::string(what) + " needs a square matrix, got " +
                        std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
    }
    if (!c.allFinite()) throw NonFiniteError(std::string(what) + ": non-finite input");
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            if (std::abs(c(i, j) - c(j, i)) > 1e-12) {
                throw ParamError(std::string(what) + ": input is not symmetric at (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> decompose(const Matrix& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalError(std::string(what) + ": eigendecomposition failed");
    }
    return solver;
}

}  // namespace

AffinityGraph affinity_classic(const Matrix& c) {
    check_square_symmetric(c, "affinity_classic");
    AffinityGraph g;
    g.weights = c;
    g.degrees = kernels::row_sums(g.weights);
    return g;
}

AffinityGraph affinity_angular(const Matrix& c, double delta) {
    if (!(delta > 0.0)) throw ParamError("delta must be positive");
    check_square_symmetric(c, "affinity_angular");

    // SVD of the symmetric input via its eigendecomposition: C = Q A Q^T
    // gives singular values |a_l| with left vectors q_l up to sign, and the
    // cosine of two rows of M = U S^{1/2} is sign-invariant in the columns.
    const auto solver = decompose(c, "affinity_angular");
    const Vector eigenvalues = solver.eigenvalues();
    const Matrix& q = solver.eigenvectors();

    const double sigma_max = eigenvalues.cwiseAbs().maxCoeff();
    const double cutoff = kAngularTol * sigma_max;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index l = 0; l < eigenvalues.size(); ++l) {
        if (std::abs(eigenvalues(l)) > cutoff) kept.push_back(l);
    }

    Matrix m(c.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t idx = 0; idx < kept.size(); ++idx) {
        const Eigen::Index l = kept[idx];
        m.col(static_cast<Eigen::Index>(idx)) = q.col(l) * std::sqrt(std::abs(eigenvalues(l)));
    }

    AffinityGraph g;
    g.weights = kernels::pairwise_abs_cosine_pow(m, delta, kAngularTol);
    g.degrees = kernels::row_sums(g.weights);
    return g;
}

Matrix normalized_laplacian(const AffinityGraph& g) {
    Matrix shifted = kernels::shifted_laplacian_matrix(g.weights, g.degrees, kDegreeClamp);
    // L = 2I - L_s, elementwise so the identity holds exactly.
    Matrix l(shifted.rows(), shifted.cols());
    for (Eigen::Index j = 0; j < shifted.cols(); ++j) {
        for (Eigen::Index i = 0; i < shifted.rows(); ++i) {
            l(i, j) = (i == j ? 2.0 : 0.0) - shifted(i, j);
        }
    }
    return l;
}

ShiftedLaplacian shifted_laplacian(const AffinityGraph& g) {
    return ShiftedLaplacian{kernels::shifted_laplacian_matrix(g.weights, g.degrees, kDegreeClamp)};
}

SpectralBasis spectral_basis(const ShiftedLaplacian& l, int k, EigenOrder order) {
    const int n = l.size();
    if (k < 1 || k > n) {
        throw ParamError("basis size k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
    }
    const auto solver = decompose(l.values, "spectral_basis");

    SpectralBasis basis;
    basis.vectors.resize(n, k);
    basis.eigenvalues.resize(k);
    if (order == EigenOrder::largest) {
        // Eigen sorts ascending; take the top block in descending order.
        for (int j = 0; j < k; ++j) {
            const Eigen::Index src = n - 1 - j;
            basis.vectors.col(j) = solver.eigenvectors().col(src);
            basis.eigenvalues(j) = solver.eigenvalues()(src);
        }
    } else {
        for (int j = 0; j < k; ++j) {
            basis.vectors.col(j) = solver.eigenvectors().col(j);
            basis.eigenvalues(j) = solver.eigenvalues()(j);
        }
    }
    return basis;
}

}  // namespace mlg
