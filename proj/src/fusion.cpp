#include "mlg/fusion.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "mlg/kernels.hpp"

namespace mlg {

ModifiedLaplacian modified_laplacian(std::span<const ShiftedLaplacian> laps,
                                     std::span<const SpectralBasis> bases, double gamma) {
    if (laps.empty() || laps.size() != bases.size()) {
        throw SizeError("modified_laplacian needs matching nonempty Laplacian and basis lists");
    }
    if (!(gamma >= 0.0)) throw ParamError("gamma must be nonnegative");
    const Eigen::Index n = laps.front().values.rows();
    for (std::size_t v = 0; v < laps.size(); ++v) {
        if (laps[v].values.rows() != n || laps[v].values.cols() != n ||
            bases[v].vectors.rows() != n) {
            throw SizeError("layer " + std::to_string(v) + " dimension mismatch in fusion");
        }
    }

    Matrix acc = laps.front().values;
    for (std::size_t v = 1; v < laps.size(); ++v) acc += laps[v].values;
    if (gamma != 0.0) {
        // Skipped entirely at gamma == 0 so the single-layer case is an
        // exact copy of its shifted Laplacian.
        Matrix projector = bases.front().vectors * bases.front().vectors.transpose();
        for (std::size_t v = 1; v < bases.size(); ++v) {
            projector += bases[v].vectors * bases[v].vectors.transpose();
        }
        acc -= gamma * projector;
    }
    return ModifiedLaplacian{std::move(acc), gamma};
}

JointEmbedding joint_embedding(const ModifiedLaplacian& lm, int k) {
    const Eigen::Index n = lm.values.rows();
    if (k < 2 || k > n) {
        throw ParamError("embedding size k = " + std::to_string(k) + " outside [2, " +
                         std::to_string(n) + "]");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(lm.values);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("joint_embedding: eigendecomposition failed");
    }

    JointEmbedding embedding;
    embedding.vectors.resize(n, k);
    for (int j = 0; j < k; ++j) {
        embedding.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    embedding.normalized = kernels::row_normalize(embedding.vectors, 1e-12, &embedding.zero_rows);
    return embedding;
}

}  // namespace mlg
