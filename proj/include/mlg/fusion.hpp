#pragma once

#include <span>
#include <vector>

#include "mlg/graphs.hpp"
#include "mlg/types.hpp"

namespace mlg {

struct ModifiedLaplacian {
    Matrix values;
    double gamma = 0.0;

    int size() const { return static_cast<int>(values.rows()); }
};

struct JointEmbedding {
    Matrix vectors;            // N x k eigenvectors of L_mod
    Matrix normalized;         // unit row norms
    std::vector<int> zero_rows;  // rows replaced by e_1 before normalization
};

// L_mod = sum_v L_s^v - gamma * sum_v U_s^v (U_s^v)^T.
// gamma == 0 skips the projector sum entirely, so a single layer reduces to
// an exact copy of its shifted Laplacian.
ModifiedLaplacian modified_laplacian(std::span<const ShiftedLaplacian> laps,
                                     std::span<const SpectralBasis> bases,
                                     double gamma);

// Top-k eigenvectors of L_mod by descending eigenvalue (ties by index),
// rows normalized to unit norm. Numerically zero rows are replaced by the
// first standard basis direction and reported in zero_rows.
JointEmbedding joint_embedding(const ModifiedLaplacian& lm, int k);

}  // namespace mlg
