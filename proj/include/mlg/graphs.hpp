#pragma once

#include "mlg/types.hpp"

namespace mlg {

struct AffinityGraph {
    Matrix weights;   // symmetric, nonnegative
    Vector degrees;   // row sums of weights

    int size() const { return static_cast<int>(weights.rows()); }
};

// L_s = I + D^{-1/2} W D^{-1/2}; spectrum in [0, 2].
struct ShiftedLaplacian {
    Matrix values;

    int size() const { return static_cast<int>(values.rows()); }
};

struct SpectralBasis {
    Matrix vectors;      // N x k, orthonormal columns
    Vector eigenvalues;  // the k selected eigenvalues, in selection order
    int source_layer = 0;
};

// Degrees below this are clamped before the inverse square root, so isolated
// vertices degrade gracefully instead of dividing by zero.
inline constexpr double kDegreeClamp = 1e-12;

// Relative singular-value cutoff and row-norm floor in the angular affinity.
inline constexpr double kAngularTol = 1e-12;

// Identity on an already symmetric nonnegative matrix; computes degrees.
AffinityGraph affinity_classic(const Matrix& c);

// SVD-based angular affinity: from C = U S V^T form M = U S^{1/2} (dropping
// singular values below kAngularTol * s_max) and set
// W(i,j) = |cos(m_i, m_j)|^delta over the rows m_i of M, with W(i,i) = 1.
// Rows of M with norm below kAngularTol get zero off-diagonal affinities.
AffinityGraph affinity_angular(const Matrix& c, double delta);

// L = I - D^{-1/2} W D^{-1/2}, same degree clamping as the shifted variant.
Matrix normalized_laplacian(const AffinityGraph& g);

ShiftedLaplacian shifted_laplacian(const AffinityGraph& g);

// Symmetric eigendecomposition of L_s; selects the k extreme eigenpairs.
// order == largest: columns sorted by descending eigenvalue;
// order == smallest: ascending. Ties keep the solver's ascending index order.
SpectralBasis spectral_basis(const ShiftedLaplacian& l, int k, EigenOrder order);

}  // namespace mlg
