#pragma once

#include <vector>

#include "mlg/types.hpp"

// Data-parallel inner loops of the toolkit. Every kernel exists twice: the
// OpenMP version in mlg::kernels and a serial reference in
// mlg::kernels::serial. Both share the same per-element scalar code, so the
// outputs are bit-identical for any thread count; tests and the kernel
// benchmark compare the two directly. Reductions that would depend on
// summation order (row sums, per-cluster centroid sums) are parallelized
// over output elements, never over the summed index.

namespace mlg::kernels {

// W(i,j) = (|c(i,j)| + |c(j,i)|) / 2
Matrix symmetrize_abs(const Matrix& c);

// Keeps the d largest-magnitude entries of each column, zeroing the rest.
// Ties on magnitude keep the lower row index.
Matrix truncate_columns(const Matrix& c, int d);

// rows: N x r matrix whose rows are the vectors m_i.
// W(i,j) = |cos(m_i, m_j)|^delta, W(i,i) = 1; rows with norm < zero_tol get
// zero off-diagonal affinities.
Matrix pairwise_abs_cosine_pow(const Matrix& rows, double delta, double zero_tol);

Vector row_sums(const Matrix& w);

// L(i,j) = [i==j] + w(i,j) / sqrt(max(deg_i, clamp) * max(deg_j, clamp))
Matrix shifted_laplacian_matrix(const Matrix& w, const Vector& degrees, double clamp);

// Scales every row to unit Euclidean norm; rows with norm < zero_tol become
// the first standard basis direction and their indices are appended to
// zero_rows (in row order) when the pointer is non-null.
Matrix row_normalize(const Matrix& u, double zero_tol, std::vector<int>* zero_rows);

// points: N x dim (rows are points), centroids: k x dim.
// labels[i] = nearest centroid (ties: lowest index), sqdist[i] = squared
// distance to it.
void assign_to_centroids(const Matrix& points, const Matrix& centroids,
                         std::vector<int>& labels, Vector& sqdist);

// sums.row(c) = sum of points assigned to c, counts[c] = member count.
// Parallel over clusters; each cluster accumulates its members in index
// order, so results do not depend on the thread count.
void centroid_sums(const Matrix& points, const std::vector<int>& labels, int k,
                   Matrix& sums, std::vector<int>& counts);

namespace serial {

Matrix symmetrize_abs(const Matrix& c);
Matrix truncate_columns(const Matrix& c, int d);
Matrix pairwise_abs_cosine_pow(const Matrix& rows, double delta, double zero_tol);
Vector row_sums(const Matrix& w);
Matrix shifted_laplacian_matrix(const Matrix& w, const Vector& degrees, double clamp);
Matrix row_normalize(const Matrix& u, double zero_tol, std::vector<int>* zero_rows);
void assign_to_centroids(const Matrix& points, const Matrix& centroids,
                         std::vector<int>& labels, Vector& sqdist);
void centroid_sums(const Matrix& points, const std::vector<int>& labels, int k,
                   Matrix& sums, std::vector<int>& counts);

}  // namespace serial

}  // namespace mlg::kernels
