#pragma once

#include <filesystem>
#include <vector>

#include "mlg/types.hpp"

namespace mlg {

// Per-cluster mean and orthonormal subspace basis fit on the deepest layer;
// new points are labeled by smallest point-to-subspace residual.
struct OosModel {
    struct Cluster {
        Vector mean;   // length dim
        Matrix basis;  // dim x r, orthonormal columns, r <= d (rank permitting)
    };
    std::vector<Cluster> clusters;
    int dim = 0;
    int d = 0;
    int source_layer = 0;
};

// Centers each cluster's columns and keeps the first min(d, rank) left singular
// vectors. Rank-deficient partitions keep fewer columns; a rank-0 partition
// (identical points) keeps none and the residual degrades to ||x - mean||.
OosModel fit_oos(const FeatureMatrix& features, const ClusterAssignment& assignment, int d);

struct OosAssignment {
    int cluster = 0;
    Vector distances;  // residual per cluster
};

// Residual to cluster l: || (x - mean_l) - U_l U_l^T (x - mean_l) ||_2.
// Argmin over clusters, ties broken by the lowest cluster index.
OosAssignment assign_oos(const OosModel& model, const Vector& x);

// Columns of x are assigned independently (parallel over columns). When
// distances is non-null it receives the N x k residual table.
std::vector<int> assign_oos_batch(const OosModel& model, const Matrix& x,
                                  Matrix* distances = nullptr);

// Directory layout: model.txt (key = value header) plus one binary matrix
// file per cluster holding [mean | basis] as columns.
void save_oos_model(const OosModel& model, const std::filesystem::path& dir);
OosModel load_oos_model(const std::filesystem::path& dir);

}  // namespace mlg
