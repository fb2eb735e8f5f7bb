#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mlg/errors.hpp"

namespace mlg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One layer of representations: D_v feature rows, N sample columns.
struct FeatureMatrix {
    Matrix values;
    int layer_index = 0;

    int dim() const { return static_cast<int>(values.rows()); }
    int num_samples() const { return static_cast<int>(values.cols()); }
};

// Ordered per-layer feature matrices sharing the sample count.
struct LayerStack {
    std::vector<FeatureMatrix> layers;

    int num_layers() const { return static_cast<int>(layers.size()); }
    int num_samples() const { return layers.empty() ? 0 : layers.front().num_samples(); }
    const FeatureMatrix& deepest() const { return layers.back(); }
};

// N x N self-expressive coefficients with zero diagonal.
struct RepresentationMatrix {
    Matrix values;
    int source_layer = 0;

    int size() const { return static_cast<int>(values.rows()); }
};

// Length-N labels in [0, k) plus the binary indicator matrix (one 1 per row).
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;
    Eigen::MatrixXi indicator;

    int size() const { return static_cast<int>(labels.size()); }
};

enum class EigenOrder { largest, smallest };

struct SolverParams {
    enum class Id { least_squares_reference, external };
    Id id = Id::least_squares_reference;
    // Ridge weight of the reference solver. Inputs are conventionally
    // unit-norm columns, so 1.0 matches the Gram diagonal; heavier ridge
    // spreads coefficients over more neighbors, which keeps the truncated
    // graph connected under noise.
    double lambda = 1.0;
    std::map<std::string, std::string> extra;
};

struct PipelineConfig {
    int k = 2;
    int d = 1;
    double delta = 2.0;
    // The projector term subtracts gamma from the fused spectrum exactly
    // along the per-layer cluster directions, so usable gamma is bounded by
    // the summed spectral gap (reported per layer in the run summary).
    // Default 0 keeps the plain Laplacian sum, which is robust everywhere.
    double gamma = 0.0;
    EigenOrder eigen_order = EigenOrder::largest;
    std::vector<SolverParams> per_layer_solver_params;
    int kmeans_restarts = 30;
    int kmeans_max_iters = 300;
    double kmeans_tol = 1e-9;
    std::uint64_t rng_seed = 0;
    int oos_d = -1;  // -1: reuse d

    // Solver params for layer v; falls back to the last configured entry,
    // then to defaults, so one record can cover every layer.
    SolverParams solver_for_layer(int v) const;
};

void validate_feature_matrix(const FeatureMatrix& m);
LayerStack make_layer_stack(std::vector<Matrix> matrices);
LayerStack make_layer_stack(std::vector<FeatureMatrix> layers);

ClusterAssignment make_cluster_assignment(std::vector<int> labels, int k);

// Checks ranges that do not need N, then the N-dependent ones (1 <= d < N,
// k <= N) when num_samples >= 0.
void validate_config(const PipelineConfig& cfg, int num_samples = -1);

const char* to_string(EigenOrder order);
EigenOrder eigen_order_from_string(const std::string& s);

}  // namespace mlg
