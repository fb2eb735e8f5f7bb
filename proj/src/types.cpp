#include "mlg/types.hpp"

#include <string>

namespace mlg {

SolverParams PipelineConfig::solver_for_layer(int v) const {
    if (per_layer_solver_params.empty()) return SolverParams{};
    if (v < static_cast<int>(per_layer_solver_params.size())) {
        return per_layer_solver_params[static_cast<std::size_t>(v)];
    }
    return per_layer_solver_params.back();
}

void validate_feature_matrix(const FeatureMatrix& m) {
    if (m.values.rows() < 1 || m.values.cols() < 1) {
        throw SizeError("feature matrix is empty (layer " + std::to_string(m.layer_index) + ")");
    }
    if (!m.values.allFinite()) {
        throw NonFiniteError("feature matrix has non-finite entries (layer " +
                             std::to_string(m.layer_index) + ")");
    }
}

LayerStack make_layer_stack(std::vector<Matrix> matrices) {
    std::vector<FeatureMatrix> layers;
    layers.reserve(matrices.size());
    for (std::size_t v = 0; v < matrices.size(); ++v) {
        layers.push_back(FeatureMatrix{std::move(matrices[v]), static_cast<int>(v)});
    }
    return make_layer_stack(std::move(layers));
}

LayerStack make_layer_stack(std::vector<FeatureMatrix> layers) {
    if (layers.empty()) throw SizeError("layer stack must contain at least one layer");
    const int n = static_cast<int>(layers.front().values.cols());
    for (std::size_t v = 0; v < layers.size(); ++v) {
        layers[v].layer_index = static_cast<int>(v);
        validate_feature_matrix(layers[v]);
        if (layers[v].values.cols() != n) {
            throw SizeError("layer " + std::to_string(v) + " has " +
                            std::to_string(layers[v].values.cols()) + " samples, expected " +
                            std::to_string(n));
        }
    }
    return LayerStack{std::move(layers)};
}

ClusterAssignment make_cluster_assignment(std::vector<int> labels, int k) {
    if (k < 1) throw ParamError("cluster count must be positive");
    if (labels.empty()) throw SizeError("label vector is empty");
    const int n = static_cast<int>(labels.size());
    Eigen::MatrixXi indicator = Eigen::MatrixXi::Zero(n, k);
    for (int i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] < 0 || labels[static_cast<std::size_t>(i)] >= k) {
            throw ParamError("label " + std::to_string(labels[static_cast<std::size_t>(i)]) +
                             " at index " + std::to_string(i) + " outside [0, " +
                             std::to_string(k) + ")");
        }
        indicator(i, labels[static_cast<std::size_t>(i)]) = 1;
    }
    return ClusterAssignment{std::move(labels), k, std::move(indicator)};
}

void validate_config(const PipelineConfig& cfg, int num_samples) {
    if (cfg.k < 2) throw ParamError("k must be at least 2");
    if (cfg.d < 1) throw ParamError("d must be at least 1");
    if (!(cfg.delta > 0.0)) throw ParamError("delta must be positive");
    if (!(cfg.gamma >= 0.0)) throw ParamError("gamma must be nonnegative");
    if (cfg.kmeans_restarts < 1) throw ParamError("kmeans restarts must be at least 1");
    if (cfg.kmeans_max_iters < 1) throw ParamError("kmeans max iterations must be at least 1");
    if (!(cfg.kmeans_tol >= 0.0)) throw ParamError("kmeans tolerance must be nonnegative");
    for (const auto& p : cfg.per_layer_solver_params) {
        if (p.id == SolverParams::Id::least_squares_reference && !(p.lambda > 0.0)) {
            throw ParamError("solver lambda must be positive");
        }
    }
    if (num_samples >= 0) {
        if (cfg.d >= num_samples) {
            throw ParamError("d = " + std::to_string(cfg.d) + " must be below the sample count " +
                             std::to_string(num_samples));
        }
        if (cfg.k > num_samples) {
            throw ParamError("k = " + std::to_string(cfg.k) + " exceeds the sample count " +
                             std::to_string(num_samples));
        }
    }
}

const char* to_string(EigenOrder order) {
    return order == EigenOrder::largest ? "largest" : "smallest";
}

EigenOrder eigen_order_from_string(const std::string& s) {
    if (s == "largest") return EigenOrder::largest;
    if (s == "smallest") return EigenOrder::smallest;
    throw ConfigError("unknown eigen_order '" + s + "' (expected largest or smallest)");
}

}  // namespace mlg
