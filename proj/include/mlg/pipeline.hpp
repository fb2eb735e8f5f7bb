#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlg/digest.hpp"
#include "mlg/metrics.hpp"
#include "mlg/types.hpp"

namespace mlg {

// Checksums let a regression be bisected to the first diverging stage
// without storing the matrices themselves.
struct LayerDiagnostics {
    int layer = 0;
    int nonzeros_after_truncation = 0;
    double spectral_gap = 0.0;        // between the k-th and (k+1)-th selected eigenvalue
    Vector basis_eigenvalues;         // the k selected eigenvalues of L_s
    std::uint64_t checksum_representation = 0;
    std::uint64_t checksum_truncated = 0;
    std::uint64_t checksum_symmetrized = 0;
    std::uint64_t checksum_affinity = 0;
    std::uint64_t checksum_laplacian = 0;
    std::uint64_t checksum_basis = 0;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunSummary {
    std::vector<LayerDiagnostics> layers;
    Vector fused_eigenvalues;  // the k selected eigenvalues of L_mod
    std::uint64_t checksum_modified_laplacian = 0;
    std::uint64_t checksum_embedding = 0;
    std::uint64_t checksum_labels = 0;
    int zero_rows_replaced = 0;
    ClusterAssignment assignment;
    double kmeans_inertia = 0.0;
    std::optional<MetricReport> metrics;
    std::vector<StageTiming> timings;
};

// Per layer: solve -> truncate -> symmetrize -> angular affinity -> shifted
// Laplacian -> spectral basis; then modified Laplacian -> joint embedding ->
// k-means. Stage errors propagate with the layer index prepended.
RunSummary run_pipeline(const LayerStack& stack, const PipelineConfig& cfg,
                        std::span<const int> truth = {});

struct BenchmarkOptions {
    int trials = 10;
    int insample_per_cluster = 0;  // 0: use all but oos_per_cluster
    int oos_per_cluster = 0;
    std::uint64_t seed = 0;
};

struct BenchmarkResult {
    // Long format, one row per (trial, method, scope, metric).
    struct Row {
        int trial = 0;
        std::string method;
        std::string scope;   // "insample" or "oos"
        std::string metric;  // "ACC", "NMI", "F1"
        double value = 0.0;
    };
    struct Aggregate {
        std::string method;
        std::string scope;
        std::string metric;
        double mean = 0.0;
        double stddev = 0.0;
    };
    struct PairwiseP {
        std::string method_a;
        std::string method_b;
        std::string scope;
        std::string metric;
        double p_value = 1.0;
    };
    std::vector<std::string> methods;  // "mlg", then "layer<v>" per layer
    std::vector<Row> rows;
    std::vector<Aggregate> aggregates;
    std::vector<PairwiseP> p_values;
};

// Per trial: class-balanced in-sample subset + disjoint out-of-sample subset,
// pipeline on the in-sample points, subspace model fit on the deepest layer,
// held-out points assigned by residual. Method variants are the fused
// pipeline ("mlg") and each single layer alone with gamma = 0 ("layer<v>").
// Trial t uses a sub-seed derived from (options.seed, t).
BenchmarkResult run_benchmark(const LayerStack& stack, std::span<const int> truth,
                              const PipelineConfig& cfg, const BenchmarkOptions& options);

std::vector<BenchmarkResult::Aggregate> aggregate_rows(const std::vector<BenchmarkResult::Row>& rows);

}  // namespace mlg
