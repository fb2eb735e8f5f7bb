#include "mlg/pipeline.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "mlg/fusion.hpp"
#include "mlg/graphs.hpp"
#include "mlg/kmeans.hpp"
#include "mlg/oos.hpp"
#include "mlg/selfexpress.hpp"

namespace mlg {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
  public:
    explicit StageTimer(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto run(const std::string& stage, F&& fn) {
        const auto start = Clock::now();
        auto result = fn();
        const std::chrono::duration<double> elapsed = Clock::now() - start;
        sink_.push_back({stage, elapsed.count()});
        return result;
    }

  private:
    std::vector<StageTiming>& sink_;
};

// Rethrows stage errors with the layer index prepended, preserving the
// concrete type so the CLI exit code mapping still applies.
template <typename F>
auto with_layer_context(int layer, F&& fn) {
    const std::string prefix = "layer " + std::to_string(layer) + ": ";
    try {
        return fn();
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    } catch (const NonFiniteError& e) {
        throw NonFiniteError(prefix + e.what());
    } catch (const ParseError& e) {
        throw ParseError(prefix + e.what());
    } catch (const FormatError& e) {
        throw FormatError(prefix + e.what());
    } catch (const SizeError& e) {
        throw SizeError(prefix + e.what());
    } catch (const ParamError& e) {
        throw ParamError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    }
}

int count_nonzeros(const Matrix& m) {
    int count = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != 0.0) ++count;
        }
    }
    return count;
}

double stddev(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / (static_cast<double>(values.size()) - 1.0));
}

}  // namespace

RunSummary run_pipeline(const LayerStack& stack, const PipelineConfig& cfg,
                        std::span<const int> truth) {
    if (stack.layers.empty()) throw SizeError("layer stack is empty");
    const int n = stack.num_samples();
    validate_config(cfg, n);
    if (!truth.empty() && static_cast<int>(truth.size()) != n) {
        throw SizeError("truth labels cover " + std::to_string(truth.size()) + " samples, stack has " +
                        std::to_string(n));
    }

    RunSummary summary;
    StageTimer timer(summary.timings);

    std::vector<ShiftedLaplacian> laplacians;
    std::vector<SpectralBasis> bases;
    laplacians.reserve(stack.layers.size());
    bases.reserve(stack.layers.size());

    for (const FeatureMatrix& layer : stack.layers) {
        const int v = layer.layer_index;
        const std::string tag = "[" + std::to_string(v) + "]";
        LayerDiagnostics diag;
        diag.layer = v;

        with_layer_context(v, [&] {
            const SolverParams params = cfg.solver_for_layer(v);
            const RepresentationMatrix c =
                timer.run("solve" + tag, [&] { return solve_self_expressive(layer, params); });
            diag.checksum_representation = digest(c.values);

            const RepresentationMatrix truncated =
                timer.run("truncate" + tag, [&] { return truncate_ipd(c, cfg.d); });
            diag.checksum_truncated = digest(truncated.values);
            diag.nonzeros_after_truncation = count_nonzeros(truncated.values);

            const Matrix sym = timer.run("symmetrize" + tag, [&] { return symmetrize(truncated); });
            diag.checksum_symmetrized = digest(sym);

            const AffinityGraph graph =
                timer.run("affinity" + tag, [&] { return affinity_angular(sym, cfg.delta); });
            diag.checksum_affinity = digest(graph.weights);

            const ShiftedLaplacian lap =
                timer.run("laplacian" + tag, [&] { return shifted_laplacian(graph); });
            diag.checksum_laplacian = digest(lap.values);

            SpectralBasis basis = timer.run(
                "basis" + tag, [&] { return spectral_basis(lap, cfg.k, cfg.eigen_order); });
            basis.source_layer = v;
            diag.checksum_basis = digest(basis.vectors);
            diag.basis_eigenvalues = basis.eigenvalues;

            // Gap between the k-th selected eigenvalue and the next one out.
            Eigen::SelfAdjointEigenSolver<Matrix> full(lap.values, Eigen::EigenvaluesOnly);
            if (full.info() == Eigen::Success && cfg.k < n) {
                if (cfg.eigen_order == EigenOrder::largest) {
                    diag.spectral_gap = full.eigenvalues()(n - cfg.k) - full.eigenvalues()(n - cfg.k - 1);
                } else {
                    diag.spectral_gap = full.eigenvalues()(cfg.k) - full.eigenvalues()(cfg.k - 1);
                }
            }

            laplacians.push_back(lap);
            bases.push_back(std::move(basis));
            return 0;
        });
        summary.layers.push_back(std::move(diag));
    }

    const ModifiedLaplacian fused = timer.run("fuse", [&] {
        return modified_laplacian(std::span<const ShiftedLaplacian>(laplacians),
                                  std::span<const SpectralBasis>(bases), cfg.gamma);
    });
    summary.checksum_modified_laplacian = digest(fused.values);

    const JointEmbedding embedding = timer.run("embed", [&] { return joint_embedding(fused, cfg.k); });
    summary.checksum_embedding = digest(embedding.normalized);
    summary.zero_rows_replaced = static_cast<int>(embedding.zero_rows.size());

    {
        Eigen::SelfAdjointEigenSolver<Matrix> fused_eigs(fused.values, Eigen::EigenvaluesOnly);
        summary.fused_eigenvalues.resize(cfg.k);
        for (int j = 0; j < cfg.k; ++j) {
            summary.fused_eigenvalues(j) = fused_eigs.eigenvalues()(n - 1 - j);
        }
    }

    const KMeansResult km = timer.run("kmeans", [&] {
        return kmeans(embedding.normalized, cfg.k, cfg.kmeans_restarts, cfg.kmeans_max_iters,
                      cfg.kmeans_tol, cfg.rng_seed);
    });
    summary.assignment = km.assignment;
    summary.kmeans_inertia = km.inertia;
    summary.checksum_labels = digest(std::span<const int>(summary.assignment.labels));

    if (!truth.empty()) {
        summary.metrics = evaluate(truth, summary.assignment.labels);
    }
    return summary;
}

namespace {

struct TrialSplit {
    std::vector<int> insample;  // indices into the full stack
    std::vector<int> heldout;
};

// Per-cluster balanced split, deterministic under the trial seed.
TrialSplit split_trial(std::span<const int> truth, int k, int insample_per_cluster,
                       int oos_per_cluster, std::uint64_t trial_seed) {
    std::vector<std::vector<int>> by_cluster(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        by_cluster[static_cast<std::size_t>(truth[i])].push_back(static_cast<int>(i));
    }

    TrialSplit split;
    std::uint64_t state = derive_seed(trial_seed, 0x5f5e5dull);
    const auto next = [&state] {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t x = state;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    for (int c = 0; c < k; ++c) {
        auto& members = by_cluster[static_cast<std::size_t>(c)];
        const int need = insample_per_cluster + oos_per_cluster;
        if (static_cast<int>(members.size()) < need) {
            throw ConfigError("cluster " + std::to_string(c) + " has " +
                              std::to_string(members.size()) + " samples, trial needs " +
                              std::to_string(need));
        }
        // Fisher-Yates on the cluster's index list.
        for (int i = static_cast<int>(members.size()) - 1; i > 0; --i) {
            const int j = static_cast<int>(next() % static_cast<std::uint64_t>(i + 1));
            std::swap(members[static_cast<std::size_t>(i)], members[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < insample_per_cluster; ++i) split.insample.push_back(members[static_cast<std::size_t>(i)]);
        for (int i = 0; i < oos_per_cluster; ++i) {
            split.heldout.push_back(members[static_cast<std::size_t>(insample_per_cluster + i)]);
        }
    }
    std::sort(split.insample.begin(), split.insample.end());
    std::sort(split.heldout.begin(), split.heldout.end());
    return split;
}

LayerStack subset_stack(const LayerStack& stack, const std::vector<int>& indices,
                        const std::vector<int>& layer_selection) {
    std::vector<Matrix> picked;
    picked.reserve(layer_selection.size());
    for (int v : layer_selection) {
        const Matrix& full = stack.layers[static_cast<std::size_t>(v)].values;
        Matrix sub(full.rows(), static_cast<Eigen::Index>(indices.size()));
        for (std::size_t i = 0; i < indices.size(); ++i) {
            sub.col(static_cast<Eigen::Index>(i)) = full.col(indices[i]);
        }
        picked.push_back(std::move(sub));
    }
    return make_layer_stack(std::move(picked));
}

std::vector<int> gather_labels(std::span<const int> truth, const std::vector<int>& indices) {
    std::vector<int> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(truth[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace

std::vector<BenchmarkResult::Aggregate> aggregate_rows(const std::vector<BenchmarkResult::Row>& rows) {
    // Keyed by (method, scope, metric) in first-appearance order.
    std::vector<BenchmarkResult::Aggregate> aggregates;
    std::vector<std::vector<double>> samples;
    for (const auto& row : rows) {
        std::size_t slot = aggregates.size();
        for (std::size_t i = 0; i < aggregates.size(); ++i) {
            if (aggregates[i].method == row.method && aggregates[i].scope == row.scope &&
                aggregates[i].metric == row.metric) {
                slot = i;
                break;
            }
        }
        if (slot == aggregates.size()) {
            aggregates.push_back({row.method, row.scope, row.metric, 0.0, 0.0});
            samples.emplace_back();
        }
        samples[slot].push_back(row.value);
    }
    for (std::size_t i = 0; i < aggregates.size(); ++i) {
        double mean = 0.0;
        for (double v : samples[i]) mean += v;
        mean /= static_cast<double>(samples[i].size());
        aggregates[i].mean = mean;
        aggregates[i].stddev = stddev(samples[i], mean);
    }
    return aggregates;
}

BenchmarkResult run_benchmark(const LayerStack& stack, std::span<const int> truth,
                              const PipelineConfig& cfg, const BenchmarkOptions& options) {
    if (options.trials < 2) throw ConfigError("benchmark needs at least 2 trials");
    const int n = stack.num_samples();
    if (static_cast<int>(truth.size()) != n) {
        throw SizeError("truth labels cover " + std::to_string(truth.size()) + " samples, stack has " +
                        std::to_string(n));
    }
    int k_truth = 0;
    for (int v : truth) {
        if (v < 0) throw ParamError("negative truth label");
        k_truth = std::max(k_truth, v + 1);
    }
    std::vector<int> population(static_cast<std::size_t>(k_truth), 0);
    for (int v : truth) population[static_cast<std::size_t>(v)] += 1;
    const int smallest_cluster = *std::min_element(population.begin(), population.end());
    if (smallest_cluster == 0) throw ConfigError("truth labels leave a cluster empty");

    if (options.oos_per_cluster < 1) throw ConfigError("oos_per_cluster must be at least 1");
    int insample_per_cluster = options.insample_per_cluster;
    if (insample_per_cluster <= 0) insample_per_cluster = smallest_cluster - options.oos_per_cluster;
    if (insample_per_cluster < 1 ||
        insample_per_cluster + options.oos_per_cluster > smallest_cluster) {
        throw ConfigError("infeasible subset sizes: " + std::to_string(insample_per_cluster) +
                          " in-sample + " + std::to_string(options.oos_per_cluster) +
                          " out-of-sample per cluster, smallest cluster has " +
                          std::to_string(smallest_cluster));
    }

    BenchmarkResult result;
    result.methods.push_back("mlg");
    for (int v = 0; v < stack.num_layers(); ++v) result.methods.push_back("layer" + std::to_string(v));

    const int oos_d = cfg.oos_d > 0 ? cfg.oos_d : cfg.d;

    for (int trial = 0; trial < options.trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(options.seed, static_cast<std::uint64_t>(trial));
        const TrialSplit split = split_trial(truth, k_truth, insample_per_cluster,
                                             options.oos_per_cluster, trial_seed);
        const std::vector<int> truth_in = gather_labels(truth, split.insample);
        const std::vector<int> truth_out = gather_labels(truth, split.heldout);

        for (std::size_t method = 0; method < result.methods.size(); ++method) {
            std::vector<int> layer_selection;
            PipelineConfig trial_cfg = cfg;
            trial_cfg.rng_seed = derive_seed(trial_seed, 0x1000 + method);
            if (result.methods[method] == "mlg") {
                for (int v = 0; v < stack.num_layers(); ++v) layer_selection.push_back(v);
            } else {
                // Single layer with gamma = 0 is plain spectral clustering
                // of that layer, the per-layer baseline.
                const int v = static_cast<int>(method) - 1;
                layer_selection.push_back(v);
                trial_cfg.gamma = 0.0;
                trial_cfg.per_layer_solver_params = {cfg.solver_for_layer(v)};
            }

            const LayerStack in_stack = subset_stack(stack, split.insample, layer_selection);
            const RunSummary summary = run_pipeline(in_stack, trial_cfg, truth_in);

            const OosModel model = fit_oos(in_stack.deepest(), summary.assignment, oos_d);
            const int deepest_full = layer_selection.back();
            Matrix heldout(stack.layers[static_cast<std::size_t>(deepest_full)].values.rows(),
                           static_cast<Eigen::Index>(split.heldout.size()));
            for (std::size_t i = 0; i < split.heldout.size(); ++i) {
                heldout.col(static_cast<Eigen::Index>(i)) =
                    stack.layers[static_cast<std::size_t>(deepest_full)].values.col(split.heldout[i]);
            }
            const std::vector<int> pred_out = assign_oos_batch(model, heldout);
            const MetricReport oos_metrics = evaluate(truth_out, pred_out);

            const auto push = [&](const std::string& scope, const std::string& metric, double value) {
                result.rows.push_back({trial, result.methods[method], scope, metric, value});
            };
            push("insample", "ACC", summary.metrics->acc);
            push("insample", "NMI", summary.metrics->nmi);
            push("insample", "F1", summary.metrics->f1);
            push("oos", "ACC", oos_metrics.acc);
            push("oos", "NMI", oos_metrics.nmi);
            push("oos", "F1", oos_metrics.f1);
        }
    }

    result.aggregates = aggregate_rows(result.rows);

    // Wilcoxon rank-sum between every method pair, per scope and metric.
    const std::vector<std::string> scopes = {"insample", "oos"};
    const std::vector<std::string> metric_names = {"ACC", "NMI", "F1"};
    for (std::size_t a = 0; a < result.methods.size(); ++a) {
        for (std::size_t b = a + 1; b < result.methods.size(); ++b) {
            for (const auto& scope : scopes) {
                for (const auto& metric : metric_names) {
                    std::vector<double> sample_a;
                    std::vector<double> sample_b;
                    for (const auto& row : result.rows) {
                        if (row.scope != scope || row.metric != metric) continue;
                        if (row.method == result.methods[a]) sample_a.push_back(row.value);
                        if (row.method == result.methods[b]) sample_b.push_back(row.value);
                    }
                    const RankSumResult test = wilcoxon_ranksum(sample_a, sample_b);
                    result.p_values.push_back(
                        {result.methods[a], result.methods[b], scope, metric, test.p_value});
                }
            }
        }
    }
    return result;
}

}  // namespace mlg
