// Command-line front end: generate synthetic stacks, cluster layer files,
// label out-of-sample points, benchmark method variants, compare label files.
// Exit codes: 0 success, 1 numerical failure, 2 usage/format error.

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mlg/config.hpp"
#include "mlg/io.hpp"
#include "mlg/oos.hpp"
#include "mlg/pipeline.hpp"
#include "mlg/synth.hpp"
#include "mlg/threading.hpp"
#include "mlg/types.hpp"

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016" PRIx64, v);
    return buf;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string join_doubles(const mlg::Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ' ';
        out += mlg::format_double(v(i));
    }
    return out;
}

void write_run_summary(const fs::path& path, const mlg::RunSummary& summary,
                       const mlg::PipelineConfig& cfg, int n, int layers, bool include_timings) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw mlg::FormatError("cannot open '" + path.string() + "' for writing");
    out << "n = " << n << '\n';
    out << "layers = " << layers << '\n';
    out << "k = " << cfg.k << '\n';
    out << "d = " << cfg.d << '\n';
    out << "delta = " << mlg::format_double(cfg.delta) << '\n';
    out << "gamma = " << mlg::format_double(cfg.gamma) << '\n';
    out << "eigen_order = " << mlg::to_string(cfg.eigen_order) << '\n';
    out << "seed = " << cfg.rng_seed << '\n';
    out << "stage_order = solve,truncate,symmetrize,affinity,laplacian,basis,fuse,embed,kmeans\n";
    for (const auto& diag : summary.layers) {
        const std::string p = "layer." + std::to_string(diag.layer) + ".";
        out << p << "nonzeros_after_truncation = " << diag.nonzeros_after_truncation << '\n';
        out << p << "spectral_gap = " << mlg::format_double(diag.spectral_gap) << '\n';
        out << p << "basis_eigenvalues = " << join_doubles(diag.basis_eigenvalues) << '\n';
        out << p << "checksum.representation = " << hex64(diag.checksum_representation) << '\n';
        out << p << "checksum.truncated = " << hex64(diag.checksum_truncated) << '\n';
        out << p << "checksum.symmetrized = " << hex64(diag.checksum_symmetrized) << '\n';
        out << p << "checksum.affinity = " << hex64(diag.checksum_affinity) << '\n';
        out << p << "checksum.laplacian = " << hex64(diag.checksum_laplacian) << '\n';
        out << p << "checksum.basis = " << hex64(diag.checksum_basis) << '\n';
    }
    out << "fused.eigenvalues = " << join_doubles(summary.fused_eigenvalues) << '\n';
    out << "fused.checksum = " << hex64(summary.checksum_modified_laplacian) << '\n';
    out << "embedding.zero_rows_replaced = " << summary.zero_rows_replaced << '\n';
    out << "embedding.checksum = " << hex64(summary.checksum_embedding) << '\n';
    out << "kmeans.inertia = " << mlg::format_double(summary.kmeans_inertia) << '\n';
    out << "kmeans.restarts = " << cfg.kmeans_restarts << '\n';
    out << "labels.checksum = " << hex64(summary.checksum_labels) << '\n';
    if (summary.metrics) {
        out << "metrics.acc = " << fixed4(summary.metrics->acc) << '\n';
        out << "metrics.nmi = " << fixed4(summary.metrics->nmi) << '\n';
        out << "metrics.f1 = " << fixed4(summary.metrics->f1) << '\n';
    }
    if (include_timings) {
        for (const auto& t : summary.timings) {
            out << "timing." << t.stage << " = " << mlg::format_double(t.seconds) << '\n';
        }
    }
    if (!out) throw mlg::FormatError("write failed for '" + path.string() + "'");
}

struct ClusterFlags {
    std::vector<std::string> layer_files;
    std::string config_path;
    std::string truth_path;
    std::string out_dir;
    bool save_oos_model = false;
    bool timings = false;
    int k = 0;
    int d = 0;
    double delta = 0.0;
    double gamma = 0.0;
    std::string eigen_order;
    std::uint64_t seed = 0;
    int restarts = 0;
    int oos_d = 0;
    double lambda = 0.0;
};

mlg::PipelineConfig resolve_config(const ClusterFlags& flags, const CLI::App* cmd) {
    mlg::PipelineConfig cfg;
    if (!flags.config_path.empty()) cfg = mlg::load_pipeline_config(flags.config_path);
    const auto given = [cmd](const std::string& name) { return cmd->count(name) > 0; };
    if (given("--k")) cfg.k = flags.k;
    if (given("--d")) cfg.d = flags.d;
    if (given("--delta")) cfg.delta = flags.delta;
    if (given("--gamma")) cfg.gamma = flags.gamma;
    if (given("--eigen-order")) cfg.eigen_order = mlg::eigen_order_from_string(flags.eigen_order);
    if (given("--seed")) cfg.rng_seed = flags.seed;
    if (given("--restarts")) cfg.kmeans_restarts = flags.restarts;
    if (given("--oos-d")) cfg.oos_d = flags.oos_d;
    if (given("--lambda")) {
        if (cfg.per_layer_solver_params.empty()) cfg.per_layer_solver_params.resize(1);
        for (auto& p : cfg.per_layer_solver_params) p.lambda = flags.lambda;
    }
    return cfg;
}

mlg::LayerStack load_stack(const std::vector<std::string>& files) {
    std::vector<mlg::FeatureMatrix> layers;
    layers.reserve(files.size());
    for (const auto& file : files) layers.push_back(mlg::read_matrix_auto(file));
    return mlg::make_layer_stack(std::move(layers));
}

void add_common_config_flags(CLI::App* cmd, ClusterFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value config file");
    cmd->add_option("--k", flags.k, "number of clusters");
    cmd->add_option("--d", flags.d,
                    "subspace dimension kept per column (typical a-priori values: 9 for face "
                    "sets, 12 for handwritten digits, 9 for COIL20-style objects)");
    cmd->add_option("--delta", flags.delta,
                    "angular affinity exponent > 0 (presets: 4 for ORL, 2 for COIL20/EYaleB, "
                    "6 for MNIST; default 2)");
    cmd->add_option("--gamma", flags.gamma,
                    "fusion tradeoff >= 0 (default 0). Positive values subtract the per-layer "
                    "subspace projector from the fused spectrum; keep gamma well below "
                    "(smallest per-layer spectral gap) / (number of layers), see "
                    "layer.<v>.spectral_gap in summary.txt");
    cmd->add_option("--eigen-order", flags.eigen_order,
                    "per-layer eigenpair selection: largest (default) or smallest");
    cmd->add_option("--seed", flags.seed, "RNG seed (default 0)");
    cmd->add_option("--restarts", flags.restarts, "k-means restarts (default 30)");
    cmd->add_option("--lambda", flags.lambda,
                    "reference solver ridge weight for every layer (default 1)");
    cmd->add_option("--oos-d", flags.oos_d, "subspace dimension for out-of-sample models "
                    "(default: same as --d)");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"mlg: multilayer-graph subspace clustering toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic union-of-subspaces layer stack");
    mlg::SynthSpec spec;
    std::string gen_out;
    std::string gen_format = "csv";
    gen->add_option("--k", spec.k, "clusters")->capture_default_str();
    gen->add_option("--d", spec.d, "subspace dimension")->capture_default_str();
    gen->add_option("--dim", spec.ambient_dim, "ambient dimension")->capture_default_str();
    gen->add_option("--per-cluster", spec.points_per_cluster, "points per cluster")
        ->capture_default_str();
    gen->add_option("--layers", spec.num_layers, "number of layers")->capture_default_str();
    gen->add_option("--noise", spec.noise_sigma, "noise sigma")->capture_default_str();
    gen->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--format", gen_format, "csv or binary")->capture_default_str();
    gen->callback([&] {
        if (gen_format != "csv" && gen_format != "binary") {
            throw mlg::ConfigError("--format must be csv or binary");
        }
        const mlg::SynthData data = mlg::generate(spec);
        fs::create_directories(gen_out);
        for (const auto& layer : data.stack.layers) {
            const std::string base = "layer" + std::to_string(layer.layer_index);
            if (gen_format == "csv") {
                mlg::write_matrix_csv(layer.values, fs::path(gen_out) / (base + ".csv"));
            } else {
                mlg::write_matrix_binary(layer.values, fs::path(gen_out) / (base + ".mlgm"));
            }
        }
        mlg::write_labels(data.labels, fs::path(gen_out) / "labels.txt");
        std::cout << "wrote " << data.stack.num_layers() << " layers + labels to " << gen_out
                  << '\n';
    });

    // cluster
    auto* cluster = app.add_subcommand("cluster", "run the multilayer clustering pipeline");
    ClusterFlags cf;
    cluster->add_option("layers", cf.layer_files, "layer matrix files, shallow to deep")
        ->required()
        ->expected(-1);
    add_common_config_flags(cluster, cf);
    cluster->add_option("--truth", cf.truth_path, "ground-truth labels for metrics");
    cluster->add_option("--out-dir", cf.out_dir, "output directory")->required();
    cluster->add_flag("--save-oos-model", cf.save_oos_model,
                      "fit and save the out-of-sample model under <out-dir>/oos_model");
    cluster->add_flag("--timings", cf.timings,
                      "include wall-clock stage timings in summary.txt (off by default so "
                      "outputs are byte-reproducible)");
    cluster->callback([&] {
        const mlg::PipelineConfig cfg = resolve_config(cf, cluster);
        const mlg::LayerStack stack = load_stack(cf.layer_files);
        std::vector<int> truth;
        if (!cf.truth_path.empty()) {
            truth = mlg::read_labels(cf.truth_path);
            if (static_cast<int>(truth.size()) != stack.num_samples()) {
                throw mlg::SizeError("truth file has " + std::to_string(truth.size()) +
                                     " labels, stack has " + std::to_string(stack.num_samples()) +
                                     " samples");
            }
        }
        const mlg::RunSummary summary = mlg::run_pipeline(stack, cfg, truth);
        fs::create_directories(cf.out_dir);
        mlg::write_labels(summary.assignment.labels, fs::path(cf.out_dir) / "labels.txt");
        write_run_summary(fs::path(cf.out_dir) / "summary.txt", summary, cfg, stack.num_samples(),
                          stack.num_layers(), cf.timings);
        if (cf.save_oos_model) {
            const int oos_d = cfg.oos_d > 0 ? cfg.oos_d : cfg.d;
            const mlg::OosModel model = mlg::fit_oos(stack.deepest(), summary.assignment, oos_d);
            mlg::save_oos_model(model, fs::path(cf.out_dir) / "oos_model");
        }
        if (summary.metrics) {
            std::cout << "ACC " << fixed4(summary.metrics->acc) << " NMI "
                      << fixed4(summary.metrics->nmi) << " F1 " << fixed4(summary.metrics->f1)
                      << '\n';
        }
        std::cout << "wrote labels and summary to " << cf.out_dir << '\n';
    });

    // oos
    auto* oos = app.add_subcommand("oos", "label out-of-sample points with a saved model");
    std::string oos_model_dir;
    std::string oos_test_file;
    std::string oos_out;
    std::string oos_distances;
    oos->add_option("model", oos_model_dir, "model directory (or a cluster run directory)")
        ->required();
    oos->add_option("test", oos_test_file, "matrix file of embedded test points")->required();
    oos->add_option("--out", oos_out, "write predicted labels here (default: stdout)");
    oos->add_option("--distances", oos_distances, "write the per-cluster residual table as CSV");
    oos->callback([&] {
        fs::path dir(oos_model_dir);
        if (!fs::exists(dir / "model.txt") && fs::exists(dir / "oos_model" / "model.txt")) {
            dir /= "oos_model";
        }
        const mlg::OosModel model = mlg::load_oos_model(dir);
        const mlg::FeatureMatrix test = mlg::read_matrix_auto(oos_test_file);
        mlg::Matrix distances;
        const std::vector<int> labels = mlg::assign_oos_batch(model, test.values, &distances);
        if (oos_out.empty()) {
            for (int v : labels) std::cout << v << '\n';
        } else {
            mlg::write_labels(labels, oos_out);
        }
        if (!oos_distances.empty()) {
            std::ofstream out(oos_distances, std::ios::trunc);
            if (!out) throw mlg::FormatError("cannot open '" + oos_distances + "' for writing");
            for (Eigen::Index i = 0; i < distances.rows(); ++i) {
                for (Eigen::Index j = 0; j < distances.cols(); ++j) {
                    if (j > 0) out.put(',');
                    out << mlg::format_double(distances(i, j));
                }
                out.put('\n');
            }
        }
    });

    // bench
    auto* bench = app.add_subcommand(
        "bench", "repeated-subset benchmark of the fused pipeline vs per-layer baselines");
    ClusterFlags bf;
    mlg::BenchmarkOptions bench_opts;
    bench->add_option("layers", bf.layer_files, "layer matrix files, shallow to deep")
        ->required()
        ->expected(-1);
    add_common_config_flags(bench, bf);
    bench->add_option("--truth", bf.truth_path, "ground-truth labels")->required();
    bench->add_option("--trials", bench_opts.trials, "number of random subsets")
        ->capture_default_str();
    bench->add_option("--in-per-cluster", bench_opts.insample_per_cluster,
                      "in-sample points per cluster (0: all but the held-out ones)")
        ->capture_default_str();
    bench->add_option("--oos-per-cluster", bench_opts.oos_per_cluster,
                      "held-out points per cluster")
        ->required();
    bench->add_option("--bench-seed", bench_opts.seed,
                      "subset-sampling seed (default: the pipeline --seed)");
    bench->add_option("--out-dir", bf.out_dir, "output directory")->required();
    bench->callback([&] {
        const mlg::PipelineConfig cfg = resolve_config(bf, bench);
        if (bench->count("--bench-seed") == 0) bench_opts.seed = cfg.rng_seed;
        const mlg::LayerStack stack = load_stack(bf.layer_files);
        const std::vector<int> truth = mlg::read_labels(bf.truth_path);
        const mlg::BenchmarkResult result = mlg::run_benchmark(stack, truth, cfg, bench_opts);

        fs::create_directories(bf.out_dir);
        const fs::path trials_path = fs::path(bf.out_dir) / "bench_trials.csv";
        {
            std::ofstream out(trials_path, std::ios::trunc);
            out << "trial,method,metric,value\n";
            for (const auto& row : result.rows) {
                out << row.trial << ',' << row.method << ',' << row.metric << '.' << row.scope
                    << ',' << mlg::format_double(row.value) << '\n';
            }
        }
        const fs::path summary_path = fs::path(bf.out_dir) / "bench_summary.csv";
        {
            std::ofstream out(summary_path, std::ios::trunc);
            out << "method,scope,ACC,NMI,F1\n";
            const auto cell = [&](const std::string& method, const std::string& scope,
                                  const std::string& metric) {
                for (const auto& agg : result.aggregates) {
                    if (agg.method == method && agg.scope == scope && agg.metric == metric) {
                        return fixed4(agg.mean) + "±" + fixed4(agg.stddev);
                    }
                }
                return std::string("-");
            };
            for (const auto& method : result.methods) {
                for (const std::string scope : {"insample", "oos"}) {
                    out << method << ',' << scope << ',' << cell(method, scope, "ACC") << ','
                        << cell(method, scope, "NMI") << ',' << cell(method, scope, "F1") << '\n';
                }
            }
            const auto pcell = [&](const std::string& a, const std::string& b,
                                   const std::string& scope, const std::string& metric) {
                for (const auto& p : result.p_values) {
                    if (p.method_a == a && p.method_b == b && p.scope == scope &&
                        p.metric == metric) {
                        return mlg::format_double(p.p_value);
                    }
                }
                return std::string("-");
            };
            for (std::size_t a = 0; a < result.methods.size(); ++a) {
                for (std::size_t b = a + 1; b < result.methods.size(); ++b) {
                    for (const std::string scope : {"insample", "oos"}) {
                        out << "p " << result.methods[a] << " vs " << result.methods[b] << ','
                            << scope << ',' << pcell(result.methods[a], result.methods[b], scope, "ACC")
                            << ',' << pcell(result.methods[a], result.methods[b], scope, "NMI")
                            << ',' << pcell(result.methods[a], result.methods[b], scope, "F1")
                            << '\n';
                    }
                }
            }
        }
        std::ifstream echo(summary_path);
        std::cout << echo.rdbuf();
        std::cout << "wrote " << summary_path.string() << " and " << trials_path.string() << '\n';
    });

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "compare two label files");
    std::string truth_file;
    std::string pred_file;
    metrics_cmd->add_option("truth", truth_file, "ground-truth labels")->required();
    metrics_cmd->add_option("pred", pred_file, "predicted labels")->required();
    metrics_cmd->callback([&] {
        const std::vector<int> truth = mlg::read_labels(truth_file);
        const std::vector<int> pred = mlg::read_labels(pred_file);
        const mlg::MetricReport report = mlg::evaluate(truth, pred);
        std::cout << "ACC " << fixed4(report.acc) << " NMI " << fixed4(report.nmi) << " F1 "
                  << fixed4(report.f1) << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    mlg::apply_thread_cap_from_env();
    try {
        return run_cli(argc, argv);
    } catch (const mlg::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const mlg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
