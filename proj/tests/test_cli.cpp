#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mlg/io.hpp"
#include "mlg/metrics.hpp"

using testing::TempDir;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

// Runs the built binary through the shell, capturing stdout+stderr.
CliResult run_cli(const std::string& args, const std::filesystem::path& scratch,
                  const std::string& env = "") {
    const auto out_file = scratch / ("cli_out_" + std::to_string(std::rand()) + ".txt");
    const std::string cmd = env + (env.empty() ? "" : " ") + MLG_CLI_PATH + " " + args + " > " +
                            out_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = testing::slurp(out_file);
    return r;
}

}  // namespace

TEST_CASE("gen writes layers plus labels and is deterministic") {
    TempDir dir("cligen");
    const std::string flags = "gen --k 3 --d 2 --dim 12 --per-cluster 8 --layers 2 --noise 0.1 "
                              "--seed 7 --out ";
    const CliResult a = run_cli(flags + (dir.path / "a").string(), dir.path);
    REQUIRE(a.exit_code == 0);
    CHECK(std::filesystem::exists(dir.path / "a" / "layer0.csv"));
    CHECK(std::filesystem::exists(dir.path / "a" / "layer1.csv"));
    CHECK(std::filesystem::exists(dir.path / "a" / "labels.txt"));

    const CliResult b = run_cli(flags + (dir.path / "b").string(), dir.path);
    REQUIRE(b.exit_code == 0);
    CHECK(testing::slurp(dir.path / "a" / "layer0.csv") ==
          testing::slurp(dir.path / "b" / "layer0.csv"));
    CHECK(testing::slurp(dir.path / "a" / "labels.txt") ==
          testing::slurp(dir.path / "b" / "labels.txt"));
}

TEST_CASE("gen without --out is a usage error") {
    TempDir dir("cliusage");
    const CliResult r = run_cli("gen --k 3", dir.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("cluster on clean data reports perfect metrics and reruns byte-identically") {
    TempDir dir("clicluster");
    REQUIRE(run_cli("gen --k 3 --d 3 --dim 30 --per-cluster 40 --layers 3 --noise 0 --seed 3 --out " +
                        (dir.path / "data").string(),
                    dir.path)
                .exit_code == 0);
    const std::string layers = (dir.path / "data" / "layer0.csv").string() + " " +
                               (dir.path / "data" / "layer1.csv").string() + " " +
                               (dir.path / "data" / "layer2.csv").string();
    const std::string cmd = "cluster " + layers + " --k 3 --d 3 --truth " +
                            (dir.path / "data" / "labels.txt").string() + " --out-dir ";
    const CliResult a = run_cli(cmd + (dir.path / "runA").string(), dir.path);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output.find("ACC 1.0000") != std::string::npos);

    const std::string summary = testing::slurp(dir.path / "runA" / "summary.txt");
    CHECK(summary.find("metrics.acc = 1.0000") != std::string::npos);
    CHECK(summary.find("stage_order = solve,truncate,symmetrize,affinity,laplacian,basis,fuse,embed,kmeans") !=
          std::string::npos);
    CHECK(summary.find("timing.") == std::string::npos);  // timings are opt-in

    const CliResult b = run_cli(cmd + (dir.path / "runB").string(), dir.path);
    REQUIRE(b.exit_code == 0);
    CHECK(testing::slurp(dir.path / "runA" / "labels.txt") ==
          testing::slurp(dir.path / "runB" / "labels.txt"));
    CHECK(testing::slurp(dir.path / "runA" / "summary.txt") ==
          testing::slurp(dir.path / "runB" / "summary.txt"));

    const std::vector<int> truth = mlg::read_labels(dir.path / "data" / "labels.txt");
    const std::vector<int> pred = mlg::read_labels(dir.path / "runA" / "labels.txt");
    CHECK(mlg::accuracy(truth, pred) == 1.0);
}

TEST_CASE("cluster accepts a config file with flag overrides") {
    TempDir dir("clicfg");
    REQUIRE(run_cli("gen --k 2 --d 2 --dim 10 --per-cluster 10 --layers 1 --noise 0 --seed 5 --out " +
                        (dir.path / "data").string(),
                    dir.path)
                .exit_code == 0);
    testing::spit(dir.path / "cfg.txt", "k = 2\nd = 2\ndelta = 2\nseed = 9\n");
    const CliResult r = run_cli("cluster " + (dir.path / "data" / "layer0.csv").string() +
                                    " --config " + (dir.path / "cfg.txt").string() +
                                    " --gamma 0 --out-dir " + (dir.path / "run").string(),
                                dir.path);
    REQUIRE(r.exit_code == 0);
    const std::string summary = testing::slurp(dir.path / "run" / "summary.txt");
    CHECK(summary.find("seed = 9") != std::string::npos);
    CHECK(summary.find("gamma = 0") != std::string::npos);
}

TEST_CASE("cluster rejects mismatched layers with exit 2 naming the layer") {
    TempDir dir("climismatch");
    mlg::write_matrix_csv(mlg::Matrix::Identity(4, 4), dir.path / "a.csv");
    mlg::write_matrix_csv(mlg::Matrix::Identity(5, 5), dir.path / "b.csv");
    const CliResult r = run_cli("cluster " + (dir.path / "a.csv").string() + " " +
                                    (dir.path / "b.csv").string() + " --k 2 --d 1 --out-dir " +
                                    (dir.path / "run").string(),
                                dir.path);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("layer 1") != std::string::npos);
}

TEST_CASE("config parse failures exit 2") {
    TempDir dir("clibadcfg");
    mlg::write_matrix_csv(mlg::Matrix::Identity(4, 4), dir.path / "a.csv");
    testing::spit(dir.path / "bad.txt", "k == 3\n");
    const CliResult r = run_cli("cluster " + (dir.path / "a.csv").string() + " --config " +
                                    (dir.path / "bad.txt").string() + " --out-dir " +
                                    (dir.path / "run").string(),
                                dir.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("oos command labels held-out points from a saved model") {
    TempDir dir("clioos");
    REQUIRE(run_cli("gen --k 3 --d 3 --dim 30 --per-cluster 30 --layers 2 --noise 0 --seed 11 --out " +
                        (dir.path / "data").string(),
                    dir.path)
                .exit_code == 0);
    const std::string layers = (dir.path / "data" / "layer0.csv").string() + " " +
                               (dir.path / "data" / "layer1.csv").string();
    REQUIRE(run_cli("cluster " + layers + " --k 3 --d 3 --save-oos-model --truth " +
                        (dir.path / "data" / "labels.txt").string() + " --out-dir " +
                        (dir.path / "run").string(),
                    dir.path)
                .exit_code == 0);

    // reuse the deepest training layer as query points: every point must get
    // its own cluster's label back
    const CliResult r = run_cli("oos " + (dir.path / "run").string() + " " +
                                    (dir.path / "data" / "layer1.csv").string() + " --out " +
                                    (dir.path / "oos_labels.txt").string() + " --distances " +
                                    (dir.path / "dist.csv").string(),
                                dir.path);
    REQUIRE(r.exit_code == 0);
    const std::vector<int> pred_in = mlg::read_labels(dir.path / "run" / "labels.txt");
    const std::vector<int> pred_oos = mlg::read_labels(dir.path / "oos_labels.txt");
    CHECK(pred_in == pred_oos);
    CHECK(std::filesystem::exists(dir.path / "dist.csv"));

    const CliResult bad = run_cli("oos " + (dir.path / "run").string() + " " +
                                      (dir.path / "data" / "layer0.csv").string(),
                                  dir.path);
    CHECK(bad.exit_code == 0);  // layer0 has the same dimension here

    mlg::write_matrix_csv(mlg::Matrix::Identity(7, 7), dir.path / "wrongdim.csv");
    const CliResult mismatch = run_cli("oos " + (dir.path / "run").string() + " " +
                                           (dir.path / "wrongdim.csv").string(),
                                       dir.path);
    CHECK(mismatch.exit_code == 2);
}

TEST_CASE("metrics command prints the three scores") {
    TempDir dir("climetrics");
    testing::spit(dir.path / "truth.txt", "0\n0\n1\n1\n");
    testing::spit(dir.path / "same.txt", "1\n1\n0\n0\n");
    const CliResult r = run_cli("metrics " + (dir.path / "truth.txt").string() + " " +
                                    (dir.path / "same.txt").string(),
                                dir.path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("ACC 1.0000 NMI 1.0000 F1 1.0000") != std::string::npos);

    testing::spit(dir.path / "short.txt", "0\n1\n");
    const CliResult bad = run_cli("metrics " + (dir.path / "truth.txt").string() + " " +
                                      (dir.path / "short.txt").string(),
                                  dir.path);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("bench emits summary and trial tables that agree") {
    TempDir dir("clibench");
    REQUIRE(run_cli("gen --k 2 --d 2 --dim 12 --per-cluster 14 --layers 2 --noise 0.2 --seed 13 --out " +
                        (dir.path / "data").string(),
                    dir.path)
                .exit_code == 0);
    const std::string layers = (dir.path / "data" / "layer0.csv").string() + " " +
                               (dir.path / "data" / "layer1.csv").string();
    const CliResult r = run_cli("bench " + layers + " --k 2 --d 2 --truth " +
                                    (dir.path / "data" / "labels.txt").string() +
                                    " --trials 3 --in-per-cluster 10 --oos-per-cluster 4 "
                                    "--out-dir " +
                                    (dir.path / "bench").string(),
                                dir.path);
    REQUIRE(r.exit_code == 0);

    // plot-data schema round trip: recompute means from the long table and
    // compare against the summary cells
    std::istringstream trials(testing::slurp(dir.path / "bench" / "bench_trials.csv"));
    std::string line;
    std::getline(trials, line);
    CHECK(line == "trial,method,metric,value");
    std::map<std::string, std::pair<double, int>> sums;  // key: method|metric
    while (std::getline(trials, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        REQUIRE(c3 != std::string::npos);
        const std::string key = line.substr(c1 + 1, c3 - c1 - 1);
        auto& slot = sums[key];
        slot.first += std::stod(line.substr(c3 + 1));
        slot.second += 1;
    }
    CHECK(sums.size() == 3u * 6u);  // methods (mlg + 2 layers) x metric.scope combos
    for (const auto& [key, sum] : sums) CHECK(sum.second == 3);

    std::istringstream summary(testing::slurp(dir.path / "bench" / "bench_summary.csv"));
    std::getline(summary, line);
    CHECK(line == "method,scope,ACC,NMI,F1");
    int matched_cells = 0;
    while (std::getline(summary, line)) {
        if (line.rfind("p ", 0) == 0) continue;  // p-value rows
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        REQUIRE(cells.size() == 5);
        const std::vector<std::string> metric_names = {"ACC", "NMI", "F1"};
        for (std::size_t m = 0; m < 3; ++m) {
            const std::string key = cells[0] + "," + metric_names[m] + "." + cells[1];
            REQUIRE(sums.count(key) == 1);
            const double mean = sums[key].first / sums[key].second;
            const double reported = std::stod(cells[m + 2]);  // stops at the +- sign
            CHECK(std::abs(reported - mean) <= 5e-5 + 1e-12);
            ++matched_cells;
        }
    }
    CHECK(matched_cells == 3 * 2 * 3);  // methods x scopes x metrics

    // p-value rows exist for every pair and scope
    const std::string summary_text = testing::slurp(dir.path / "bench" / "bench_summary.csv");
    CHECK(summary_text.find("p mlg vs layer0,insample,") != std::string::npos);
    CHECK(summary_text.find("p mlg vs layer1,oos,") != std::string::npos);
    CHECK(summary_text.find("p layer0 vs layer1,insample,") != std::string::npos);
}

TEST_CASE("help text documents the delta presets") {
    TempDir dir("clihelp");
    const CliResult r = run_cli("cluster --help", dir.path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("4 for ORL") != std::string::npos);
    CHECK(r.output.find("2 for COIL20/EYaleB") != std::string::npos);
    CHECK(r.output.find("6 for MNIST") != std::string::npos);
}
