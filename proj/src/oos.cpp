#include "mlg/oos.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <string>

#include "mlg/config.hpp"
#include "mlg/io.hpp"

namespace mlg {

namespace {

constexpr double kRankTol = 1e-12;  // relative singular-value cutoff

double residual_to_cluster(const OosModel::Cluster& cluster, const Vector& x) {
    const Vector centered = x - cluster.mean;
    if (cluster.basis.cols() == 0) return centered.norm();
    const Vector coeffs = cluster.basis.transpose() * centered;
    return (centered - cluster.basis * coeffs).norm();
}

}  // namespace

OosModel fit_oos(const FeatureMatrix& features, const ClusterAssignment& assignment, int d) {
    if (features.num_samples() != assignment.size()) {
        throw SizeError("feature matrix has " + std::to_string(features.num_samples()) +
                        " samples but the assignment covers " + std::to_string(assignment.size()));
    }
    if (d < 1) throw ParamError("subspace dimension d must be at least 1");
    validate_feature_matrix(features);

    OosModel model;
    model.dim = features.dim();
    model.d = d;
    model.source_layer = features.layer_index;
    model.clusters.reserve(static_cast<std::size_t>(assignment.k));

    for (int c = 0; c < assignment.k; ++c) {
        std::vector<int> members;
        for (int i = 0; i < assignment.size(); ++i) {
            if (assignment.labels[static_cast<std::size_t>(i)] == c) members.push_back(i);
        }
        if (members.empty()) {
            throw Error("cluster " + std::to_string(c) + " is empty; cannot fit a subspace");
        }

        Matrix part(features.dim(), static_cast<Eigen::Index>(members.size()));
        for (std::size_t j = 0; j < members.size(); ++j) {
            part.col(static_cast<Eigen::Index>(j)) = features.values.col(members[j]);
        }
        OosModel::Cluster cluster;
        cluster.mean = part.rowwise().mean();
        part.colwise() -= cluster.mean;

        Eigen::BDCSVD<Matrix> svd(part, Eigen::ComputeThinU);
        const Vector& sv = svd.singularValues();
        const double cutoff = sv.size() > 0 ? kRankTol * sv(0) : 0.0;
        int rank = 0;
        for (Eigen::Index l = 0; l < sv.size(); ++l) {
            if (sv(l) > cutoff && sv(l) > 0.0) ++rank;
        }
        const int keep = std::min(rank, d);  // rank-deficient partitions keep fewer columns
        cluster.basis = svd.matrixU().leftCols(keep);
        model.clusters.push_back(std::move(cluster));
    }
    return model;
}

OosAssignment assign_oos(const OosModel& model, const Vector& x) {
    if (x.size() != model.dim) {
        throw SizeError("query vector has length " + std::to_string(x.size()) + ", model expects " +
                        std::to_string(model.dim));
    }
    OosAssignment out;
    out.distances.resize(static_cast<Eigen::Index>(model.clusters.size()));
    int best = 0;
    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        out.distances(static_cast<Eigen::Index>(c)) = residual_to_cluster(model.clusters[c], x);
        if (out.distances(static_cast<Eigen::Index>(c)) <
            out.distances(static_cast<Eigen::Index>(best))) {
            best = static_cast<int>(c);
        }
    }
    out.cluster = best;
    return out;
}

std::vector<int> assign_oos_batch(const OosModel& model, const Matrix& x, Matrix* distances) {
    if (x.rows() != model.dim) {
        throw SizeError("query matrix has " + std::to_string(x.rows()) + " rows, model expects " +
                        std::to_string(model.dim));
    }
    const Eigen::Index n = x.cols();
    const Eigen::Index k = static_cast<Eigen::Index>(model.clusters.size());
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    Matrix dist(n, k);
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        const OosAssignment a = assign_oos(model, x.col(i));
        labels[static_cast<std::size_t>(i)] = a.cluster;
        dist.row(i) = a.distances.transpose();
    }
    if (distances != nullptr) *distances = std::move(dist);
    return labels;
}

void save_oos_model(const OosModel& model, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream header(dir / "model.txt", std::ios::trunc);
    if (!header) throw FormatError("cannot write '" + (dir / "model.txt").string() + "'");
    header << "k = " << model.clusters.size() << '\n';
    header << "dim = " << model.dim << '\n';
    header << "d = " << model.d << '\n';
    header << "source_layer = " << model.source_layer << '\n';
    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        header << "cluster." << c << ".rank = " << model.clusters[c].basis.cols() << '\n';
    }
    if (!header) throw FormatError("write failed for '" + (dir / "model.txt").string() + "'");
    header.close();

    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        const auto& cluster = model.clusters[c];
        Matrix packed(model.dim, 1 + cluster.basis.cols());
        packed.col(0) = cluster.mean;
        if (cluster.basis.cols() > 0) packed.rightCols(cluster.basis.cols()) = cluster.basis;
        write_matrix_binary(packed, dir / ("cluster" + std::to_string(c) + ".mlgm"));
    }
}

OosModel load_oos_model(const std::filesystem::path& dir) {
    const auto header_path = dir / "model.txt";
    const KeyValueMap kv = parse_key_values(header_path);
    const auto need = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw FormatError("missing key '" + key + "' in '" + header_path.string() + "'");
        }
        return it->second;
    };

    OosModel model;
    const int k = std::stoi(need("k"));
    model.dim = std::stoi(need("dim"));
    model.d = std::stoi(need("d"));
    model.source_layer = std::stoi(need("source_layer"));
    if (k < 1 || model.dim < 1) throw FormatError("invalid model header in '" + header_path.string() + "'");

    for (int c = 0; c < k; ++c) {
        const int rank = std::stoi(need("cluster." + std::to_string(c) + ".rank"));
        const Matrix packed =
            read_matrix_binary(dir / ("cluster" + std::to_string(c) + ".mlgm")).values;
        if (packed.rows() != model.dim || packed.cols() != 1 + rank) {
            throw FormatError("cluster file " + std::to_string(c) + " does not match its header");
        }
        OosModel::Cluster cluster;
        cluster.mean = packed.col(0);
        cluster.basis = packed.rightCols(rank);
        model.clusters.push_back(std::move(cluster));
    }
    return model;
}

}  // namespace mlg
