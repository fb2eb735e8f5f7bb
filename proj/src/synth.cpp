#include "mlg/synth.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <string>

namespace mlg {

namespace {

constexpr double kMinPrincipalAngle = 0.1;  // radians
constexpr int kMaxBasisAttempts = 1000;

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

Matrix orthonormal_columns(int rows, int cols, std::mt19937_64& rng) {
    const Matrix g = gaussian(rows, cols, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    // Sign fix against the R diagonal keeps the distribution Haar.
    const Matrix r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

double smallest_pairwise_principal_angle(const std::vector<Matrix>& bases) {
    double smallest = M_PI / 2.0;
    for (std::size_t a = 0; a + 1 < bases.size(); ++a) {
        for (std::size_t b = a + 1; b < bases.size(); ++b) {
            Eigen::JacobiSVD<Matrix> svd(bases[a].transpose() * bases[b]);
            const double cos_max = std::min(1.0, svd.singularValues()(0));
            smallest = std::min(smallest, std::acos(cos_max));
        }
    }
    return smallest;
}

void normalize_columns(Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double norm = m.col(j).norm();
        if (norm > 1e-12) m.col(j) /= norm;
    }
}

}  // namespace

SynthData generate(const SynthSpec& spec) {
    if (spec.k < 1 || spec.points_per_cluster < 1 || spec.num_layers < 1) {
        throw ParamError("cluster count, points per cluster, and layer count must be positive");
    }
    if (spec.d < 1 || spec.d >= spec.ambient_dim) {
        throw ParamError("subspace dimension d = " + std::to_string(spec.d) +
                         " must satisfy 1 <= d < ambient dimension " +
                         std::to_string(spec.ambient_dim));
    }
    if (!(spec.noise_sigma >= 0.0)) throw ParamError("noise sigma must be nonnegative");

    std::mt19937_64 rng(spec.seed);

    std::vector<Matrix> bases;
    if (spec.k == 1) {
        bases.push_back(orthonormal_columns(spec.ambient_dim, spec.d, rng));
    } else {
        for (int attempt = 0; attempt < kMaxBasisAttempts; ++attempt) {
            bases.clear();
            for (int c = 0; c < spec.k; ++c) {
                bases.push_back(orthonormal_columns(spec.ambient_dim, spec.d, rng));
            }
            if (smallest_pairwise_principal_angle(bases) >= kMinPrincipalAngle) break;
            bases.clear();
        }
        if (bases.empty()) {
            throw Error("could not draw " + std::to_string(spec.k) +
                        " subspaces with pairwise principal angles above 0.1 rad; "
                        "increase the ambient dimension or lower d");
        }
    }

    const int n = spec.k * spec.points_per_cluster;
    Matrix clean(spec.ambient_dim, n);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < spec.k; ++c) {
        const Matrix coeffs = gaussian(spec.d, spec.points_per_cluster, rng);
        clean.middleCols(c * spec.points_per_cluster, spec.points_per_cluster) = bases[static_cast<std::size_t>(c)] * coeffs;
        for (int i = 0; i < spec.points_per_cluster; ++i) {
            labels[static_cast<std::size_t>(c * spec.points_per_cluster + i)] = c;
        }
    }

    std::vector<Matrix> layers;
    layers.reserve(static_cast<std::size_t>(spec.num_layers));
    for (int v = 0; v < spec.num_layers; ++v) {
        Matrix pts;
        if (v == 0) {
            pts = clean;
        } else {
            const Matrix rotation = orthonormal_columns(spec.ambient_dim, spec.ambient_dim, rng);
            pts = rotation * clean;
        }
        if (spec.noise_sigma > 0.0) {
            pts += spec.noise_sigma * gaussian(spec.ambient_dim, n, rng);
        }
        normalize_columns(pts);
        layers.push_back(std::move(pts));
    }

    return SynthData{make_layer_stack(std::move(layers)), std::move(labels)};
}

}  // namespace mlg
