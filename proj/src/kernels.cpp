#include "mlg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mlg::kernels {

// Per-element helpers shared by the serial and OpenMP loops. Keeping the
// scalar arithmetic in one place is what makes the two variants bit-identical.
namespace {

inline void symmetrize_col(const Matrix& c, Matrix& out, Eigen::Index j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        out(i, j) = (std::abs(c(i, j)) + std::abs(c(j, i))) / 2.0;
    }
}

inline void truncate_col(const Matrix& c, Matrix& out, int d, Eigen::Index j,
                         std::vector<int>& order) {
    const Eigen::Index n = c.rows();
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(c(a, j));
        const double mb = std::abs(c(b, j));
        if (ma != mb) return ma > mb;
        return a < b;  // equal magnitudes keep the lower row index
    });
    out.col(j).setZero();
    const int keep = std::min(d, static_cast<int>(n));
    for (int r = 0; r < keep; ++r) {
        const int i = order[static_cast<std::size_t>(r)];
        out(i, j) = c(i, j);
    }
}

inline void cosine_row(const Matrix& rows, const Vector& norms, double delta, double zero_tol,
                       Matrix& w, Eigen::Index i) {
    const Eigen::Index n = rows.rows();
    const Eigen::Index r = rows.cols();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) {
            w(i, i) = 1.0;
            continue;
        }
        if (norms(i) < zero_tol || norms(j) < zero_tol) {
            w(i, j) = 0.0;
            continue;
        }
        double dot = 0.0;
        for (Eigen::Index l = 0; l < r; ++l) dot += rows(i, l) * rows(j, l);
        const double cosine = std::min(1.0, std::abs(dot) / (norms(i) * norms(j)));
        w(i, j) = std::pow(cosine, delta);
    }
}

inline double row_sum(const Matrix& w, Eigen::Index i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) s += w(i, j);
    return s;
}

inline void laplacian_col(const Matrix& w, const Vector& dinv, Matrix& out, Eigen::Index j) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        out(i, j) = (i == j ? 1.0 : 0.0) + dinv(i) * w(i, j) * dinv(j);
    }
}

inline double normalize_row(const Matrix& u, Matrix& out, double zero_tol, Eigen::Index i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j) s += u(i, j) * u(i, j);
    const double norm = std::sqrt(s);
    if (norm < zero_tol) {
        out.row(i).setZero();
        out(i, 0) = 1.0;
    } else {
        for (Eigen::Index j = 0; j < u.cols(); ++j) out(i, j) = u(i, j) / norm;
    }
    return norm;
}

inline void assign_point(const Matrix& points, const Matrix& centroids, std::vector<int>& labels,
                         Vector& sqdist, Eigen::Index i) {
    const Eigen::Index dim = points.cols();
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double diff = points(i, j) - centroids(c, j);
            s += diff * diff;
        }
        if (s < best) {
            best = s;
            best_c = static_cast<int>(c);
        }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
    sqdist(i) = best;
}

inline void sum_cluster(const Matrix& points, const std::vector<int>& labels, Matrix& sums,
                        std::vector<int>& counts, int c) {
    const Eigen::Index n = points.rows();
    const Eigen::Index dim = points.cols();
    sums.row(c).setZero();
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] != c) continue;
        for (Eigen::Index j = 0; j < dim; ++j) sums(c, j) += points(i, j);
        ++count;
    }
    counts[static_cast<std::size_t>(c)] = count;
}

Vector precompute_row_norms(const Matrix& rows) {
    Vector norms(rows.rows());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < rows.cols(); ++l) s += rows(i, l) * rows(i, l);
        norms(i) = std::sqrt(s);
    }
    return norms;
}

Vector precompute_row_norms_serial(const Matrix& rows) {
    Vector norms(rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < rows.cols(); ++l) s += rows(i, l) * rows(i, l);
        norms(i) = std::sqrt(s);
    }
    return norms;
}

}  // namespace

Matrix symmetrize_abs(const Matrix& c) {
    Matrix out(c.rows(), c.cols());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < c.cols(); ++j) symmetrize_col(c, out, j);
    return out;
}

Matrix truncate_columns(const Matrix& c, int d) {
    Matrix out(c.rows(), c.cols());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        std::vector<int> order;
        truncate_col(c, out, d, j, order);
    }
    return out;
}

Matrix pairwise_abs_cosine_pow(const Matrix& rows, double delta, double zero_tol) {
    const Vector norms = precompute_row_norms(rows);
    Matrix w(rows.rows(), rows.rows());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < rows.rows(); ++i) cosine_row(rows, norms, delta, zero_tol, w, i);
    return w;
}

Vector row_sums(const Matrix& w) {
    Vector out(w.rows());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < w.rows(); ++i) out(i) = row_sum(w, i);
    return out;
}

Matrix shifted_laplacian_matrix(const Matrix& w, const Vector& degrees, double clamp) {
    Vector dinv(degrees.size());
    for (Eigen::Index i = 0; i < degrees.size(); ++i) {
        dinv(i) = 1.0 / std::sqrt(std::max(degrees(i), clamp));
    }
    Matrix out(w.rows(), w.cols());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < w.cols(); ++j) laplacian_col(w, dinv, out, j);
    return out;
}

Matrix row_normalize(const Matrix& u, double zero_tol, std::vector<int>* zero_rows) {
    Matrix out(u.rows(), u.cols());
    std::vector<unsigned char> is_zero(static_cast<std::size_t>(u.rows()), 0);
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const double norm = normalize_row(u, out, zero_tol, i);
        if (norm < zero_tol) is_zero[static_cast<std::size_t>(i)] = 1;
    }
    if (zero_rows != nullptr) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            if (is_zero[static_cast<std::size_t>(i)]) zero_rows->push_back(static_cast<int>(i));
        }
    }
    return out;
}

void assign_to_centroids(const Matrix& points, const Matrix& centroids, std::vector<int>& labels,
                         Vector& sqdist) {
    labels.resize(static_cast<std::size_t>(points.rows()));
    sqdist.resize(points.rows());
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < points.rows(); ++i) assign_point(points, centroids, labels, sqdist, i);
}

void centroid_sums(const Matrix& points, const std::vector<int>& labels, int k, Matrix& sums,
                   std::vector<int>& counts) {
    sums.resize(k, points.cols());
    counts.assign(static_cast<std::size_t>(k), 0);
    #pragma omp parallel for schedule(static)
    for (int c = 0; c < k; ++c) sum_cluster(points, labels, sums, counts, c);
}

namespace serial {

Matrix symmetrize_abs(const Matrix& c) {
    Matrix out(c.rows(), c.cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j) symmetrize_col(c, out, j);
    return out;
}

Matrix truncate_columns(const Matrix& c, int d) {
    Matrix out(c.rows(), c.cols());
    std::vector<int> order;
    for (Eigen::Index j = 0; j < c.cols(); ++j) truncate_col(c, out, d, j, order);
    return out;
}

Matrix pairwise_abs_cosine_pow(const Matrix& rows, double delta, double zero_tol) {
    const Vector norms = precompute_row_norms_serial(rows);
    Matrix w(rows.rows(), rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) cosine_row(rows, norms, delta, zero_tol, w, i);
    return w;
}

Vector row_sums(const Matrix& w) {
    Vector out(w.rows());
    for (Eigen::Index i = 0; i < w.rows(); ++i) out(i) = row_sum(w, i);
    return out;
}

Matrix shifted_laplacian_matrix(const Matrix& w, const Vector& degrees, double clamp) {
    Vector dinv(degrees.size());
    for (Eigen::Index i = 0; i < degrees.size(); ++i) {
        dinv(i) = 1.0 / std::sqrt(std::max(degrees(i), clamp));
    }
    Matrix out(w.rows(), w.cols());
    for (Eigen::Index j = 0; j < w.cols(); ++j) laplacian_col(w, dinv, out, j);
    return out;
}

Matrix row_normalize(const Matrix& u, double zero_tol, std::vector<int>* zero_rows) {
    Matrix out(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const double norm = normalize_row(u, out, zero_tol, i);
        if (norm < zero_tol && zero_rows != nullptr) zero_rows->push_back(static_cast<int>(i));
    }
    return out;
}

void assign_to_centroids(const Matrix& points, const Matrix& centroids, std::vector<int>& labels,
                         Vector& sqdist) {
    labels.resize(static_cast<std::size_t>(points.rows()));
    sqdist.resize(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) assign_point(points, centroids, labels, sqdist, i);
}

void centroid_sums(const Matrix& points, const std::vector<int>& labels, int k, Matrix& sums,
                   std::vector<int>& counts) {
    sums.resize(k, points.cols());
    counts.assign(static_cast<std::size_t>(k), 0);
    for (int c = 0; c < k; ++c) sum_cluster(points, labels, sums, counts, c);
}

}  // namespace serial

}  // namespace mlg::kernels
