#include "mlg/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlg/digest.hpp"
#include "mlg/kernels.hpp"

namespace mlg {

namespace detail {

namespace {

// splitmix64; also used to whiten user-provided seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() { return mix64(state++); }
    // 53-bit mantissa uniform in [0, 1); avoids distribution-object
    // implementation differences in the hot path.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int next_below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

double sq_distance(const Matrix& points, Eigen::Index i, const Matrix& centroids, Eigen::Index c) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double diff = points(i, j) - centroids(c, j);
        s += diff * diff;
    }
    return s;
}

Matrix kmeanspp_init(const Matrix& points, int k, SplitMix& rng) {
    const Eigen::Index n = points.rows();
    Matrix centroids(k, points.cols());
    std::vector<unsigned char> chosen(static_cast<std::size_t>(n), 0);

    int first = rng.next_below(static_cast<int>(n));
    centroids.row(0) = points.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;

    Vector mindist(n);
    for (Eigen::Index i = 0; i < n; ++i) mindist(i) = sq_distance(points, i, centroids, 0);

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) total += mindist(i);
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double u = rng.next_unit() * total;
            double cum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += mindist(i);
                if (cum > u) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {  // roundoff pushed u past the last positive weight
                for (Eigen::Index i = n - 1; i >= 0; --i) {
                    if (mindist(i) > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick < 0) {
            // All remaining distances are zero (duplicate-heavy data): pick
            // uniformly among the not-yet-chosen points.
            int free_count = 0;
            for (Eigen::Index i = 0; i < n; ++i) free_count += chosen[static_cast<std::size_t>(i)] ? 0 : 1;
            int target = free_count > 0 ? rng.next_below(free_count) : rng.next_below(static_cast<int>(n));
            if (free_count == 0) {
                pick = target;
            } else {
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (chosen[static_cast<std::size_t>(i)]) continue;
                    if (target-- == 0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        centroids.row(c) = points.row(pick);
        chosen[static_cast<std::size_t>(pick)] = 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            mindist(i) = std::min(mindist(i), sq_distance(points, i, centroids, c));
        }
    }
    return centroids;
}

}  // namespace

SingleRun lloyd_run(const Matrix& points, int k, int max_iters, double tol, std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    SplitMix rng{mix64(seed)};

    SingleRun run;
    run.centroids = kmeanspp_init(points, k, rng);

    Vector sqdist(n);
    Matrix sums;
    std::vector<int> counts;
    for (int iter = 0; iter < max_iters; ++iter) {
        kernels::assign_to_centroids(points, run.centroids, run.labels, sqdist);
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) inertia += sqdist(i);
        run.inertia_trace.push_back(inertia);

        kernels::centroid_sums(points, run.labels, k, sums, counts);

        Matrix updated(k, points.cols());
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                updated.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            } else {
                updated.row(c) = run.centroids.row(c);
            }
        }

        // Re-seed empty clusters to the point farthest from its centroid.
        // Claimed points are excluded so several empties pick distinct hosts.
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            Eigen::Index farthest = -1;
            double best = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (sqdist(i) > best) {
                    best = sqdist(i);
                    farthest = i;
                }
            }
            updated.row(c) = points.row(farthest);
            const int old = run.labels[static_cast<std::size_t>(farthest)];
            counts[static_cast<std::size_t>(old)] -= 1;
            counts[static_cast<std::size_t>(c)] += 1;
            run.labels[static_cast<std::size_t>(farthest)] = c;
            sqdist(farthest) = 0.0;
        }

        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            movement = std::max(movement, std::sqrt(sq_distance(updated, c, run.centroids, c)));
        }
        run.centroids = std::move(updated);
        if (movement < tol) break;
    }

    kernels::assign_to_centroids(points, run.centroids, run.labels, sqdist);
    run.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) run.inertia += sqdist(i);
    run.inertia_trace.push_back(run.inertia);
    return run;
}

}  // namespace detail

KMeansResult kmeans(const Matrix& points, int k, int restarts, int max_iters, double tol,
                    std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    if (k < 1) throw ParamError("k must be positive");
    if (n < k) {
        throw SizeError("k-means needs at least k = " + std::to_string(k) + " points, got " +
                        std::to_string(n));
    }
    if (!points.allFinite()) throw NonFiniteError("k-means input has non-finite entries");
    if (restarts < 1) throw ParamError("restarts must be at least 1");

    std::vector<detail::SingleRun> runs(static_cast<std::size_t>(restarts));
    #pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
        runs[static_cast<std::size_t>(r)] =
            detail::lloyd_run(points, k, max_iters, tol, derive_seed(seed, static_cast<std::uint64_t>(r)));
    }

    // Best inertia wins; ties keep the lower restart index, so the result
    // does not depend on scheduling.
    int best = 0;
    for (int r = 1; r < restarts; ++r) {
        if (runs[static_cast<std::size_t>(r)].inertia < runs[static_cast<std::size_t>(best)].inertia) {
            best = r;
        }
    }

    detail::SingleRun& winner = runs[static_cast<std::size_t>(best)];
    KMeansResult result;
    result.assignment = make_cluster_assignment(std::move(winner.labels), k);
    result.centroids = std::move(winner.centroids);
    result.inertia = winner.inertia;
    result.restarts_run = restarts;
    return result;
}

}  // namespace mlg
