#pragma once

#include <cstdint>
#include <vector>

#include "mlg/types.hpp"

namespace mlg {

struct KMeansResult {
    ClusterAssignment assignment;
    Matrix centroids;  // k x dim
    double inertia = 0.0;
    int restarts_run = 0;
};

// Lloyd iterations with k-means++ seeding, best inertia over `restarts`
// independent initializations (ties keep the lower restart index). Empty
// clusters are re-seeded to the point farthest from its assigned centroid.
// Fully deterministic given the seed; restarts run concurrently.
KMeansResult kmeans(const Matrix& points, int k, int restarts, int max_iters,
                    double tol, std::uint64_t seed);

namespace detail {

struct SingleRun {
    std::vector<int> labels;
    Matrix centroids;
    double inertia = 0.0;
    std::vector<double> inertia_trace;  // inertia after each assignment step
};

// One k-means++ initialization followed by Lloyd iterations; exposed so the
// per-iteration inertia trace can be tested for monotonicity.
SingleRun lloyd_run(const Matrix& points, int k, int max_iters, double tol,
                    std::uint64_t seed);

}  // namespace detail

}  // namespace mlg
