#pragma once

#include <span>
#include <vector>

#include "mlg/types.hpp"

namespace mlg {

struct MetricReport {
    double acc = 0.0;
    double nmi = 0.0;
    double f1 = 0.0;
};

// Clustering accuracy: best label bijection on the confusion matrix
// (Hungarian assignment; the matrix is zero-padded to square when the
// cluster counts differ). Both inputs are remapped to contiguous labels.
double accuracy(std::span<const int> truth, std::span<const int> pred);

// Mutual information normalized by the arithmetic mean of the two label
// entropies (natural log). 1.0 when both entropies are zero, 0.0 when
// exactly one is.
double nmi(std::span<const int> truth, std::span<const int> pred);

// Pairwise F1 over all N(N-1)/2 sample pairs; 0 when there are no true
// positive pairs.
double f1_pairwise(std::span<const int> truth, std::span<const int> pred);

MetricReport evaluate(std::span<const int> truth, std::span<const int> pred);

struct RankSumResult {
    double statistic = 0.0;  // rank sum of the first sample, midrank ties
    double p_value = 0.0;    // two-sided
    bool exact = false;
};

// Exact two-sided p by null enumeration (dynamic programming) when
// n + m <= 20 and the pooled sample has no ties; otherwise normal
// approximation with tie and continuity corrections.
RankSumResult wilcoxon_ranksum(std::span<const double> a, std::span<const double> b);

// Approximation path on its own, for cross-checking against the exact path.
RankSumResult wilcoxon_ranksum_normal(std::span<const double> a, std::span<const double> b);

// Maximum-score assignment on a square matrix; returns row -> column.
// Exposed for tests and reused by accuracy().
std::vector<int> hungarian_max_assignment(const Matrix& score);

}  // namespace mlg
