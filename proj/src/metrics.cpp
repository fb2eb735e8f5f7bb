#include "mlg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace mlg {

namespace {

// Contiguous 0-based relabeling in first-occurrence order.
std::vector<int> remap(std::span<const int> labels, int* k_out) {
    std::map<int, int> seen;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int v : labels) {
        auto [it, inserted] = seen.try_emplace(v, static_cast<int>(seen.size()));
        out.push_back(it->second);
    }
    if (k_out != nullptr) *k_out = static_cast<int>(seen.size());
    return out;
}

void check_lengths(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) {
        throw SizeError("label vectors differ in length: " + std::to_string(truth.size()) +
                        " vs " + std::to_string(pred.size()));
    }
    if (truth.empty()) throw SizeError("label vectors are empty");
}

// counts(i, j) = |{ n : truth[n] == i and pred[n] == j }|
Eigen::MatrixXi contingency(std::span<const int> truth, std::span<const int> pred, int* kt_out,
                            int* kp_out) {
    int kt = 0;
    int kp = 0;
    const std::vector<int> t = remap(truth, &kt);
    const std::vector<int> p = remap(pred, &kp);
    Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(kt, kp);
    for (std::size_t n = 0; n < t.size(); ++n) counts(t[n], p[n]) += 1;
    if (kt_out != nullptr) *kt_out = kt;
    if (kp_out != nullptr) *kp_out = kp;
    return counts;
}

inline double pairs_of(double n) { return n * (n - 1.0) / 2.0; }

double normal_sf_abs(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace

// Classic O(n^3) potentials-based assignment, run on negated scores.
std::vector<int> hungarian_max_assignment(const Matrix& score) {
    const int n = static_cast<int>(score.rows());
    if (score.cols() != n) throw SizeError("assignment matrix must be square");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row, 1-based
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = -score(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        if (match[static_cast<std::size_t>(j)] > 0) {
            row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
        }
    }
    return row_to_col;
}

double accuracy(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred);
    int kt = 0;
    int kp = 0;
    const Eigen::MatrixXi counts = contingency(truth, pred, &kt, &kp);
    const int s = std::max(kt, kp);
    Matrix score = Matrix::Zero(s, s);
    score.topLeftCorner(kt, kp) = counts.cast<double>();
    const std::vector<int> assign = hungarian_max_assignment(score);
    double matched = 0.0;
    for (int i = 0; i < s; ++i) matched += score(i, assign[static_cast<std::size_t>(i)]);
    return matched / static_cast<double>(truth.size());
}

double nmi(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred);
    int kt = 0;
    int kp = 0;
    const Eigen::MatrixXi counts = contingency(truth, pred, &kt, &kp);
    const double n = static_cast<double>(truth.size());

    const Eigen::VectorXi row = counts.rowwise().sum();
    const Eigen::VectorXi col = counts.colwise().sum();

    double h_truth = 0.0;
    for (int i = 0; i < kt; ++i) {
        const double p = row(i) / n;
        if (p > 0.0) h_truth -= p * std::log(p);
    }
    double h_pred = 0.0;
    for (int j = 0; j < kp; ++j) {
        const double p = col(j) / n;
        if (p > 0.0) h_pred -= p * std::log(p);
    }
    if (h_truth == 0.0 && h_pred == 0.0) return 1.0;
    if (h_truth == 0.0 || h_pred == 0.0) return 0.0;

    double mi = 0.0;
    for (int i = 0; i < kt; ++i) {
        for (int j = 0; j < kp; ++j) {
            if (counts(i, j) == 0) continue;
            const double pij = counts(i, j) / n;
            mi += pij * std::log(n * counts(i, j) / (static_cast<double>(row(i)) * col(j)));
        }
    }
    return std::clamp(mi / (0.5 * (h_truth + h_pred)), 0.0, 1.0);
}

double f1_pairwise(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred);
    if (truth.size() < 2) throw SizeError("pairwise F1 needs at least 2 samples");
    int kt = 0;
    int kp = 0;
    const Eigen::MatrixXi counts = contingency(truth, pred, &kt, &kp);

    double tp = 0.0;
    for (int i = 0; i < kt; ++i) {
        for (int j = 0; j < kp; ++j) tp += pairs_of(counts(i, j));
    }
    if (tp == 0.0) return 0.0;
    double same_pred = 0.0;
    const Eigen::VectorXi col = counts.colwise().sum();
    for (int j = 0; j < kp; ++j) same_pred += pairs_of(col(j));
    double same_truth = 0.0;
    const Eigen::VectorXi row = counts.rowwise().sum();
    for (int i = 0; i < kt; ++i) same_truth += pairs_of(row(i));

    const double precision = tp / same_pred;
    const double recall = tp / same_truth;
    return 2.0 * precision * recall / (precision + recall);
}

MetricReport evaluate(std::span<const int> truth, std::span<const int> pred) {
    return MetricReport{accuracy(truth, pred), nmi(truth, pred), f1_pairwise(truth, pred)};
}

namespace {

// Null distribution of the rank sum of a size-n sample drawn from ranks
// 1..N without ties: counts[s] = number of subsets of size n summing to s.
// Doubles hold the counts exactly up to N = 20 (max count C(20,10) << 2^53).
std::vector<double> ranksum_null_counts(int n, int total) {
    const int max_sum = n * total;
    std::vector<std::vector<double>> table(
        static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    table[0][0] = 1.0;
    for (int value = 1; value <= total; ++value) {
        for (int count = std::min(value, n); count >= 1; --count) {
            auto& dst = table[static_cast<std::size_t>(count)];
            const auto& src = table[static_cast<std::size_t>(count) - 1];
            for (int s = max_sum; s >= value; --s) {
                dst[static_cast<std::size_t>(s)] += src[static_cast<std::size_t>(s - value)];
            }
        }
    }
    return table[static_cast<std::size_t>(n)];
}

double binomial(int n, int r) {
    double out = 1.0;
    for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

}  // namespace

namespace {

struct RankSummary {
    int n = 0;
    int m = 0;
    double rank_sum_a = 0.0;  // midranks
    double tie_term = 0.0;    // sum over tie groups of t^3 - t
    bool has_ties = false;
};

RankSummary summarize_ranks(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw SizeError("rank-sum test needs two nonempty samples");
    RankSummary s;
    s.n = static_cast<int>(a.size());
    s.m = static_cast<int>(b.size());
    const int total = s.n + s.m;

    struct Obs {
        double value;
        bool from_a;
    };
    std::vector<Obs> pooled;
    pooled.reserve(static_cast<std::size_t>(total));
    for (double v : a) pooled.push_back({v, true});
    for (double v : b) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(), [](const Obs& x, const Obs& y) { return x.value < y.value; });

    int i = 0;
    while (i < total) {
        int j = i;
        while (j < total && pooled[static_cast<std::size_t>(j)].value == pooled[static_cast<std::size_t>(i)].value) ++j;
        const int t = j - i;
        const double midrank = (i + 1 + j) / 2.0;  // average of ranks i+1..j
        for (int l = i; l < j; ++l) {
            if (pooled[static_cast<std::size_t>(l)].from_a) s.rank_sum_a += midrank;
        }
        if (t > 1) {
            s.has_ties = true;
            s.tie_term += static_cast<double>(t) * t * t - t;
        }
        i = j;
    }
    return s;
}

RankSumResult normal_path(const RankSummary& s) {
    RankSumResult result;
    result.statistic = s.rank_sum_a;
    result.exact = false;
    const int total = s.n + s.m;
    const double mean = s.n * (total + 1) / 2.0;
    const double correction = s.tie_term / (static_cast<double>(total) * (total - 1));
    const double variance = s.n * static_cast<double>(s.m) / 12.0 * ((total + 1) - correction);
    if (variance <= 0.0) {
        result.p_value = 1.0;  // every pooled value identical
        return result;
    }
    const double shift = std::max(0.0, std::abs(s.rank_sum_a - mean) - 0.5);  // continuity
    result.p_value = std::min(1.0, normal_sf_abs(shift / std::sqrt(variance)));
    return result;
}

}  // namespace

RankSumResult wilcoxon_ranksum(std::span<const double> a, std::span<const double> b) {
    const RankSummary s = summarize_ranks(a, b);
    const int total = s.n + s.m;
    if (total > 20 || s.has_ties) return normal_path(s);

    RankSumResult result;
    result.statistic = s.rank_sum_a;
    result.exact = true;
    const std::vector<double> counts = ranksum_null_counts(s.n, total);
    const double denom = binomial(total, s.n);
    const int w = static_cast<int>(std::llround(s.rank_sum_a));
    double below = 0.0;
    double above = 0.0;
    for (int v = 0; v < static_cast<int>(counts.size()); ++v) {
        if (v <= w) below += counts[static_cast<std::size_t>(v)];
        if (v >= w) above += counts[static_cast<std::size_t>(v)];
    }
    result.p_value = std::min(1.0, 2.0 * std::min(below, above) / denom);
    return result;
}

RankSumResult wilcoxon_ranksum_normal(std::span<const double> a, std::span<const double> b) {
    return normal_path(summarize_ranks(a, b));
}

}  // namespace mlg
