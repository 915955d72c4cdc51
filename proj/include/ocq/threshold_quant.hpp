#pragma once

// Score-threshold quantifiers: Classify & Count, Adjusted Classify & Count,
// the quantile-threshold median-sweep quantifier (PAT), and the
// best-fixed-threshold oracle baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/mahalanobis.hpp"
#include "ocq/matrix.hpp"

namespace ocq {

// Empirical quantile with linear interpolation between order statistics.
// `sorted` must be ascending and nonempty; q in [0,1].
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw input_error("quantile: empty input");
    if (q < 0.0 || q > 1.0) throw input_error("quantile: q outside [0,1]");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

// Median; even-length input gives the midpoint of the two middle values.
inline double median_of(std::vector<double> values) {
    if (values.empty()) throw input_error("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct RateEstimates {
    double tpr_hat = 1.0;
    double fpr_hat = 0.0;
};

// Fraction of scores strictly above the threshold; ties count as negative.
inline double classify_count(const std::vector<double>& scores, double threshold) {
    if (scores.empty()) throw input_error("classify_count: empty scores");
    std::size_t hits = 0;
    for (double s : scores)
        if (s > threshold) ++hits;
    return static_cast<double>(hits) / static_cast<double>(scores.size());
}

// (p_hat - fpr)/(tpr - fpr), clamped to [0,1].
inline double adjusted_cc(double p_hat, const RateEstimates& rates) {
    if (!(rates.tpr_hat > rates.fpr_hat))
        throw input_error("adjusted_cc: requires tpr_hat > fpr_hat");
    const double v = (p_hat - rates.fpr_hat) / (rates.tpr_hat - rates.fpr_hat);
    return std::min(1.0, std::max(0.0, v));
}

// ACC specialisation with tpr_hat = 1-q and fpr_hat = 0.
inline double pat_adjust(double p_hat, double q) {
    if (q < 0.0 || q >= 1.0) throw input_error("pat_adjust: q must lie in [0,1)");
    return std::min(1.0, p_hat / (1.0 - q));
}

// 0.25, 0.26, ..., 0.75.
inline std::vector<double> default_pat_grid() {
    std::vector<double> grid;
    grid.reserve(51);
    for (int i = 25; i <= 75; ++i) grid.push_back(static_cast<double>(i) / 100.0);
    return grid;
}

struct PatModel {
    std::vector<double> grid;        // q values, ascending
    std::vector<double> thresholds;  // one per q, nondecreasing
    MahalanobisModel scorer;
};

// Thresholds are quantiles of cross-validated positive scores, so that
// roughly a q fraction of genuine positives scores below thresholds[q].
inline PatModel train_pat(const Matrix& positives, const std::vector<double>& grid,
                          std::size_t k, std::uint64_t seed) {
    if (grid.empty()) throw input_error("train_pat: empty quantile grid");
    for (double q : grid)
        if (q < 0.0 || q >= 1.0)
            throw input_error("train_pat: grid values must lie in [0,1)");

    PatModel model;
    model.grid = grid;
    std::sort(model.grid.begin(), model.grid.end());
    model.scorer = fit_mahalanobis(positives);
    std::vector<double> scores = cv_scores(positives, k, seed);
    std::sort(scores.begin(), scores.end());
    model.thresholds.reserve(model.grid.size());
    for (double q : model.grid) model.thresholds.push_back(quantile_sorted(scores, q));
    return model;
}

// One adjusted estimate per grid point, combined by the median.
inline double pat_quantify(const PatModel& model, const Matrix& test) {
    if (test.rows() == 0) throw input_error("pat_quantify: empty test matrix");
    std::vector<double> scores(test.rows());
    for (std::size_t r = 0; r < test.rows(); ++r)
        scores[r] = model.scorer.score(test.row(r));
    std::vector<double> estimates;
    estimates.reserve(model.grid.size());
    for (std::size_t i = 0; i < model.grid.size(); ++i)
        estimates.push_back(
            pat_adjust(classify_count(scores, model.thresholds[i]), model.grid[i]));
    return median_of(estimates);
}

struct BftChoice {
    std::size_t percentile = 0;
    double mae = 0.0;
};

// Picks the percentile threshold with the lowest dataset-level MAE.
// Selection looks at test truth, so reports must flag the result as an
// oracle rather than a deployable method.
inline BftChoice bft_oracle(const std::vector<double>& mae_by_percentile) {
    if (mae_by_percentile.empty()) throw input_error("bft_oracle: empty MAE table");
    BftChoice best{0, mae_by_percentile[0]};
    for (std::size_t i = 1; i < mae_by_percentile.size(); ++i)
        if (mae_by_percentile[i] < best.mae) best = {i, mae_by_percentile[i]};
    return best;
}

}  // namespace ocq
