#pragma once

// Mixture quantifier over score histograms: fit the largest scaled copy of
// the positive histogram inside the test histogram, tolerating a calibrated
// amount of overflow.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/mahalanobis.hpp"
#include "ocq/matrix.hpp"
#include "ocq/rng.hpp"
#include "ocq/threshold_quant.hpp"

namespace ocq {

struct ScoreHistogram {
    std::vector<double> thresholds;  // strictly ascending bin edges
    std::vector<double> masses;      // |thresholds| + 1 entries, sum 1

    bool same_structure(const ScoreHistogram& other) const {
        return thresholds == other.thresholds;
    }
};

// Bin i holds scores in (t_{i-1}, t_i]; the first and last bins are
// open-ended. Masses are normalized counts.
inline ScoreHistogram build_histogram(const std::vector<double>& scores,
                                      const std::vector<double>& thresholds) {
    if (scores.empty()) throw input_error("build_histogram: empty scores");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] < thresholds[i]))
            throw input_error("build_histogram: thresholds must be strictly ascending");

    ScoreHistogram hist;
    hist.thresholds = thresholds;
    hist.masses.assign(thresholds.size() + 1, 0.0);
    for (double s : scores) {
        const std::size_t bin =
            std::lower_bound(thresholds.begin(), thresholds.end(), s) -
            thresholds.begin();
        hist.masses[bin] += 1.0;
    }
    for (double& m : hist.masses) m /= static_cast<double>(scores.size());
    return hist;
}

// Total mass of alpha * inner exceeding outer: sum_i max(0, alpha*I_i - O_i).
inline double overflow(double alpha, const ScoreHistogram& inner,
                       const ScoreHistogram& outer) {
    if (!inner.same_structure(outer))
        throw input_error("overflow: histogram structures differ");
    if (alpha < 0.0) throw input_error("overflow: alpha must be >= 0");
    double total = 0.0;
    for (std::size_t i = 0; i < inner.masses.size(); ++i)
        total += std::max(0.0, alpha * inner.masses[i] - outer.masses[i]);
    return total;
}

struct OdinScale {
    double s = 0.0;      // largest feasible scale
    double p_hat = 0.0;  // s minus its overflow
};

// Finds s = sup{alpha in [0,1] | overflow(alpha) <= alpha*limit} by
// bisection to 1e-6. overflow(alpha) - alpha*limit is convex piecewise
// linear and 0 at alpha=0, so the feasible set is an interval from 0.
inline OdinScale odin_scale_search(const ScoreHistogram& h_plus,
                                   const ScoreHistogram& h_test, double limit) {
    if (limit < 0.0) throw input_error("odin_scale_search: limit must be >= 0");
    auto feasible = [&](double alpha) {
        return overflow(alpha, h_plus, h_test) <= alpha * limit;
    };
    double lo = 0.0, hi = 1.0;
    if (feasible(hi)) {
        lo = hi;
    } else {
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
    }
    OdinScale out;
    out.s = lo;
    out.p_hat = std::min(1.0, std::max(0.0, lo - overflow(lo, h_plus, h_test)));
    return out;
}

struct OdinModel {
    MahalanobisModel scorer;
    ScoreHistogram positive_hist;
    double limit = 0.0;  // tolerated overflow slope
    std::size_t b = 10;  // inner bin count before de-duplication
    double d = 2.0;      // standard deviations above the mean self-overflow
};

struct OdinParams {
    std::size_t b = 10;
    double d = 2.0;
    std::size_t splits = 30;  // half/half score splits for the limit estimate
};

// Thresholds at percentiles {0, 100/b, ..., 100} of the cross-validated
// positive scores (duplicates merged), giving b inner bins plus two
// open-ended outer bins. The overflow limit is mu + d*sigma of the scale-1
// self-overflow over random half/half splits of the scores.
inline OdinModel train_odin(const Matrix& positives, const OdinParams& params,
                            std::size_t k, std::uint64_t seed) {
    if (params.b < 1) throw input_error("train_odin: b must be >= 1");
    if (params.splits < 2) throw input_error("train_odin: need >= 2 splits");

    OdinModel model;
    model.b = params.b;
    model.d = params.d;
    model.scorer = fit_mahalanobis(positives);

    std::vector<double> scores = cv_scores(positives, k, seed);
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> thresholds;
    for (std::size_t i = 0; i <= params.b; ++i)
        thresholds.push_back(
            quantile_sorted(sorted, static_cast<double>(i) / static_cast<double>(params.b)));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    model.positive_hist = build_histogram(scores, thresholds);

    if (scores.size() < 4)
        throw input_error("train_odin: need >= 4 positive scores for the limit");
    Rng rng(mix_seed(seed, {0x6f64696eULL}));
    std::vector<double> overflows;
    overflows.reserve(params.splits);
    std::vector<double> shuffled = scores;
    const std::size_t half = shuffled.size() / 2;
    for (std::size_t r = 0; r < params.splits; ++r) {
        rng.shuffle(shuffled);
        const std::vector<double> a(shuffled.begin(), shuffled.begin() + half);
        const std::vector<double> b_half(shuffled.begin() + half, shuffled.end());
        overflows.push_back(overflow(1.0, build_histogram(a, thresholds),
                                     build_histogram(b_half, thresholds)));
    }
    double mu = 0.0;
    for (double v : overflows) mu += v;
    mu /= static_cast<double>(overflows.size());
    double var = 0.0;
    for (double v : overflows) var += (v - mu) * (v - mu);
    var /= static_cast<double>(overflows.size() - 1);
    model.limit = std::max(0.0, mu + params.d * std::sqrt(var));
    return model;
}

inline double odin_quantify(const OdinModel& model, const Matrix& test) {
    if (test.rows() == 0) throw input_error("odin_quantify: empty test matrix");
    std::vector<double> scores(test.rows());
    for (std::size_t r = 0; r < test.rows(); ++r)
        scores[r] = model.scorer.score(test.row(r));
    const ScoreHistogram h_test =
        build_histogram(scores, model.positive_hist.thresholds);
    return odin_scale_search(model.positive_hist, h_test, model.limit).p_hat;
}

}  // namespace ocq
