#pragma once

// Uniform front door over all quantification algorithms. The benchmark
// harness and the CLI both resolve algorithm names through this registry.

#include <cstdint>
#include <string>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/matrix.hpp"
#include "ocq/odin.hpp"
#include "ocq/region_search.hpp"
#include "ocq/threshold_quant.hpp"

namespace ocq {

struct EstimatorParams {
    std::vector<double> pat_grid = default_pat_grid();
    std::size_t cv_k = 10;  // folds for positive-score cross-validation
    OdinParams odin;
    TiceParams tice;
    std::size_t ranfoce_trees = 100;
};

inline const std::vector<std::string>& all_algorithms() {
    static const std::vector<std::string> names = {
        "en",  "tice", "extice", "ranfoce",  "pat",
        "odin", "bft",  "cc-fixed", "ensemble-min"};
    return names;
}

inline bool is_known_algorithm(const std::string& name) {
    for (const auto& n : all_algorithms())
        if (n == name) return true;
    return false;
}

// Inductive algorithms produce a reusable model from positives alone;
// the others need the unlabeled sample at estimation time.
inline bool is_inductive(const std::string& name) {
    return name == "pat" || name == "odin";
}

// Thresholds at the 0th..100th percentiles of cross-validated positive
// scores; backs the fixed-threshold baseline and the oracle sweep.
inline std::vector<double> percentile_thresholds(const Matrix& positives,
                                                 std::size_t k, std::uint64_t seed) {
    std::vector<double> scores = cv_scores(positives, k, seed);
    std::sort(scores.begin(), scores.end());
    std::vector<double> thresholds;
    thresholds.reserve(101);
    for (int i = 0; i <= 100; ++i)
        thresholds.push_back(quantile_sorted(scores, static_cast<double>(i) / 100.0));
    return thresholds;
}

// Unadjusted classify-and-count at every percentile threshold.
inline std::vector<double> cc_percentile_estimates(
    const MahalanobisModel& scorer, const std::vector<double>& thresholds,
    const Matrix& test) {
    if (test.rows() == 0) throw input_error("cc estimates: empty test matrix");
    std::vector<double> scores(test.rows());
    for (std::size_t r = 0; r < test.rows(); ++r) scores[r] = scorer.score(test.row(r));
    std::vector<double> estimates;
    estimates.reserve(thresholds.size());
    for (double t : thresholds) estimates.push_back(classify_count(scores, t));
    return estimates;
}

// Shared inputs for one estimation call. Model pointers may be null; the
// dispatcher then trains what it needs from `train_positives` on the fly.
struct QuantifyContext {
    const Matrix* train_positives = nullptr;
    const PatModel* pat = nullptr;
    const OdinModel* odin = nullptr;
    EstimatorParams params;
    std::uint64_t seed = 0;
};

// Estimates the positive proportion of `test` with one named algorithm.
// "bft" is excluded: its threshold choice needs the whole trial table.
inline double quantify_one(const std::string& algorithm, const QuantifyContext& ctx,
                           const Matrix& test) {
    if (!is_known_algorithm(algorithm))
        throw input_error("unknown algorithm '" + algorithm + "'");
    if (algorithm == "bft")
        throw input_error(
            "bft selects its threshold from whole-benchmark truth; run it "
            "through the bench command");
    if (test.rows() == 0) throw input_error("quantify: empty test matrix");

    auto need_positives = [&]() -> const Matrix& {
        if (!ctx.train_positives || ctx.train_positives->rows() == 0)
            throw input_error("quantify: algorithm '" + algorithm +
                              "' needs labeled positives");
        return *ctx.train_positives;
    };

    if (algorithm == "pat" || algorithm == "ensemble-min") {
        PatModel local;
        const PatModel* pat = ctx.pat;
        if (!pat) {
            local = train_pat(need_positives(), ctx.params.pat_grid, ctx.params.cv_k,
                              ctx.seed);
            pat = &local;
        }
        const double p_pat = pat_quantify(*pat, test);
        if (algorithm == "pat") return p_pat;
        const Matrix& l = need_positives();
        const double p_ext =
            c_to_p(extice_estimate(l, test, ctx.params.tice, ctx.seed), l.rows(),
                   test.rows());
        return ensemble_min(p_pat, p_ext);
    }
    if (algorithm == "odin") {
        OdinModel local;
        const OdinModel* odin = ctx.odin;
        if (!odin) {
            local = train_odin(need_positives(), ctx.params.odin, ctx.params.cv_k,
                               ctx.seed);
            odin = &local;
        }
        return odin_quantify(*odin, test);
    }
    if (algorithm == "cc-fixed") {
        const Matrix& l = need_positives();
        const MahalanobisModel scorer =
            ctx.pat ? ctx.pat->scorer : fit_mahalanobis(l);
        const auto thresholds = percentile_thresholds(l, ctx.params.cv_k, ctx.seed);
        return cc_percentile_estimates(scorer, thresholds, test)[50];
    }

    const Matrix& l = need_positives();
    if (algorithm == "en") return c_to_p(en_estimate(l, test), l.rows(), test.rows());
    if (algorithm == "tice")
        return c_to_p(tice_estimate(l, test, ctx.params.tice, ctx.seed), l.rows(),
                      test.rows());
    if (algorithm == "extice")
        return c_to_p(extice_estimate(l, test, ctx.params.tice, ctx.seed), l.rows(),
                      test.rows());
    // ranfoce
    return c_to_p(ranfoce_estimate(l, test, ctx.params.ranfoce_trees, ctx.seed),
                  l.rows(), test.rows());
}

}  // namespace ocq
