#pragma once

// Region-search label-frequency estimators. The search greedily splits the
// feature space at per-region medians looking for a region with a high
// labeled fraction c = |L|/(|L|+|U|), corrected downward for small counts.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ocq/calibrated.hpp"
#include "ocq/error.hpp"
#include "ocq/matrix.hpp"
#include "ocq/rng.hpp"
#include "ocq/threshold_quant.hpp"

namespace ocq {

struct TiceParams {
    std::size_t folds = 5;
    std::size_t max_splits = 500;
    // Defaults to min(1000, floor(0.5 + 0.1 * |L|)) over the full labeled set.
    std::optional<std::size_t> min_labeled;
    double confidence = 0.1;
};

inline std::size_t default_min_labeled(std::size_t n_labeled) {
    const std::size_t l = static_cast<std::size_t>(
        std::floor(0.5 + 0.1 * static_cast<double>(n_labeled)));
    return std::max<std::size_t>(1, std::min<std::size_t>(1000, l));
}

inline double c_hat_region(std::size_t labeled, std::size_t unlabeled) {
    if (labeled + unlabeled == 0) throw input_error("c_hat_region: empty region");
    return static_cast<double>(labeled) / static_cast<double>(labeled + unlabeled);
}

// One-sided Cantelli bound width: with probability >= 1-conf the observed
// fraction does not exceed the true one by more than delta.
inline double correction_delta(double c_tilde, std::size_t n, double conf) {
    if (c_tilde < 0.0 || c_tilde > 1.0)
        throw input_error("correction_delta: c_tilde outside [0,1]");
    if (n < 1) throw input_error("correction_delta: n must be >= 1");
    if (conf <= 0.0 || conf >= 1.0)
        throw input_error("correction_delta: conf must lie in (0,1)");
    return std::sqrt(c_tilde * (1.0 - c_tilde) * (1.0 - conf) /
                     (conf * static_cast<double>(n)));
}

// Converts a label-frequency estimate into a positive-class proportion for
// the unlabeled set. c_hat = 0 maps to 1 (everything could be positive).
inline double c_to_p(double c_hat, std::size_t n_labeled, std::size_t n_unlabeled) {
    if (n_labeled < 1 || n_unlabeled < 1)
        throw input_error("c_to_p: counts must be >= 1");
    if (c_hat <= 0.0) return 1.0;
    const double nl = static_cast<double>(n_labeled);
    const double nu = static_cast<double>(n_unlabeled);
    const double floor_c = nl / (nl + nu);
    const double c = std::min(1.0, std::max(c_hat, floor_c));
    return std::min(1.0, std::max(0.0, (nl / c - nl) / nu));
}

struct RegionBounds {
    std::vector<double> lower;  // exclusive
    std::vector<double> upper;  // inclusive
};

struct RegionSearchResult {
    double c_hat = 0.0;   // fold-averaged corrected estimate, clamped to [0,1]
    double p_hat = 0.0;   // c_to_p over the full |L|, |U|
    double best_uncorrected = 0.0;
    std::vector<double> fold_estimates;         // corrected, unclamped
    std::vector<double> fold_best_uncorrected;  // for cross-method comparisons
    std::size_t splits_used = 0;                // dequeued regions, all folds
    RegionBounds best_region;                   // region behind the best corrected value
    std::uint64_t wall_ns = 0;
};

namespace detail {

// Deterministic fold-of-row assignment keyed by row content, so that any
// permutation of the same multiset of rows produces the same fold multisets.
inline std::vector<std::size_t> content_folds(const Matrix& rows, std::size_t k,
                                              std::uint64_t seed) {
    const std::size_t n = rows.rows();
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i)
        keyed[i] = {mix_seed(seed, {fnv1a64(rows.row(i))}), i};
    std::sort(keyed.begin(), keyed.end(),
              [&](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  const auto ra = rows.row(a.second);
                  const auto rb = rows.row(b.second);
                  if (std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(),
                                                   rb.end()))
                      return true;
                  if (std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(),
                                                   ra.end()))
                      return false;
                  return a.second < b.second;
              });
    std::vector<std::size_t> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) fold_of[keyed[i].second] = i % k;
    return fold_of;
}

struct SearchRegion {
    std::vector<std::size_t> lab;  // rows of the fold's labeled slice
    std::vector<std::size_t> unl;  // rows of the fold's unlabeled slice
    RegionBounds bounds;
    double c = 0.0;
    std::size_t feature = 0;     // feature that created this region
    std::uint64_t order = 0;     // insertion counter
};

struct RegionPriority {
    bool operator()(const SearchRegion& a, const SearchRegion& b) const {
        if (a.c != b.c) return a.c < b.c;
        if (a.lab.size() != b.lab.size()) return a.lab.size() < b.lab.size();
        if (a.feature != b.feature) return a.feature > b.feature;
        return a.order > b.order;
    }
};

// Lower median of the region's values on one feature, over labeled and
// unlabeled rows together.
inline double region_median(const Matrix& l_rows, const Matrix& u_rows,
                            const SearchRegion& region, std::size_t feature,
                            std::vector<double>& scratch) {
    scratch.clear();
    for (std::size_t r : region.lab) scratch.push_back(l_rows.at(r, feature));
    for (std::size_t r : region.unl) scratch.push_back(u_rows.at(r, feature));
    const std::size_t mid = (scratch.size() - 1) / 2;
    std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
    return scratch[mid];
}

struct FoldSearchOutcome {
    double best_corrected = -std::numeric_limits<double>::infinity();
    double best_uncorrected = 0.0;
    RegionBounds best_bounds;
    std::size_t splits = 0;
};

// Best-first median-split search over one fold slice. When `all_features`
// is set every feature's children are enqueued at each expansion; otherwise
// only the children of the single most promising feature are.
inline FoldSearchOutcome fold_search(const Matrix& l_rows, const Matrix& u_rows,
                                     std::size_t min_labeled, double conf,
                                     std::size_t max_splits, bool all_features) {
    const std::size_t m = l_rows.cols() > 0 ? l_rows.cols() : u_rows.cols();
    FoldSearchOutcome out;

    SearchRegion root;
    root.lab.resize(l_rows.rows());
    root.unl.resize(u_rows.rows());
    for (std::size_t i = 0; i < root.lab.size(); ++i) root.lab[i] = i;
    for (std::size_t i = 0; i < root.unl.size(); ++i) root.unl[i] = i;
    root.bounds.lower.assign(m, -std::numeric_limits<double>::infinity());
    root.bounds.upper.assign(m, std::numeric_limits<double>::infinity());
    root.c = c_hat_region(root.lab.size(), root.unl.size());

    auto consider = [&](const SearchRegion& region) {
        const std::size_t n = region.lab.size() + region.unl.size();
        const double corrected = region.c - correction_delta(region.c, n, conf);
        if (corrected > out.best_corrected) {
            out.best_corrected = corrected;
            out.best_bounds = region.bounds;
        }
        out.best_uncorrected = std::max(out.best_uncorrected, region.c);
    };
    consider(root);

    std::vector<SearchRegion> heap;
    RegionPriority cmp;
    std::uint64_t counter = 0;
    heap.push_back(std::move(root));

    std::vector<double> scratch;
    while (!heap.empty() && out.splits < max_splits) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        SearchRegion parent = std::move(heap.back());
        heap.pop_back();
        ++out.splits;
        const std::size_t parent_total = parent.lab.size() + parent.unl.size();

        // Candidate children per feature; index 0 = low side, 1 = high side.
        double best_feature_c = -1.0;
        std::size_t best_feature = 0;
        std::vector<std::array<std::optional<SearchRegion>, 2>> children(m);
        for (std::size_t f = 0; f < m; ++f) {
            const double median = region_median(l_rows, u_rows, parent, f, scratch);
            SearchRegion low, high;
            for (std::size_t r : parent.lab)
                (l_rows.at(r, f) <= median ? low : high).lab.push_back(r);
            for (std::size_t r : parent.unl)
                (u_rows.at(r, f) <= median ? low : high).unl.push_back(r);
            double feature_c = -1.0;
            for (int side = 0; side < 2; ++side) {
                SearchRegion& child = side == 0 ? low : high;
                const std::size_t total = child.lab.size() + child.unl.size();
                if (total == 0 || total == parent_total) continue;
                if (child.lab.size() < min_labeled) continue;
                child.bounds = parent.bounds;
                if (side == 0)
                    child.bounds.upper[f] = median;
                else
                    child.bounds.lower[f] = median;
                child.c = c_hat_region(child.lab.size(), child.unl.size());
                child.feature = f;
                feature_c = std::max(feature_c, child.c);
                children[f][side] = std::move(child);
            }
            if (feature_c > best_feature_c) {
                best_feature_c = feature_c;
                best_feature = f;
            }
        }

        for (std::size_t f = 0; f < m; ++f) {
            if (!all_features && (best_feature_c < 0.0 || f != best_feature)) continue;
            for (int side = 0; side < 2; ++side) {
                if (!children[f][side]) continue;
                SearchRegion child = std::move(*children[f][side]);
                child.order = counter++;
                consider(child);
                heap.push_back(std::move(child));
                std::push_heap(heap.begin(), heap.end(), cmp);
            }
        }
    }
    return out;
}

inline RegionSearchResult region_search(const Matrix& labeled, const Matrix& unlabeled,
                                        const TiceParams& params, std::uint64_t seed,
                                        bool all_features) {
    if (labeled.rows() == 0 || unlabeled.rows() == 0)
        throw input_error("region search: labeled and unlabeled must be nonempty");
    if (params.folds < 2) throw input_error("region search: folds must be >= 2");
    if (labeled.cols() != unlabeled.cols())
        throw input_error("region search: feature dimension mismatch");

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t min_labeled =
        params.min_labeled.value_or(default_min_labeled(labeled.rows()));

    const auto fold_l = content_folds(labeled, params.folds, mix_seed(seed, {1}));
    const auto fold_u = content_folds(unlabeled, params.folds, mix_seed(seed, {2}));

    RegionSearchResult result;
    double best_corrected = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t used_folds = 0;
    for (std::size_t f = 0; f < params.folds; ++f) {
        std::vector<std::size_t> l_idx, u_idx;
        for (std::size_t i = 0; i < labeled.rows(); ++i)
            if (fold_l[i] == f) l_idx.push_back(i);
        for (std::size_t i = 0; i < unlabeled.rows(); ++i)
            if (fold_u[i] == f) u_idx.push_back(i);
        if (l_idx.empty() && u_idx.empty()) continue;

        const Matrix l_slice = labeled.gather(l_idx);
        const Matrix u_slice = unlabeled.gather(u_idx);
        const auto outcome =
            fold_search(l_slice, u_slice, min_labeled, params.confidence,
                        params.max_splits, all_features);
        result.fold_estimates.push_back(outcome.best_corrected);
        result.fold_best_uncorrected.push_back(outcome.best_uncorrected);
        result.splits_used += outcome.splits;
        result.best_uncorrected =
            std::max(result.best_uncorrected, outcome.best_uncorrected);
        if (outcome.best_corrected > best_corrected) {
            best_corrected = outcome.best_corrected;
            result.best_region = outcome.best_bounds;
        }
        sum += outcome.best_corrected;
        ++used_folds;
    }
    result.c_hat =
        std::min(1.0, std::max(0.0, sum / static_cast<double>(used_folds)));
    result.p_hat = c_to_p(result.c_hat, labeled.rows(), unlabeled.rows());
    result.wall_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - t0)
            .count());
    return result;
}

}  // namespace detail

inline RegionSearchResult tice_search(const Matrix& labeled, const Matrix& unlabeled,
                                      const TiceParams& params, std::uint64_t seed) {
    return detail::region_search(labeled, unlabeled, params, seed, false);
}

inline RegionSearchResult extice_search(const Matrix& labeled, const Matrix& unlabeled,
                                        const TiceParams& params, std::uint64_t seed) {
    return detail::region_search(labeled, unlabeled, params, seed, true);
}

inline double tice_estimate(const Matrix& labeled, const Matrix& unlabeled,
                            const TiceParams& params, std::uint64_t seed) {
    return tice_search(labeled, unlabeled, params, seed).c_hat;
}

inline double extice_estimate(const Matrix& labeled, const Matrix& unlabeled,
                              const TiceParams& params, std::uint64_t seed) {
    return extice_search(labeled, unlabeled, params, seed).c_hat;
}

namespace detail {

struct RanfoceNode {
    std::vector<std::size_t> lab;
    std::vector<std::size_t> unl;
};

inline void ranfoce_recurse(const Matrix& l_rows, const Matrix& u_rows,
                            const RanfoceNode& node, std::size_t min_labeled,
                            Rng& rng, double& best) {
    best = std::max(best, c_hat_region(node.lab.size(), node.unl.size()));
    const std::size_t n_lab = node.lab.size();
    if (n_lab < 2 * min_labeled) return;

    const std::size_t m = l_rows.cols();
    std::vector<std::size_t> valid;
    std::vector<std::pair<double, double>> intervals(m);
    std::vector<double> values(n_lab);
    for (std::size_t f = 0; f < m; ++f) {
        for (std::size_t i = 0; i < n_lab; ++i) values[i] = l_rows.at(node.lab[i], f);
        std::sort(values.begin(), values.end());
        // Thresholds in [a, b) keep >= min_labeled labeled rows on each side.
        const double a = values[min_labeled - 1];
        const double b = values[n_lab - min_labeled];
        if (a < b) {
            valid.push_back(f);
            intervals[f] = {a, b};
        }
    }
    if (valid.empty()) return;

    const std::size_t f = valid[rng.below(valid.size())];
    const auto [a, b] = intervals[f];
    const double threshold = a + rng.uniform01() * (b - a);

    RanfoceNode low, high;
    for (std::size_t r : node.lab)
        (l_rows.at(r, f) <= threshold ? low : high).lab.push_back(r);
    for (std::size_t r : node.unl)
        (u_rows.at(r, f) <= threshold ? low : high).unl.push_back(r);
    ranfoce_recurse(l_rows, u_rows, low, min_labeled, rng, best);
    ranfoce_recurse(l_rows, u_rows, high, min_labeled, rng, best);
}

}  // namespace detail

// Forest of random median-free splits: each tree picks uniformly random
// (feature, threshold) pairs keeping at least min_labeled labeled rows per
// side, scores every node, and reports its maximum c. The forest estimate
// is the median over trees; no small-count correction is applied.
inline double ranfoce_estimate(const Matrix& labeled, const Matrix& unlabeled,
                               std::size_t trees, std::uint64_t seed) {
    if (labeled.rows() == 0 || unlabeled.rows() == 0)
        throw input_error("ranfoce_estimate: labeled and unlabeled must be nonempty");
    if (labeled.cols() != unlabeled.cols())
        throw input_error("ranfoce_estimate: feature dimension mismatch");
    if (trees < 1) throw input_error("ranfoce_estimate: need >= 1 tree");

    const std::size_t min_labeled = default_min_labeled(labeled.rows());
    detail::RanfoceNode root;
    root.lab.resize(labeled.rows());
    root.unl.resize(unlabeled.rows());
    for (std::size_t i = 0; i < root.lab.size(); ++i) root.lab[i] = i;
    for (std::size_t i = 0; i < root.unl.size(); ++i) root.unl[i] = i;

    std::vector<double> estimates;
    estimates.reserve(trees);
    for (std::size_t t = 0; t < trees; ++t) {
        Rng rng(mix_seed(seed, {0x72616e66ULL, t}));
        double best = 0.0;
        detail::ranfoce_recurse(labeled, unlabeled, root, min_labeled, rng, best);
        estimates.push_back(best);
    }
    return median_of(std::move(estimates));
}

// Mean labeled-vs-unlabeled probability over the labeled rows.
inline double en_estimate(const Matrix& labeled, const Matrix& unlabeled) {
    const CalibratedModel model = fit_calibrated(labeled, unlabeled);
    double total = 0.0;
    for (std::size_t r = 0; r < labeled.rows(); ++r)
        total += model.predict_proba(labeled.row(r));
    const double c = total / static_cast<double>(labeled.rows());
    return std::min(1.0, std::max(1e-12, c));
}

inline double ensemble_min(double p_pat, double p_extice) {
    return std::min(p_pat, p_extice);
}

}  // namespace ocq
