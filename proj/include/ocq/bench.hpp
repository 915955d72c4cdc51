#pragma once

// Four-experiment benchmark harness: ratio sweeps over k-fold splits,
// randomized sub-class mixes, per-sub-class difficulty profiles, and a
// sequential timing protocol. Trial tables are deterministic in the seed.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ocq/dataset.hpp"
#include "ocq/error.hpp"
#include "ocq/estimators.hpp"
#include "ocq/metrics.hpp"

namespace ocq {

struct ExperimentConfig {
    int kind = 1;  // 1 ratio sweep, 2 random mixes, 3 per-sub-class, 4 timing
    std::string dataset_path;
    std::string dataset_name;
    CsvSchema schema;
    std::vector<std::string> algorithms = all_algorithms();
    std::vector<double> ratio_grid;   // empty = 0,0.1,...,1
    std::size_t repetitions = 0;      // 0 = kind default (5 / 30 / 5 / 1)
    std::size_t folds = 5;
    std::size_t train_cap = 500;      // positive training-pool cap
    std::size_t test_cap = 0;         // 0 = kind default (2000 / 500 / 2000 / 2000)
    std::uint64_t seed = 0;
    std::size_t workers = 0;          // 0 = hardware concurrency; kind 4 forces 1
    EstimatorParams params;
};

struct TrialRecord {
    std::string dataset;
    std::string algorithm;
    std::size_t fold = 0;
    std::size_t repetition = 0;
    std::size_t ratio_index = 0;
    double true_p = 0.0;
    double estimate = 0.0;
    std::vector<std::pair<std::string, std::size_t>> subclass_mix;
    std::uint64_t quantify_ns = 0;
    std::uint64_t train_ns = 0;  // fold-level model training, inductive methods
};

struct AlgorithmSummary {
    std::size_t trials = 0;
    double mae = 0.0;
    double bias = 0.0;  // mean signed error, estimate - truth
};

struct BftInfo {
    std::size_t percentile = 0;
    double mae = 0.0;
};

struct TimingTotals {
    std::uint64_t train_ns = 0;
    std::uint64_t quantify_ns = 0;
    std::uint64_t total_ns() const { return train_ns + quantify_ns; }
};

struct ExperimentResult {
    ExperimentConfig config;  // resolved copy
    std::string config_hash;
    std::vector<TrialRecord> trials;
    std::vector<std::string> skipped;  // human-readable skip records
    std::map<std::string, AlgorithmSummary> summaries;
    std::optional<BftInfo> bft;
    std::map<std::string, TimingTotals> timing;  // per algorithm, per run
    // Experiment 3 extras.
    std::map<std::string, std::map<std::string, double>> per_subclass_mae;
    std::map<std::string, std::array<double, 3>> aggregate_mae;  // median/p75/worst
    std::vector<std::string> skipped_subclasses;
};

// Predicted signed classify-and-count error (1-tpr+fpr)*p - fpr per grid point.
inline std::vector<double> cc_error_curve(double tpr, double fpr,
                                          const std::vector<double>& grid) {
    if (tpr < 0.0 || tpr > 1.0 || fpr < 0.0 || fpr > 1.0)
        throw input_error("cc_error_curve: rates outside [0,1]");
    const double slope = (1.0 - tpr) + fpr;
    std::vector<double> out;
    out.reserve(grid.size());
    for (double p : grid) out.push_back(slope * p - fpr);
    return out;
}

namespace detail {

inline std::vector<double> default_ratio_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(static_cast<double>(i) / 10.0);
    return grid;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["kind"] = cfg.kind;
    j["dataset_path"] = cfg.dataset_path;
    j["dataset_name"] = cfg.dataset_name;
    j["schema"]["label_column"] = cfg.schema.label_column;
    j["schema"]["positive_value"] = cfg.schema.positive_value;
    j["schema"]["feature_columns"] = cfg.schema.feature_columns;
    j["schema"]["subclass_column"] =
        cfg.schema.subclass_column ? *cfg.schema.subclass_column : "";
    j["algorithms"] = cfg.algorithms;
    j["ratio_grid"] = cfg.ratio_grid;
    j["repetitions"] = cfg.repetitions;
    j["folds"] = cfg.folds;
    j["train_cap"] = cfg.train_cap;
    j["test_cap"] = cfg.test_cap;
    j["seed"] = cfg.seed;
    j["params"]["pat_grid"] = cfg.params.pat_grid;
    j["params"]["cv_k"] = cfg.params.cv_k;
    j["params"]["odin_b"] = cfg.params.odin.b;
    j["params"]["odin_d"] = cfg.params.odin.d;
    j["params"]["odin_splits"] = cfg.params.odin.splits;
    j["params"]["tice_folds"] = cfg.params.tice.folds;
    j["params"]["tice_max_splits"] = cfg.params.tice.max_splits;
    j["params"]["tice_min_labeled"] =
        cfg.params.tice.min_labeled ? static_cast<long long>(*cfg.params.tice.min_labeled)
                                    : -1;
    j["params"]["tice_confidence"] = cfg.params.tice.confidence;
    j["params"]["ranfoce_trees"] = cfg.params.ranfoce_trees;
    return j;
}

inline std::string config_hash_hex(const ExperimentConfig& cfg) {
    const std::string canon = config_to_json(cfg).dump();
    const std::uint64_t h = fnv1a64(canon.data(), canon.size());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline ExperimentConfig resolve_config(const ExperimentConfig& in) {
    ExperimentConfig cfg = in;
    if (cfg.kind < 1 || cfg.kind > 4)
        throw input_error("config: experiment kind must be 1..4");
    if (cfg.repetitions == 0)
        cfg.repetitions = cfg.kind == 2 ? 30 : (cfg.kind == 4 ? 1 : 5);
    if (cfg.test_cap == 0) cfg.test_cap = cfg.kind == 2 ? 500 : 2000;
    if (cfg.ratio_grid.empty()) cfg.ratio_grid = default_ratio_grid();
    for (double p : cfg.ratio_grid)
        if (p < 0.0 || p > 1.0) throw input_error("config: ratio grid outside [0,1]");
    if (cfg.train_cap < 1 || cfg.test_cap < 1)
        throw input_error("config: caps must be >= 1");
    if (cfg.folds < 2) throw input_error("config: folds must be >= 2");
    if (cfg.algorithms.empty()) throw input_error("config: no algorithms selected");
    for (const auto& a : cfg.algorithms)
        if (!is_known_algorithm(a))
            throw input_error("config: unknown algorithm '" + a + "'");
    if (cfg.kind == 4) cfg.workers = 1;
    if (cfg.dataset_name.empty()) cfg.dataset_name = cfg.dataset_path;
    return cfg;
}

// Models trained once per fold and shared by every trial of that fold.
struct FoldModels {
    Matrix train_positives;
    std::optional<PatModel> pat;
    std::uint64_t pat_train_ns = 0;
    std::optional<OdinModel> odin;
    std::uint64_t odin_train_ns = 0;
    std::optional<MahalanobisModel> scorer;     // for cc-fixed / bft
    std::vector<double> thresholds101;
    std::uint64_t threshold_train_ns = 0;
    bool usable = false;
    std::string failure;
};

inline std::uint64_t elapsed_ns(std::chrono::steady_clock::time_point t0) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - t0)
            .count());
}

inline bool wants(const std::vector<std::string>& algorithms, const std::string& a) {
    for (const auto& x : algorithms)
        if (x == a) return true;
    return false;
}

inline FoldModels prepare_fold(const Dataset& ds,
                               const std::vector<std::size_t>& train_fold,
                               const ExperimentConfig& cfg, std::size_t fold) {
    FoldModels models;
    std::vector<std::size_t> pos_rows;
    for (std::size_t idx : train_fold)
        if (ds.positive[idx]) pos_rows.push_back(idx);
    if (pos_rows.size() > cfg.train_cap) {
        Rng rng(mix_seed(cfg.seed, {0x706f6f6cULL, fold}));
        rng.shuffle(pos_rows);
        pos_rows.resize(cfg.train_cap);
        std::sort(pos_rows.begin(), pos_rows.end());
    }
    const std::uint64_t train_seed = mix_seed(cfg.seed, {0x747261696eULL, fold});
    try {
        if (pos_rows.size() < 2)
            throw input_error("training fold has fewer than 2 positives");
        models.train_positives = ds.features.gather(pos_rows);
        const auto& algos = cfg.algorithms;
        if (wants(algos, "pat") || wants(algos, "ensemble-min")) {
            const auto t0 = std::chrono::steady_clock::now();
            models.pat = train_pat(models.train_positives, cfg.params.pat_grid,
                                   cfg.params.cv_k, train_seed);
            models.pat_train_ns = elapsed_ns(t0);
        }
        if (wants(algos, "odin")) {
            const auto t0 = std::chrono::steady_clock::now();
            models.odin = train_odin(models.train_positives, cfg.params.odin,
                                     cfg.params.cv_k, train_seed);
            models.odin_train_ns = elapsed_ns(t0);
        }
        if (wants(algos, "cc-fixed") || wants(algos, "bft")) {
            const auto t0 = std::chrono::steady_clock::now();
            models.scorer = fit_mahalanobis(models.train_positives);
            models.thresholds101 =
                percentile_thresholds(models.train_positives, cfg.params.cv_k, train_seed);
            models.threshold_train_ns = elapsed_ns(t0);
        }
        models.usable = true;
    } catch (const std::exception& e) {
        models.failure = e.what();
    }
    return models;
}

struct UnitResult {
    bool skipped = false;
    std::string skip_reason;
    std::size_t fold = 0, rep = 0, ratio_idx = 0;
    double true_p = 0.0;
    std::vector<std::pair<std::string, std::size_t>> mix;
    // Parallel to the requested algorithm list; NaN = per-algorithm skip.
    std::vector<double> estimates;
    std::vector<std::uint64_t> times;
    std::vector<std::string> algo_errors;
    std::vector<double> bft_cc;  // estimate per percentile threshold
    std::uint64_t bft_ns = 0;
};

// Runs every requested algorithm on one shared sample.
inline UnitResult run_unit(const Dataset& ds, const FoldModels& models,
                           const ExperimentConfig& cfg,
                           const std::vector<std::size_t>& test_pool,
                           std::size_t fold, std::size_t rep, std::size_t ratio_idx,
                           const std::vector<std::pair<std::string, double>>& mix_spec) {
    UnitResult unit;
    unit.fold = fold;
    unit.rep = rep;
    unit.ratio_idx = ratio_idx;
    unit.estimates.assign(cfg.algorithms.size(),
                          std::numeric_limits<double>::quiet_NaN());
    unit.times.assign(cfg.algorithms.size(), 0);
    unit.algo_errors.assign(cfg.algorithms.size(), "");

    if (!models.usable) {
        unit.skipped = true;
        unit.skip_reason = "fold " + std::to_string(fold) + ": " + models.failure;
        return unit;
    }

    std::size_t pool_pos = 0;
    for (std::size_t idx : test_pool) pool_pos += ds.positive[idx] ? 1 : 0;
    const std::size_t pool_neg = test_pool.size() - pool_pos;

    SampleSpec spec;
    spec.positive_ratio = cfg.ratio_grid[ratio_idx];
    spec.max_size = std::min({pool_pos, pool_neg, cfg.test_cap});
    spec.subclass_proportions = mix_spec;
    spec.seed = mix_seed(cfg.seed, {fold, rep, ratio_idx, 0x73616d70ULL});

    Sample sample;
    try {
        if (spec.max_size == 0) throw input_error("test pool lacks a class");
        sample = draw_sample(ds, test_pool, spec);
    } catch (const std::exception& e) {
        unit.skipped = true;
        unit.skip_reason = "fold " + std::to_string(fold) + " rep " +
                           std::to_string(rep) + " ratio " +
                           std::to_string(ratio_idx) + ": " + e.what();
        return unit;
    }
    unit.true_p = sample.true_positive_ratio;
    unit.mix = sample.subclass_counts;
    const Matrix test = ds.features.gather(sample.rows);
    const std::uint64_t trial_seed = mix_seed(cfg.seed, {fold, rep, ratio_idx});

    QuantifyContext ctx;
    ctx.train_positives = &models.train_positives;
    ctx.pat = models.pat ? &*models.pat : nullptr;
    ctx.odin = models.odin ? &*models.odin : nullptr;
    ctx.params = cfg.params;
    ctx.seed = trial_seed;

    // Cache so ensemble-min reuses pat/extice results from the same sample.
    std::map<std::string, double> cache;
    auto estimate_of = [&](const std::string& name) {
        auto it = cache.find(name);
        if (it != cache.end()) return it->second;
        double value;
        if (name == "cc-fixed") {
            value = cc_percentile_estimates(*models.scorer, models.thresholds101,
                                            test)[50];
        } else if (name == "ensemble-min") {
            value = ensemble_min(cache.at("pat"), cache.at("extice"));
        } else {
            value = quantify_one(name, ctx, test);
        }
        cache[name] = value;
        return value;
    };

    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        const std::string& name = cfg.algorithms[a];
        try {
            const auto t0 = std::chrono::steady_clock::now();
            if (name == "bft") {
                unit.bft_cc =
                    cc_percentile_estimates(*models.scorer, models.thresholds101, test);
                unit.bft_ns = elapsed_ns(t0);
            } else if (name == "ensemble-min") {
                estimate_of("pat");
                estimate_of("extice");
                const auto t1 = std::chrono::steady_clock::now();
                unit.estimates[a] = estimate_of("ensemble-min");
                unit.times[a] = elapsed_ns(t1);
            } else {
                unit.estimates[a] = estimate_of(name);
                unit.times[a] = elapsed_ns(t0);
            }
        } catch (const std::exception& e) {
            unit.algo_errors[a] = e.what();
        }
    }
    return unit;
}

inline std::uint64_t fold_train_ns(const FoldModels& models, const std::string& algo) {
    if (algo == "pat" || algo == "ensemble-min") return models.pat_train_ns;
    if (algo == "odin") return models.odin_train_ns;
    if (algo == "cc-fixed" || algo == "bft") return models.threshold_train_ns;
    return 0;
}

// Core ratio-sweep protocol shared by experiments 1, 2 and 4.
inline ExperimentResult run_sweep(const Dataset& ds, const ExperimentConfig& cfg) {
    if (ds.count_positive() == 0 || ds.count_positive() == ds.size())
        throw input_error("experiment: dataset needs both classes");
    if (cfg.kind == 2 && !ds.has_subclasses())
        throw input_error("experiment 2: dataset declares no sub-classes");

    ExperimentResult result;
    result.config = cfg;
    result.config_hash = config_hash_hex(cfg);

    const auto folds = kfold_split(ds, cfg.folds, cfg.seed);
    const std::size_t fold_count = cfg.kind == 4 ? 1 : cfg.folds;

    std::vector<FoldModels> models(fold_count);
    std::vector<std::vector<std::size_t>> test_pools(fold_count);
    for (std::size_t f = 0; f < fold_count; ++f) {
        models[f] = prepare_fold(ds, folds[f], cfg, f);
        for (std::size_t g = 0; g < cfg.folds; ++g)
            if (g != f)
                test_pools[f].insert(test_pools[f].end(), folds[g].begin(),
                                     folds[g].end());
        std::sort(test_pools[f].begin(), test_pools[f].end());
    }

    // One unit = one shared sample evaluated by every algorithm.
    struct UnitKey {
        std::size_t fold, rep, ratio;
    };
    std::vector<UnitKey> keys;
    for (std::size_t f = 0; f < fold_count; ++f)
        for (std::size_t r = 0; r < cfg.repetitions; ++r)
            for (std::size_t g = 0; g < cfg.ratio_grid.size(); ++g)
                keys.push_back({f, r, g});

    auto mix_for = [&](const UnitKey& key) {
        std::vector<std::pair<std::string, double>> mix;
        if (cfg.kind != 2) return mix;
        // Flat Dirichlet over the declared sub-classes.
        Rng rng(mix_seed(cfg.seed, {key.fold, key.rep, key.ratio, 0x6d6978ULL}));
        std::vector<double> draws(ds.subclass_names.size());
        double total = 0.0;
        for (double& d : draws) {
            d = -std::log(std::max(1e-300, rng.uniform01()));
            total += d;
        }
        for (std::size_t i = 0; i < draws.size(); ++i)
            mix.emplace_back(ds.subclass_names[i], draws[i] / total);
        // Exact unit sum regardless of rounding.
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < mix.size(); ++i) sum += mix[i].second;
        mix.back().second = 1.0 - sum;
        return mix;
    };

    std::vector<UnitResult> units(keys.size());
    auto run_one = [&](std::size_t u) {
        const UnitKey& key = keys[u];
        units[u] = run_unit(ds, models[key.fold], cfg, test_pools[key.fold], key.fold,
                            key.rep, key.ratio, mix_for(key));
    };

    std::size_t workers =
        cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, keys.size());
    if (workers <= 1) {
        for (std::size_t u = 0; u < keys.size(); ++u) run_one(u);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t u = next.fetch_add(1);
                    if (u >= keys.size()) return;
                    try {
                        run_one(u);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Oracle threshold choice over all completed trials.
    std::optional<std::size_t> bft_slot;
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
        if (cfg.algorithms[a] == "bft") bft_slot = a;
    if (bft_slot) {
        std::vector<double> err(101, 0.0);
        std::size_t n = 0;
        for (const auto& unit : units) {
            if (unit.skipped || unit.bft_cc.empty()) continue;
            for (std::size_t i = 0; i < err.size(); ++i)
                err[i] += std::abs(unit.bft_cc[i] - unit.true_p);
            ++n;
        }
        if (n > 0) {
            for (double& e : err) e /= static_cast<double>(n);
            const BftChoice choice = bft_oracle(err);
            result.bft = BftInfo{choice.percentile, choice.mae};
        }
    }

    // Flatten in deterministic unit-then-algorithm order.
    for (const auto& unit : units) {
        if (unit.skipped) {
            result.skipped.push_back(unit.skip_reason);
            continue;
        }
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
            const std::string& name = cfg.algorithms[a];
            if (!unit.algo_errors[a].empty()) {
                result.skipped.push_back(
                    "fold " + std::to_string(unit.fold) + " rep " +
                    std::to_string(unit.rep) + " ratio " +
                    std::to_string(unit.ratio_idx) + " " + name + ": " +
                    unit.algo_errors[a]);
                continue;
            }
            TrialRecord rec;
            rec.dataset = cfg.dataset_name;
            rec.algorithm = name;
            rec.fold = unit.fold;
            rec.repetition = unit.rep;
            rec.ratio_index = unit.ratio_idx;
            rec.true_p = unit.true_p;
            rec.subclass_mix = unit.mix;
            if (name == "bft") {
                if (!result.bft) continue;
                rec.estimate = unit.bft_cc[result.bft->percentile];
                rec.quantify_ns = unit.bft_ns;
            } else {
                if (std::isnan(unit.estimates[a])) continue;
                rec.estimate = unit.estimates[a];
                rec.quantify_ns = unit.times[a];
            }
            rec.train_ns = fold_train_ns(models[unit.fold], name);
            result.trials.push_back(std::move(rec));
        }
    }

    // Per-algorithm accuracy and timing totals.
    for (const auto& rec : result.trials) {
        auto& s = result.summaries[rec.algorithm];
        s.trials += 1;
        s.mae += std::abs(rec.estimate - rec.true_p);
        s.bias += rec.estimate - rec.true_p;
        result.timing[rec.algorithm].quantify_ns += rec.quantify_ns;
    }
    for (auto& [name, s] : result.summaries) {
        s.mae /= static_cast<double>(s.trials);
        s.bias /= static_cast<double>(s.trials);
    }
    for (auto& [name, t] : result.timing)
        for (std::size_t f = 0; f < fold_count; ++f)
            if (models[f].usable) t.train_ns += fold_train_ns(models[f], name);
    return result;
}

// Per-sub-class protocol: one derived dataset per negative sub-class.
inline ExperimentResult run_subclass_profile(const Dataset& ds,
                                             const ExperimentConfig& cfg) {
    if (!ds.has_subclasses())
        throw input_error("experiment 3: dataset declares no sub-classes");

    ExperimentResult result;
    result.config = cfg;
    result.config_hash = config_hash_hex(cfg);

    std::map<std::string, std::vector<double>> mae_lists;  // algo -> per-subclass MAE
    for (std::size_t s = 0; s < ds.subclass_names.size(); ++s) {
        const std::string& sub_name = ds.subclass_names[s];
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds.positive[i] || ds.subclass[i] == static_cast<int>(s))
                rows.push_back(i);

        Dataset derived;
        derived.name = cfg.dataset_name + "[" + sub_name + "]";
        derived.features = ds.features.gather(rows);
        derived.subclass_names = {sub_name};
        for (std::size_t idx : rows) {
            derived.positive.push_back(ds.positive[idx]);
            derived.subclass.push_back(ds.positive[idx] ? kNoSubclass : 0);
        }

        ExperimentConfig sub_cfg = cfg;
        sub_cfg.kind = 1;
        sub_cfg.dataset_name = derived.name;
        sub_cfg.seed = mix_seed(cfg.seed, {fnv1a64(sub_name.data(), sub_name.size())});
        ExperimentResult sub_result;
        try {
            sub_result = run_sweep(derived, sub_cfg);
            if (sub_result.trials.empty())
                throw estimation_error("all trials skipped");
        } catch (const std::exception& e) {
            result.skipped_subclasses.push_back(sub_name + ": " + e.what());
            continue;
        }
        for (const auto& rec : sub_result.trials) result.trials.push_back(rec);
        for (const auto& msg : sub_result.skipped) result.skipped.push_back(msg);
        for (const auto& [algo, summary] : sub_result.summaries) {
            result.per_subclass_mae[sub_name][algo] = summary.mae;
            mae_lists[algo].push_back(summary.mae);
        }
        for (const auto& [algo, t] : sub_result.timing) {
            result.timing[algo].train_ns += t.train_ns;
            result.timing[algo].quantify_ns += t.quantify_ns;
        }
    }
    if (result.per_subclass_mae.empty())
        throw estimation_error("experiment 3: every sub-class was skipped");

    for (auto& [algo, maes] : mae_lists) {
        std::sort(maes.begin(), maes.end());
        result.aggregate_mae[algo] = {quantile_sorted(maes, 0.5),
                                      quantile_sorted(maes, 0.75), maes.back()};
    }
    for (const auto& rec : result.trials) {
        auto& s = result.summaries[rec.algorithm];
        s.trials += 1;
        s.mae += std::abs(rec.estimate - rec.true_p);
        s.bias += rec.estimate - rec.true_p;
    }
    for (auto& [name, s] : result.summaries) {
        s.mae /= static_cast<double>(s.trials);
        s.bias /= static_cast<double>(s.trials);
    }
    return result;
}

}  // namespace detail

inline ExperimentResult run_experiment(const Dataset& ds,
                                       const ExperimentConfig& config) {
    const ExperimentConfig cfg = detail::resolve_config(config);
    if (cfg.kind == 3) return detail::run_subclass_profile(ds, cfg);
    return detail::run_sweep(ds, cfg);
}

inline ExperimentResult run_experiment1(const Dataset& ds, ExperimentConfig cfg) {
    cfg.kind = 1;
    return run_experiment(ds, cfg);
}
inline ExperimentResult run_experiment2(const Dataset& ds, ExperimentConfig cfg) {
    cfg.kind = 2;
    return run_experiment(ds, cfg);
}
inline ExperimentResult run_experiment3(const Dataset& ds, ExperimentConfig cfg) {
    cfg.kind = 3;
    return run_experiment(ds, cfg);
}
inline ExperimentResult run_experiment4(const Dataset& ds, ExperimentConfig cfg) {
    cfg.kind = 4;
    return run_experiment(ds, cfg);
}

}  // namespace ocq
