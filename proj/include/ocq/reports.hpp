#pragma once

// File emitters for benchmark results. The trial table deliberately omits
// wall-clock columns so that identical config+seed runs produce
// byte-identical files; timings go to a sidecar CSV instead.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocq/bench.hpp"
#include "ocq/error.hpp"

namespace ocq {

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string mix_field(
    const std::vector<std::pair<std::string, std::size_t>>& mix) {
    std::string out;
    for (const auto& [name, count] : mix) {
        if (!out.empty()) out += ';';
        out += name + ':' + std::to_string(count);
    }
    return out;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    return out;
}

}  // namespace detail

inline void write_trials_csv(const std::string& path, const ExperimentResult& result) {
    auto out = detail::open_out(path);
    out << "# config_hash=" << result.config_hash << " seed=" << result.config.seed
        << '\n';
    out << "dataset,algorithm,fold,repetition,ratio_index,true_p,estimate,subclass_mix\n";
    for (const auto& r : result.trials)
        out << r.dataset << ',' << r.algorithm << ',' << r.fold << ',' << r.repetition
            << ',' << r.ratio_index << ',' << detail::format_double(r.true_p) << ','
            << detail::format_double(r.estimate) << ',' << detail::mix_field(r.subclass_mix)
            << '\n';
}

inline void write_timings_csv(const std::string& path,
                              const ExperimentResult& result) {
    auto out = detail::open_out(path);
    out << "# config_hash=" << result.config_hash << " seed=" << result.config.seed
        << '\n';
    out << "dataset,algorithm,fold,repetition,ratio_index,quantify_ns,train_ns\n";
    for (const auto& r : result.trials)
        out << r.dataset << ',' << r.algorithm << ',' << r.fold << ',' << r.repetition
            << ',' << r.ratio_index << ',' << r.quantify_ns << ',' << r.train_ns
            << '\n';
}

inline nlohmann::json summary_to_json(const ExperimentResult& result) {
    nlohmann::json j;
    j["config_hash"] = result.config_hash;
    j["seed"] = result.config.seed;
    j["dataset"] = result.config.dataset_name;
    j["experiment"] = result.config.kind;
    j["config"] = detail::config_to_json(result.config);
    for (const auto& [name, s] : result.summaries) {
        nlohmann::json a;
        a["trials"] = s.trials;
        a["mae"] = s.mae;
        a["bias"] = s.bias;
        if (name == "bft" && result.bft) {
            a["oracle"] = true;
            a["chosen_percentile"] = result.bft->percentile;
        }
        j["algorithms"][name] = a;
    }
    for (const auto& [name, t] : result.timing) {
        j["timing"][name]["train_ns"] = t.train_ns;
        j["timing"][name]["quantify_ns"] = t.quantify_ns;
        j["timing"][name]["total_ns"] = t.total_ns();
    }
    j["skipped"] = result.skipped;
    if (!result.per_subclass_mae.empty()) {
        for (const auto& [sub, algos] : result.per_subclass_mae)
            for (const auto& [algo, mae] : algos)
                j["subclass_mae"][sub][algo] = mae;
        for (const auto& [algo, agg] : result.aggregate_mae) {
            j["aggregate_mae"][algo]["median"] = agg[0];
            j["aggregate_mae"][algo]["p75"] = agg[1];
            j["aggregate_mae"][algo]["worst"] = agg[2];
        }
        j["skipped_subclasses"] = result.skipped_subclasses;
    }
    return j;
}

inline void write_summary_json(const std::string& path,
                               const ExperimentResult& result) {
    auto out = detail::open_out(path);
    out << summary_to_json(result).dump(2) << '\n';
}

// Predicted classify-and-count error curve for external plotting.
inline void write_cc_curve_csv(const std::string& path, double tpr, double fpr,
                               const std::vector<double>& grid,
                               const std::string& config_hash, std::uint64_t seed) {
    const auto curve = cc_error_curve(tpr, fpr, grid);
    auto out = detail::open_out(path);
    out << "# config_hash=" << config_hash << " seed=" << seed << '\n';
    out << "p,predicted_error\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << detail::format_double(grid[i]) << ','
            << detail::format_double(curve[i]) << '\n';
}

}  // namespace ocq
