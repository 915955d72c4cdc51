// Command-line front end: dataset validation, inductive model training,
// single-sample quantification, and batch experiment execution.
//
// Exit codes: 0 success, 2 input/config error, 3 runtime estimation failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocq/ocq.hpp"

namespace {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

LogLevel log_threshold() {
    const char* env = std::getenv("OCQ_LOG");
    if (!env) return LogLevel::kWarn;
    const std::string v(env);
    if (v == "debug") return LogLevel::kDebug;
    if (v == "info") return LogLevel::kInfo;
    if (v == "error") return LogLevel::kError;
    return LogLevel::kWarn;
}

void log(LogLevel level, const std::string& msg) {
    static const LogLevel threshold = log_threshold();
    if (level >= threshold) std::cerr << "ocq: " << msg << '\n';
}

struct SchemaFlags {
    std::string data_path;
    std::string label_column;
    std::string positive_value;
    std::string subclass_column;
    std::vector<std::string> feature_columns;
};

void add_schema_flags(CLI::App* cmd, SchemaFlags& flags, bool need_label) {
    cmd->add_option("data", flags.data_path, "input CSV file")->required();
    auto* label = cmd->add_option("--label", flags.label_column, "label column name");
    auto* pos = cmd->add_option("--positive", flags.positive_value,
                                "label value marking the positive class");
    if (need_label) {
        label->required();
        pos->required();
    }
    cmd->add_option("--features", flags.feature_columns,
                    "comma-separated feature column names")
        ->required()
        ->delimiter(',');
    cmd->add_option("--subclass", flags.subclass_column,
                    "negative sub-class column name");
}

ocq::CsvSchema schema_of(const SchemaFlags& flags) {
    ocq::CsvSchema schema;
    schema.label_column = flags.label_column;
    schema.positive_value = flags.positive_value;
    schema.feature_columns = flags.feature_columns;
    if (!flags.subclass_column.empty()) schema.subclass_column = flags.subclass_column;
    return schema;
}

// Positives for train/quantify: either every row of the file, or the rows
// matching --label/--positive when given.
ocq::Matrix load_positives(const SchemaFlags& flags) {
    if (flags.label_column.empty())
        return ocq::load_feature_matrix(flags.data_path, flags.feature_columns);
    const ocq::Dataset ds = ocq::load_csv(flags.data_path, schema_of(flags));
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.positive[i]) rows.push_back(i);
    if (rows.empty())
        throw ocq::input_error("no rows match positive value '" +
                               flags.positive_value + "'");
    return ds.features.gather(rows);
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ocq::input_error("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ocq::input_error("config: unknown key '" + key + "' in " + where);
}

std::vector<double> grid_from_bounds(double lo, double hi, double step) {
    if (step <= 0.0 || lo < 0.0 || hi >= 1.0 || lo > hi)
        throw ocq::input_error("pat grid: need 0 <= min <= max < 1 and step > 0");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double q = lo + step * i;
        if (q > hi + 1e-12) break;
        grid.push_back(q);
    }
    return grid;
}

ocq::EstimatorParams params_from_json(const nlohmann::json& j) {
    ocq::EstimatorParams params;
    if (j.is_null()) return params;
    reject_unknown_keys(j, {"pat_grid_min", "pat_grid_max", "pat_grid_step", "cv_k",
                            "odin_b", "odin_d", "odin_splits", "tice_folds",
                            "tice_max_splits", "tice_min_labeled", "tice_confidence",
                            "ranfoce_trees"},
                        "params");
    const double lo = j.value("pat_grid_min", 0.25);
    const double hi = j.value("pat_grid_max", 0.75);
    const double step = j.value("pat_grid_step", 0.01);
    params.pat_grid = grid_from_bounds(lo, hi, step);
    params.cv_k = j.value("cv_k", std::size_t{10});
    params.odin.b = j.value("odin_b", std::size_t{10});
    params.odin.d = j.value("odin_d", 2.0);
    params.odin.splits = j.value("odin_splits", std::size_t{30});
    params.tice.folds = j.value("tice_folds", std::size_t{5});
    params.tice.max_splits = j.value("tice_max_splits", std::size_t{500});
    const long long min_labeled = j.value("tice_min_labeled", -1ll);
    if (min_labeled >= 0)
        params.tice.min_labeled = static_cast<std::size_t>(min_labeled);
    params.tice.confidence = j.value("tice_confidence", 0.1);
    params.ranfoce_trees = j.value("ranfoce_trees", std::size_t{100});
    return params;
}

struct BenchConfig {
    ocq::ExperimentConfig experiment;
    bool has_cc_curve = false;
    double cc_tpr = 0.0, cc_fpr = 0.0;
};

BenchConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ocq::input_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ocq::input_error("config " + path + ": " + e.what());
    }
    reject_unknown_keys(j, {"experiment", "dataset", "algorithms", "ratio_grid",
                            "repetitions", "folds", "train_cap", "test_cap", "seed",
                            "workers", "params", "cc_curve"},
                        "config");
    BenchConfig out;
    auto& cfg = out.experiment;
    try {
        cfg.kind = j.value("experiment", 1);
        const auto& ds = j.at("dataset");
        reject_unknown_keys(ds, {"path", "name", "label_column", "positive_value",
                                 "feature_columns", "subclass_column"},
                            "dataset");
        cfg.dataset_path = ds.at("path").get<std::string>();
        cfg.dataset_name = ds.value("name", cfg.dataset_path);
        cfg.schema.label_column = ds.at("label_column").get<std::string>();
        cfg.schema.positive_value = ds.at("positive_value").get<std::string>();
        cfg.schema.feature_columns =
            ds.at("feature_columns").get<std::vector<std::string>>();
        if (ds.contains("subclass_column"))
            cfg.schema.subclass_column = ds.at("subclass_column").get<std::string>();
        if (j.contains("algorithms"))
            cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        if (j.contains("ratio_grid"))
            cfg.ratio_grid = j.at("ratio_grid").get<std::vector<double>>();
        cfg.repetitions = j.value("repetitions", std::size_t{0});
        cfg.folds = j.value("folds", std::size_t{5});
        cfg.train_cap = j.value("train_cap", std::size_t{500});
        cfg.test_cap = j.value("test_cap", std::size_t{0});
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.workers = j.value("workers", std::size_t{0});
        cfg.params = params_from_json(j.contains("params") ? j.at("params")
                                                           : nlohmann::json());
        if (j.contains("cc_curve")) {
            reject_unknown_keys(j.at("cc_curve"), {"tpr", "fpr"}, "cc_curve");
            out.has_cc_curve = true;
            out.cc_tpr = j.at("cc_curve").at("tpr").get<double>();
            out.cc_fpr = j.at("cc_curve").at("fpr").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ocq::input_error("config " + path + ": " + e.what());
    }
    return out;
}

int cmd_validate(const SchemaFlags& flags, bool as_json) {
    const ocq::Dataset ds = ocq::load_csv(flags.data_path, schema_of(flags));
    const std::size_t positives = ds.count_positive();
    std::vector<std::size_t> sub_counts(ds.subclass_names.size(), 0);
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!ds.positive[i] && ds.subclass[i] != ocq::kNoSubclass)
            sub_counts[ds.subclass[i]]++;
    if (as_json) {
        nlohmann::json j;
        j["dataset"] = flags.data_path;
        j["rows"] = ds.size();
        j["features"] = ds.dims();
        j["positives"] = positives;
        j["negatives"] = ds.size() - positives;
        for (std::size_t s = 0; s < ds.subclass_names.size(); ++s)
            j["subclasses"][ds.subclass_names[s]] = sub_counts[s];
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "dataset: " << flags.data_path << '\n'
                  << "rows: " << ds.size() << '\n'
                  << "features: " << ds.dims() << '\n'
                  << "positives: " << positives << '\n'
                  << "negatives: " << ds.size() - positives << '\n';
        for (std::size_t s = 0; s < ds.subclass_names.size(); ++s)
            std::cout << "subclass " << ds.subclass_names[s] << ": " << sub_counts[s]
                      << '\n';
    }
    return 0;
}

std::string train_config_hash(const std::string& algorithm,
                              const ocq::EstimatorParams& params, std::size_t k,
                              std::uint64_t seed) {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["pat_grid"] = params.pat_grid;
    j["cv_k"] = k;
    j["odin_b"] = params.odin.b;
    j["odin_d"] = params.odin.d;
    j["odin_splits"] = params.odin.splits;
    j["seed"] = seed;
    const std::string canon = j.dump();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      ocq::fnv1a64(canon.data(), canon.size())));
    return buf;
}

int cmd_train(const SchemaFlags& flags, const std::string& algorithm,
              const ocq::EstimatorParams& params, std::uint64_t seed,
              const std::string& out_path, bool as_json) {
    if (!ocq::is_known_algorithm(algorithm))
        throw ocq::input_error("unknown algorithm '" + algorithm + "'");
    if (!ocq::is_inductive(algorithm))
        throw ocq::input_error(
            "algorithm '" + algorithm +
            "' is transductive: it estimates from a (positives, unlabeled) pair "
            "at quantification time and produces no reusable model; only the "
            "inductive algorithms pat and odin can be trained");

    const ocq::Matrix positives = load_positives(flags);
    ocq::StoredModel stored;
    stored.algorithm = algorithm;
    stored.k = params.cv_k;
    stored.seed = seed;
    stored.config_hash = train_config_hash(algorithm, params, params.cv_k, seed);
    if (algorithm == "pat")
        stored.pat = ocq::train_pat(positives, params.pat_grid, params.cv_k, seed);
    else
        stored.odin = ocq::train_odin(positives, params.odin, params.cv_k, seed);
    ocq::save_model(out_path, stored);
    log(LogLevel::kInfo, "wrote model to " + out_path);
    if (as_json) {
        nlohmann::json j;
        j["model"] = out_path;
        j["algorithm"] = algorithm;
        j["config_hash"] = stored.config_hash;
        j["n_positives"] = positives.rows();
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << out_path << '\n';
    }
    return 0;
}

int cmd_quantify(const std::string& model_path, const std::string& algorithm,
                 const std::string& positives_path, const SchemaFlags& data_flags,
                 const ocq::EstimatorParams& params, std::uint64_t seed,
                 bool as_json) {
    if (!model_path.empty() && !algorithm.empty())
        throw ocq::input_error("give either --model or --algorithm, not both");
    if (model_path.empty() && algorithm.empty())
        throw ocq::input_error("one of --model or --algorithm is required");

    const ocq::Matrix test =
        ocq::load_feature_matrix(data_flags.data_path, data_flags.feature_columns);

    double p_hat = 0.0;
    std::string algo_name;
    if (!model_path.empty()) {
        const ocq::StoredModel stored = ocq::load_model(model_path);
        algo_name = stored.algorithm;
        const std::size_t model_dims =
            stored.pat ? stored.pat->scorer.dims() : stored.odin->scorer.dims();
        if (test.cols() != model_dims)
            throw ocq::input_error("model expects " + std::to_string(model_dims) +
                                   " features, input has " +
                                   std::to_string(test.cols()));
        p_hat = stored.pat ? ocq::pat_quantify(*stored.pat, test)
                           : ocq::odin_quantify(*stored.odin, test);
    } else {
        if (positives_path.empty())
            throw ocq::input_error("--algorithm needs --positives");
        SchemaFlags pos_flags = data_flags;
        pos_flags.data_path = positives_path;
        ocq::QuantifyContext ctx;
        const ocq::Matrix positives = load_positives(pos_flags);
        ctx.train_positives = &positives;
        ctx.params = params;
        ctx.seed = seed;
        algo_name = algorithm;
        p_hat = ocq::quantify_one(algorithm, ctx, test);
    }

    if (as_json) {
        nlohmann::json j;
        j["algorithm"] = algo_name;
        j["p_hat"] = p_hat;
        j["n_test"] = test.rows();
        j["seed"] = seed;
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("%.6f\n", p_hat);
    }
    return 0;
}

int cmd_bench(const std::string& config_path, std::uint64_t seed_override,
              bool seed_given, std::size_t workers_override, bool workers_given,
              const std::string& out_dir) {
    BenchConfig bench = parse_run_config(config_path);
    if (seed_given) bench.experiment.seed = seed_override;
    if (workers_given) bench.experiment.workers = workers_override;

    log(LogLevel::kInfo, "loading " + bench.experiment.dataset_path);
    const ocq::Dataset ds =
        ocq::load_csv(bench.experiment.dataset_path, bench.experiment.schema);
    const ocq::ExperimentResult result = ocq::run_experiment(ds, bench.experiment);

    std::filesystem::create_directories(out_dir);
    const auto path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    ocq::write_trials_csv(path("trials.csv"), result);
    ocq::write_timings_csv(path("timings.csv"), result);
    ocq::write_summary_json(path("summary.json"), result);
    if (bench.has_cc_curve)
        ocq::write_cc_curve_csv(path("cc_curve.csv"), bench.cc_tpr, bench.cc_fpr,
                                result.config.ratio_grid, result.config_hash,
                                result.config.seed);

    for (const auto& [name, s] : result.summaries)
        log(LogLevel::kInfo,
            name + ": mae=" + std::to_string(s.mae) + " over " +
                std::to_string(s.trials) + " trials");
    if (!result.skipped.empty())
        log(LogLevel::kWarn,
            std::to_string(result.skipped.size()) + " trial(s) skipped");
    for (const auto& msg : result.skipped) log(LogLevel::kDebug, "skipped: " + msg);
    for (const auto& msg : result.skipped_subclasses)
        log(LogLevel::kWarn, "sub-class skipped: " + msg);
    std::cout << path("summary.json") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-class quantification and positive-unlabeled prior estimation"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    SchemaFlags validate_flags;
    auto* validate = app.add_subcommand("validate", "load a dataset and report counts");
    add_schema_flags(validate, validate_flags, true);

    SchemaFlags train_flags;
    std::string train_algorithm = "pat";
    std::string train_out = "model.json";
    std::uint64_t train_seed = 0;
    double grid_min = 0.25, grid_max = 0.75, grid_step = 0.01;
    std::size_t cv_k = 10, odin_b = 10, odin_splits = 30;
    double odin_d = 2.0;
    auto* train = app.add_subcommand("train", "train a reusable pat or odin model");
    add_schema_flags(train, train_flags, false);
    train->add_option("--algorithm", train_algorithm, "pat or odin")->required();
    train->add_option("--out", train_out, "model file path");
    train->add_option("--seed", train_seed, "training seed");
    train->add_option("--grid-min", grid_min, "lowest pat quantile");
    train->add_option("--grid-max", grid_max, "highest pat quantile");
    train->add_option("--grid-step", grid_step, "pat quantile step");
    train->add_option("--cv-k", cv_k, "cross-validation folds for scores");
    train->add_option("--odin-b", odin_b, "inner histogram bins");
    train->add_option("--odin-d", odin_d, "overflow limit standard deviations");
    train->add_option("--odin-splits", odin_splits, "half/half splits for the limit");

    SchemaFlags quantify_flags;
    std::string quantify_model, quantify_algorithm, quantify_positives;
    std::uint64_t quantify_seed = 0;
    auto* quantify =
        app.add_subcommand("quantify", "estimate the positive proportion of a sample");
    quantify->add_option("data", quantify_flags.data_path, "unlabeled CSV")->required();
    quantify->add_option("--features", quantify_flags.feature_columns,
                         "comma-separated feature column names")
        ->required()
        ->delimiter(',');
    quantify->add_option("--model", quantify_model, "trained model file");
    quantify->add_option("--algorithm", quantify_algorithm,
                         "transductive algorithm name");
    quantify->add_option("--positives", quantify_positives,
                         "labeled positives CSV (transductive path)");
    quantify->add_option("--label", quantify_flags.label_column,
                         "label column in the positives CSV");
    quantify->add_option("--positive", quantify_flags.positive_value,
                         "positive label value in the positives CSV");
    quantify->add_option("--seed", quantify_seed, "estimation seed");

    std::string bench_config, bench_out = ".";
    std::uint64_t bench_seed = 0;
    std::size_t bench_workers = 0;
    auto* bench = app.add_subcommand("bench", "run a benchmark experiment");
    auto* bench_config_opt =
        bench->add_option("--config", bench_config, "experiment config JSON");
    bench_config_opt->required();
    auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "seed override");
    auto* bench_workers_opt =
        bench->add_option("--workers", bench_workers, "worker thread count");
    bench->add_option("--out", bench_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ocq::EstimatorParams train_params;
        train_params.pat_grid = grid_from_bounds(grid_min, grid_max, grid_step);
        train_params.cv_k = cv_k;
        train_params.odin.b = odin_b;
        train_params.odin.d = odin_d;
        train_params.odin.splits = odin_splits;

        if (validate->parsed()) return cmd_validate(validate_flags, as_json);
        if (train->parsed())
            return cmd_train(train_flags, train_algorithm, train_params, train_seed,
                             train_out, as_json);
        if (quantify->parsed())
            return cmd_quantify(quantify_model, quantify_algorithm, quantify_positives,
                                quantify_flags, ocq::EstimatorParams{}, quantify_seed,
                                as_json);
        if (bench->parsed())
            return cmd_bench(bench_config, bench_seed, !bench_seed_opt->empty(),
                             bench_workers, !bench_workers_opt->empty(), bench_out);
        return 2;
    } catch (const ocq::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ocq::estimation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
