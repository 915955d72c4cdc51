#pragma once

// Versioned JSON persistence for the inductive models (PAT and ODIn), so a
// model trained once can quantify any number of later samples.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocq/error.hpp"
#include "ocq/odin.hpp"
#include "ocq/threshold_quant.hpp"

namespace ocq {

constexpr int kModelFormatVersion = 1;

struct StoredModel {
    std::string algorithm;  // "pat" or "odin"
    std::uint64_t k = 10;   // cross-validation folds used at training time
    std::uint64_t seed = 0;
    std::string config_hash;
    std::optional<PatModel> pat;
    std::optional<OdinModel> odin;
};

namespace detail {

inline nlohmann::json scorer_to_json(const MahalanobisModel& m) {
    nlohmann::json j;
    j["mean"] = m.mean;
    std::vector<std::vector<double>> inv(m.dims());
    for (std::size_t r = 0; r < m.dims(); ++r) {
        inv[r].resize(m.dims());
        for (std::size_t c = 0; c < m.dims(); ++c) inv[r][c] = m.inverse_covariance.at(r, c);
    }
    j["inverse_covariance"] = inv;
    j["regularization"] = m.regularization;
    return j;
}

inline MahalanobisModel scorer_from_json(const nlohmann::json& j) {
    MahalanobisModel m;
    m.mean = j.at("mean").get<std::vector<double>>();
    const auto inv = j.at("inverse_covariance").get<std::vector<std::vector<double>>>();
    if (inv.size() != m.mean.size())
        throw input_error("model file: inverse covariance shape mismatch");
    m.inverse_covariance = Matrix(m.mean.size(), m.mean.size(), 0.0);
    for (std::size_t r = 0; r < inv.size(); ++r) {
        if (inv[r].size() != m.mean.size())
            throw input_error("model file: inverse covariance shape mismatch");
        for (std::size_t c = 0; c < inv[r].size(); ++c)
            m.inverse_covariance.at(r, c) = inv[r][c];
    }
    m.regularization = j.at("regularization").get<double>();
    return m;
}

}  // namespace detail

inline nlohmann::json model_to_json(const StoredModel& stored) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["algorithm"] = stored.algorithm;
    j["k"] = stored.k;
    j["seed"] = stored.seed;
    j["config_hash"] = stored.config_hash;
    if (stored.algorithm == "pat") {
        if (!stored.pat) throw input_error("model_to_json: missing pat payload");
        j["scorer"] = detail::scorer_to_json(stored.pat->scorer);
        j["grid"] = stored.pat->grid;
        j["thresholds"] = stored.pat->thresholds;
    } else if (stored.algorithm == "odin") {
        if (!stored.odin) throw input_error("model_to_json: missing odin payload");
        j["scorer"] = detail::scorer_to_json(stored.odin->scorer);
        j["histogram"]["thresholds"] = stored.odin->positive_hist.thresholds;
        j["histogram"]["masses"] = stored.odin->positive_hist.masses;
        j["limit"] = stored.odin->limit;
        j["b"] = stored.odin->b;
        j["d"] = stored.odin->d;
    } else {
        throw input_error("model_to_json: unknown algorithm '" + stored.algorithm + "'");
    }
    return j;
}

inline StoredModel model_from_json(const nlohmann::json& j) {
    StoredModel stored;
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion)
            throw input_error("model file: unsupported format version");
        stored.algorithm = j.at("algorithm").get<std::string>();
        stored.k = j.at("k").get<std::uint64_t>();
        stored.seed = j.at("seed").get<std::uint64_t>();
        stored.config_hash = j.at("config_hash").get<std::string>();
        if (stored.algorithm == "pat") {
            PatModel pat;
            pat.scorer = detail::scorer_from_json(j.at("scorer"));
            pat.grid = j.at("grid").get<std::vector<double>>();
            pat.thresholds = j.at("thresholds").get<std::vector<double>>();
            if (pat.grid.size() != pat.thresholds.size())
                throw input_error("model file: grid/threshold length mismatch");
            stored.pat = std::move(pat);
        } else if (stored.algorithm == "odin") {
            OdinModel odin;
            odin.scorer = detail::scorer_from_json(j.at("scorer"));
            odin.positive_hist.thresholds =
                j.at("histogram").at("thresholds").get<std::vector<double>>();
            odin.positive_hist.masses =
                j.at("histogram").at("masses").get<std::vector<double>>();
            odin.limit = j.at("limit").get<double>();
            odin.b = j.at("b").get<std::size_t>();
            odin.d = j.at("d").get<double>();
            stored.odin = std::move(odin);
        } else {
            throw input_error("model file: unknown algorithm '" + stored.algorithm + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("model file: ") + e.what());
    }
    return stored;
}

inline void save_model(const std::string& path, const StoredModel& stored) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write model file: " + path);
    out << model_to_json(stored).dump(2) << '\n';
}

inline StoredModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace ocq
