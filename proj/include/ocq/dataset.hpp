#pragma once

// Data model and deterministic sampling machinery shared by the quantifiers
// and the benchmark harness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/matrix.hpp"
#include "ocq/rng.hpp"

namespace ocq {

constexpr int kNoSubclass = -1;

// Labeled feature table. Negative rows may carry a sub-class identifier;
// positive rows never do.
struct Dataset {
    Matrix features;                       // n x m
    std::vector<std::uint8_t> positive;    // per-row class flag
    std::vector<int> subclass;             // per-row id, kNoSubclass if none
    std::vector<std::string> subclass_names;
    std::string name;

    std::size_t size() const { return features.rows(); }
    std::size_t dims() const { return features.cols(); }
    bool has_subclasses() const { return !subclass_names.empty(); }

    std::size_t count_positive() const {
        return static_cast<std::size_t>(
            std::count(positive.begin(), positive.end(), std::uint8_t{1}));
    }
};

// Column-role declaration for CSV ingestion. Non-declared columns are ignored.
struct CsvSchema {
    std::string label_column;
    std::string positive_value;
    std::vector<std::string> feature_columns;
    std::optional<std::string> subclass_column;
};

struct SampleSpec {
    double positive_ratio = 0.5;
    std::size_t max_size = 2000;
    // Optional sub-class name -> proportion, must sum to 1 within 1e-9.
    std::vector<std::pair<std::string, double>> subclass_proportions;
    std::uint64_t seed = 0;
};

// Rows drawn without replacement from a pool, plus the hidden truth used
// for scoring a trial.
struct Sample {
    std::vector<std::size_t> rows;          // indices into the source Dataset
    double true_positive_ratio = 0.0;       // realized positives / size
    std::size_t positive_count = 0;
    std::vector<std::pair<std::string, std::size_t>> subclass_counts;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Round-half-up; sample class counts are defined with this rule so that
// realized counts are platform independent.
inline std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

// Largest-remainder apportionment of `total` into parts proportional to
// `weights`. Ties on the remainder go to the larger weight, then the lower
// index.
inline std::vector<std::size_t> apportion(const std::vector<double>& weights,
                                          std::size_t total) {
    const std::size_t k = weights.size();
    std::vector<std::size_t> counts(k, 0);
    std::vector<double> remainder(k, 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double quota = weights[i] * static_cast<double>(total);
        counts[i] = static_cast<std::size_t>(std::floor(quota));
        remainder[i] = quota - std::floor(quota);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return a < b;
    });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) counts[order[i % k]]++;
    return counts;
}

}  // namespace detail

// Reads a comma-separated file with a header row, '.' decimals, UTF-8.
// Rows are kept in file order.
inline Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    if (schema.feature_columns.empty())
        throw input_error("schema: at least one feature column is required");

    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line))
        throw input_error("empty dataset: " + path + " has no header row");
    const auto header = detail::split_csv_line(header_line);

    auto column_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (detail::trim(header[i]) == name) return i;
        throw input_error("schema: column '" + name + "' not found in " + path);
    };

    const std::size_t label_idx = column_index(schema.label_column);
    std::optional<std::size_t> sub_idx;
    if (schema.subclass_column) sub_idx = column_index(*schema.subclass_column);
    std::vector<std::size_t> feature_idx;
    feature_idx.reserve(schema.feature_columns.size());
    for (const auto& c : schema.feature_columns) feature_idx.push_back(column_index(c));

    Dataset ds;
    ds.name = path;
    std::map<std::string, int> sub_ids;
    std::vector<double> row(feature_idx.size());
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() < header.size())
            throw input_error("row " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " cells, got " +
                              std::to_string(cells.size()));
        for (std::size_t j = 0; j < feature_idx.size(); ++j) {
            const std::string cell = detail::trim(cells[feature_idx[j]]);
            try {
                std::size_t used = 0;
                row[j] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw input_error("row " + std::to_string(line_no) +
                                  ": non-numeric feature value '" + cell + "'");
            }
            if (!std::isfinite(row[j]))
                throw input_error("row " + std::to_string(line_no) +
                                  ": non-finite feature value");
        }
        const bool is_positive =
            detail::trim(cells[label_idx]) == schema.positive_value;
        int sub = kNoSubclass;
        if (sub_idx && !is_positive) {
            const std::string sub_name = detail::trim(cells[*sub_idx]);
            if (sub_name.empty())
                throw input_error("row " + std::to_string(line_no) +
                                  ": negative row lacks a sub-class value");
            auto [it, inserted] =
                sub_ids.emplace(sub_name, static_cast<int>(ds.subclass_names.size()));
            if (inserted) ds.subclass_names.push_back(sub_name);
            sub = it->second;
        }
        ds.features.push_row(row);
        ds.positive.push_back(is_positive ? 1 : 0);
        ds.subclass.push_back(sub);
    }
    if (ds.size() == 0) throw input_error("empty dataset: " + path + " has no rows");
    return ds;
}

// Reads only the named feature columns; for unlabeled CSVs. Same parsing
// rules and errors as load_csv.
inline Matrix load_feature_matrix(const std::string& path,
                                  const std::vector<std::string>& feature_columns) {
    if (feature_columns.empty())
        throw input_error("schema: at least one feature column is required");
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line))
        throw input_error("empty dataset: " + path + " has no header row");
    const auto header = detail::split_csv_line(header_line);
    std::vector<std::size_t> feature_idx;
    for (const auto& name : feature_columns) {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i)
            if (detail::trim(header[i]) == name) {
                feature_idx.push_back(i);
                found = true;
                break;
            }
        if (!found)
            throw input_error("schema: column '" + name + "' not found in " + path);
    }

    Matrix features;
    std::vector<double> row(feature_idx.size());
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() < header.size())
            throw input_error("row " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " cells, got " +
                              std::to_string(cells.size()));
        for (std::size_t j = 0; j < feature_idx.size(); ++j) {
            const std::string cell = detail::trim(cells[feature_idx[j]]);
            try {
                std::size_t used = 0;
                row[j] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw input_error("row " + std::to_string(line_no) +
                                  ": non-numeric feature value '" + cell + "'");
            }
            if (!std::isfinite(row[j]))
                throw input_error("row " + std::to_string(line_no) +
                                  ": non-finite feature value");
        }
        features.push_row(row);
    }
    if (features.rows() == 0)
        throw input_error("empty dataset: " + path + " has no rows");
    return features;
}

// Stratified k-fold split over (label, subclass). Folds partition all rows;
// per-stratum fold sizes differ by at most one. Deterministic in the seed.
inline std::vector<std::vector<std::size_t>> kfold_split(const Dataset& dataset,
                                                         std::size_t k,
                                                         std::uint64_t seed) {
    const std::size_t n = dataset.size();
    if (k < 2 || k > n)
        throw input_error("kfold: k must satisfy 2 <= k <= n (k=" +
                          std::to_string(k) + ", n=" + std::to_string(n) + ")");

    // Strata keyed by (positive, subclass id); map iteration gives a fixed order.
    std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < n; ++i)
        strata[{dataset.positive[i] ? 1 : 0, dataset.subclass[i]}].push_back(i);

    std::vector<std::vector<std::size_t>> folds(k);
    Rng rng(mix_seed(seed, {0x6b666f6cULL}));  // one stream for the whole split
    std::size_t stratum_index = 0;
    for (auto& [key, rows] : strata) {
        rng.shuffle(rows);
        // Rotate the fold that receives the extras so totals stay balanced.
        const std::size_t start = stratum_index % k;
        for (std::size_t i = 0; i < rows.size(); ++i)
            folds[(start + i) % k].push_back(rows[i]);
        ++stratum_index;
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

// Draws a sample without replacement from `pool` (indices into `dataset`).
// The realized size is the largest feasible size not exceeding spec.max_size;
// positives get round-half-up of ratio * size, negatives the remainder
// (apportioned over sub-classes by largest remainder when proportions are
// given). Deterministic in spec.seed via integer-only index arithmetic.
inline Sample draw_sample(const Dataset& dataset,
                          const std::vector<std::size_t>& pool,
                          const SampleSpec& spec) {
    if (spec.positive_ratio < 0.0 || spec.positive_ratio > 1.0)
        throw input_error("sample spec: positive_ratio outside [0,1]");
    if (spec.max_size == 0) throw input_error("sample spec: max_size must be >= 1");
    if (!spec.subclass_proportions.empty()) {
        double sum = 0.0;
        for (const auto& [name, w] : spec.subclass_proportions) {
            if (w < 0.0 || w > 1.0)
                throw input_error("sample spec: proportion outside [0,1]");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw input_error("sample spec: sub-class proportions must sum to 1");
    }

    std::vector<std::size_t> positives;
    std::map<std::string, std::vector<std::size_t>> negatives_by_sub;
    std::vector<std::size_t> negatives_all;
    for (std::size_t idx : pool) {
        if (dataset.positive[idx]) {
            positives.push_back(idx);
        } else {
            negatives_all.push_back(idx);
            const int sub = dataset.subclass[idx];
            const std::string sub_name =
                sub == kNoSubclass ? std::string() : dataset.subclass_names[sub];
            negatives_by_sub[sub_name].push_back(idx);
        }
    }

    std::vector<double> sub_weights;
    std::vector<const std::vector<std::size_t>*> sub_pools;
    for (const auto& [name, w] : spec.subclass_proportions) {
        auto it = negatives_by_sub.find(name);
        if (it == negatives_by_sub.end())
            throw input_error("sample spec: pool has no sub-class '" + name + "'");
        sub_weights.push_back(w);
        sub_pools.push_back(&it->second);
    }

    const bool use_subclasses = !spec.subclass_proportions.empty();
    const double p = spec.positive_ratio;

    auto feasible = [&](std::size_t size, std::size_t& pos_out,
                        std::vector<std::size_t>& sub_counts_out) {
        const std::size_t n_pos = detail::round_half_up(p * static_cast<double>(size));
        if (n_pos > size || n_pos > positives.size()) return false;
        const std::size_t n_neg = size - n_pos;
        if (use_subclasses) {
            const auto counts = detail::apportion(sub_weights, n_neg);
            for (std::size_t i = 0; i < counts.size(); ++i)
                if (counts[i] > sub_pools[i]->size()) return false;
            sub_counts_out = counts;
        } else if (n_neg > negatives_all.size()) {
            return false;
        }
        pos_out = n_pos;
        return true;
    };

    std::size_t size = std::min(spec.max_size, pool.size());
    std::size_t n_pos = 0;
    std::vector<std::size_t> sub_counts;
    for (; size >= 1; --size)
        if (feasible(size, n_pos, sub_counts)) break;
    if (size == 0)
        throw input_error("sample spec: pool cannot satisfy the requested ratio");

    Rng rng(spec.seed);
    auto take = [&rng](std::vector<std::size_t> rows, std::size_t count) {
        rng.shuffle(rows);
        rows.resize(count);
        return rows;
    };

    Sample sample;
    auto chosen_pos = take(positives, n_pos);
    sample.rows.insert(sample.rows.end(), chosen_pos.begin(), chosen_pos.end());
    if (use_subclasses) {
        for (std::size_t i = 0; i < sub_pools.size(); ++i) {
            auto chosen = take(*sub_pools[i], sub_counts[i]);
            sample.rows.insert(sample.rows.end(), chosen.begin(), chosen.end());
            sample.subclass_counts.emplace_back(spec.subclass_proportions[i].first,
                                                sub_counts[i]);
        }
    } else {
        auto chosen = take(negatives_all, size - n_pos);
        sample.rows.insert(sample.rows.end(), chosen.begin(), chosen.end());
        std::map<std::string, std::size_t> tally;
        for (std::size_t idx : chosen) {
            const int sub = dataset.subclass[idx];
            if (sub != kNoSubclass) tally[dataset.subclass_names[sub]]++;
        }
        for (const auto& [name, count] : tally)
            sample.subclass_counts.emplace_back(name, count);
    }
    sample.positive_count = n_pos;
    sample.true_positive_ratio =
        static_cast<double>(n_pos) / static_cast<double>(size);
    return sample;
}

}  // namespace ocq
