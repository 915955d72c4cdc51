#pragma once

// Shared synthetic-data builders for the test suite.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ocq/dataset.hpp"
#include "ocq/matrix.hpp"
#include "ocq/rng.hpp"

namespace testutil {

inline ocq::Matrix make_blob(ocq::Rng& rng, std::size_t n,
                             const std::vector<double>& mean, double sigma) {
    ocq::Matrix out;
    std::vector<double> row(mean.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < mean.size(); ++j)
            row[j] = mean[j] + sigma * rng.normal();
        out.push_row(row);
    }
    return out;
}

// Two Gaussian classes, optionally splitting the negatives into equal-sized
// sub-classes offset along the first axis.
inline ocq::Dataset make_two_class(std::size_t n_pos, std::size_t n_neg,
                                   double separation, std::uint64_t seed,
                                   std::size_t n_subclasses = 0) {
    ocq::Rng rng(seed);
    ocq::Dataset ds;
    ds.name = "synthetic";
    const ocq::Matrix pos = make_blob(rng, n_pos, {0.0, 0.0}, 1.0);
    for (std::size_t i = 0; i < n_pos; ++i) {
        ds.features.push_row(pos.row(i));
        ds.positive.push_back(1);
        ds.subclass.push_back(ocq::kNoSubclass);
    }
    for (std::size_t s = 0; s < std::max<std::size_t>(1, n_subclasses); ++s)
        if (n_subclasses > 0) ds.subclass_names.push_back("s" + std::to_string(s));
    const std::size_t groups = std::max<std::size_t>(1, n_subclasses);
    for (std::size_t i = 0; i < n_neg; ++i) {
        const std::size_t s = i % groups;
        const double cx = separation + 2.0 * static_cast<double>(s);
        std::vector<double> row = {cx + rng.normal(), separation + rng.normal()};
        ds.features.push_row(row);
        ds.positive.push_back(0);
        ds.subclass.push_back(n_subclasses > 0 ? static_cast<int>(s)
                                               : ocq::kNoSubclass);
    }
    return ds;
}

inline std::vector<std::size_t> all_rows(const ocq::Dataset& ds) {
    std::vector<std::size_t> rows(ds.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return rows;
}

// Unique scratch directory for file-based tests.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("ocq_test_" + tag + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace testutil
