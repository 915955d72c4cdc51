#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "ocq/dataset.hpp"
#include "ocq/error.hpp"
#include "ocq/matrix.hpp"
#include "ocq/metrics.hpp"
#include "testutil.hpp"

using ocq::CsvSchema;
using ocq::Dataset;
using ocq::input_error;
using ocq::Matrix;
using ocq::SampleSpec;

TEST_CASE("matrix rejects ragged initializer rows") {
    REQUIRE_THROWS_AS(Matrix({{1.0, 2.0}, {3.0}}), input_error);
    const Matrix m({{1.0, 2.0}, {3.0, 4.0}});
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    REQUIRE(m.at(1, 0) == 3.0);
}

TEST_CASE("matrix gather selects rows in order") {
    const Matrix m({{1.0}, {2.0}, {3.0}});
    const Matrix g = m.gather(std::vector<std::size_t>{2, 0});
    REQUIRE(g.rows() == 2);
    REQUIRE(g.at(0, 0) == 3.0);
    REQUIRE(g.at(1, 0) == 1.0);
}

namespace {

CsvSchema basic_schema() {
    CsvSchema schema;
    schema.label_column = "class";
    schema.positive_value = "A";
    schema.feature_columns = {"x", "y"};
    return schema;
}

}  // namespace

TEST_CASE("csv loads rows in file order with declared columns only") {
    const auto dir = testutil::scratch_dir("csv");
    const auto path = dir / "data.csv";
    testutil::write_file(path,
                         "x,ignored,y,class\n"
                         "1.5,zzz,2.5,A\n"
                         "3.0,zzz,4.0,A\n"
                         "-1.0,zzz,0.25,B\n");
    const Dataset ds = ocq::load_csv(path.string(), basic_schema());
    REQUIRE(ds.size() == 3);
    REQUIRE(ds.dims() == 2);
    REQUIRE(ds.count_positive() == 2);
    REQUIRE(ds.features.at(0, 0) == 1.5);
    REQUIRE(ds.features.at(2, 1) == 0.25);
    REQUIRE(ds.positive[2] == 0);
    REQUIRE_FALSE(ds.has_subclasses());
}

TEST_CASE("csv schema and parse errors") {
    const auto dir = testutil::scratch_dir("csv_err");
    const auto missing = dir / "missing.csv";
    testutil::write_file(missing, "x,class\n1.0,A\n");
    REQUIRE_THROWS_AS(ocq::load_csv(missing.string(), basic_schema()), input_error);

    const auto bad_cell = dir / "bad.csv";
    testutil::write_file(bad_cell, "x,y,class\n1.0,2.0,A\n1.0,oops,B\n");
    try {
        ocq::load_csv(bad_cell.string(), basic_schema());
        FAIL("expected parse error");
    } catch (const input_error& e) {
        REQUIRE(std::string(e.what()).find("row 3") != std::string::npos);
    }

    const auto header_only = dir / "empty.csv";
    testutil::write_file(header_only, "x,y,class\n");
    REQUIRE_THROWS_AS(ocq::load_csv(header_only.string(), basic_schema()),
                      input_error);
}

TEST_CASE("csv enforces sub-class values on negative rows") {
    const auto dir = testutil::scratch_dir("csv_sub");
    const auto path = dir / "data.csv";
    CsvSchema schema = basic_schema();
    schema.subclass_column = "sub";
    testutil::write_file(path,
                         "x,y,class,sub\n"
                         "1.0,2.0,A,\n"
                         "3.0,4.0,B,s1\n"
                         "5.0,6.0,B,s2\n");
    const Dataset ds = ocq::load_csv(path.string(), schema);
    REQUIRE(ds.subclass_names == std::vector<std::string>{"s1", "s2"});
    REQUIRE(ds.subclass[0] == ocq::kNoSubclass);  // positives carry none
    REQUIRE(ds.subclass[1] == 0);

    const auto bad = dir / "bad.csv";
    testutil::write_file(bad, "x,y,class,sub\n1.0,2.0,B,\n");
    REQUIRE_THROWS_AS(ocq::load_csv(bad.string(), schema), input_error);
}

TEST_CASE("kfold partitions the rows with balanced strata") {
    const Dataset ds = testutil::make_two_class(50, 50, 6.0, 1);
    const auto folds = ocq::kfold_split(ds, 5, 9);
    std::set<std::size_t> seen;
    for (const auto& fold : folds) {
        std::size_t pos = 0;
        for (std::size_t idx : fold) {
            REQUIRE(seen.insert(idx).second);  // disjoint
            pos += ds.positive[idx];
        }
        REQUIRE(fold.size() == 20);
        REQUIRE(pos == 10);  // 50/50 stratification, divisible case
    }
    REQUIRE(seen.size() == ds.size());

    const auto again = ocq::kfold_split(ds, 5, 9);
    REQUIRE(folds == again);
    REQUIRE(folds != ocq::kfold_split(ds, 5, 10));
}

TEST_CASE("kfold rejects k larger than the dataset") {
    const Dataset ds = testutil::make_two_class(3, 3, 6.0, 1);
    REQUIRE_THROWS_AS(ocq::kfold_split(ds, 7, 0), input_error);
    REQUIRE_THROWS_AS(ocq::kfold_split(ds, 1, 0), input_error);
}

TEST_CASE("kfold per-stratum sizes differ by at most one") {
    const Dataset ds = testutil::make_two_class(53, 31, 6.0, 2, 2);
    const std::size_t k = 5;
    const auto folds = ocq::kfold_split(ds, k, 3);
    std::map<std::pair<int, int>, std::vector<std::size_t>> counts;
    for (std::size_t f = 0; f < k; ++f)
        for (std::size_t idx : folds[f]) {
            auto& per_fold = counts[{ds.positive[idx], ds.subclass[idx]}];
            per_fold.resize(k, 0);
            per_fold[f]++;
        }
    for (const auto& [stratum, per_fold] : counts) {
        const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
        REQUIRE(*hi - *lo <= 1);
    }
}

TEST_CASE("draw_sample hits the requested ratio exactly") {
    const Dataset ds = testutil::make_two_class(100, 100, 6.0, 3);
    SampleSpec spec;
    spec.positive_ratio = 0.3;
    spec.max_size = 50;
    spec.seed = 5;
    const auto sample = ocq::draw_sample(ds, testutil::all_rows(ds), spec);
    REQUIRE(sample.rows.size() == 50);
    REQUIRE(sample.positive_count == 15);
    REQUIRE(sample.true_positive_ratio == 0.3);
    std::set<std::size_t> unique(sample.rows.begin(), sample.rows.end());
    REQUIRE(unique.size() == sample.rows.size());  // without replacement
}

TEST_CASE("draw_sample rounds positives half-up") {
    const Dataset ds = testutil::make_two_class(100, 100, 6.0, 3);
    SampleSpec spec;
    spec.positive_ratio = 0.25;
    spec.max_size = 10;
    spec.seed = 5;
    // 0.25 * 10 = 2.5 rounds up to 3.
    REQUIRE(ocq::draw_sample(ds, testutil::all_rows(ds), spec).positive_count == 3);
}

TEST_CASE("draw_sample shrinks to the largest feasible size") {
    const Dataset ds = testutil::make_two_class(600, 200, 6.0, 4);
    SampleSpec spec;
    spec.positive_ratio = 1.0;
    spec.max_size = 2000;
    spec.seed = 1;
    const auto sample = ocq::draw_sample(ds, testutil::all_rows(ds), spec);
    REQUIRE(sample.rows.size() == 600);
    REQUIRE(sample.positive_count == 600);
    REQUIRE(sample.true_positive_ratio == 1.0);
}

TEST_CASE("draw_sample apportions sub-classes by largest remainder") {
    const Dataset ds = testutil::make_two_class(100, 300, 6.0, 5, 2);
    SampleSpec spec;
    spec.positive_ratio = 0.5;
    spec.max_size = 40;
    spec.subclass_proportions = {{"s0", 0.8}, {"s1", 0.2}};
    spec.seed = 6;
    const auto sample = ocq::draw_sample(ds, testutil::all_rows(ds), spec);
    REQUIRE(sample.positive_count == 20);
    REQUIRE(sample.subclass_counts ==
            decltype(sample.subclass_counts){{"s0", 16}, {"s1", 4}});
}

TEST_CASE("draw_sample validates its spec") {
    const Dataset ds = testutil::make_two_class(10, 10, 6.0, 6, 2);
    const auto rows = testutil::all_rows(ds);
    SampleSpec spec;
    spec.positive_ratio = 1.5;
    REQUIRE_THROWS_AS(ocq::draw_sample(ds, rows, spec), input_error);
    spec.positive_ratio = 0.5;
    spec.max_size = 0;
    REQUIRE_THROWS_AS(ocq::draw_sample(ds, rows, spec), input_error);
    spec.max_size = 10;
    spec.subclass_proportions = {{"s0", 0.6}, {"s1", 0.2}};  // sums to 0.8
    REQUIRE_THROWS_AS(ocq::draw_sample(ds, rows, spec), input_error);
    spec.subclass_proportions = {{"nope", 1.0}};
    REQUIRE_THROWS_AS(ocq::draw_sample(ds, rows, spec), input_error);
}

TEST_CASE("draw_sample fails when no size satisfies the ratio") {
    const Dataset ds = testutil::make_two_class(4, 4, 6.0, 7);
    std::vector<std::size_t> negatives_only;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!ds.positive[i]) negatives_only.push_back(i);
    SampleSpec spec;
    spec.positive_ratio = 0.5;
    spec.max_size = 4;
    REQUIRE_THROWS_AS(ocq::draw_sample(ds, negatives_only, spec), input_error);
}

TEST_CASE("draw_sample is deterministic in the seed") {
    const Dataset ds = testutil::make_two_class(50, 50, 6.0, 8);
    SampleSpec spec;
    spec.positive_ratio = 0.4;
    spec.max_size = 30;
    spec.seed = 77;
    const auto a = ocq::draw_sample(ds, testutil::all_rows(ds), spec);
    const auto b = ocq::draw_sample(ds, testutil::all_rows(ds), spec);
    REQUIRE(a.rows == b.rows);
    spec.seed = 78;
    REQUIRE(a.rows != ocq::draw_sample(ds, testutil::all_rows(ds), spec).rows);
}

TEST_CASE("mae on the 11-point grid against a constant") {
    std::vector<double> estimates(11, 0.5), truths;
    for (int i = 0; i <= 10; ++i) truths.push_back(i / 10.0);
    REQUIRE_THAT(ocq::mae(estimates, truths),
                 Catch::Matchers::WithinAbs(3.0 / 11.0, 1e-12));
    REQUIRE(ocq::mae(truths, truths) == 0.0);
}

TEST_CASE("mae validates its arguments") {
    REQUIRE_THROWS_AS(ocq::mae({0.1}, {0.1, 0.2}), input_error);
    REQUIRE_THROWS_AS(ocq::mae({}, {}), input_error);
}
