#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/odin.hpp"
#include "ocq/rng.hpp"
#include "testutil.hpp"

using Catch::Matchers::WithinAbs;
using ocq::build_histogram;
using ocq::input_error;
using ocq::Matrix;
using ocq::overflow;
using ocq::ScoreHistogram;

namespace {

ScoreHistogram make_hist(std::vector<double> thresholds, std::vector<double> masses) {
    ScoreHistogram h;
    h.thresholds = std::move(thresholds);
    h.masses = std::move(masses);
    return h;
}

}  // namespace

TEST_CASE("histogram of its own quantiles fills inner bins evenly") {
    ocq::Rng rng(21);
    const std::size_t n = 500;
    std::vector<double> scores(n);
    for (double& s : scores) s = rng.normal();
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> thresholds;
    for (int i = 0; i <= 10; ++i)
        thresholds.push_back(ocq::quantile_sorted(sorted, i / 10.0));

    const auto hist = build_histogram(scores, thresholds);
    REQUIRE(hist.masses.size() == 12);
    // Only the minimum lands at-or-below the lowest edge.
    REQUIRE(hist.masses.front() == 1.0 / static_cast<double>(n));
    REQUIRE(hist.masses.back() == 0.0);
    double sum = 0.0;
    for (std::size_t i = 1; i <= 10; ++i)
        REQUIRE_THAT(hist.masses[i], WithinAbs(0.1, 0.02));
    for (double m : hist.masses) sum += m;
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
}

TEST_CASE("histogram routes out-of-range scores to the outer bins") {
    const auto above = build_histogram({5.0, 6.0}, {1.0, 2.0});
    REQUIRE(above.masses == std::vector<double>{0.0, 0.0, 1.0});
    const auto below = build_histogram({-3.0}, {1.0, 2.0});
    REQUIRE(below.masses == std::vector<double>{1.0, 0.0, 0.0});
    const auto edge = build_histogram({1.0, 2.0}, {1.0, 2.0});
    REQUIRE(edge.masses == std::vector<double>{0.5, 0.5, 0.0});
    const auto no_edges = build_histogram({7.0, 8.0}, {});
    REQUIRE(no_edges.masses == std::vector<double>{1.0});
}

TEST_CASE("histogram validates its inputs") {
    REQUIRE_THROWS_AS(build_histogram({}, {0.0}), input_error);
    REQUIRE_THROWS_AS(build_histogram({1.0}, {0.0, 0.0}), input_error);
    REQUIRE_THROWS_AS(build_histogram({1.0}, {2.0, 1.0}), input_error);
}

TEST_CASE("overflow measures the escaping mass") {
    const auto inner = make_hist({0.0, 1.0}, {1.0, 0.0, 0.0});
    const auto outer = make_hist({0.0, 1.0}, {0.0, 0.0, 1.0});
    const auto mixed = make_hist({0.0, 1.0}, {0.2, 0.8, 0.0});
    REQUIRE(overflow(1.0, inner, inner) == 0.0);
    REQUIRE(overflow(1.0, inner, outer) == 1.0);
    REQUIRE_THAT(overflow(0.5, inner, mixed), WithinAbs(0.3, 1e-12));
    // Identical histograms overflow only past scale 1.
    REQUIRE(overflow(0.7, mixed, mixed) == 0.0);
    REQUIRE_THAT(overflow(1.5, mixed, mixed), WithinAbs(0.5, 1e-12));
    REQUIRE_THROWS_AS(overflow(-0.1, inner, inner), input_error);
    REQUIRE_THROWS_AS(overflow(1.0, inner, make_hist({0.5}, {1.0, 0.0})), input_error);
}

TEST_CASE("overflow is nondecreasing and convex in the scale") {
    const auto inner = make_hist({0.0, 1.0, 2.0}, {0.4, 0.3, 0.2, 0.1});
    const auto outer = make_hist({0.0, 1.0, 2.0}, {0.1, 0.2, 0.3, 0.4});
    double prev = 0.0;
    for (double a = 0.0; a <= 1.0; a += 0.05) {
        const double v = overflow(a, inner, outer);
        REQUIRE(v >= prev - 1e-12);
        prev = v;
    }
    for (double a = 0.1; a <= 0.9; a += 0.1) {
        const double mid = overflow(a, inner, outer);
        const double chord =
            0.5 * (overflow(a - 0.1, inner, outer) + overflow(a + 0.1, inner, outer));
        REQUIRE(mid <= chord + 1e-12);
    }
}

TEST_CASE("scale search recovers disjoint-support mixture weights") {
    const auto h_plus = make_hist({0.0, 1.0}, {1.0, 0.0, 0.0});
    for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto h_test = make_hist({0.0, 1.0}, {w, 0.0, 1.0 - w});
        const auto scale = ocq::odin_scale_search(h_plus, h_test, 0.0);
        REQUIRE_THAT(scale.s, WithinAbs(w, 1e-4));
        REQUIRE_THAT(scale.p_hat, WithinAbs(w, 1e-4));
    }
}

TEST_CASE("scale search saturates on a perfect match") {
    const auto h = make_hist({0.0, 1.0}, {0.3, 0.5, 0.2});
    const auto scale = ocq::odin_scale_search(h, h, 0.0);
    REQUIRE(scale.s == 1.0);
    REQUIRE(scale.p_hat == 1.0);
    REQUIRE_THROWS_AS(ocq::odin_scale_search(h, h, -1.0), input_error);
}

TEST_CASE("estimate never exceeds the fitted scale") {
    const auto h_plus = make_hist({0.0, 1.0}, {0.5, 0.5, 0.0});
    for (double w : {0.1, 0.4, 0.9}) {
        const auto h_test = make_hist({0.0, 1.0}, {0.1, w * 0.5, 1.0 - 0.1 - w * 0.5});
        for (double limit : {0.0, 0.05, 0.2}) {
            const auto scale = ocq::odin_scale_search(h_plus, h_test, limit);
            REQUIRE(scale.p_hat <= scale.s);
            REQUIRE(scale.p_hat >= 0.0);
            REQUIRE(scale.s <= 1.0);
        }
    }
}

TEST_CASE("tolerance limit is affine in the deviation multiplier") {
    ocq::Rng rng(22);
    const Matrix positives = testutil::make_blob(rng, 400, {0.0, 0.0}, 1.0);
    ocq::OdinParams p0, p1, p2;
    p0.d = 0.0;
    p1.d = 1.0;
    p2.d = 2.0;
    const double l0 = ocq::train_odin(positives, p0, 10, 77).limit;
    const double l1 = ocq::train_odin(positives, p1, 10, 77).limit;
    const double l2 = ocq::train_odin(positives, p2, 10, 77).limit;
    REQUIRE(l0 >= 0.0);
    REQUIRE(l1 > l0);
    REQUIRE_THAT(l2 - l1, WithinAbs(l1 - l0, 1e-12));
}

TEST_CASE("training keeps the tolerance small on clean data") {
    ocq::Rng rng(23);
    const Matrix positives = testutil::make_blob(rng, 1000, {0.0, 0.0}, 1.0);
    const auto model = ocq::train_odin(positives, ocq::OdinParams{}, 10, 5);
    REQUIRE(model.limit >= 0.0);
    REQUIRE(model.limit < 0.2);
    REQUIRE(model.positive_hist.masses.size() == model.positive_hist.thresholds.size() + 1);

    const auto again = ocq::train_odin(positives, ocq::OdinParams{}, 10, 5);
    REQUIRE(again.limit == model.limit);
    REQUIRE(again.positive_hist.thresholds == model.positive_hist.thresholds);
    REQUIRE(again.positive_hist.masses == model.positive_hist.masses);
}

TEST_CASE("training validates parameters and sample size") {
    ocq::Rng rng(24);
    const Matrix positives = testutil::make_blob(rng, 50, {0.0, 0.0}, 1.0);
    ocq::OdinParams zero_bins;
    zero_bins.b = 0;
    REQUIRE_THROWS_AS(ocq::train_odin(positives, zero_bins, 10, 1), input_error);
    ocq::OdinParams one_split;
    one_split.splits = 1;
    REQUIRE_THROWS_AS(ocq::train_odin(positives, one_split, 10, 1), input_error);
    const Matrix tiny = testutil::make_blob(rng, 3, {0.0, 0.0}, 1.0);
    REQUIRE_THROWS_AS(ocq::train_odin(tiny, ocq::OdinParams{}, 3, 1), input_error);
}

TEST_CASE("degenerate constant data collapses to one bin and full scale") {
    Matrix constant;
    for (int i = 0; i < 8; ++i) constant.push_row(std::vector<double>{2.0, -1.0});
    const auto model = ocq::train_odin(constant, ocq::OdinParams{}, 4, 9);
    REQUIRE(model.positive_hist.thresholds.size() == 1);
    REQUIRE(ocq::odin_quantify(model, constant) == 1.0);
}

TEST_CASE("quantify separates pure samples") {
    ocq::Rng rng(25);
    const Matrix positives = testutil::make_blob(rng, 600, {0.0, 0.0}, 1.0);
    const auto model = ocq::train_odin(positives, ocq::OdinParams{}, 10, 31);

    const Matrix in_dist = testutil::make_blob(rng, 400, {0.0, 0.0}, 1.0);
    REQUIRE(ocq::odin_quantify(model, in_dist) >= 0.8);

    const Matrix far_neg = testutil::make_blob(rng, 400, {50.0, 50.0}, 1.0);
    REQUIRE(ocq::odin_quantify(model, far_neg) <= 0.1);

    Matrix half = testutil::make_blob(rng, 200, {0.0, 0.0}, 1.0);
    const Matrix other = testutil::make_blob(rng, 200, {50.0, 50.0}, 1.0);
    for (std::size_t r = 0; r < other.rows(); ++r) half.push_row(other.row(r));
    const double mixed = ocq::odin_quantify(model, half);
    REQUIRE(mixed >= 0.3);
    REQUIRE(mixed <= 0.8);
    REQUIRE(mixed == ocq::odin_quantify(model, half));
    REQUIRE_THROWS_AS(ocq::odin_quantify(model, Matrix()), input_error);
}
