#pragma once

// One-class scorer: negative Mahalanobis distance to the positive class.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/matrix.hpp"
#include "ocq/rng.hpp"

namespace ocq {

namespace detail {

// Lower-triangular Cholesky factorization of a symmetric matrix stored
// row-major in `a` (m x m). Returns false if the matrix is not positive
// definite to working precision.
inline bool cholesky_factor(std::vector<double>& a, std::size_t m) {
    for (std::size_t j = 0; j < m; ++j) {
        double diag = a[j * m + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * m + k] * a[j * m + k];
        if (!(diag > 0.0) || !std::isfinite(diag)) return false;
        const double root = std::sqrt(diag);
        a[j * m + j] = root;
        for (std::size_t i = j + 1; i < m; ++i) {
            double v = a[i * m + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * m + k] * a[j * m + k];
            a[i * m + j] = v / root;
        }
    }
    return true;
}

// Solves L Lᵀ x = b in place given the factor from cholesky_factor.
inline void cholesky_solve(const std::vector<double>& l, std::size_t m,
                           std::vector<double>& b) {
    for (std::size_t i = 0; i < m; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l[i * m + k] * b[k];
        b[i] = v / l[i * m + i];
    }
    for (std::size_t ii = m; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < m; ++k) v -= l[k * m + ii] * b[k];
        b[ii] = v / l[ii * m + ii];
    }
}

}  // namespace detail

struct MahalanobisModel {
    std::vector<double> mean;                // m
    Matrix inverse_covariance;               // m x m, symmetric positive definite
    double regularization = 0.0;             // ridge actually applied

    std::size_t dims() const { return mean.size(); }

    // Negative Mahalanobis distance; 0 at the mean, higher = more positive-like.
    double score(std::span<const double> x) const {
        const std::size_t m = mean.size();
        if (x.size() != m)
            throw input_error("score: expected " + std::to_string(m) +
                              " features, got " + std::to_string(x.size()));
        double qform = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double di = x[i] - mean[i];
            for (std::size_t j = 0; j < m; ++j)
                qform += di * inverse_covariance.at(i, j) * (x[j] - mean[j]);
        }
        // Rounding can push a tiny quadratic form below zero.
        return -std::sqrt(std::max(0.0, qform));
    }
};

// Fits mean and regularized inverse covariance on the positive rows.
inline MahalanobisModel fit_mahalanobis(const Matrix& positives) {
    const std::size_t n = positives.rows();
    const std::size_t m = positives.cols();
    if (n < 2)
        throw input_error("fit_mahalanobis: need at least 2 rows, got " +
                          std::to_string(n));

    MahalanobisModel model;
    model.mean.assign(m, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) model.mean[c] += positives.at(r, c);
    for (double& v : model.mean) v /= static_cast<double>(n);

    std::vector<double> cov(m * m, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < m; ++i) {
            const double di = positives.at(r, i) - model.mean[i];
            for (std::size_t j = i; j < m; ++j)
                cov[i * m + j] += di * (positives.at(r, j) - model.mean[j]);
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            cov[i * m + j] /= static_cast<double>(n - 1);
            cov[j * m + i] = cov[i * m + j];
        }

    double trace = 0.0;
    for (std::size_t i = 0; i < m; ++i) trace += cov[i * m + i];
    double ridge = 1e-6 * (trace > 0.0 ? trace / static_cast<double>(m) : 1.0);

    std::vector<double> factor;
    while (true) {
        factor = cov;
        for (std::size_t i = 0; i < m; ++i) factor[i * m + i] += ridge;
        if (detail::cholesky_factor(factor, m)) break;
        ridge *= 10.0;
        if (!std::isfinite(ridge))
            throw estimation_error("fit_mahalanobis: covariance not invertible");
    }
    model.regularization = ridge;

    model.inverse_covariance = Matrix(m, m, 0.0);
    std::vector<double> col(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        detail::cholesky_solve(factor, m, col);
        for (std::size_t i = 0; i < m; ++i) model.inverse_covariance.at(i, j) = col[i];
    }
    // Symmetrize away solver round-off.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v =
                0.5 * (model.inverse_covariance.at(i, j) + model.inverse_covariance.at(j, i));
            model.inverse_covariance.at(i, j) = v;
            model.inverse_covariance.at(j, i) = v;
        }
    return model;
}

// Scores every positive row with a model fitted on the other k-1 folds.
// Output order matches input order; deterministic in the seed.
inline std::vector<double> cv_scores(const Matrix& positives, std::size_t k,
                                     std::uint64_t seed) {
    const std::size_t n = positives.rows();
    if (k < 2) throw input_error("cv_scores: k must be >= 2");
    if (k > n)
        throw input_error("cv_scores: k=" + std::to_string(k) +
                          " exceeds row count " + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(seed, {0x63767363ULL}));
    rng.shuffle(order);
    std::vector<std::size_t> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = i % k;

    std::vector<double> scores(n, 0.0);
    std::vector<std::size_t> train_rows;
    train_rows.reserve(n);
    for (std::size_t f = 0; f < k; ++f) {
        train_rows.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (fold_of[i] != f) train_rows.push_back(i);
        const MahalanobisModel model = fit_mahalanobis(positives.gather(train_rows));
        for (std::size_t i = 0; i < n; ++i)
            if (fold_of[i] == f) scores[i] = model.score(positives.row(i));
    }
    return scores;
}

}  // namespace ocq
