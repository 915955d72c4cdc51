#pragma once

// Regularized logistic model predicting the labeled-vs-unlabeled indicator.
// Probabilities from this model back the EN prior estimator.

#include <cmath>
#include <span>
#include <vector>

#include "ocq/error.hpp"
#include "ocq/matrix.hpp"

namespace ocq {

struct CalibratedModel {
    // weights[0..m-1] act on raw features, weights[m] is the intercept;
    // training-time standardization is folded in.
    std::vector<double> weights;

    std::size_t dims() const { return weights.empty() ? 0 : weights.size() - 1; }

    double predict_proba(std::span<const double> x) const {
        if (x.size() + 1 != weights.size())
            throw input_error("predict_proba: expected " + std::to_string(dims()) +
                              " features, got " + std::to_string(x.size()));
        double z = weights.back();
        for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
        const double p = 1.0 / (1.0 + std::exp(-z));
        // Keep the output in the open interval even for huge margins.
        return std::min(1.0 - 1e-12, std::max(1e-12, p));
    }
};

// Full-batch gradient descent with a step size of 1/L, where L bounds the
// Lipschitz constant of the regularized loss gradient; the loss therefore
// decreases monotonically. Stops at gradient norm < 1e-6 or 5000 epochs.
// If `loss_trace` is non-null the per-epoch loss is appended to it.
inline CalibratedModel fit_calibrated(const Matrix& labeled, const Matrix& unlabeled,
                                      std::vector<double>* loss_trace = nullptr) {
    if (labeled.rows() == 0 || unlabeled.rows() == 0)
        throw input_error("fit_calibrated: both labeled and unlabeled rows required");
    if (labeled.cols() != unlabeled.cols())
        throw input_error("fit_calibrated: feature dimension mismatch");

    const std::size_t m = labeled.cols();
    const std::size_t n = labeled.rows() + unlabeled.rows();
    constexpr double lambda = 1e-3;

    std::vector<double> x(n * m);
    std::vector<double> y(n);
    for (std::size_t r = 0; r < labeled.rows(); ++r) {
        for (std::size_t j = 0; j < m; ++j) x[r * m + j] = labeled.at(r, j);
        y[r] = 1.0;
    }
    for (std::size_t r = 0; r < unlabeled.rows(); ++r) {
        const std::size_t i = labeled.rows() + r;
        for (std::size_t j = 0; j < m; ++j) x[i * m + j] = unlabeled.at(r, j);
        y[i] = 0.0;
    }

    // Standardize by training statistics; constant columns get sd 1.
    std::vector<double> mu(m, 0.0), sd(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) mu[j] += x[i * m + j];
    for (double& v : mu) v /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double d = x[i * m + j] - mu[j];
            sd[j] += d * d;
        }
    for (double& v : sd) {
        v = std::sqrt(v / static_cast<double>(n));
        if (v == 0.0) v = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) x[i * m + j] = (x[i * m + j] - mu[j]) / sd[j];

    // Gradient Lipschitz bound: 0.25 * ||X||_F^2 / n for the data term
    // (bias column included) plus lambda for the penalty.
    double sq = static_cast<double>(n);  // bias column of ones
    for (double v : x) sq += v * v;
    const double step = 1.0 / (0.25 * sq / static_cast<double>(n) + lambda);

    std::vector<double> w(m + 1, 0.0);  // standardized-space weights + bias
    std::vector<double> grad(m + 1);
    std::vector<double> p(n);
    for (int epoch = 0; epoch < 5000; ++epoch) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = w[m];
            for (std::size_t j = 0; j < m; ++j) z += w[j] * x[i * m + j];
            p[i] = 1.0 / (1.0 + std::exp(-z));
            // Numerically safe cross-entropy: log(1+e^z) - y z.
            loss += (z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) -
                    y[i] * z;
        }
        loss /= static_cast<double>(n);
        for (std::size_t j = 0; j < m; ++j) loss += 0.5 * lambda * w[j] * w[j];
        if (loss_trace) loss_trace->push_back(loss);

        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = p[i] - y[i];
            for (std::size_t j = 0; j < m; ++j) grad[j] += r * x[i * m + j];
            grad[m] += r;
        }
        double norm = 0.0;
        for (std::size_t j = 0; j <= m; ++j) {
            grad[j] /= static_cast<double>(n);
            if (j < m) grad[j] += lambda * w[j];
            norm += grad[j] * grad[j];
        }
        if (std::sqrt(norm) < 1e-6) break;
        for (std::size_t j = 0; j <= m; ++j) w[j] -= step * grad[j];
    }

    // Fold the standardization into raw-space weights.
    CalibratedModel model;
    model.weights.assign(m + 1, 0.0);
    double intercept = w[m];
    for (std::size_t j = 0; j < m; ++j) {
        model.weights[j] = w[j] / sd[j];
        intercept -= w[j] * mu[j] / sd[j];
    }
    model.weights[m] = intercept;
    return model;
}

}  // namespace ocq
