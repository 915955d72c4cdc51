#pragma once

#include <cmath>
#include <vector>

#include "ocq/error.hpp"

namespace ocq {

// Mean absolute error between parallel estimate/truth vectors.
inline double mae(const std::vector<double>& estimates,
                  const std::vector<double>& truths) {
    if (estimates.size() != truths.size())
        throw input_error("mae: estimate and truth vectors differ in length");
    if (estimates.empty()) throw input_error("mae: empty input");
    double total = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i)
        total += std::abs(estimates[i] - truths[i]);
    return total / static_cast<double>(estimates.size());
}

}  // namespace ocq
