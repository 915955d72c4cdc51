#pragma once

#include <stdexcept>
#include <string>

namespace ocq {

// Invalid user input: bad files, schemas, configs, or argument preconditions.
// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Estimation could not be carried out (degenerate rates, insufficient data).
// The CLI maps this to exit code 3.
struct estimation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ocq
