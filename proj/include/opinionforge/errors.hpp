#pragma once

#include <stdexcept>

namespace opinionforge {

// Malformed or inconsistent input data (CSV parse failures, bad ratings,
// duplicate edges, schema violations).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sampler lost all probability mass (zero normalizer, empty support) or a
// run had to abort for numerical reasons.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace opinionforge
