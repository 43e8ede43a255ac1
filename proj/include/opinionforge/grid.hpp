#pragma once

#include <vector>

#include "opinionforge/errors.hpp"

namespace opinionforge {

// A bounded interval split into `cells` equal cells. Continuous conditionals
// are evaluated at the cell midpoints and samples are reported as midpoints,
// so the midpoints are the effective support.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 2;

  void validate() const;

  double width() const { return (hi - lo) / cells; }
  double midpoint(int k) const { return lo + (k + 0.5) * width(); }
  std::vector<double> midpoints() const;
};

}  // namespace opinionforge
