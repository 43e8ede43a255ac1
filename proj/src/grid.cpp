#include "opinionforge/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace opinionforge {

void GridSpec::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("grid bounds must form a nonempty finite interval");
  }
  if (cells < 2) {
    throw std::invalid_argument("grid needs at least 2 cells");
  }
}

std::vector<double> GridSpec::midpoints() const {
  std::vector<double> out(static_cast<std::size_t>(cells));
  for (int k = 0; k < cells; ++k) {
    out[static_cast<std::size_t>(k)] = midpoint(k);
  }
  return out;
}

}  // namespace opinionforge
