#include "qdnls/grid.hpp"

#include <cmath>
#include <numbers>

#include "qdnls/error.hpp"

namespace qdnls {

Grid2D::Grid2D(double half_width, int points) : half_width_(half_width), points_(points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ValidationError("grid half_width must be positive and finite");
  }
  if (points < 8 || (points & (points - 1)) != 0) {
    throw ValidationError("grid points must be a power of two >= 8");
  }
}

double Grid2D::frequency_step() const { return std::numbers::pi / half_width_; }

}  // namespace qdnls
