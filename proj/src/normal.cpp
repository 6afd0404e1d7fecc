#include "zeittafel/normal.hpp"

#include <cmath>
#include <numbers>

#include "zeittafel/error.hpp"

namespace zeittafel {

double normal_cdf(double z) {
  if (!std::isfinite(z)) throw ValidationError("normal_cdf: argument must be finite");
  if (z > 8.0) return 1.0;
  if (z < -8.0) return 0.0;
  // erfc keeps full relative precision in the lower tail where 1 + erf would cancel.
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace zeittafel
