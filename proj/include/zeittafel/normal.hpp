#pragma once

namespace zeittafel {

// Standard normal CDF. Returns exactly 0 or 1 for |z| > 8.
// Throws ValidationError on a non-finite argument.
double normal_cdf(double z);

// Standard normal density.
double normal_pdf(double z);

}  // namespace zeittafel
