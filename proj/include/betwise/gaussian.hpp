#pragma once

#include <cmath>

namespace betwise {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); }

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Inverse standard-normal CDF. Rational initial guess (Acklam) followed by
/// one Halley step; absolute error below 1e-14 over (0, 1).
double norm_quantile(double p);

}  // namespace betwise
