#pragma once

#include <functional>
#include <vector>

namespace betwise {

/// Tanh-sinh quadrature on [a, b]. Double-exponential node decay makes this
/// robust to integrable endpoint singularities; non-finite integrand values
/// at collapsed endpoint nodes are skipped.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_levels = 12);

/// Integrates across the sorted breakpoints in `points` (first and last are
/// the interval ends) so interior jumps or kinks land on panel boundaries.
double integrate_piecewise(const std::function<double(double)>& f, std::vector<double> points,
                           double abs_tol = 1e-10);

}  // namespace betwise
