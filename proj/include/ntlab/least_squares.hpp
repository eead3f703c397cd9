#pragma once

#include <span>
#include <vector>

namespace ntlab {

/// Ordinary least squares polynomial fit y ~ sum_j b_j (x - center)^j with
/// center = mean(x). Throws FitError when the design matrix condition number
/// exceeds max_condition.
struct PolyFit {
  double center = 0.0;
  std::vector<double> centered;  // b_j, lowest degree first
  double condition_number = 1.0;
  double rms_residual = 0.0;

  /// Coefficients of the same polynomial in the uncentered variable.
  std::vector<double> uncentered() const;
  double operator()(double x) const;
};

PolyFit fit_polynomial(std::span<const double> x, std::span<const double> y, int degree,
                       double max_condition = 1e8);

}  // namespace ntlab
