#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace ntlab::quad {

/// 8-point Gauss–Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGL8Nodes{
    -0.9602898564975362316835609, -0.7966664774136267395915539, -0.5255324099163289858177390,
    -0.1834346424956498049394761, 0.1834346424956498049394761,  0.5255324099163289858177390,
    0.7966664774136267395915539,  0.9602898564975362316835609};
inline constexpr std::array<double, 8> kGL8Weights{
    0.1012285362903762591525314, 0.2223810344533744705443560, 0.3137066458778872873379622,
    0.3626837833783619829651504, 0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

/// Integral of f over [a, b] with one 8-point Gauss–Legendre panel.
template <typename F>
double gauss_legendre8(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < kGL8Nodes.size(); ++i) s += kGL8Weights[i] * f(mid + half * kGL8Nodes[i]);
  return half * s;
}

/// Composite 8-point Gauss–Legendre with `panels` equal panels.
template <typename F>
double gauss_legendre8_panels(F&& f, double a, double b, std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double s = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    s += gauss_legendre8(f, lo, p + 1 == panels ? b : lo + h);
  }
  return s;
}

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Globally adaptive Gauss–Kronrod 7/15 (bisects the interval with the
/// largest error estimate until the total estimate is below abs_tol).
AdaptiveResult adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                      double abs_tol, std::size_t max_intervals = 20000);

}  // namespace ntlab::quad
