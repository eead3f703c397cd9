#include <cassert>
#include <cmath>

#include "compensated.hpp"
#include "ntlab/errors.hpp"
#include "ntlab/kernels.hpp"

namespace ntlab::kernels::scalar {

using detail::CompensatedSum;
using detail::kInvTwoPi;
using detail::kTwoPi;

namespace {

inline double ipow(double d, unsigned power) {
  switch (power) {
    case 1: return d;
    case 2: return d * d;
    case 3: return d * d * d;
    default: {
      const double s = d * d;
      return s * s;
    }
  }
}

inline double cos_turns(double turns) { return std::cos(kTwoPi * (turns - std::nearbyint(turns))); }

}  // namespace

double abs_diff_power_sum(std::span<const double> a, std::span<const double> b, unsigned power) {
  require(a.size() == b.size(), ErrorKind::InvalidArgument, "abs_diff_power_sum: span sizes differ");
  require(power >= 1 && power <= 4, ErrorKind::InvalidArgument, "abs_diff_power_sum: power must be 1..4");
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(ipow(std::fabs(a[i] - b[i]), power));
  return acc.value();
}

double sqrt_phase_cos_sum(std::span<const double> weights, std::uint64_t first_n, double x,
                          double scale, double phase_turns) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double nx = static_cast<double>(first_n + i) * x;
    const double root = std::sqrt(nx);
    const double root_lo = std::fma(-root, root, nx) / (2.0 * root);
    const double hi = scale * root;
    const double hi_err = std::fma(scale, root, -hi);
    const double frac = hi - std::nearbyint(hi);
    const double turns = frac + (scale * root_lo + hi_err) + phase_turns;
    acc.add(weights[i] * cos_turns(turns));
  }
  return acc.value();
}

double log_phase_cos_sum(std::span<const double> weights, std::span<const double> log_n, double t,
                         double theta) {
  require(weights.size() == log_n.size(), ErrorKind::InvalidArgument,
          "log_phase_cos_sum: span sizes differ");
  CompensatedSum acc;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double y = t * log_n[i];
    const double y_err = std::fma(t, log_n[i], -y);
    const double turns = (theta - y) * kInvTwoPi - y_err * kInvTwoPi;
    acc.add(weights[i] * cos_turns(turns));
  }
  return acc.value();
}

}  // namespace ntlab::kernels::scalar
