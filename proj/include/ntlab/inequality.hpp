#pragma once

// Large values of |zeta(1/2 + it)| against moments of E-differences, and the
// count of near-coincident sums of two k-th roots.

#include <cstdint>
#include <vector>

#include "ntlab/zeta_line.hpp"

namespace ntlab {

struct PeakSet {
  double T = 0.0;
  double V = 0.0;
  double grid_step = 0.0;
  std::vector<double> points;  // ascending, pairwise gaps >= 1
  std::vector<double> values;  // |zeta(1/2 + it)| at each point, all >= V
};

/// Local maxima of |zeta| >= V on a grid over [T, 2T], thinned greedily (largest
/// first) so that kept points are at least 1 apart.
PeakSet scan_peaks(double T, double V, double grid_step = 0.05, const QuadratureConfig& config = {});

struct LargeValueReport {
  double T = 0.0, V = 0.0;
  int k = 2;
  double A = 1.0;
  double G = 0.0;
  std::uint64_t R = 0;
  double rhs = 0.0;
  double implied_constant = 0.0;
};

/// G = A (V / log T)^2;
/// rhs = V^{-2-2k} L^{2+2k} int_{T/3}^{3T} |E(t+2G) - E(t-2G)|^k + |E(t+G/2) - E(t-G/2)|^k dt.
/// step is the trapezoid step for the integral (0: the curve spacing).
LargeValueReport theorem3_report(const PeakSet& peaks, int k, double A, const ECurve& curve, double step = 0.0);

/// [lo, hi] of t the curve must cover for theorem3_report.
std::pair<double, double> large_value_curve_range(double T, double V, double A);

struct QuadrupleCountResult {
  std::uint64_t N = 0;
  unsigned k = 2;
  double delta = 0.0;
  std::uint64_t count = 0;
  double bound_scale = 0.0;  // N^4 delta + N^2
};

inline constexpr std::uint64_t kQuadrupleMaxN = 120;
/// Differences of root sums at most this large count as equal.
inline constexpr long double kQuadrupleGuard = 1e-12L;

/// Number of (n1, n2, n3, n4) in (N, 2N]^4 with
/// |n1^{1/k} + n2^{1/k} - n3^{1/k} - n4^{1/k}| < delta N^{1/k}.
/// delta = 0 counts exact equalities, decided from the k-th-power-free
/// decomposition n = m^k r.
QuadrupleCountResult count_close_quadruples(std::uint64_t N, unsigned k, double delta);

/// Direct N^4 loop with the same comparison rule; for testing.
std::uint64_t count_close_quadruples_brute(std::uint64_t N, unsigned k, double delta, bool swap_pairs = false);

}  // namespace ntlab
