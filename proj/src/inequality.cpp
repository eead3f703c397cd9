#include "ntlab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ntlab/errors.hpp"
#include "ntlab/moments.hpp"
#include "ntlab/parallel.hpp"

namespace ntlab {

PeakSet scan_peaks(double T, double V, double grid_step, const QuadratureConfig& config) {
  config.validate();
  require(T > 0.0 && 2.0 * T <= config.max_t, ErrorKind::OutOfRange, "peak scan: [T, 2T] outside the supported range");
  require(grid_step > 0.0 && grid_step <= 0.1, ErrorKind::InvalidArgument, "peak scan step must lie in (0, 0.1]");
  PeakSet out{T, V, grid_step, {}, {}};
  const auto n = static_cast<std::size_t>(std::floor(T / grid_step)) + 1;
  std::vector<double> t(n), z(n);
  parallel_blocks(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          t[i] = T + grid_step * static_cast<double>(i);
          z[i] = std::sqrt(zeta_half_sq(t[i], config));
        }
      },
      256);

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] < V) continue;
    if (i > 0 && z[i - 1] > z[i]) continue;
    if (i + 1 < n && z[i + 1] > z[i]) continue;
    candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });

  std::set<double> kept;
  for (std::size_t i : candidates) {
    auto hi = kept.lower_bound(t[i]);
    if (hi != kept.end() && *hi - t[i] < 1.0) continue;
    if (hi != kept.begin() && t[i] - *std::prev(hi) < 1.0) continue;
    kept.insert(t[i]);
  }
  for (std::size_t i : candidates) {
    if (kept.count(t[i]) == 0) continue;
    out.points.push_back(t[i]);
  }
  std::sort(out.points.begin(), out.points.end());
  for (double p : out.points) {
    const auto i = static_cast<std::size_t>(std::llround((p - T) / grid_step));
    out.values.push_back(z[i]);
  }
  return out;
}

std::pair<double, double> large_value_curve_range(double T, double V, double A) {
  const double L = std::log(T);
  const double G = A * (V / L) * (V / L);
  return {T / 3.0 - 2.0 * G, 3.0 * T + 2.0 * G};
}

LargeValueReport theorem3_report(const PeakSet& peaks, int k, double A, const ECurve& curve, double step) {
  require(k >= 1 && k <= 4, ErrorKind::InvalidArgument, "large-value report needs k in 1..4");
  require(A > 0.0 && peaks.T > 1.0 && peaks.V > 0.0, ErrorKind::InvalidArgument,
          "large-value report needs A > 0, T > 1, V > 0");
  LargeValueReport r;
  r.T = peaks.T;
  r.V = peaks.V;
  r.k = k;
  r.A = A;
  const double L = std::log(peaks.T);
  r.G = A * (peaks.V / L) * (peaks.V / L);
  r.R = peaks.points.size();
  const auto [lo, hi] = large_value_curve_range(peaks.T, peaks.V, A);
  require(curve.covers(lo, hi), ErrorKind::Coverage, "E curve does not cover [T/3 - 2G, 3T + 2G]");
  const auto power = static_cast<unsigned>(k);
  const double a = peaks.T / 3.0, b = 3.0 * peaks.T;
  const double integral = e_diff_power_integral(curve, a, b, 2.0 * r.G, 2.0 * r.G, power, step) +
                          e_diff_power_integral(curve, a, b, 0.5 * r.G, 0.5 * r.G, power, step);
  r.rhs = std::pow(peaks.V, -2.0 - 2.0 * k) * std::pow(L, 2.0 + 2.0 * k) * integral;
  r.implied_constant = (r.R == 0 || r.rhs == 0.0) ? 0.0 : static_cast<double>(r.R) / r.rhs;
  return r;
}

namespace {

// n = m^k r with r k-th-power-free.
std::pair<std::uint64_t, std::uint64_t> kth_power_decomposition(std::uint64_t n, unsigned k) {
  std::uint64_t m = 1, r = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (unsigned i = 0; i < e / k; ++i) m *= p;
    for (unsigned i = 0; i < e % k; ++i) r *= p;
  }
  r *= n;  // remaining prime, exponent 1 < k
  return {m, r};
}

long double kth_root(std::uint64_t n, unsigned k) {
  return std::pow(static_cast<long double>(n), 1.0L / static_cast<long double>(k));
}

bool close(long double s, long double t, long double threshold) {
  const long double d = std::fabs(s - t);
  return d < threshold || d <= kQuadrupleGuard;
}

}  // namespace

QuadrupleCountResult count_close_quadruples(std::uint64_t N, unsigned k, double delta) {
  require(N >= 1, ErrorKind::InvalidArgument, "quadruple count needs N >= 1");
  require(N <= kQuadrupleMaxN, ErrorKind::ResourceLimit, "quadruple count limited to N <= 120");
  require(k >= 2, ErrorKind::InvalidArgument, "quadruple count needs k >= 2");
  require(std::isfinite(delta) && delta >= 0.0, ErrorKind::InvalidArgument, "quadruple count needs delta >= 0");
  QuadrupleCountResult out{N, k, delta, 0, std::pow(static_cast<double>(N), 4) * delta + static_cast<double>(N * N)};

  if (delta == 0.0) {
    // Roots of distinct k-th-power-free r are linearly independent over Q, so
    // a sum of two roots is determined by its (r, multiplier) multiset.
    using Key = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
    std::map<Key, std::uint64_t> classes;
    for (std::uint64_t a = N + 1; a <= 2 * N; ++a) {
      const auto [ma, ra] = kth_power_decomposition(a, k);
      for (std::uint64_t b = N + 1; b <= 2 * N; ++b) {
        const auto [mb, rb] = kth_power_decomposition(b, k);
        Key key;
        if (ra == rb) key = {{ra, ma + mb}};
        else key = {{std::min(ra, rb), ra < rb ? ma : mb}, {std::max(ra, rb), ra < rb ? mb : ma}};
        ++classes[key];
      }
    }
    for (const auto& [key, c] : classes) out.count += c * c;
    return out;
  }

  std::vector<long double> sums;
  sums.reserve(N * N);
  for (std::uint64_t a = N + 1; a <= 2 * N; ++a)
    for (std::uint64_t b = N + 1; b <= 2 * N; ++b) sums.push_back(kth_root(a, k) + kth_root(b, k));
  std::sort(sums.begin(), sums.end());
  const long double threshold = static_cast<long double>(delta) * kth_root(N, k);
  const long double width = std::max(threshold, kQuadrupleGuard);
  for (long double s : sums) {
    // Candidates within the wider window, then the exact rule decides.
    auto lo = std::lower_bound(sums.begin(), sums.end(), s - width);
    auto hi = std::upper_bound(sums.begin(), sums.end(), s + width);
    for (auto it = lo; it != hi; ++it)
      if (close(s, *it, threshold)) ++out.count;
  }
  return out;
}

std::uint64_t count_close_quadruples_brute(std::uint64_t N, unsigned k, double delta, bool swap_pairs) {
  require(N >= 1 && N <= kQuadrupleMaxN && k >= 2 && delta >= 0.0, ErrorKind::InvalidArgument,
          "bad quadruple brute-force arguments");
  std::vector<long double> root(2 * N + 1);
  for (std::uint64_t n = N + 1; n <= 2 * N; ++n) root[n] = kth_root(n, k);
  const long double threshold = static_cast<long double>(delta) * kth_root(N, k);
  std::uint64_t count = 0;
  for (std::uint64_t a = N + 1; a <= 2 * N; ++a)
    for (std::uint64_t b = N + 1; b <= 2 * N; ++b)
      for (std::uint64_t c = N + 1; c <= 2 * N; ++c)
        for (std::uint64_t d = N + 1; d <= 2 * N; ++d) {
          const long double lhs = swap_pairs ? root[c] + root[d] : root[a] + root[b];
          const long double rhs = swap_pairs ? root[a] + root[b] : root[c] + root[d];
          if (delta == 0.0 ? std::fabs(lhs - rhs) <= kQuadrupleGuard : close(lhs, rhs, threshold)) ++count;
        }
  return count;
}

}  // namespace ntlab
