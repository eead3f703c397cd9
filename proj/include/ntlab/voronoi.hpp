#pragma once

// Truncated Voronoi-type series for Delta, Delta*, P and A, and the
// empirical truncation-error study against exact values.

#include <cstdint>
#include <span>
#include <vector>

#include "ntlab/arith_tables.hpp"
#include "ntlab/error_terms.hpp"

namespace ntlab {

/// Precomputed coefficient sequence c(n) n^{-alpha} for one error term, so a
/// sweep over many x reuses it. Evaluation:
///   Delta:  x^{1/4} / (pi sqrt 2) sum d(n) n^{-3/4} cos(4 pi sqrt(nx) - pi/4)
///   Delta*: the same with (-1)^n d(n)
///   P:      -x^{1/4} / pi sum r(n) n^{-3/4} cos(2 pi sqrt(nx) + pi/4)
///   A:      x^{k/2 - 1/4} / (pi sqrt 2) sum tau(n) n^{-k/2 - 1/4} cos(4 pi sqrt(nx) - pi/4), k = 12
class VoronoiSeries {
 public:
  VoronoiSeries(ErrorTermKind kind, const ArithTable& table, std::uint64_t max_terms);

  ErrorTermKind kind() const { return kind_; }
  std::uint64_t max_terms() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }

  /// Series truncated after n_terms terms; 0 terms gives 0.
  double evaluate(double x, std::uint64_t n_terms) const;

  /// The n-th term alone (prefactor included), evaluated with std::cos.
  double term(double x, std::uint64_t n) const;

  double prefactor(double x) const;

 private:
  ErrorTermKind kind_;
  std::vector<double> weights_;
  double root_scale_;   // 2 for 4 pi sqrt(nx), 1 for 2 pi sqrt(nx)
  double phase_turns_;  // -1/8 or +1/8
};

double voronoi_delta(double x, std::uint64_t n_terms, const ArithTable& divisors);
double voronoi_delta_star(double x, std::uint64_t n_terms, const ArithTable& divisors);
double voronoi_circle(double x, std::uint64_t n_terms, const ArithTable& two_squares);
double voronoi_cusp(double x, std::uint64_t n_terms, const ArithTable& tau);

/// count half-integers drawn uniformly from [lo, hi) with a seeded mt19937_64.
std::vector<double> half_integer_samples(std::size_t count, double lo, double hi, std::uint64_t seed);

struct TruncationStudy {
  ErrorTermKind kind{};
  std::vector<std::uint64_t> n_terms;
  std::vector<double> rms_error;
  /// Slope of log(rms) against log(N).
  double slope = 0.0;
  std::vector<double> sample_x;
};

/// RMS of (series - exact) over the sample points for each N.
TruncationStudy truncation_study(const VoronoiSeries& series, const SummatoryIndex& exact,
                                 std::span<const std::uint64_t> n_terms, std::span<const double> sample_x);

}  // namespace ntlab
