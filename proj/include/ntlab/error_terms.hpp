#pragma once

// Exact error terms Delta(x), Delta*(x), P(x) and A(x) from sieved tables.
// Partial sums include the term at integer x (full weight at jumps).

#include <cstdint>
#include <string_view>
#include <vector>

#include "ntlab/arith_tables.hpp"

namespace ntlab {

inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class ErrorTermKind { DirichletDelta, AlternatingDeltaStar, CircleP, CuspA };

std::string_view to_string(ErrorTermKind kind);
ErrorTermKind parse_error_term_kind(std::string_view text);

/// Table kind each error term is built from.
ArithKind source_table(ErrorTermKind kind);

/// Main term attached to an error term: x(log x + 2 gamma - 1) for Delta and
/// Delta*, pi x for P, zero for A.
struct MainTermSpec {
  ErrorTermKind form = ErrorTermKind::DirichletDelta;
  double gamma = kEulerGamma;

  long double operator()(long double x) const;
};

/// Prefix sums over a table: sum_{k<=n} f(k) and, for d, sum_{k<=n} (-1)^k d(k).
class SummatoryIndex {
 public:
  explicit SummatoryIndex(const ArithTable& table);

  ArithKind kind() const { return kind_; }
  std::uint64_t limit() const { return limit_; }

  std::int64_t partial(std::uint64_t n) const;       // d, r
  std::int64_t alternating(std::uint64_t n) const;   // d only
  wide_int partial_wide(std::uint64_t n) const;      // any kind

 private:
  ArithKind kind_;
  std::uint64_t limit_;
  std::vector<std::int64_t> partial_;
  std::vector<std::int64_t> alternating_;
  std::vector<wide_int> partial_wide_;
};

double delta(double x, const SummatoryIndex& divisors);

struct DeltaStarValue {
  double combination;  // -Delta(x) + 2 Delta(2x) - Delta(4x)/2
  double direct;       // (1/2) sum_{n<=4x} (-1)^n d(n) - x(log x + 2 gamma - 1)
};
DeltaStarValue delta_star(double x, const SummatoryIndex& divisors);

double circle_p(double x, const SummatoryIndex& two_squares);

wide_int cusp_a_exact(double x, const SummatoryIndex& tau);
double cusp_a(double x, const SummatoryIndex& tau);

/// Dispatch on kind (Delta* returns the direct form).
double error_term(ErrorTermKind kind, double x, const SummatoryIndex& index);

/// Largest x the index supports for this error term.
double max_argument(ErrorTermKind kind, const SummatoryIndex& index);

/// f[n] = error_term(kind, n + offset) for n = 0..n_max; the sweep used by the
/// moment experiments (offset 0 for integer sampling, 0.5 for half-integers).
std::vector<double> sample_error_term(ErrorTermKind kind, const SummatoryIndex& index, std::uint64_t n_max,
                                      double offset);

}  // namespace ntlab
