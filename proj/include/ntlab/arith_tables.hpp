#pragma once

// Sieved tables of d(n), r(n) and Ramanujan's tau(n), their square-summatory
// functions, and least-squares fits of the leading asymptotic coefficients.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ntlab {

using wide_int = __int128;

enum class ArithKind : std::uint8_t { Divisor = 0, TwoSquares = 1, RamanujanTau = 2 };

std::string_view to_string(ArithKind kind);
ArithKind parse_arith_kind(std::string_view text);

struct TableBudget {
  /// Upper bound on the bytes a single table may occupy.
  std::uint64_t max_bytes = std::uint64_t{2} << 30;
  /// Largest limit accepted for RamanujanTau (the expansion is ~limit^1.5).
  std::uint64_t max_tau_limit = 200'000;
};

/// Immutable table of an arithmetic function on 1..limit.
class ArithTable {
 public:
  /// Divisor / TwoSquares: counts[n] for n = 0..limit (counts[0] unused, 0).
  ArithTable(ArithKind kind, std::vector<std::uint32_t> counts);
  /// RamanujanTau: tau[n] for n = 0..limit (tau[0] unused, 0).
  explicit ArithTable(std::vector<wide_int> tau);

  ArithKind kind() const { return kind_; }
  std::uint64_t limit() const { return limit_; }

  /// Exact value at n, 1 <= n <= limit.
  wide_int value(std::uint64_t n) const;
  double value_as_double(std::uint64_t n) const;

  /// Raw storage indexed by n (entry 0 is 0). Empty for the other kind.
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::span<const wide_int> tau() const { return tau_; }

  friend bool operator==(const ArithTable& a, const ArithTable& b) {
    return a.kind_ == b.kind_ && a.limit_ == b.limit_ && a.counts_ == b.counts_ && a.tau_ == b.tau_;
  }

 private:
  ArithKind kind_;
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> counts_;
  std::vector<wide_int> tau_;
};

ArithTable build_table(ArithKind kind, std::uint64_t limit, const TableBudget& budget = {});

/// sum_{n <= floor(x)} values[n]^2, for 1 <= x <= limit.
double summatory_square(const ArithTable& table, double x);

/// The same sum evaluated at every point of an ascending grid in one pass.
std::vector<double> summatory_square_at(const ArithTable& table, std::span<const double> xs);

/// n geometric points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

struct SummatoryFit {
  ArithKind kind{};
  int degree = 0;
  /// d: a3 of x P3(log x); r: coefficient of x log x; tau: A of A x^12.
  double leading_coeff = 0.0;
  std::optional<double> reference_coeff;  // empty when fit-only
  double relative_error = 0.0;            // NaN when fit-only
  /// Secondary constant (r: the C of 4x log x + Cx) and its reference.
  std::optional<double> constant_coeff;
  std::optional<double> constant_reference;
  /// Fitted polynomial in log x, lowest degree first.
  std::vector<double> coeffs;
  /// max/min of the normalised samples (S(x)/x^12 for tau).
  double normalised_spread = 1.0;
  double condition_number = 1.0;
  std::vector<std::pair<double, double>> sample_points;  // (x, S(x))
};

inline constexpr double kDivisorSquareLeading = 0.10132118364233778;  // 1/pi^2
inline constexpr double kTwoSquaresLogCoeff = 4.0;
inline constexpr double kTwoSquaresConstant = 8.0665;
inline constexpr int kCuspWeight = 12;

SummatoryFit fit_summatory(const ArithTable& table, std::span<const double> x_grid);

}  // namespace ntlab
