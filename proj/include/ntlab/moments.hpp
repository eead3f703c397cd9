#pragma once

// Short-interval moments of Delta, P, A and E, the two-sided mean-square
// identity, fourth-moment and omega probes, and the sin^2 y / y^2 helper.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ntlab/error_terms.hpp"
#include "ntlab/zeta_line.hpp"

namespace ntlab {

inline constexpr double kDeltaCubicLeading = 0.8105694691387022;  // 8 / pi^2

struct MomentReport {
  std::string kind;   // delta, circle, cusp, e
  double T = 0.0;
  double U = 0.0;     // shift (G for the fourth-moment probes)
  int k = 2;
  double moment = 0.0;
  double main_term = 0.0;
  std::optional<double> ratio;
  std::vector<double> coeffs;
  std::optional<double> leading_reference;
  std::uint64_t seed = 0;
  std::optional<double> runtime_s;
  std::vector<std::string> warnings;
};

/// values[i] = f(first + i + offset), a contiguous sweep of one error term.
struct SampleWindow {
  ErrorTermKind kind{};
  std::uint64_t first = 0;
  double offset = 0.0;
  std::vector<double> values;

  std::uint64_t last() const { return first + values.size() - 1; }
};

SampleWindow sample_window(ErrorTermKind kind, const SummatoryIndex& index, std::uint64_t first,
                           std::uint64_t last, double offset);

/// sum_{n = from}^{from + count - 1} |f(n + shift) - f(n)|^power over the window.
double window_diff_power_sum(const SampleWindow& window, std::uint64_t from, std::uint64_t count,
                             std::uint64_t shift, unsigned power);

/// log(sqrt(T) / U)
double log_sqrt_ratio(double T, double U);

/// sum_{T <= n <= 2T} (Delta(n + U) - Delta(n))^2 with main term TU (8/pi^2) lambda^3.
MomentReport delta_diff_sq_sum(std::uint64_t T, std::uint64_t U, const SummatoryIndex& divisors);

/// Cubic least-squares fit of moment / (TU) in lambda = log(sqrt T / U); the
/// coefficients are returned lowest degree first.
std::vector<double> fit_cubic_in_lambda(double T, std::span<const double> U, std::span<const double> moments);

struct MomentFit {
  std::vector<MomentReport> points;  // one report per U
  std::vector<double> coeffs;        // fitted polynomial in lambda, lowest degree first
  double leading = 0.0;              // highest-degree coefficient
  std::optional<double> leading_reference;
  double max_relative_residual = 0.0;
};

/// delta_diff_sq_sum over a grid of U and the cubic fit; leading is compared with 8/pi^2.
MomentFit delta_moment_fit(std::uint64_t T, std::span<const std::uint64_t> U_grid, const SummatoryIndex& divisors);

/// Integer U values, rounded from n geometric points on [T^lo, T^hi], duplicates removed.
std::vector<std::uint64_t> geometric_u_grid(double T, double lo_exponent, double hi_exponent, std::size_t n);

/// int_a^b |E(t + plus) - E(t - minus)|^power dt by the trapezoid rule with the
/// given step (0 means the curve's own spacing).
double e_diff_power_integral(const ECurve& curve, double a, double b, double plus, double minus, unsigned power,
                             double step = 0.0);

/// int_T^{2T} (E(t + U) - E(t))^2 dt; main term T U lambda^3 with unit coefficient.
MomentReport e_diff_sq_integral(double T, double U, const ECurve& curve, double step = 0.0);

struct JutilaCheck {
  double T = 0.0, H = 0.0, U = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t rhs_terms = 0;
  double ratio() const { return rhs == 0.0 ? 0.0 : lhs / rhs; }
};

/// int_T^{T+H} x^{1/2} |exp(2 pi i U sqrt(n/x)) - 1|^2 dx by Gauss–Legendre panels.
double jutila_inner_integral(std::uint64_t n, double U, double T, double H, std::size_t panels = 64);
/// The same integral written as 4 int x^{1/2} sin^2(pi U sqrt(n/x)) dx.
double jutila_inner_integral_sin_form(std::uint64_t n, double U, double T, double H, std::size_t panels = 64);

/// lhs: sum over half-integers x in [T, T+H) of (Delta(x+U) - Delta(x))^2.
/// rhs: (1/4 pi^2) sum_{n <= terms_factor * T/(2U)} d(n)^2 n^{-3/2} times the inner integral.
JutilaCheck jutila_identity_check(std::uint64_t T, std::uint64_t H, std::uint64_t U, const SummatoryIndex& divisors,
                                  double terms_factor = 1.0);

/// Half-integer sum of (P(x+U) - P(x))^2 over [T, 2T); main term T U lambda.
MomentReport circle_diff_sq_integral(std::uint64_t T, std::uint64_t U, const SummatoryIndex& two_squares);

/// Fit moment / (TU) = A1 lambda + A2 over the U grid; coeffs = {A2, A1}.
MomentFit circle_moment_fit(std::uint64_t T, std::span<const std::uint64_t> U_grid,
                               const SummatoryIndex& two_squares);

/// Half-integer sum of (A(x+U) - A(x))^2 over [T, 2T); differences are exact
/// integers. ratio = moment / (T^12 U).
MomentReport cusp_diff_sq_integral(std::uint64_t T, std::uint64_t U, const SummatoryIndex& tau);

/// Half-integer sum of (Delta(x+G) - Delta(x-G))^4 over [T, 2T); ratio to T G^2.
MomentReport fourth_moment_probe_delta(std::uint64_t T, std::uint64_t G, const SummatoryIndex& divisors);
/// int_T^{2T} (E(t+G) - E(t-G))^4 dt; ratio to T G^2.
MomentReport fourth_moment_probe_e(double T, double G, const ECurve& curve, double step = 0.0);

/// max over sampled x in [T, 2T] of |f(x+U) - f(x)| / (sqrt(U) log^{3/2}(sqrt(x)/U)).
/// Delta is sampled at half-integers; the first n samples are the same for any
/// sample count >= n.
double omega_probe_delta(std::uint64_t T, std::uint64_t U, std::size_t samples, std::uint64_t seed,
                         const SummatoryIndex& divisors);
double omega_probe_e(double T, double U, std::size_t samples, std::uint64_t seed, const ECurve& curve);

struct DiscretizationGap {
  double half_integer = 0.0;  // half-integer (midpoint) sum over [T, 2T)
  double integer = 0.0;       // integer sum over T <= n <= 2T
  double constant = 0.0;      // |difference| / (U^{5/2} log^{5/2} T)
};
DiscretizationGap discretization_gap(std::uint64_t T, std::uint64_t U, const SummatoryIndex& divisors);

/// int_alpha^beta sin^2 y / y^2 dy, 0 < alpha <= 1 <= beta, absolute error <= 1e-8.
double sinc_sq_integral(double alpha, double beta);

}  // namespace ntlab
