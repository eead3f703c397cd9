#include "ntlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "kernels/compensated.hpp"
#include "ntlab/errors.hpp"
#include "ntlab/kernels.hpp"
#include "ntlab/least_squares.hpp"
#include "ntlab/parallel.hpp"
#include "ntlab/quadrature.hpp"

namespace ntlab {

namespace {

using kernels::detail::CompensatedSum;

// Deterministic parallel sum of f(i), i in [0, n): per-block compensated sums
// combined in block order.
template <typename F>
double parallel_sum(std::size_t n, F&& f, std::size_t min_block = 256) {
  std::vector<double> partial(block_count(n, min_block), 0.0);
  parallel_blocks(
      n,
      [&](std::size_t begin, std::size_t end, std::size_t block) {
        CompensatedSum s;
        for (std::size_t i = begin; i < end; ++i) s.add(f(i));
        partial[block] = s.value();
      },
      min_block);
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

void set_ratio(MomentReport& r) {
  if (r.main_term != 0.0) r.ratio = r.moment / r.main_term;
}

double default_step(const ECurve& curve) {
  return (curve.t_max() - curve.t_min()) / static_cast<double>(curve.t_grid().size() - 1);
}

std::uint64_t divisor_at(const SummatoryIndex& d, std::uint64_t n) {
  return static_cast<std::uint64_t>(d.partial(n) - d.partial(n - 1));
}

void require_kind(const SummatoryIndex& index, ArithKind kind, const char* what) {
  require(index.kind() == kind, ErrorKind::InvalidArgument, std::string(what) + ": wrong table kind");
}

}  // namespace

SampleWindow sample_window(ErrorTermKind kind, const SummatoryIndex& index, std::uint64_t first, std::uint64_t last,
                           double offset) {
  require(first <= last, ErrorKind::InvalidArgument, "sample window: first > last");
  require(offset >= 0.0 && offset < 1.0, ErrorKind::InvalidArgument, "sample window: offset must lie in [0, 1)");
  require(static_cast<double>(last) + offset <= max_argument(kind, index), ErrorKind::OutOfRange,
          "sample window reaches beyond the table");
  SampleWindow w{kind, first, offset, std::vector<double>(last - first + 1)};
  parallel_blocks(w.values.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i)
      w.values[i] = error_term(kind, static_cast<double>(first + i) + offset, index);
  });
  return w;
}

double window_diff_power_sum(const SampleWindow& window, std::uint64_t from, std::uint64_t count, std::uint64_t shift,
                             unsigned power) {
  if (count == 0) return 0.0;
  require(from >= window.first && from + count - 1 + shift <= window.last(), ErrorKind::Coverage,
          "difference sum runs outside the sample window");
  const std::size_t base = from - window.first;
  const std::span<const double> lo(window.values.data() + base, count);
  const std::span<const double> hi(window.values.data() + base + shift, count);
  return kernels::abs_diff_power_sum(hi, lo, power);
}

double log_sqrt_ratio(double T, double U) { return std::log(std::sqrt(T) / U); }

MomentReport delta_diff_sq_sum(std::uint64_t T, std::uint64_t U, const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "delta_diff_sq_sum");
  require(T >= 1, ErrorKind::InvalidArgument, "delta_diff_sq_sum needs T >= 1");
  require(2 * T + U <= divisors.limit(), ErrorKind::OutOfRange, "delta_diff_sq_sum: 2T + U exceeds the table");
  MomentReport r;
  r.kind = "delta";
  r.T = static_cast<double>(T);
  r.U = static_cast<double>(U);
  if (U == 0) return r;
  const auto w = sample_window(ErrorTermKind::DirichletDelta, divisors, T, 2 * T + U, 0.0);
  r.moment = window_diff_power_sum(w, T, T + 1, U, 2);
  r.main_term = r.T * r.U * kDeltaCubicLeading * std::pow(log_sqrt_ratio(r.T, r.U), 3);
  r.leading_reference = kDeltaCubicLeading;
  set_ratio(r);
  return r;
}

std::vector<double> fit_cubic_in_lambda(double T, std::span<const double> U, std::span<const double> moments) {
  require(U.size() == moments.size() && U.size() >= 6, ErrorKind::InvalidArgument,
          "cubic fit needs at least 6 (U, moment) pairs");
  std::vector<double> x(U.size()), y(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) {
    require(U[i] > 0.0, ErrorKind::InvalidArgument, "cubic fit needs U > 0");
    x[i] = log_sqrt_ratio(T, U[i]);
    y[i] = moments[i] / (T * U[i]);
  }
  return fit_polynomial(x, y, 3).uncentered();
}

std::vector<std::uint64_t> geometric_u_grid(double T, double lo_exponent, double hi_exponent, std::size_t n) {
  require(lo_exponent < hi_exponent && n >= 2, ErrorKind::InvalidArgument, "bad U grid");
  std::vector<std::uint64_t> out;
  for (double u : geometric_grid(std::pow(T, lo_exponent), std::pow(T, hi_exponent), n)) {
    const auto v = static_cast<std::uint64_t>(std::max(1.0, std::round(u)));
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

MomentFit delta_moment_fit(std::uint64_t T, std::span<const std::uint64_t> U_grid, const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "delta_moment_fit");
  require(U_grid.size() >= 6 && T >= 1, ErrorKind::InvalidArgument, "delta_moment_fit needs T >= 1 and 6 U values");
  const std::uint64_t u_max = *std::max_element(U_grid.begin(), U_grid.end());
  require(2 * T + u_max <= divisors.limit(), ErrorKind::OutOfRange, "delta_moment_fit: 2T + U exceeds the table");
  const auto w = sample_window(ErrorTermKind::DirichletDelta, divisors, T, 2 * T + u_max, 0.0);
  MomentFit fit;
  std::vector<double> us, ms;
  for (std::uint64_t U : U_grid) {
    require(U >= 1, ErrorKind::InvalidArgument, "delta_moment_fit needs U >= 1");
    MomentReport r;
    r.kind = "delta";
    r.T = static_cast<double>(T);
    r.U = static_cast<double>(U);
    r.moment = window_diff_power_sum(w, T, T + 1, U, 2);
    r.main_term = r.T * r.U * kDeltaCubicLeading * std::pow(log_sqrt_ratio(r.T, r.U), 3);
    r.leading_reference = kDeltaCubicLeading;
    set_ratio(r);
    us.push_back(r.U);
    ms.push_back(r.moment);
    fit.points.push_back(std::move(r));
  }
  fit.coeffs = fit_cubic_in_lambda(static_cast<double>(T), us, ms);
  fit.leading = fit.coeffs.back();
  fit.leading_reference = kDeltaCubicLeading;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double lam = log_sqrt_ratio(static_cast<double>(T), us[i]);
    const double model = fit.coeffs[0] + lam * (fit.coeffs[1] + lam * (fit.coeffs[2] + lam * fit.coeffs[3]));
    const double y = ms[i] / (static_cast<double>(T) * us[i]);
    fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(y - model) / std::abs(model));
  }
  return fit;
}

double e_diff_power_integral(const ECurve& curve, double a, double b, double plus, double minus, unsigned power,
                             double step) {
  require(a <= b && plus >= 0.0 && minus >= 0.0, ErrorKind::InvalidArgument, "bad E-difference integral range");
  require(power >= 1 && power <= 4, ErrorKind::InvalidArgument, "power must be 1..4");
  require(curve.covers(a - minus, b + plus), ErrorKind::Coverage, "E curve does not cover the integration range");
  if (a == b || (plus == 0.0 && minus == 0.0)) return 0.0;
  if (step <= 0.0) step = default_step(curve);
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / step));
  const double h = (b - a) / static_cast<double>(n);
  auto f = [&](std::size_t i) {
    const double t = (i == n) ? b : a + h * static_cast<double>(i);
    const double d = std::abs(curve.at(t + plus) - curve.at(t - minus));
    double v = d;
    for (unsigned p = 1; p < power; ++p) v *= d;
    return (i == 0 || i == n) ? 0.5 * v : v;
  };
  return h * parallel_sum(n + 1, f);
}

MomentReport e_diff_sq_integral(double T, double U, const ECurve& curve, double step) {
  require(T > 0.0 && U >= 0.0, ErrorKind::InvalidArgument, "e_diff_sq_integral needs T > 0, U >= 0");
  MomentReport r;
  r.kind = "e";
  r.T = T;
  r.U = U;
  if (U == 0.0) return r;
  r.moment = e_diff_power_integral(curve, T, 2.0 * T, U, 0.0, 2, step);
  r.main_term = T * U * std::pow(log_sqrt_ratio(T, U), 3);
  set_ratio(r);
  return r;
}

double jutila_inner_integral(std::uint64_t n, double U, double T, double H, std::size_t panels) {
  const double c = 2.0 * kPi * U * std::sqrt(static_cast<double>(n));
  auto f = [c](double x) {
    const double phi = c / std::sqrt(x);
    const double s = std::sin(0.5 * phi);
    const std::complex<double> z(-2.0 * s * s, std::sin(phi));  // exp(i phi) - 1
    return std::sqrt(x) * std::norm(z);
  };
  return quad::gauss_legendre8_panels(f, T, T + H, panels);
}

double jutila_inner_integral_sin_form(std::uint64_t n, double U, double T, double H, std::size_t panels) {
  const double c = kPi * U * std::sqrt(static_cast<double>(n));
  auto f = [c](double x) {
    const double s = std::sin(c / std::sqrt(x));
    return 4.0 * std::sqrt(x) * s * s;
  };
  return quad::gauss_legendre8_panels(f, T, T + H, panels);
}

JutilaCheck jutila_identity_check(std::uint64_t T, std::uint64_t H, std::uint64_t U, const SummatoryIndex& divisors,
                                  double terms_factor) {
  require_kind(divisors, ArithKind::Divisor, "jutila_identity_check");
  require(T >= 1 && H >= 1, ErrorKind::InvalidArgument, "jutila_identity_check needs T, H >= 1");
  require(terms_factor > 0.0, ErrorKind::InvalidArgument, "terms_factor must be positive");
  require(T + H + U <= divisors.limit(), ErrorKind::OutOfRange, "jutila_identity_check: T + H + U exceeds the table");
  JutilaCheck out;
  out.T = static_cast<double>(T);
  out.H = static_cast<double>(H);
  out.U = static_cast<double>(U);
  if (U == 0) return out;

  const auto w = sample_window(ErrorTermKind::DirichletDelta, divisors, T, T + H - 1 + U, 0.5);
  out.lhs = window_diff_power_sum(w, T, H, U, 2);

  const auto terms = static_cast<std::uint64_t>(std::floor(terms_factor * out.T / (2.0 * out.U)));
  require(terms <= divisors.limit(), ErrorKind::OutOfRange, "jutila_identity_check: rhs needs d(n) beyond the table");
  out.rhs_terms = terms;
  const double sum = parallel_sum(terms, [&](std::size_t i) {
    const std::uint64_t n = i + 1;
    const double d = static_cast<double>(divisor_at(divisors, n));
    const double nd = static_cast<double>(n);
    return d * d / (nd * std::sqrt(nd)) * jutila_inner_integral(n, out.U, out.T, out.H);
  });
  out.rhs = sum / (4.0 * kPi * kPi);
  return out;
}

MomentReport circle_diff_sq_integral(std::uint64_t T, std::uint64_t U, const SummatoryIndex& two_squares) {
  require_kind(two_squares, ArithKind::TwoSquares, "circle_diff_sq_integral");
  require(T >= 1, ErrorKind::InvalidArgument, "circle_diff_sq_integral needs T >= 1");
  require(2 * T + U <= two_squares.limit(), ErrorKind::OutOfRange, "circle_diff_sq_integral: 2T + U exceeds the table");
  MomentReport r;
  r.kind = "circle";
  r.T = static_cast<double>(T);
  r.U = static_cast<double>(U);
  if (U == 0) return r;
  const auto w = sample_window(ErrorTermKind::CircleP, two_squares, T, 2 * T - 1 + U, 0.5);
  r.moment = window_diff_power_sum(w, T, T, U, 2);
  r.main_term = r.T * r.U * log_sqrt_ratio(r.T, r.U);
  set_ratio(r);
  return r;
}

MomentFit circle_moment_fit(std::uint64_t T, std::span<const std::uint64_t> U_grid, const SummatoryIndex& two_squares) {
  require_kind(two_squares, ArithKind::TwoSquares, "circle_moment_fit");
  require(U_grid.size() >= 3 && T >= 1, ErrorKind::InvalidArgument, "circle_moment_fit needs T >= 1 and 3 U values");
  const std::uint64_t u_max = *std::max_element(U_grid.begin(), U_grid.end());
  require(2 * T + u_max <= two_squares.limit(), ErrorKind::OutOfRange, "circle_moment_fit: 2T + U exceeds the table");
  const auto w = sample_window(ErrorTermKind::CircleP, two_squares, T, 2 * T - 1 + u_max, 0.5);
  MomentFit fit;
  std::vector<double> x, y;
  for (std::uint64_t U : U_grid) {
    require(U >= 1, ErrorKind::InvalidArgument, "circle_moment_fit needs U >= 1");
    MomentReport r;
    r.kind = "circle";
    r.T = static_cast<double>(T);
    r.U = static_cast<double>(U);
    r.moment = window_diff_power_sum(w, T, T, U, 2);
    r.main_term = r.T * r.U * log_sqrt_ratio(r.T, r.U);
    set_ratio(r);
    x.push_back(log_sqrt_ratio(r.T, r.U));
    y.push_back(r.moment / (r.T * r.U));
    fit.points.push_back(std::move(r));
  }
  fit.coeffs = fit_polynomial(x, y, 1).uncentered();
  fit.leading = fit.coeffs[1];
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double model = fit.coeffs[0] + fit.coeffs[1] * x[i];
    fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(y[i] - model) / std::abs(model));
  }
  return fit;
}

MomentReport cusp_diff_sq_integral(std::uint64_t T, std::uint64_t U, const SummatoryIndex& tau) {
  require_kind(tau, ArithKind::RamanujanTau, "cusp_diff_sq_integral");
  require(T >= 1, ErrorKind::InvalidArgument, "cusp_diff_sq_integral needs T >= 1");
  require(2 * T + U <= tau.limit(), ErrorKind::OutOfRange, "cusp_diff_sq_integral: 2T + U exceeds the table");
  MomentReport r;
  r.kind = "cusp";
  r.T = static_cast<double>(T);
  r.U = static_cast<double>(U);
  if (U == 0) return r;
  // floor(m + 1/2 + U) = m + U, so each difference is an exact integer.
  long double sum = 0.0L, carry = 0.0L;
  for (std::uint64_t m = T; m < 2 * T; ++m) {
    const auto diff = static_cast<long double>(tau.partial_wide(m + U) - tau.partial_wide(m));
    const long double term = diff * diff;
    const long double s = sum + term;
    const long double bp = s - sum;
    carry += (sum - (s - bp)) + (term - bp);
    sum = s;
  }
  r.moment = static_cast<double>(sum + carry);
  r.main_term = std::pow(r.T, 12.0) * r.U;
  set_ratio(r);
  return r;
}

MomentReport fourth_moment_probe_delta(std::uint64_t T, std::uint64_t G, const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "fourth_moment_probe_delta");
  require(T >= 1 && G <= T, ErrorKind::InvalidArgument, "fourth_moment_probe_delta needs T >= 1, G <= T");
  require(2 * T + G <= divisors.limit(), ErrorKind::OutOfRange, "fourth_moment_probe_delta: 2T + G exceeds the table");
  MomentReport r;
  r.kind = "delta";
  r.T = static_cast<double>(T);
  r.U = static_cast<double>(G);
  r.k = 4;
  if (G == 0) return r;
  if (r.U < std::pow(r.T, 0.375) || r.U > std::sqrt(r.T)) r.warnings.push_back("G outside [T^{3/8}, T^{1/2}]");
  const auto w = sample_window(ErrorTermKind::DirichletDelta, divisors, T - G, 2 * T - 1 + G, 0.5);
  r.moment = window_diff_power_sum(w, T - G, T, 2 * G, 4);
  r.main_term = r.T * r.U * r.U;
  set_ratio(r);
  return r;
}

MomentReport fourth_moment_probe_e(double T, double G, const ECurve& curve, double step) {
  require(T > 0.0 && G >= 0.0, ErrorKind::InvalidArgument, "fourth_moment_probe_e needs T > 0, G >= 0");
  MomentReport r;
  r.kind = "e";
  r.T = T;
  r.U = G;
  r.k = 4;
  if (G == 0.0) return r;
  if (G < std::pow(T, 0.375) || G > std::sqrt(T)) r.warnings.push_back("G outside [T^{3/8}, T^{1/2}]");
  r.moment = e_diff_power_integral(curve, T, 2.0 * T, G, G, 4, step);
  r.main_term = T * G * G;
  set_ratio(r);
  return r;
}

double omega_probe_delta(std::uint64_t T, std::uint64_t U, std::size_t samples, std::uint64_t seed,
                         const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "omega_probe_delta");
  require(samples >= 1000, ErrorKind::InvalidArgument, "omega probe needs at least 1000 samples");
  require(T >= 1 && U >= 1 && static_cast<double>(U) < std::sqrt(static_cast<double>(T)), ErrorKind::InvalidArgument,
          "omega probe needs 1 <= U < sqrt(T)");
  require(2 * T + U + 1 <= divisors.limit(), ErrorKind::OutOfRange, "omega probe: 2T + U exceeds the table");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  const double u = static_cast<double>(U);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = static_cast<double>(T + rng() % T) + 0.5;
    const double lam = std::log(std::sqrt(x) / u);
    const double v = std::abs(delta(x + u, divisors) - delta(x, divisors)) / (std::sqrt(u) * std::pow(lam, 1.5));
    best = std::max(best, v);
  }
  return best;
}

double omega_probe_e(double T, double U, std::size_t samples, std::uint64_t seed, const ECurve& curve) {
  require(samples >= 1000, ErrorKind::InvalidArgument, "omega probe needs at least 1000 samples");
  require(T > 0.0 && U > 0.0 && U < std::sqrt(T), ErrorKind::InvalidArgument, "omega probe needs 0 < U < sqrt(T)");
  require(curve.covers(T, 2.0 * T + U), ErrorKind::Coverage, "E curve does not cover [T, 2T + U]");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = T + T * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    const double lam = std::log(std::sqrt(x) / U);
    best = std::max(best, std::abs(curve.at(x + U) - curve.at(x)) / (std::sqrt(U) * std::pow(lam, 1.5)));
  }
  return best;
}

DiscretizationGap discretization_gap(std::uint64_t T, std::uint64_t U, const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "discretization_gap");
  require(T >= 2 && U >= 1, ErrorKind::InvalidArgument, "discretization_gap needs T >= 2, U >= 1");
  require(2 * T + U <= divisors.limit(), ErrorKind::OutOfRange, "discretization_gap: 2T + U exceeds the table");
  DiscretizationGap g;
  const auto half = sample_window(ErrorTermKind::DirichletDelta, divisors, T, 2 * T - 1 + U, 0.5);
  g.half_integer = window_diff_power_sum(half, T, T, U, 2);
  g.integer = delta_diff_sq_sum(T, U, divisors).moment;
  const double scale = std::pow(static_cast<double>(U) * std::log(static_cast<double>(T)), 2.5);
  g.constant = std::abs(g.half_integer - g.integer) / scale;
  return g;
}

namespace {

// J(a) = int_a^inf exp(2iy) y^{-2} dy for a >= 64, asymptotic series.
std::complex<double> oscillatory_tail(double a) {
  const std::complex<double> two_i_a(0.0, 2.0 * a);
  std::complex<double> term = 1.0, sum = 0.0;
  for (int j = 0; j < 40; ++j) {
    sum += term;
    term *= static_cast<double>(j + 2) / two_i_a;
    if (std::abs(term) < 1e-18) break;
  }
  return -std::exp(std::complex<double>(0.0, 2.0 * a)) / (std::complex<double>(0.0, 2.0) * a * a) * sum;
}

}  // namespace

double sinc_sq_integral(double alpha, double beta) {
  require(alpha > 0.0 && alpha <= 1.0 && beta >= 1.0 && std::isfinite(beta), ErrorKind::InvalidArgument,
          "sinc_sq_integral needs 0 < alpha <= 1 <= beta");
  if (alpha == beta) return 0.0;
  constexpr double kSplit = 64.0;
  auto f = [](double y) {
    const double s = std::sin(y);
    return s * s / (y * y);
  };
  const double head_end = std::min(beta, kSplit);
  const auto head = quad::adaptive_gauss_kronrod(f, alpha, head_end, 1e-11);
  require(head.converged, ErrorKind::QuadratureFailure, "sinc_sq_integral: adaptive quadrature did not converge");
  if (beta <= kSplit) return head.value;
  // int_Y^beta sin^2 y / y^2 = (1/Y - 1/beta)/2 - Re(J(Y) - J(beta))/2
  const double tail = 0.5 * (1.0 / kSplit - 1.0 / beta) - 0.5 * (oscillatory_tail(kSplit) - oscillatory_tail(beta)).real();
  return head.value + tail;
}

}  // namespace ntlab
