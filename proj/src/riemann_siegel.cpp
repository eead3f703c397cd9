// Riemann–Siegel Z(t) and Euler–Maclaurin zeta(s).

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ntlab/errors.hpp"
#include "ntlab/kernels.hpp"
#include "ntlab/zeta_line.hpp"

namespace ntlab {
namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) is entire; its Taylor
// coefficients about p = 1/2 come from a trapezoid rule on a circle, which
// avoids the removable singularities at p = 1/4, 3/4.
constexpr int kPsiTerms = 40;
constexpr int kCirclePoints = 128;
constexpr double kCircleRadius = 0.6;

std::complex<double> psi(std::complex<double> p) {
  return std::cos(kTwoPi * (p * p - p - 0.0625)) / std::cos(kTwoPi * p);
}

const std::array<double, kPsiTerms>& psi_coefficients() {
  static const std::array<double, kPsiTerms> coeffs = [] {
    std::array<double, kPsiTerms> c{};
    std::array<std::complex<double>, kCirclePoints> values;
    for (int m = 0; m < kCirclePoints; ++m) {
      const double phi = kTwoPi * m / kCirclePoints;
      values[m] = psi(0.5 + kCircleRadius * std::polar(1.0, phi));
    }
    for (int j = 0; j < kPsiTerms; ++j) {
      std::complex<double> s = 0.0;
      for (int m = 0; m < kCirclePoints; ++m) {
        const double phi = kTwoPi * m / kCirclePoints;
        s += values[m] * std::polar(1.0, -j * phi);
      }
      c[j] = s.real() / kCirclePoints / std::pow(kCircleRadius, j);
    }
    return c;
  }();
  return coeffs;
}

// k-th derivative of Psi at p = 1/2 + z.
double psi_derivative(int k, double z) {
  const auto& c = psi_coefficients();
  double s = 0.0;
  for (int j = kPsiTerms - 1; j >= k; --j) {
    double falling = 1.0;
    for (int i = 0; i < k; ++i) falling *= j - i;
    s = s * z + c[j] * falling;
  }
  return s;
}

// Weights n^{-1/2} and log n for the main sum; covers t up to about 1e8.
constexpr std::size_t kMainSumTerms = 4096;

struct MainSumTable {
  std::vector<double> weight;
  std::vector<double> log_n;
  MainSumTable() : weight(kMainSumTerms), log_n(kMainSumTerms) {
    for (std::size_t n = 1; n <= kMainSumTerms; ++n) {
      weight[n - 1] = 1.0 / std::sqrt(static_cast<double>(n));
      log_n[n - 1] = std::log(static_cast<double>(n));
    }
  }
};

const MainSumTable& main_sum_table() {
  static const MainSumTable table;
  return table;
}

// B_{2k} / (2k)!
constexpr std::array<double, 10> kBernoulliOverFactorial{
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0};

}  // namespace

double riemann_siegel_theta(double t) {
  require(t > 0.0, ErrorKind::OutOfRange, "theta(t) needs t > 0");
  const double t2 = t * t;
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 +
         (1.0 / 48.0 + (7.0 / 5760.0 + 31.0 / 80640.0 / t2) / t2) / t;
}

double hardy_z(double t, int correction_order) {
  require(correction_order >= 0 && correction_order <= 2, ErrorKind::InvalidArgument,
          "Riemann-Siegel correction order must be 0, 1 or 2");
  require(t >= 2.0 * kPi, ErrorKind::OutOfRange, "Riemann-Siegel formula needs t >= 2 pi");
  const double a = std::sqrt(t / kTwoPi);
  const auto m = static_cast<std::size_t>(std::floor(a));
  const double p = a - static_cast<double>(m);
  const double theta = riemann_siegel_theta(t);

  require(m <= kMainSumTerms, ErrorKind::OutOfRange, "t too large for the Riemann-Siegel table");
  const auto& table = main_sum_table();
  const double main =
      2.0 * kernels::log_phase_cos_sum(std::span(table.weight.data(), m), std::span(table.log_n.data(), m), t, theta);

  const double z = p - 0.5;
  double corr = psi_derivative(0, z);
  if (correction_order >= 1) corr += -psi_derivative(3, z) / (96.0 * kPi * kPi) / a;
  if (correction_order >= 2) {
    const double pi2 = kPi * kPi;
    corr += (psi_derivative(2, z) / (64.0 * pi2) + psi_derivative(6, z) / (18432.0 * pi2 * pi2)) / (a * a);
  }
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  return main + sign * corr / std::sqrt(a);
}

std::complex<double> zeta_euler_maclaurin(std::complex<double> s) {
  require(std::abs(s - 1.0) > 1e-12, ErrorKind::InvalidArgument, "zeta has a pole at s = 1");
  require(std::abs(s.imag()) <= 1e5 && s.real() > -20.0, ErrorKind::OutOfRange,
          "Euler-Maclaurin zeta is limited to |Im s| <= 1e5, Re s > -20");
  const auto N = static_cast<std::size_t>(30.0 + std::ceil(std::abs(s.imag())) + std::max(0.0, -s.real()));
  std::complex<double> sum = 0.0;
  for (std::size_t n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double logN = std::log(static_cast<double>(N));
  const std::complex<double> Ns = std::exp(-s * logN);  // N^{-s}
  sum += Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
  // sum_k B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
  std::complex<double> rising = s;
  std::complex<double> power = Ns / static_cast<double>(N);
  const double inv_n2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    const double j = 2.0 * static_cast<double>(k) + 1.0;
    rising *= (s + j) * (s + j + 1.0);
    power *= inv_n2;
  }
  return sum;
}

double zeta_half_sq(double t, const QuadratureConfig& config) {
  t = std::abs(t);
  if (t < config.small_t_cutoff || t < 2.0 * kPi) return std::norm(zeta_euler_maclaurin({0.5, t}));
  const double z = hardy_z(t, config.rs_correction_order);
  return z * z;
}

double mean_square_main(double T) {
  require(T >= 0.0, ErrorKind::OutOfRange, "mean-square main term needs T >= 0");
  if (T == 0.0) return 0.0;
  return T * (std::log(T / kTwoPi) + 2.0 * kEulerGamma - 1.0);
}

}  // namespace ntlab
