#pragma once

// |zeta(1/2 + it)|^2 on the critical line, the mean-square main term, the
// cumulative error function E(T) and E*(t) = E(t) - 2 pi Delta*(t / 2 pi).

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ntlab/error_terms.hpp"

namespace ntlab {

struct QuadratureConfig {
  double step = 0.25;              // base panel width in t (capped at 0.25)
  double tolerance = 1e-9;         // target absolute error per unit length
  int rs_correction_order = 2;     // Riemann–Siegel correction terms C0..C_order
  double small_t_cutoff = 100.0;   // Euler–Maclaurin below this t
  double max_t = 1e6;              // largest supported t
  bool verify_half_step = true;

  void validate() const;
  /// Stable text used to key the curve cache.
  std::string key(double t_min, double t_max) const;
};

/// theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi, asymptotic expansion.
double riemann_siegel_theta(double t);

/// Hardy's Z(t) by the Riemann–Siegel formula with corrections C0..C_order.
double hardy_z(double t, int correction_order = 2);

/// zeta(s) by Euler–Maclaurin summation (any s != 1 of moderate height).
std::complex<double> zeta_euler_maclaurin(std::complex<double> s);

double zeta_half_sq(double t, const QuadratureConfig& config = {});

/// T(log(T / 2 pi) + 2 gamma - 1); 0 at T = 0.
double mean_square_main(double T);

class ECurve {
 public:
  ECurve(std::vector<double> t_grid, std::vector<double> e_values, QuadratureConfig config,
         double half_step_discrepancy);

  std::span<const double> t_grid() const { return t_; }
  std::span<const double> e_values() const { return e_; }
  const QuadratureConfig& config() const { return config_; }
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  /// Max |E_h - E_{h/2}| seen when the curve was built (NaN if loaded from cache).
  double half_step_discrepancy() const { return discrepancy_; }

  bool covers(double a, double b) const { return a >= t_min() && b <= t_max(); }

  /// Shape-preserving (monotone) cubic Hermite interpolation of E.
  double at(double t) const;

 private:
  std::vector<double> t_;
  std::vector<double> e_;
  std::vector<double> slope_;
  QuadratureConfig config_;
  double discrepancy_;
};

ECurve build_e_curve(double t_min, double t_max, const QuadratureConfig& config = {});

void write_e_curve_csv(const std::filesystem::path& path, const ECurve& curve);
ECurve read_e_curve_csv(const std::filesystem::path& path, const QuadratureConfig& config);
std::filesystem::path e_curve_cache_path(const std::filesystem::path& dir, double t_min, double t_max,
                                         const QuadratureConfig& config);

struct CachedCurve {
  ECurve curve;
  bool from_cache = false;
};
CachedCurve load_or_build_e_curve(const std::filesystem::path& dir, double t_min, double t_max,
                                  const QuadratureConfig& config = {});

/// E(t) - 2 pi Delta*(t / 2 pi).
double e_star(double t, const ECurve& curve, const SummatoryIndex& divisors);

/// max over the sample points of |zeta|^4 / (log t (int_{t-1}^{t+1} |zeta|^4 + 1)).
double fourth_power_local_constant(std::span<const double> ts, const QuadratureConfig& config = {});

/// 64-bit FNV-1a, used for content-addressed file names.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace ntlab
