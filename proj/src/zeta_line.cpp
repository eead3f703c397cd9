#include "ntlab/zeta_line.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kernels/compensated.hpp"
#include "ntlab/errors.hpp"
#include "ntlab/parallel.hpp"
#include "ntlab/quadrature.hpp"

namespace ntlab {

namespace {

constexpr double kMaxPanelWidth = 0.25;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Integral of |zeta|^2 over each of `cells` equal cells of [a, b], each cell
// split into `panels_per_cell` Gauss–Legendre panels.
std::vector<double> cell_integrals(double a, double b, std::size_t cells, std::size_t panels_per_cell,
                                   const QuadratureConfig& config) {
  std::vector<double> out(cells);
  const double width = (b - a) / static_cast<double>(cells);
  auto f = [&config](double t) { return zeta_half_sq(t, config); };
  parallel_blocks(
      cells,
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          const double lo = a + width * static_cast<double>(i);
          const double hi = (i + 1 == cells) ? b : a + width * static_cast<double>(i + 1);
          out[i] = quad::gauss_legendre8_panels(f, lo, hi, panels_per_cell);
        }
      },
      64);
  return out;
}

double ordered_sum(const std::vector<double>& v) {
  kernels::detail::CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value();
}

// Cumulative integral of |zeta|^2 from 0 to each grid point.
std::vector<double> cumulative_integral(double t_min, double t_max, std::size_t cells, double panel_width,
                                        std::size_t panels_per_cell, const QuadratureConfig& config) {
  std::vector<double> out(cells + 1);
  double head = 0.0;
  if (t_min > 0.0) {
    const auto pre_cells = static_cast<std::size_t>(std::ceil(t_min / panel_width));
    head = ordered_sum(cell_integrals(0.0, t_min, pre_cells, panels_per_cell, config));
  }
  const auto parts = cell_integrals(t_min, t_max, cells, panels_per_cell, config);
  kernels::detail::CompensatedSum s;
  s.add(head);
  out[0] = s.value();
  for (std::size_t i = 0; i < cells; ++i) {
    s.add(parts[i]);
    out[i + 1] = s.value();
  }
  return out;
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace

void QuadratureConfig::validate() const {
  require(std::isfinite(step) && step > 0.0, ErrorKind::InvalidArgument, "quadrature step must be positive");
  require(std::isfinite(tolerance) && tolerance > 0.0, ErrorKind::InvalidArgument,
          "quadrature tolerance must be positive");
  require(rs_correction_order >= 0 && rs_correction_order <= 2, ErrorKind::InvalidArgument,
          "rs_correction_order must be 0, 1 or 2");
  require(small_t_cutoff >= 2.0 * kPi && small_t_cutoff <= 1e4, ErrorKind::InvalidArgument,
          "small_t_cutoff must lie in [2 pi, 1e4]");
  require(max_t > 0.0 && max_t <= 1e8, ErrorKind::InvalidArgument, "max_t must lie in (0, 1e8]");
}

std::string QuadratureConfig::key(double t_min, double t_max) const {
  return "t_min=" + format_g17(t_min) + ",t_max=" + format_g17(t_max) +
         ",step=" + format_g17(std::min(step, kMaxPanelWidth)) + ",rs=" + std::to_string(rs_correction_order) +
         ",cutoff=" + format_g17(small_t_cutoff);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ECurve::ECurve(std::vector<double> t_grid, std::vector<double> e_values, QuadratureConfig config,
               double half_step_discrepancy)
    : t_(std::move(t_grid)), e_(std::move(e_values)), config_(config), discrepancy_(half_step_discrepancy) {
  require(t_.size() == e_.size() && t_.size() >= 2, ErrorKind::InvalidArgument,
          "E curve needs at least two (t, E) pairs");
  for (std::size_t i = 0; i + 1 < t_.size(); ++i)
    require(t_[i] < t_[i + 1], ErrorKind::InvalidArgument, "E curve grid must be strictly increasing");
  slope_ = pchip_slopes(t_, e_);
}

double ECurve::at(double t) const {
  const double slack = 1e-9 * std::max(1.0, std::abs(t_max()));
  if (!(t >= t_min() - slack && t <= t_max() + slack))
    fail(ErrorKind::Coverage, "E curve covers [" + format_g17(t_min()) + ", " + format_g17(t_max()) +
                                  "], asked for t = " + format_g17(t));
  t = std::clamp(t, t_min(), t_max());
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_.begin());
  i = std::clamp<std::size_t>(i, 1, t_.size() - 1) - 1;
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * e_[i] + h10 * h * slope_[i] + h01 * e_[i + 1] + h11 * h * slope_[i + 1];
}

ECurve build_e_curve(double t_min, double t_max, const QuadratureConfig& config) {
  config.validate();
  require(std::isfinite(t_min) && std::isfinite(t_max) && t_min >= 0.0 && t_min < t_max, ErrorKind::InvalidArgument,
          "E curve needs 0 <= t_min < t_max");
  require(t_max <= config.max_t, ErrorKind::OutOfRange, "E curve: t_max exceeds max_t");
  const double h = std::min(config.step, kMaxPanelWidth);
  const auto cells = static_cast<std::size_t>(std::ceil((t_max - t_min) / h));

  // Values come from the h/2 rule; the h rule only serves as the check.
  const auto fine = cumulative_integral(t_min, t_max, cells, h, 2, config);
  double discrepancy = std::numeric_limits<double>::quiet_NaN();
  if (config.verify_half_step) {
    const auto coarse = cumulative_integral(t_min, t_max, cells, h, 1, config);
    discrepancy = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) discrepancy = std::max(discrepancy, std::abs(fine[i] - coarse[i]));
    const double allowed = std::max(1e-3, config.tolerance * t_max);
    if (!(discrepancy <= allowed))
      throw QuadratureError("E curve: step h and h/2 disagree by " + format_g17(discrepancy) + " (allowed " +
                                format_g17(allowed) + ")",
                            discrepancy);
  }

  std::vector<double> t(cells + 1), e(cells + 1);
  const double width = (t_max - t_min) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    t[i] = (i == cells) ? t_max : t_min + width * static_cast<double>(i);
    e[i] = fine[i] - mean_square_main(t[i]);
  }
  return ECurve(std::move(t), std::move(e), config, discrepancy);
}

void write_e_curve_csv(const std::filesystem::path& path, const ECurve& curve) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::ResourceLimit, "cannot write " + tmp.string());
    out << "t,e_value\n";
    char line[96];
    for (std::size_t i = 0; i < curve.t_grid().size(); ++i) {
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", curve.t_grid()[i], curve.e_values()[i]);
      out << line;
    }
    require(static_cast<bool>(out), ErrorKind::ResourceLimit, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ECurve read_e_curve_csv(const std::filesystem::path& path, const QuadratureConfig& config) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::CacheInvalid, "cannot open " + path.string());
  std::string line;
  require(std::getline(in, line) && line == "t,e_value", ErrorKind::CacheInvalid,
          "bad E curve header in " + path.string());
  std::vector<double> t, e;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::CacheInvalid, "malformed E curve row in " + path.string());
    char* end = nullptr;
    const double tv = std::strtod(line.c_str(), &end);
    require(end == line.c_str() + comma, ErrorKind::CacheInvalid, "malformed t value in " + path.string());
    const double ev = std::strtod(line.c_str() + comma + 1, &end);
    require(*end == '\0' && std::isfinite(tv) && std::isfinite(ev), ErrorKind::CacheInvalid,
            "malformed E value in " + path.string());
    t.push_back(tv);
    e.push_back(ev);
  }
  require(t.size() >= 2 && std::is_sorted(t.begin(), t.end()) &&
              std::adjacent_find(t.begin(), t.end()) == t.end(),
          ErrorKind::CacheInvalid, "E curve cache " + path.string() + " is truncated or unordered");
  return ECurve(std::move(t), std::move(e), config, std::numeric_limits<double>::quiet_NaN());
}

std::filesystem::path e_curve_cache_path(const std::filesystem::path& dir, double t_min, double t_max,
                                         const QuadratureConfig& config) {
  char name[64];
  std::snprintf(name, sizeof name, "e_curve_%016llx.csv",
                static_cast<unsigned long long>(fnv1a64(config.key(t_min, t_max))));
  return dir / name;
}

CachedCurve load_or_build_e_curve(const std::filesystem::path& dir, double t_min, double t_max,
                                  const QuadratureConfig& config) {
  const auto path = e_curve_cache_path(dir, t_min, t_max, config);
  if (std::filesystem::exists(path)) {
    try {
      auto curve = read_e_curve_csv(path, config);
      if (curve.t_min() == t_min && curve.t_max() == t_max) return {std::move(curve), true};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CacheInvalid) throw;
    }
  }
  auto curve = build_e_curve(t_min, t_max, config);
  write_e_curve_csv(path, curve);
  return {std::move(curve), false};
}

double e_star(double t, const ECurve& curve, const SummatoryIndex& divisors) {
  const double x = t / (2.0 * kPi);
  return curve.at(t) - 2.0 * kPi * delta_star(x, divisors).direct;
}

double fourth_power_local_constant(std::span<const double> ts, const QuadratureConfig& config) {
  config.validate();
  auto f4 = [&config](double t) {
    const double z2 = zeta_half_sq(t, config);
    return z2 * z2;
  };
  double worst = 0.0;
  for (double t : ts) {
    require(t > 2.0 * kPi + 1.0, ErrorKind::OutOfRange, "local fourth-power check needs t > 2 pi + 1");
    const double local = quad::gauss_legendre8_panels(f4, t - 1.0, t + 1.0, 16);
    worst = std::max(worst, f4(t) / (std::log(t) * (local + 1.0)));
  }
  return worst;
}

}  // namespace ntlab
