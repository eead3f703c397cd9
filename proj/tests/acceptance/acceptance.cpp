// Acceptance checks. `ntlab_acceptance` runs every criterion; `ntlab_acceptance 3 7`
// runs the listed ones. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ntlab/arith_tables.hpp"
#include "ntlab/error_terms.hpp"
#include "ntlab/inequality.hpp"
#include "ntlab/moments.hpp"
#include "ntlab/table_cache.hpp"
#include "ntlab/voronoi.hpp"
#include "ntlab/zeta_line.hpp"
#include "oracles.hpp"

using namespace ntlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string cache_dir() {
  const char* env = std::getenv("NTLAB_CACHE_DIR");
  return env ? env : ".ntlab-cache";
}

// One divisor table shared by criteria 3 and 9.
constexpr std::uint64_t kLargeDivisorLimit = 20'004'096;

const ArithTable& large_divisors() {
  static const ArithTable t = load_or_build_table(cache_dir(), ArithKind::Divisor, kLargeDivisorLimit).table;
  return t;
}

void criterion1(Outcome& o) {
  const std::uint64_t L = 10000;
  const auto d = build_table(ArithKind::Divisor, L);
  const auto r = build_table(ArithKind::TwoSquares, L);
  const auto tau = build_table(ArithKind::RamanujanTau, L);
  const auto tau_ref = testing::tau_dense(L);
  std::uint64_t bad_d = 0, bad_r = 0, bad_tau = 0;
  for (std::uint64_t n = 1; n <= L; ++n) {
    bad_d += d.value(n) != testing::divisor_count_brute(n);
    bad_r += r.value(n) != testing::two_squares_by_rows(static_cast<std::int64_t>(n));
    bad_tau += tau.value(n) != tau_ref[n];
  }
  o.detail << "mismatches d=" << bad_d << " r=" << bad_r << " tau=" << bad_tau << " over n <= 10^4";
  o.expect(bad_d == 0 && bad_r == 0 && bad_tau == 0, "exact agreement");
}

void criterion2(Outcome& o) {
  const auto d = build_table(ArithKind::Divisor, 200000);
  const auto r = build_table(ArithKind::TwoSquares, 200000);
  const SummatoryIndex d_idx(d), r_idx(r);
  const auto xs = half_integer_samples(1000, 1e5, 2e5, 20240601);
  const std::vector<std::uint64_t> Ns{100, 1000, 10000};
  for (const auto& [kind, table, idx] :
       {std::tuple{ErrorTermKind::DirichletDelta, &d, &d_idx}, std::tuple{ErrorTermKind::CircleP, &r, &r_idx}}) {
    const VoronoiSeries series(kind, *table, 10000);
    const auto study = truncation_study(series, *idx, Ns, xs);
    o.detail << to_string(kind) << ": rms";
    for (double e : study.rms_error) o.detail << ' ' << e;
    o.detail << " slope " << study.slope << "; ";
    o.expect(study.slope >= -0.7 && study.slope <= -0.3, std::string(to_string(kind)) + " slope in [-0.7, -0.3]");
  }
}

void criterion3(Outcome& o) {
  const std::uint64_t T = 10'000'000;
  const auto grid = geometric_u_grid(static_cast<double>(T), 0.25, 0.45, 81);
  const SummatoryIndex idx(large_divisors());
  const auto fit = delta_moment_fit(T, grid, idx);
  const double rel = fit.leading / kDeltaCubicLeading - 1.0;
  o.detail << grid.size() << " U values in [" << grid.front() << ", " << grid.back() << "], c3 = " << fit.leading
           << " (8/pi^2 = " << kDeltaCubicLeading << ", rel " << rel << ")";
  o.expect(grid.size() >= 6, "at least 6 U values");
  o.expect(std::abs(rel) <= 0.30, "c3 within 30% of 8/pi^2");
}

void criterion4(Outcome& o) {
  const std::uint64_t T = 1'000'000;
  const auto d = load_or_build_table(cache_dir(), ArithKind::Divisor, 2 * T + 1024).table;
  const SummatoryIndex idx(d);
  const auto at = [&](std::uint64_t U, double factor) { return jutila_identity_check(T, T, U, idx, factor).ratio(); };
  const double r10 = at(10, 1.0), r50 = at(50, 1.0), r100 = at(100, 1.0);
  o.detail << "lhs/rhs at U=10,50,100: " << r10 << ", " << r50 << ", " << r100;
  o.expect(std::abs(r50 - 1.0) <= 0.15, "|lhs/rhs - 1| <= 0.15 at U = 50");
  o.expect(std::abs(r100 - 1.0) < std::abs(r10 - 1.0), "U = 100 closer to 1 than U = 10");
  o.detail << "; with the n-sum extended to 8T/(2U): " << at(10, 8.0) << ", " << at(50, 8.0) << ", " << at(100, 8.0);
}

void criterion5(Outcome& o) {
  const auto d = build_table(ArithKind::Divisor, 10'000'000);
  const auto fd = fit_summatory(d, geometric_grid(1e4, 1e7, 16));
  o.detail << "d^2: a3 = " << fd.leading_coeff << " (rel " << fd.relative_error << "); ";
  o.expect(std::abs(fd.relative_error) <= 0.25, "d^2 leading within 25% of 1/pi^2");

  const auto r = build_table(ArithKind::TwoSquares, 10'000'000);
  const auto fr = fit_summatory(r, geometric_grid(1e4, 1e7, 16));
  const double rel_c = *fr.constant_coeff / *fr.constant_reference - 1.0;
  o.detail << "r^2: log coeff " << fr.leading_coeff << " (rel " << fr.relative_error << "), constant "
           << *fr.constant_coeff << " (rel " << rel_c << "); ";
  o.expect(std::abs(fr.relative_error) <= 0.25, "r^2 log coefficient within 25% of 4");
  o.expect(std::abs(rel_c) <= 0.25, "r^2 constant within 25% of 8.0665");

  const auto tau = build_table(ArithKind::RamanujanTau, 100000);
  const auto ft = fit_summatory(tau, geometric_grid(1e4, 1e5, 12));
  o.detail << "tau^2 / x^12: spread " << ft.normalised_spread << " over [10^4, 10^5]";
  o.expect(ft.normalised_spread <= 2.0, "tau^2 / x^12 within 2x across a decade");
}

void criterion6(Outcome& o) {
  const double v = sinc_sq_integral(1e-6, 1e8);
  const double err = std::abs(v - kPi / 2.0);
  o.detail << "integral = " << v << ", |. - pi/2| = " << err;
  o.expect(err <= 3e-6, "within 3e-6 of pi/2");
}

void criterion7(Outcome& o) {
  const auto curve = build_e_curve(1e4, 1.01e4);
  const double disc = curve.half_step_discrepancy();
  const double z0 = zeta_half_sq(14.134725142);
  o.detail << "half-step discrepancy " << disc << ", |zeta|^2 at the first zero " << z0;
  o.expect(disc <= 1e-3, "half-step agreement <= 1e-3");
  o.expect(z0 < 1e-6, "|zeta|^2 < 1e-6 at t = 14.134725142");
  const auto d = build_table(ArithKind::Divisor, 7000);
  const SummatoryIndex idx(d);
  double worst = 0.0;
  for (double t = 1e4; t <= 1.01e4; t += 3.7) {
    const double back = e_star(t, curve, idx) + 2.0 * kPi * delta_star(t / (2.0 * kPi), idx).direct;
    worst = std::max(worst, std::abs(back - curve.at(t)) / std::max(1.0, std::abs(curve.at(t))));
  }
  o.detail << ", E* identity residual " << worst;
  o.expect(worst <= 1e-13, "E* + 2 pi Delta* reproduces E");
}

void criterion8(Outcome& o) {
  const auto r = count_close_quadruples(20, 2, 0.0);
  o.detail << "N=20 count " << r.count;
  o.expect(r.count == 780, "count 780");
  std::uint64_t prev = 0;
  bool monotone = true;
  for (double delta : {0.0, 1e-6, 1e-4, 1e-3, 1e-2, 0.1, 1.0}) {
    const auto c = count_close_quadruples(32, 2, delta).count;
    monotone = monotone && c >= prev;
    prev = c;
  }
  o.expect(monotone, "monotone in delta");
  std::vector<double> ratios;
  for (std::uint64_t N : {16u, 32u, 64u}) {
    const double n = static_cast<double>(N);
    const auto c = count_close_quadruples(N, 2, 1.0 / (n * n));
    ratios.push_back(static_cast<double>(c.count) / c.bound_scale);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  o.detail << ", count/(N^4 delta + N^2) at N=16,32,64: " << ratios[0] << ", " << ratios[1] << ", " << ratios[2];
  o.expect(*hi / *lo <= std::pow(64.0, 0.3), "band within N^0.3");
}

void criterion9(Outcome& o) {
  const SummatoryIndex idx(large_divisors());
  std::vector<double> ratios;
  for (std::uint64_t T : {100000ull, 1000000ull, 10000000ull}) {
    const auto G = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(T), 0.4)));
    const auto r = fourth_moment_probe_delta(T, G, idx);
    ratios.push_back(*r.ratio);
    o.detail << "T=" << T << " G=" << G << " M4/(TG^2)=" << *r.ratio << "; ";
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  o.detail << "max/min " << *hi / *lo;
  o.expect(*hi / *lo <= 10.0, "within a 10x band");
}

void criterion10(Outcome& o) {
  const double T = 1e4, V = 3.0;
  const auto [lo, hi] = large_value_curve_range(T, V, 1.0);
  const auto curve = build_e_curve(std::floor(lo), std::ceil(hi));
  const auto p1 = scan_peaks(T, V, 0.05);
  const auto p2 = scan_peaks(T, V, 0.05);
  const auto r1 = theorem3_report(p1, 2, 1.0, curve);
  const auto r2 = theorem3_report(p2, 2, 1.0, curve);
  const auto half = theorem3_report(p1, 2, 1.0, curve, 0.125);
  o.detail << "large values: R=" << r1.R << " G=" << r1.G << " rhs=" << r1.rhs << " C=" << r1.implied_constant
           << " (halved grid " << half.implied_constant << ")";
  o.expect(p1.points == p2.points && r1.rhs == r2.rhs && r1.implied_constant == r2.implied_constant,
           "report deterministic");
  o.expect(r1.rhs >= 0.0 && r1.implied_constant >= 0.0, "report values non-negative");
  const double q = half.implied_constant / r1.implied_constant;
  o.expect(q >= 0.5 && q <= 2.0, "implied constant stable within 2x under grid halving");

  const auto d = build_table(ArithKind::Divisor, 2 * 100000 + 64);
  const SummatoryIndex idx(d);
  const double w1 = omega_probe_delta(100000, 32, 10000, 7, idx);
  const double w2 = omega_probe_delta(100000, 32, 10000, 7, idx);
  o.detail << "; omega(Delta, T=1e5, U=32) = " << w1;
  o.expect(w1 == w2, "omega probe deterministic");
  o.expect(w1 >= 0.0, "omega probe non-negative");
  const auto e_curve = build_e_curve(5000.0, 10020.0);
  const double e1 = omega_probe_e(5000.0, 16.0, 2000, 7, e_curve);
  const double e2 = omega_probe_e(5000.0, 16.0, 2000, 7, e_curve);
  o.detail << ", omega(E, T=5e3, U=16) = " << e1;
  o.expect(e1 == e2 && e1 >= 0.0, "E omega probe deterministic and non-negative");
}

struct Criterion {
  const char* title;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"arithmetic tables match brute-force oracles", 30, criterion1},
      {"Voronoi truncation slope in [-0.7, -0.3] for Delta and P", 300, criterion2},
      {"cubic fit leading coefficient near 8/pi^2", 600, criterion3},
      {"divisor mean-square identity", 600, criterion4},
      {"summatory fits for d^2, r^2, tau^2", 300, criterion5},
      {"sin^2 y / y^2 integral equals pi/2", 1, criterion6},
      {"E(T) self-consistency", 300, criterion7},
      {"close-quadruple counter", 120, criterion8},
      {"fourth-moment probe band", 900, criterion9},
      {"large-value report and omega monitors", 600, criterion10},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);

  bool all = true;
  for (int n : selected) {
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const auto& c = criteria[n - 1];
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) o.expect(false, "runtime budget " + std::to_string(c.budget_s) + " s");
    std::printf("criterion %2d %s: %s | %s | %.2f s\n", n, o.pass ? "PASS" : "FAIL", c.title, o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
