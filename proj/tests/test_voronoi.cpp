#include <doctest.h>

#include <cmath>

#include "ntlab/errors.hpp"
#include "ntlab/voronoi.hpp"

using namespace ntlab;

TEST_SUITE("voronoi") {

namespace {
const ArithTable& divisors() {
  static const ArithTable t = build_table(ArithKind::Divisor, 400004);
  return t;
}
const ArithTable& two_squares() {
  static const ArithTable t = build_table(ArithKind::TwoSquares, 200000);
  return t;
}
const ArithTable& tau() {
  static const ArithTable t = build_table(ArithKind::RamanujanTau, 20000);
  return t;
}
}  // namespace

TEST_CASE("zero terms give zero") {
  CHECK(voronoi_delta(12345.5, 0, divisors()) == 0.0);
  CHECK(voronoi_delta_star(12345.5, 0, divisors()) == 0.0);
  CHECK(voronoi_circle(12345.5, 0, two_squares()) == 0.0);
  CHECK(voronoi_cusp(12345.5, 0, tau()) == 0.0);
}

TEST_CASE("single terms match 20-digit reference values") {
  // references evaluated offline in 40-digit arithmetic
  const VoronoiSeries d(ErrorTermKind::DirichletDelta, divisors(), 10);
  const VoronoiSeries p(ErrorTermKind::CircleP, two_squares(), 10);
  const VoronoiSeries a(ErrorTermKind::CuspA, tau(), 10);
  const double x = 100000.5;
  CHECK(d.term(x, 1) == doctest::Approx(-1.9746369791857091265).epsilon(1e-11));
  CHECK(d.term(x, 2) == doctest::Approx(-1.5962091457943357794).epsilon(1e-11));
  CHECK(d.term(x, 5) == doctest::Approx(2.0043017997208094645).epsilon(1e-11));
  CHECK(p.term(x, 1) == doctest::Approx(13.71448777023722228).epsilon(1e-11));
  CHECK(p.term(x, 2) == doctest::Approx(7.1933033775415734741).epsilon(1e-11));
  CHECK(p.term(x, 5) == doctest::Approx(-1.3973750284099169292).epsilon(1e-11));
  const double y = 10000.5;
  CHECK(a.term(y, 1) == doctest::Approx(1.6412270411999648183e+22).epsilon(1e-11));
  CHECK(a.term(y, 2) == doctest::Approx(1.1201615494608092257e+21).epsilon(1e-11));
  CHECK(a.term(y, 5) == doctest::Approx(3.7691746591962906234e+21).epsilon(1e-11));
}

TEST_CASE("summed series equals the sum of its terms") {
  const VoronoiSeries d(ErrorTermKind::DirichletDelta, divisors(), 1000);
  for (double x : {10.5, 5000.5, 150000.5}) {
    double s = 0;
    for (std::uint64_t n = 1; n <= 1000; ++n) s += d.term(x, n);
    CHECK(d.evaluate(x, 1000) == doctest::Approx(s).epsilon(1e-10));
  }
}

TEST_CASE("alternating series: first term flips sign, even/odd recombination") {
  const VoronoiSeries d(ErrorTermKind::DirichletDelta, divisors(), 1000);
  const VoronoiSeries ds(ErrorTermKind::AlternatingDeltaStar, divisors(), 1000);
  const double x = 54321.5;
  CHECK(ds.term(x, 1) == -d.term(x, 1));
  double even = 0, odd = 0;
  for (std::uint64_t n = 1; n <= 1000; ++n) (n % 2 == 0 ? even : odd) += d.term(x, n);
  CHECK(ds.evaluate(x, 1000) == doctest::Approx(even - odd).epsilon(1e-10));
  CHECK(d.evaluate(x, 1000) == doctest::Approx(even + odd).epsilon(1e-10));
}

TEST_CASE("circle single term changes sign across a zero of its cosine") {
  const VoronoiSeries p(ErrorTermKind::CircleP, two_squares(), 1);
  // 2 pi sqrt(x) + pi/4 = 2 pi * 100 + pi/2  <=>  sqrt(x) = 100 + 1/8
  const double x0 = 100.125 * 100.125;
  CHECK(p.term(x0 - 0.01, 1) * p.term(x0 + 0.01, 1) < 0.0);
  CHECK(std::abs(p.term(x0, 1)) < 1e-9);
}

TEST_CASE("truncated series track the exact error terms") {
  const SummatoryIndex d_idx(divisors());
  const SummatoryIndex r_idx(two_squares());
  const double x = 100000.5;
  const double band = 3.0 * std::sqrt(x) / std::sqrt(1e4);
  CHECK(std::abs(voronoi_delta(x, 10000, divisors()) - delta(x, d_idx)) <= band);
  CHECK(std::abs(voronoi_circle(x, 10000, two_squares()) - circle_p(x, r_idx)) <= band);
  const double y = 10000.5;
  CHECK(std::abs(voronoi_delta_star(y, 10000, divisors()) - delta_star(y, d_idx).direct) <=
        3.0 * std::sqrt(y) / std::sqrt(1e4));
}

TEST_CASE("cusp series tracks A(x)") {
  const SummatoryIndex t_idx(tau());
  const double x = 10000.5;
  const double err = std::abs(voronoi_cusp(x, 1000, tau()) - cusp_a(x, t_idx));
  CHECK(err <= std::pow(x, 6.0) / std::sqrt(1000.0));
  const VoronoiSeries a(ErrorTermKind::CuspA, tau(), 10000);
  const auto xs = half_integer_samples(200, 10000, 20000, 17);
  const std::vector<std::uint64_t> Ns{100, 1000, 10000};
  const auto study = truncation_study(a, t_idx, Ns, xs);
  CHECK(study.rms_error[1] < study.rms_error[0]);
  CHECK(study.rms_error[2] < study.rms_error[1]);
}

TEST_CASE("RMS truncation error: N = 100 against N = 10^4 over 10^5 to 2 10^5") {
  const SummatoryIndex d_idx(divisors());
  const VoronoiSeries d(ErrorTermKind::DirichletDelta, divisors(), 10000);
  const auto xs = half_integer_samples(1000, 1e5, 2e5, 1);
  const std::vector<std::uint64_t> Ns{100, 10000};
  const auto study = truncation_study(d, d_idx, Ns, xs);
  const double ratio = study.rms_error[0] / study.rms_error[1];
  MESSAGE("RMS(100) / RMS(10^4) = " << ratio);
  CHECK(ratio >= 5.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("sampling and range checks") {
  const auto a = half_integer_samples(50, 100, 200, 9);
  const auto b = half_integer_samples(50, 100, 200, 9);
  CHECK(a == b);
  for (double x : a) {
    CHECK(x - std::floor(x) == 0.5);
    CHECK(x >= 100.0);
    CHECK(x < 200.0);
  }
  const VoronoiSeries d(ErrorTermKind::DirichletDelta, divisors(), 10);
  CHECK_THROWS_AS(d.evaluate(100.5, 11), Error);
  CHECK_THROWS_AS(VoronoiSeries(ErrorTermKind::CircleP, divisors(), 10), Error);
  CHECK_THROWS_AS(VoronoiSeries(ErrorTermKind::DirichletDelta, divisors(), 500000), Error);
}

}
