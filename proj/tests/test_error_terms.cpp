#include <doctest.h>

#include <cmath>
#include <random>

#include "ntlab/error_terms.hpp"
#include "ntlab/errors.hpp"
#include "oracles.hpp"

using namespace ntlab;

TEST_SUITE("error_terms") {

namespace {
constexpr double kGamma = 0.57721566490153286061;  // reference digits

long double main_dirichlet(long double x) { return x * (std::log(x) + 2.0L * kGamma - 1.0L); }
}  // namespace

TEST_CASE("Euler's constant carries 15 correct digits") { CHECK(std::abs(kEulerGamma - kGamma) < 1e-15); }

TEST_CASE("Delta at small x") {
  const auto d = build_table(ArithKind::Divisor, 1000);
  const SummatoryIndex idx(d);
  CHECK(delta(1.0, idx) == doctest::Approx(2.0 - 2.0 * kGamma).epsilon(1e-12));
  CHECK(delta(1.0, idx) == doctest::Approx(0.8455686702).epsilon(1e-9));
  const double expect = 3.0 - static_cast<double>(main_dirichlet(2.5L));
  CHECK(delta(2.5, idx) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(delta(2.5, idx) == doctest::Approx(0.32319484580694803).epsilon(1e-12));
  CHECK_THROWS_AS(delta(1000.5, idx), Error);
  CHECK_THROWS_AS(delta(-1.0, idx), Error);
}

TEST_CASE("Delta at 10^6 + 1/2 against direct summation") {
  const auto d = build_table(ArithKind::Divisor, 1000001);
  const SummatoryIndex idx(d);
  // sum_{n <= x} d(n) = 2 sum_{k <= sqrt x} floor(x / k) - floor(sqrt x)^2
  const std::uint64_t X = 1000000;
  const auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(X)));
  std::uint64_t count = 0;
  for (std::uint64_t k = 1; k <= s; ++k) count += X / k;
  count = 2 * count - s * s;
  const long double x = 1000000.5L;
  const double expect = static_cast<double>(static_cast<long double>(count) - main_dirichlet(x));
  CHECK(std::abs(delta(1000000.5, idx) - expect) < 1e-9);
}

TEST_CASE("Delta jumps by d(n) at integers") {
  const auto d = build_table(ArithKind::Divisor, 2000);
  const SummatoryIndex idx(d);
  for (std::uint64_t n : {12u, 360u, 997u, 1680u}) {
    const double n_d = static_cast<double>(n);
    const double jump = delta(n_d + 1e-9, idx) - delta(n_d - 1e-9, idx);
    const double main_change = 2e-9 * (std::log(n_d) + 2.0 * kGamma);
    CHECK(std::abs(jump + main_change - static_cast<double>(d.value(n))) <= 1e-9);
  }
}

TEST_CASE("Delta* two forms agree") {
  const auto d = build_table(ArithKind::Divisor, 400004);
  const SummatoryIndex idx(d);
  const auto one = delta_star(1.0, idx);
  CHECK(one.direct == doctest::Approx(2.0 - 2.0 * kGamma).epsilon(1e-12));
  CHECK(one.combination == doctest::Approx(one.direct).epsilon(1e-12));
  for (double x : {2.5, 1e5}) {
    const auto v = delta_star(x, idx);
    CHECK(std::abs(v.combination - v.direct) <= 1e-9 * std::max(1.0, std::abs(v.direct)));
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(1.0, 1e5);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    const auto v = delta_star(x, idx);
    REQUIRE(std::abs(v.combination - v.direct) <= 1e-9 * std::max(1.0, std::abs(v.direct)));
  }
  CHECK_THROWS_AS(delta_star(100002.0, idx), Error);
}

TEST_CASE("P at small x and against a lattice count") {
  const auto r = build_table(ArithKind::TwoSquares, 100000);
  const SummatoryIndex idx(r);
  CHECK(circle_p(2.5, idx) == doctest::Approx(8.0 - 2.5 * kPi).epsilon(1e-12));
  CHECK(circle_p(2.5, idx) == doctest::Approx(0.1460184).epsilon(1e-6));
  CHECK(circle_p(0.5, idx) == doctest::Approx(-kPi / 2.0).epsilon(1e-14));
  // lattice points in the disc of radius sqrt(X), counted row by row
  const std::int64_t X = 100000;
  std::int64_t count = 0;
  const auto R = static_cast<std::int64_t>(std::sqrt(static_cast<double>(X)));
  for (std::int64_t a = -R; a <= R; ++a) {
    auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(X - a * a)));
    while (b * b > X - a * a) --b;
    while ((b + 1) * (b + 1) <= X - a * a) ++b;
    count += 2 * b + 1;
  }
  const double expect = static_cast<double>(static_cast<long double>(count - 1) - kPi * 100000.0L);
  CHECK(std::abs(circle_p(100000.0, idx) - expect) < 1e-9);
}

TEST_CASE("A is an exact integer sum") {
  const auto tau = build_table(ArithKind::RamanujanTau, 10000);
  const SummatoryIndex idx(tau);
  CHECK(cusp_a(3.0, idx) == 229.0);
  CHECK(cusp_a(0.9, idx) == 0.0);
  const auto oracle = testing::tau_dense(10000);
  wide_int s = 0;
  for (std::size_t n = 1; n <= 10000; ++n) s += oracle[n];
  CHECK(cusp_a_exact(10000.0, idx) == s);
  CHECK_THROWS_AS(cusp_a(10000.5 + 1, idx), Error);
}

TEST_CASE("kind names and main terms") {
  for (auto k : {ErrorTermKind::DirichletDelta, ErrorTermKind::AlternatingDeltaStar, ErrorTermKind::CircleP,
                 ErrorTermKind::CuspA})
    CHECK(parse_error_term_kind(to_string(k)) == k);
  CHECK(MainTermSpec{ErrorTermKind::CuspA}(1e4L) == 0.0L);
  CHECK(static_cast<double>(MainTermSpec{ErrorTermKind::CircleP}(2.0L)) == doctest::Approx(2.0 * kPi));
  CHECK(source_table(ErrorTermKind::AlternatingDeltaStar) == ArithKind::Divisor);
}

TEST_CASE("sampled sweeps equal pointwise evaluation") {
  const auto d = build_table(ArithKind::Divisor, 5000);
  const SummatoryIndex idx(d);
  const auto s = sample_error_term(ErrorTermKind::DirichletDelta, idx, 4000, 0.5);
  REQUIRE(s.size() == 4001);
  for (std::uint64_t n : {0u, 1u, 17u, 4000u}) CHECK(s[n] == delta(static_cast<double>(n) + 0.5, idx));
}

}
