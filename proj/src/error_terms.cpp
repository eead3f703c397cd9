#include "ntlab/error_terms.hpp"

#include <cmath>

#include "ntlab/errors.hpp"
#include "ntlab/parallel.hpp"

namespace ntlab {

std::string_view to_string(ErrorTermKind kind) {
  switch (kind) {
    case ErrorTermKind::DirichletDelta: return "delta";
    case ErrorTermKind::AlternatingDeltaStar: return "delta-star";
    case ErrorTermKind::CircleP: return "circle";
    case ErrorTermKind::CuspA: return "cusp";
  }
  return "?";
}

ErrorTermKind parse_error_term_kind(std::string_view text) {
  if (text == "delta") return ErrorTermKind::DirichletDelta;
  if (text == "delta-star" || text == "delta_star") return ErrorTermKind::AlternatingDeltaStar;
  if (text == "circle" || text == "P") return ErrorTermKind::CircleP;
  if (text == "cusp" || text == "A") return ErrorTermKind::CuspA;
  fail(ErrorKind::InvalidArgument, "unknown error term '" + std::string(text) + "'");
}

ArithKind source_table(ErrorTermKind kind) {
  switch (kind) {
    case ErrorTermKind::DirichletDelta:
    case ErrorTermKind::AlternatingDeltaStar: return ArithKind::Divisor;
    case ErrorTermKind::CircleP: return ArithKind::TwoSquares;
    case ErrorTermKind::CuspA: return ArithKind::RamanujanTau;
  }
  return ArithKind::Divisor;
}

long double MainTermSpec::operator()(long double x) const {
  switch (form) {
    case ErrorTermKind::DirichletDelta:
    case ErrorTermKind::AlternatingDeltaStar:
      if (x <= 0.0L) return 0.0L;
      return x * (std::log(x) + 2.0L * static_cast<long double>(gamma) - 1.0L);
    case ErrorTermKind::CircleP: return static_cast<long double>(kPi) * x;
    case ErrorTermKind::CuspA: return 0.0L;
  }
  return 0.0L;
}

SummatoryIndex::SummatoryIndex(const ArithTable& table) : kind_(table.kind()), limit_(table.limit()) {
  if (kind_ == ArithKind::RamanujanTau) {
    partial_wide_.assign(limit_ + 1, 0);
    const auto tau = table.tau();
    for (std::uint64_t n = 1; n <= limit_; ++n) partial_wide_[n] = partial_wide_[n - 1] + tau[n];
    return;
  }
  const auto counts = table.counts();
  partial_.assign(limit_ + 1, 0);
  for (std::uint64_t n = 1; n <= limit_; ++n) partial_[n] = partial_[n - 1] + counts[n];
  if (kind_ == ArithKind::Divisor) {
    alternating_.assign(limit_ + 1, 0);
    for (std::uint64_t n = 1; n <= limit_; ++n)
      alternating_[n] = alternating_[n - 1] + ((n % 2 == 0) ? std::int64_t{counts[n]} : -std::int64_t{counts[n]});
  }
}

std::int64_t SummatoryIndex::partial(std::uint64_t n) const {
  require(kind_ != ArithKind::RamanujanTau, ErrorKind::InvalidArgument, "use partial_wide for tau");
  require(n <= limit_, ErrorKind::OutOfRange, "partial sum beyond table limit");
  return partial_[n];
}

std::int64_t SummatoryIndex::alternating(std::uint64_t n) const {
  require(kind_ == ArithKind::Divisor, ErrorKind::InvalidArgument, "alternating sums need a divisor table");
  require(n <= limit_, ErrorKind::OutOfRange, "alternating sum beyond table limit");
  return alternating_[n];
}

wide_int SummatoryIndex::partial_wide(std::uint64_t n) const {
  require(n <= limit_, ErrorKind::OutOfRange, "partial sum beyond table limit");
  return kind_ == ArithKind::RamanujanTau ? partial_wide_[n] : static_cast<wide_int>(partial_[n]);
}

namespace {

std::uint64_t floor_index(double x, double max_x, const char* what) {
  if (!(x >= 0.0) || x > max_x) fail(ErrorKind::OutOfRange, std::string(what) + ": argument outside table range");
  return static_cast<std::uint64_t>(std::floor(x));
}

void require_kind(const SummatoryIndex& index, ArithKind kind, const char* what) {
  require(index.kind() == kind, ErrorKind::InvalidArgument,
          std::string(what) + ": expected a " + std::string(to_string(kind)) + " table");
}

long double delta_ld(long double x, const SummatoryIndex& divisors) {
  const auto n = floor_index(static_cast<double>(x), static_cast<double>(divisors.limit()), "delta");
  return static_cast<long double>(divisors.partial(n)) - MainTermSpec{ErrorTermKind::DirichletDelta}(x);
}

}  // namespace

double delta(double x, const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "delta");
  return static_cast<double>(delta_ld(x, divisors));
}

DeltaStarValue delta_star(double x, const SummatoryIndex& divisors) {
  require_kind(divisors, ArithKind::Divisor, "delta_star");
  const long double lx = x;
  const auto n4 = floor_index(4.0 * x, static_cast<double>(divisors.limit()), "delta_star");
  const long double combination =
      -delta_ld(lx, divisors) + 2.0L * delta_ld(2.0L * lx, divisors) - 0.5L * delta_ld(4.0L * lx, divisors);
  const long double direct = 0.5L * static_cast<long double>(divisors.alternating(n4)) -
                             MainTermSpec{ErrorTermKind::AlternatingDeltaStar}(lx);
  return {static_cast<double>(combination), static_cast<double>(direct)};
}

double circle_p(double x, const SummatoryIndex& two_squares) {
  require_kind(two_squares, ArithKind::TwoSquares, "circle_p");
  const auto n = floor_index(x, static_cast<double>(two_squares.limit()), "circle_p");
  return static_cast<double>(static_cast<long double>(two_squares.partial(n)) -
                             MainTermSpec{ErrorTermKind::CircleP}(x));
}

wide_int cusp_a_exact(double x, const SummatoryIndex& tau) {
  require_kind(tau, ArithKind::RamanujanTau, "cusp_a");
  return tau.partial_wide(floor_index(x, static_cast<double>(tau.limit()), "cusp_a"));
}

double cusp_a(double x, const SummatoryIndex& tau) { return static_cast<double>(cusp_a_exact(x, tau)); }

double error_term(ErrorTermKind kind, double x, const SummatoryIndex& index) {
  switch (kind) {
    case ErrorTermKind::DirichletDelta: return delta(x, index);
    case ErrorTermKind::AlternatingDeltaStar: return delta_star(x, index).direct;
    case ErrorTermKind::CircleP: return circle_p(x, index);
    case ErrorTermKind::CuspA: return cusp_a(x, index);
  }
  return 0.0;
}

double max_argument(ErrorTermKind kind, const SummatoryIndex& index) {
  const auto lim = static_cast<double>(index.limit());
  return kind == ErrorTermKind::AlternatingDeltaStar ? lim / 4.0 : lim;
}

std::vector<double> sample_error_term(ErrorTermKind kind, const SummatoryIndex& index, std::uint64_t n_max,
                                      double offset) {
  require(index.kind() == source_table(kind), ErrorKind::InvalidArgument, "sample_error_term: wrong table kind");
  require(offset >= 0.0 && offset < 1.0, ErrorKind::InvalidArgument, "sample_error_term: offset must be in [0, 1)");
  require(static_cast<double>(n_max) + offset <= max_argument(kind, index), ErrorKind::OutOfRange,
          "sample_error_term: sweep beyond table range");
  std::vector<double> out(n_max + 1);
  const MainTermSpec main{kind};
  parallel_blocks(out.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t n = begin; n < end; ++n) {
      const long double x = static_cast<long double>(n) + offset;
      long double value = 0.0L;
      switch (kind) {
        case ErrorTermKind::DirichletDelta:
        case ErrorTermKind::CircleP:
          value = static_cast<long double>(index.partial(n)) - main(x);
          break;
        case ErrorTermKind::AlternatingDeltaStar:
          value = 0.5L * static_cast<long double>(index.alternating(static_cast<std::uint64_t>(std::floor(4.0L * x)))) -
                  main(x);
          break;
        case ErrorTermKind::CuspA: value = static_cast<long double>(index.partial_wide(n)); break;
      }
      out[n] = static_cast<double>(value);
    }
  }, 1 << 16);
  return out;
}

}  // namespace ntlab
