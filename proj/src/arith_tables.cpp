#include "ntlab/arith_tables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ntlab/errors.hpp"
#include "ntlab/least_squares.hpp"

namespace ntlab {

std::string_view to_string(ArithKind kind) {
  switch (kind) {
    case ArithKind::Divisor: return "d";
    case ArithKind::TwoSquares: return "r";
    case ArithKind::RamanujanTau: return "tau";
  }
  return "?";
}

ArithKind parse_arith_kind(std::string_view text) {
  if (text == "d" || text == "divisor") return ArithKind::Divisor;
  if (text == "r" || text == "two-squares") return ArithKind::TwoSquares;
  if (text == "tau" || text == "ramanujan-tau") return ArithKind::RamanujanTau;
  fail(ErrorKind::InvalidArgument, "unknown table kind '" + std::string(text) + "'");
}

ArithTable::ArithTable(ArithKind kind, std::vector<std::uint32_t> counts)
    : kind_(kind), counts_(std::move(counts)) {
  require(kind != ArithKind::RamanujanTau, ErrorKind::InvalidArgument,
          "tau tables hold 128-bit values");
  require(counts_.size() >= 2, ErrorKind::InvalidArgument, "table needs limit >= 1");
  limit_ = counts_.size() - 1;
}

ArithTable::ArithTable(std::vector<wide_int> tau) : kind_(ArithKind::RamanujanTau), tau_(std::move(tau)) {
  require(tau_.size() >= 2, ErrorKind::InvalidArgument, "table needs limit >= 1");
  limit_ = tau_.size() - 1;
}

wide_int ArithTable::value(std::uint64_t n) const {
  require(n >= 1 && n <= limit_, ErrorKind::OutOfRange, "table index out of range");
  return kind_ == ArithKind::RamanujanTau ? tau_[n] : static_cast<wide_int>(counts_[n]);
}

double ArithTable::value_as_double(std::uint64_t n) const { return static_cast<double>(value(n)); }

namespace {

std::vector<std::uint32_t> sieve_divisors(std::uint64_t limit) {
  std::vector<std::uint32_t> d(limit + 1, 0);
  for (std::uint64_t k = 1; k <= limit; ++k)
    for (std::uint64_t m = k; m <= limit; m += k) ++d[m];
  return d;
}

// r(n) = 4 sum_{delta | n} chi(delta), chi the non-principal character mod 4.
std::vector<std::uint32_t> sieve_two_squares(std::uint64_t limit) {
  std::vector<std::int32_t> acc(limit + 1, 0);
  for (std::uint64_t k = 1; k <= limit; k += 2) {
    const std::int32_t chi = (k % 4 == 1) ? 1 : -1;
    for (std::uint64_t m = k; m <= limit; m += k) acc[m] += chi;
  }
  std::vector<std::uint32_t> r(limit + 1, 0);
  for (std::uint64_t n = 1; n <= limit; ++n) r[n] = static_cast<std::uint32_t>(4 * acc[n]);
  return r;
}

// Exponents and signs of prod_{m>=1} (1 - x^m) = sum_k (-1)^k x^{k(3k-1)/2}.
std::vector<std::pair<std::uint64_t, int>> pentagonal_terms(std::uint64_t max_degree) {
  std::vector<std::pair<std::uint64_t, int>> terms{{0, 1}};
  for (std::uint64_t k = 1;; ++k) {
    const int sign = (k % 2 == 1) ? -1 : 1;
    const std::uint64_t e1 = k * (3 * k - 1) / 2;
    const std::uint64_t e2 = k * (3 * k + 1) / 2;
    if (e1 > max_degree) break;
    terms.emplace_back(e1, sign);
    if (e2 <= max_degree) terms.emplace_back(e2, sign);
  }
  return terms;
}

// tau(n) is the coefficient of x^{n-1} in prod (1 - x^m)^24; the series is
// multiplied in place by the sparse pentagonal expansion 24 times.
std::vector<wide_int> expand_tau(std::uint64_t limit) {
  const std::uint64_t degree = limit - 1;
  const auto terms = pentagonal_terms(degree);
  std::vector<wide_int> series(degree + 1, 0);
  series[0] = 1;
  for (int round = 0; round < 24; ++round) {
    for (std::uint64_t n = degree + 1; n-- > 0;) {
      wide_int acc = series[n];
      for (std::size_t j = 1; j < terms.size() && terms[j].first <= n; ++j) {
        const wide_int v = series[n - terms[j].first];
        const bool overflow = terms[j].second > 0 ? __builtin_add_overflow(acc, v, &acc)
                                                  : __builtin_sub_overflow(acc, v, &acc);
        if (overflow) fail(ErrorKind::Overflow, "tau expansion overflowed 128-bit arithmetic");
      }
      series[n] = acc;
    }
  }
  std::vector<wide_int> tau(limit + 1, 0);
  std::copy(series.begin(), series.end(), tau.begin() + 1);
  return tau;
}

}  // namespace

ArithTable build_table(ArithKind kind, std::uint64_t limit, const TableBudget& budget) {
  require(limit >= 1, ErrorKind::InvalidArgument, "build_table: limit must be >= 1");
  const std::uint64_t elem = kind == ArithKind::RamanujanTau ? sizeof(wide_int) : sizeof(std::uint32_t);
  if (limit > budget.max_bytes / elem) {
    std::ostringstream msg;
    msg << "table of " << limit << " entries exceeds the memory budget of " << budget.max_bytes << " bytes";
    fail(ErrorKind::ResourceLimit, msg.str());
  }
  switch (kind) {
    case ArithKind::Divisor: return ArithTable(kind, sieve_divisors(limit));
    case ArithKind::TwoSquares: return ArithTable(kind, sieve_two_squares(limit));
    case ArithKind::RamanujanTau:
      if (limit > budget.max_tau_limit) {
        std::ostringstream msg;
        msg << "tau limit " << limit << " exceeds configured maximum " << budget.max_tau_limit;
        fail(ErrorKind::ResourceLimit, msg.str());
      }
      return ArithTable(expand_tau(limit));
  }
  fail(ErrorKind::InvalidArgument, "build_table: unknown kind");
}

std::vector<double> summatory_square_at(const ArithTable& table, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  if (xs.empty()) return out;
  require(std::is_sorted(xs.begin(), xs.end()), ErrorKind::InvalidArgument,
          "summatory_square_at: grid must be ascending");
  require(xs.front() >= 1.0, ErrorKind::OutOfRange, "summatory_square: x must be >= 1");
  require(xs.back() <= static_cast<double>(table.limit()), ErrorKind::OutOfRange,
          "summatory_square: x beyond table limit");

  std::uint64_t n = 0;
  if (table.kind() == ArithKind::RamanujanTau) {
    // Squares reach ~1e55; Neumaier-compensated long double.
    long double sum = 0.0L;
    long double carry = 0.0L;
    const auto tau = table.tau();
    for (double x : xs) {
      const auto upto = static_cast<std::uint64_t>(std::floor(x));
      for (; n < upto; ) {
        ++n;
        const long double v = static_cast<long double>(tau[n]);
        const long double term = v * v;
        const long double t = sum + term;
        carry += (std::fabs(sum) >= std::fabs(term)) ? (sum - t) + term : (term - t) + sum;
        sum = t;
      }
      out.push_back(static_cast<double>(sum + carry));
    }
  } else {
    wide_int sum = 0;
    const auto counts = table.counts();
    for (double x : xs) {
      const auto upto = static_cast<std::uint64_t>(std::floor(x));
      for (; n < upto;) {
        ++n;
        sum += static_cast<wide_int>(counts[n]) * counts[n];
      }
      out.push_back(static_cast<double>(sum));
    }
  }
  return out;
}

double summatory_square(const ArithTable& table, double x) {
  const double xs[1] = {x};
  return summatory_square_at(table, xs).front();
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  require(n >= 2 && lo > 0.0 && hi > lo, ErrorKind::InvalidArgument, "geometric_grid: bad range");
  std::vector<double> grid(n);
  const double ratio = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo * std::exp(ratio * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

SummatoryFit fit_summatory(const ArithTable& table, std::span<const double> x_grid) {
  require(x_grid.size() >= 6, ErrorKind::InvalidArgument, "fit_summatory: need at least 6 grid points");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    require(x_grid[i] > x_grid[i - 1], ErrorKind::InvalidArgument, "fit_summatory: grid must be ascending");
  const double log_ratio = std::log(x_grid[1] / x_grid[0]);
  for (std::size_t i = 2; i < x_grid.size(); ++i)
    require(std::fabs(std::log(x_grid[i] / x_grid[i - 1]) - log_ratio) <= 1e-6 * std::fabs(log_ratio) + 1e-12,
            ErrorKind::InvalidArgument, "fit_summatory: grid must be geometric");

  SummatoryFit fit;
  fit.kind = table.kind();
  const auto sums = summatory_square_at(table, x_grid);
  std::vector<double> logs(x_grid.size());
  std::vector<double> normalised(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    fit.sample_points.emplace_back(x_grid[i], sums[i]);
    logs[i] = std::log(x_grid[i]);
    normalised[i] = table.kind() == ArithKind::RamanujanTau
                        ? sums[i] / std::pow(x_grid[i], kCuspWeight)
                        : sums[i] / x_grid[i];
  }
  const auto [mn, mx] = std::minmax_element(normalised.begin(), normalised.end());
  fit.normalised_spread = *mx / *mn;

  switch (table.kind()) {
    case ArithKind::Divisor: fit.degree = 3; break;
    case ArithKind::TwoSquares: fit.degree = 1; break;
    case ArithKind::RamanujanTau: fit.degree = 0; break;
  }
  const PolyFit poly = fit_polynomial(logs, normalised, fit.degree);
  fit.coeffs = poly.uncentered();
  fit.condition_number = poly.condition_number;
  fit.leading_coeff = fit.coeffs.back();

  switch (table.kind()) {
    case ArithKind::Divisor: fit.reference_coeff = kDivisorSquareLeading; break;
    case ArithKind::TwoSquares:
      fit.reference_coeff = kTwoSquaresLogCoeff;
      fit.constant_coeff = fit.coeffs[0];
      fit.constant_reference = kTwoSquaresConstant;
      break;
    case ArithKind::RamanujanTau: break;
  }
  fit.relative_error = fit.reference_coeff
                           ? std::fabs(fit.leading_coeff - *fit.reference_coeff) / *fit.reference_coeff
                           : std::nan("");
  return fit;
}

}  // namespace ntlab
