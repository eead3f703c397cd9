#include "ntlab/voronoi.hpp"

#include <cmath>
#include <random>

#include "ntlab/errors.hpp"
#include "ntlab/kernels.hpp"
#include "ntlab/least_squares.hpp"
#include "ntlab/parallel.hpp"

namespace ntlab {

namespace {
constexpr double kInvPiSqrt2 = 0.22507907903927651;  // 1 / (pi sqrt 2)
constexpr double kCuspExponent = kCuspWeight / 2.0 + 0.25;
}  // namespace

VoronoiSeries::VoronoiSeries(ErrorTermKind kind, const ArithTable& table, std::uint64_t max_terms)
    : kind_(kind), root_scale_(kind == ErrorTermKind::CircleP ? 1.0 : 2.0),
      phase_turns_(kind == ErrorTermKind::CircleP ? 0.125 : -0.125) {
  require(table.kind() == source_table(kind), ErrorKind::InvalidArgument, "VoronoiSeries: wrong table kind");
  require(max_terms <= table.limit(), ErrorKind::OutOfRange, "VoronoiSeries: more terms than the table holds");
  weights_.resize(max_terms);
  for (std::uint64_t n = 1; n <= max_terms; ++n) {
    const double nd = static_cast<double>(n);
    double w = 0.0;
    switch (kind) {
      case ErrorTermKind::DirichletDelta:
      case ErrorTermKind::CircleP: w = table.value_as_double(n) * std::pow(nd, -0.75); break;
      case ErrorTermKind::AlternatingDeltaStar:
        w = (n % 2 == 0 ? 1.0 : -1.0) * table.value_as_double(n) * std::pow(nd, -0.75);
        break;
      case ErrorTermKind::CuspA:
        w = static_cast<double>(static_cast<long double>(table.value(n)) *
                                std::pow(static_cast<long double>(nd), -static_cast<long double>(kCuspExponent)));
        break;
    }
    weights_[n - 1] = w;
  }
}

double VoronoiSeries::prefactor(double x) const {
  switch (kind_) {
    case ErrorTermKind::DirichletDelta:
    case ErrorTermKind::AlternatingDeltaStar: return kInvPiSqrt2 * std::pow(x, 0.25);
    case ErrorTermKind::CircleP: return -std::pow(x, 0.25) / kPi;
    case ErrorTermKind::CuspA: return kInvPiSqrt2 * std::pow(x, kCuspWeight / 2.0 - 0.25);
  }
  return 0.0;
}

double VoronoiSeries::evaluate(double x, std::uint64_t n_terms) const {
  require(x > 0.0, ErrorKind::InvalidArgument, "Voronoi series needs x > 0");
  require(n_terms <= weights_.size(), ErrorKind::OutOfRange, "Voronoi series: N beyond precomputed terms");
  if (n_terms == 0) return 0.0;
  const std::span<const double> w(weights_.data(), n_terms);
  return prefactor(x) * kernels::sqrt_phase_cos_sum(w, 1, x, root_scale_, phase_turns_);
}

double VoronoiSeries::term(double x, std::uint64_t n) const {
  require(n >= 1 && n <= weights_.size(), ErrorKind::OutOfRange, "Voronoi term index out of range");
  const double arg = 2.0 * kPi * (root_scale_ * std::sqrt(static_cast<double>(n) * x) + phase_turns_);
  return prefactor(x) * weights_[n - 1] * std::cos(arg);
}

namespace {
double one_shot(ErrorTermKind kind, double x, std::uint64_t n_terms, const ArithTable& table) {
  return VoronoiSeries(kind, table, n_terms).evaluate(x, n_terms);
}
}  // namespace

double voronoi_delta(double x, std::uint64_t n, const ArithTable& t) {
  return one_shot(ErrorTermKind::DirichletDelta, x, n, t);
}
double voronoi_delta_star(double x, std::uint64_t n, const ArithTable& t) {
  return one_shot(ErrorTermKind::AlternatingDeltaStar, x, n, t);
}
double voronoi_circle(double x, std::uint64_t n, const ArithTable& t) {
  return one_shot(ErrorTermKind::CircleP, x, n, t);
}
double voronoi_cusp(double x, std::uint64_t n, const ArithTable& t) {
  return one_shot(ErrorTermKind::CuspA, x, n, t);
}

std::vector<double> half_integer_samples(std::size_t count, double lo, double hi, std::uint64_t seed) {
  const auto first = static_cast<std::int64_t>(std::ceil(lo));
  const auto last = static_cast<std::int64_t>(std::floor(hi)) - 1;
  require(last >= first, ErrorKind::InvalidArgument, "half_integer_samples: empty range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(first, last);
  std::vector<double> xs(count);
  for (auto& x : xs) x = static_cast<double>(pick(rng)) + 0.5;
  return xs;
}

TruncationStudy truncation_study(const VoronoiSeries& series, const SummatoryIndex& exact,
                                 std::span<const std::uint64_t> n_terms, std::span<const double> sample_x) {
  require(!sample_x.empty(), ErrorKind::InvalidArgument, "truncation_study: no samples");
  TruncationStudy study;
  study.kind = series.kind();
  study.n_terms.assign(n_terms.begin(), n_terms.end());
  study.sample_x.assign(sample_x.begin(), sample_x.end());

  std::vector<double> exact_values(sample_x.size());
  for (std::size_t i = 0; i < sample_x.size(); ++i) exact_values[i] = error_term(series.kind(), sample_x[i], exact);

  for (std::uint64_t n : n_terms) {
    std::vector<double> sq(sample_x.size());
    parallel_blocks(sample_x.size(), [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t i = b; i < e; ++i) {
        const double diff = series.evaluate(sample_x[i], n) - exact_values[i];
        sq[i] = diff * diff;
      }
    }, 16);
    double total = 0.0;
    for (double v : sq) total += v;
    study.rms_error.push_back(std::sqrt(total / static_cast<double>(sq.size())));
  }

  if (n_terms.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_terms.size(); ++i) {
      lx.push_back(std::log(static_cast<double>(n_terms[i])));
      ly.push_back(std::log(study.rms_error[i]));
    }
    study.slope = fit_polynomial(lx, ly, 1).centered[1];
  }
  return study;
}

}  // namespace ntlab
