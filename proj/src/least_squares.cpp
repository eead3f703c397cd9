#include "ntlab/least_squares.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ntlab/errors.hpp"

namespace ntlab {

std::vector<double> PolyFit::uncentered() const {
  const std::size_t n = centered.size();
  std::vector<double> out(n, 0.0);
  // (x - c)^j = sum_i C(j, i) x^i (-c)^(j - i)
  for (std::size_t j = 0; j < n; ++j) {
    double binom = 1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      if (i > 0) binom = binom * static_cast<double>(j - i + 1) / static_cast<double>(i);
      out[i] += centered[j] * binom * std::pow(-center, static_cast<double>(j - i));
    }
  }
  return out;
}

double PolyFit::operator()(double x) const {
  double r = 0.0;
  const double u = x - center;
  for (std::size_t j = centered.size(); j-- > 0;) r = r * u + centered[j];
  return r;
}

PolyFit fit_polynomial(std::span<const double> x, std::span<const double> y, int degree,
                       double max_condition) {
  require(x.size() == y.size(), ErrorKind::InvalidArgument, "fit_polynomial: size mismatch");
  require(degree >= 0, ErrorKind::InvalidArgument, "fit_polynomial: negative degree");
  const auto m = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  require(m >= cols, ErrorKind::InvalidArgument, "fit_polynomial: fewer points than coefficients");

  PolyFit fit;
  fit.center = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());

  Eigen::MatrixXd design(m, cols);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double u = x[static_cast<std::size_t>(i)] - fit.center;
    double p = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j, p *= u) design(i, j) = p;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  fit.condition_number = smallest > 0.0 ? sv(0) / smallest : INFINITY;
  if (!(fit.condition_number <= max_condition)) {
    std::ostringstream msg;
    msg << "least-squares design matrix ill-conditioned: condition " << fit.condition_number
        << " > " << max_condition << " (points " << m << ", degree " << degree << ")";
    throw FitError(msg.str(), fit.condition_number);
  }
  const Eigen::VectorXd b = svd.solve(rhs);
  fit.centered.assign(b.data(), b.data() + b.size());
  const Eigen::VectorXd resid = design * b - rhs;
  fit.rms_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(m));
  return fit;
}

}  // namespace ntlab
