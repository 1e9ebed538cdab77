#include "owl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace owl {

namespace {

void validate(const Vector& w) {
  if (w.size() == 0) {
    throw std::invalid_argument("weights: empty weight vector");
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      throw std::invalid_argument("weights: entry " + std::to_string(i) +
                                  " is negative or not finite");
    }
    if (i > 0 && w[i] > w[i - 1]) {
      throw std::invalid_argument("weights: sequence increases at entry " + std::to_string(i));
    }
  }
  if (!(w[0] > 0.0)) {
    throw std::invalid_argument("weights: leading weight must be strictly positive");
  }
}

}  // namespace

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
  validate(w_);
  const Eigen::Index p = w_.size();
  if (p == 1) {
    delta_ = w_[0];
  } else {
    delta_ = w_[0] - w_[1];
    for (Eigen::Index i = 1; i + 1 < p; ++i) {
      delta_ = std::min(delta_, w_[i] - w_[i + 1]);
    }
  }
  mean_ = w_.sum() / static_cast<double>(p);
}

WeightVector::WeightVector(const std::vector<double>& w)
    : WeightVector(Vector(Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())))) {}

WeightVector WeightVector::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("weights: scale factor must be positive and finite");
  }
  return WeightVector(Vector(w_ * factor));
}

WeightVector oscar_weights(std::size_t p, double lambda1, double lambda2) {
  if (p == 0) {
    throw std::invalid_argument("oscar_weights: p must be positive");
  }
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw std::invalid_argument("oscar_weights: lambda1 and lambda2 must be non-negative");
  }
  Vector w(static_cast<Eigen::Index>(p));
  for (std::size_t i = 1; i <= p; ++i) {
    w[static_cast<Eigen::Index>(i - 1)] = lambda1 + lambda2 * static_cast<double>(p - i);
  }
  if (!(w[0] > 0.0)) {
    throw std::invalid_argument("oscar_weights: lambda1 = lambda2 = 0 does not define a norm");
  }
  return WeightVector(std::move(w));
}

WeightVector uniform_weights(std::size_t p, double lambda) {
  if (p == 0) {
    throw std::invalid_argument("uniform_weights: p must be positive");
  }
  return WeightVector(Vector(Vector::Constant(static_cast<Eigen::Index>(p), lambda)));
}

WeightVector slope_weights(std::size_t p, double q) {
  if (p == 0) {
    throw std::invalid_argument("slope_weights: p must be positive");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("slope_weights: q must lie in (0, 1)");
  }
  Vector w(static_cast<Eigen::Index>(p));
  const double two_p = 2.0 * static_cast<double>(p);
  for (std::size_t i = 1; i <= p; ++i) {
    const double prob = 1.0 - static_cast<double>(i) * q / two_p;
    w[static_cast<Eigen::Index>(i - 1)] = std::max(0.0, normal_quantile(prob));
  }
  return WeightVector(std::move(w));
}

double min_gap(const WeightVector& w) noexcept { return w.delta(); }

// Wichura, M. J. (1988). Algorithm AS 241: The percentage points of the
// normal distribution. Applied Statistics 37, 477-484.
double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("normal_quantile: probability must lie in (0, 1)");
  }
  const double q = prob - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? prob : 1.0 - prob;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

}  // namespace owl
