#include "kdv/weight.hpp"

#include "kdv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace kdv {

namespace {

// Bump exp(-1/(1-s^2)) on (-1,1) and its first three derivatives,
// obtained from h(s) = -1/(1-s^2) via the chain rule.
double bump(double s, int deriv) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  const double h1 = -2.0 * s / (u * u);
  const double h2 = -2.0 / (u * u) - 8.0 * s * s / (u * u * u);
  const double h3 = -24.0 * s / (u * u * u) - 48.0 * s * s * s / (u * u * u * u);
  const double e = std::exp(-1.0 / u);
  switch (deriv) {
    case 0: return e;
    case 1: return e * h1;
    case 2: return e * (h2 + h1 * h1);
    case 3: return e * (h3 + 3.0 * h1 * h2 + h1 * h1 * h1);
    default: throw std::invalid_argument("bump derivative order > 3");
  }
}

// Unmollified ramp.
double ramp_bar(double x, double R) {
  return std::max(1.0, std::min(1.0 + x + R, 1.0 + 2.0 * R));
}

// Composite Gauss rule over [-1,1], split at the given interior
// breakpoints; the bump derivatives are smooth but sharply peaked, so a
// single rule loses several digits, and the integrand may have kinks at
// the breakpoints.
double integrate_bump(const std::function<double(double)> &f,
                      std::vector<double> breaks = {}) {
  static const QuadratureRule rule(20);
  breaks.push_back(-1.0);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (b - a <= 0.0) continue;
    const int panels = std::max(2, static_cast<int>(std::ceil((b - a) * 24.0)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
      for (int q = 0; q < rule.order(); ++q)
        acc += h * rule.weights()(q) * f(a + h * (p + rule.points()(q)));
  }
  return acc;
}

}  // namespace

WeightFunction WeightFunction::affine(double a, double b, double x_left,
                                      double x_right) {
  WeightFunction w;
  w.kind_ = Kind::Affine;
  w.a_ = a;
  w.b_ = b;
  w.x_left_ = x_left;
  w.x_right_ = x_right;
  if (b < 0.0) throw std::invalid_argument("affine weight must be nondecreasing");
  if (a + b * x_left < 1.0 - 1e-12)
    throw std::invalid_argument("weight must be >= 1 on the domain");
  return w;
}

WeightFunction WeightFunction::smoothed_ramp(double R, double mollifier_width,
                                             double x_left, double x_right) {
  if (R <= 0.0 || mollifier_width <= 0.0)
    throw std::invalid_argument("smoothed ramp needs R > 0 and width > 0");
  WeightFunction w;
  w.kind_ = Kind::SmoothedRamp;
  w.R_ = R;
  w.width_ = mollifier_width;
  w.x_left_ = x_left;
  w.x_right_ = x_right;
  // unit mass normalization of the scaled bump
  w.bump_norm_ = integrate_bump([](double s) { return bump(s, 0); });
  return w;
}

double WeightFunction::eval(double x, int deriv) const {
  if (deriv < 0 || deriv > 3)
    throw std::invalid_argument("weight derivative order must be 0..3");
  if (kind_ == Kind::Affine) {
    switch (deriv) {
      case 0: return a_ + b_ * x;
      case 1: return b_;
      default: return 0.0;
    }
  }
  // (ramp * mollifier)(x); derivatives fall on the mollifier since the
  // ramp is only Lipschitz
  const double w = width_;
  // if the mollifier window sits inside one affine piece of the ramp the
  // symmetric unit-mass convolution is exact
  if (x + w <= -R_ || x - w >= R_) return deriv == 0 ? ramp_bar(x, R_) : 0.0;
  if (x - w >= -R_ && x + w <= R_) {
    if (deriv == 0) return ramp_bar(x, R_);
    return deriv == 1 ? 1.0 : 0.0;
  }
  std::vector<double> breaks;
  for (double kink : {-R_, R_}) {
    const double s = (x - kink) / w;
    if (s > -1.0 && s < 1.0) breaks.push_back(s);
  }
  return integrate_bump(
             [&](double s) { return bump(s, deriv) * ramp_bar(x - w * s, R_); },
             std::move(breaks)) /
         (bump_norm_ * std::pow(w, deriv));
}

WeightConstant compute_cr(const WeightFunction &w, int samples_per_unit) {
  if (w.is_affine()) {
    const double m =
        std::max({std::abs(w.eval(w.x_left())), std::abs(w.eval(w.x_right())),
                  std::abs(w.eval(w.x_left(), 1))});
    return {std::max(1.0, m)};
  }
  const double len = w.x_right() - w.x_left();
  const int n = std::max(2, static_cast<int>(len * samples_per_unit));
  double m = 1.0;
  for (int i = 0; i <= n; ++i) {
    const double x = w.x_left() + len * i / n;
    for (int d = 0; d <= 3; ++d) m = std::max(m, std::abs(w.eval(x, d)));
  }
  return {m};
}

}  // namespace kdv
