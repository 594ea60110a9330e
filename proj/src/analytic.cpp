#include "kdv/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace kdv {

double eval_one_soliton(double x, double t) {
  const double z = 0.5 * std::sqrt(3.0) * (x - 3.0 * t);
  if (std::abs(z) > 350.0) return 0.0;
  const double s = 1.0 / std::cosh(z);
  return 9.0 * s * s;
}

double eval_two_soliton(double x, double t, double a, double b) {
  if (!(a > 0.0 && a < b))
    throw std::invalid_argument("two-soliton requires 0 < a < b");
  const double xa = std::sqrt(a / 2.0) * (x - 2.0 * a * t);
  const double xb = std::sqrt(b / 2.0) * (x - 2.0 * b * t);

  // Multiply numerator and denominator by xb^2: the csch^2/coth blow-up
  // at xb = 0 cancels and every factor below is finite.
  double s_csch;  // xb^2 csch^2(xb) = (xb / sinh xb)^2
  double s_coth;  // xb coth(xb)
  if (std::abs(xb) > 350.0) {
    s_csch = 0.0;
    s_coth = std::abs(xb);
  } else if (xb == 0.0) {
    s_csch = 1.0;
    s_coth = 1.0;
  } else {
    const double sh = std::sinh(xb);
    s_csch = (xb / sh) * (xb / sh);
    s_coth = xb * std::cosh(xb) / sh;
  }
  const double sa = (std::abs(xa) > 350.0) ? 0.0 : 1.0 / std::cosh(xa);
  const double num =
      6.0 * (b - a) * (b * s_csch + a * xb * xb * sa * sa);
  const double den_root =
      std::sqrt(a) * xb * std::tanh(xa) - std::sqrt(b) * s_coth;
  return num / (den_root * den_root);
}

double eval_rough_l2(double x) {
  // wrap into [-5,5)
  double y = x - 10.0 * std::floor((x + 5.0) / 10.0);
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return std::pow(y, -1.0 / 3.0);
}

}  // namespace kdv
