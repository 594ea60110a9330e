#pragma once

namespace kdv {

// Exact one-soliton solution 9 sech^2(sqrt(3/2)(x - 3t)); stable for
// large |x - 3t|.
double eval_one_soliton(double x, double t);

// Exact two-soliton solution with parameters 0 < a < b; the removable
// singularity along coth's zero-argument ray is evaluated through an
// algebraically equivalent form.
double eval_two_soliton(double x, double t, double a, double b);

// Rough L^2 initial profile: x^{-1/3} on (0,1), zero elsewhere in
// [-5,5), extended with period 10.
double eval_rough_l2(double x);

// Fourth-order finite-difference residual of u_t + u u_x + u_xxx at
// (x, t).  The default step balances truncation against the roundoff
// amplification of the third-derivative stencil.
template <typename F>
double kdv_fd_residual(F &&u, double x, double t, double h = 1e-2) {
  const double ut = (-u(x, t + 2 * h) + 8.0 * u(x, t + h) - 8.0 * u(x, t - h) +
                     u(x, t - 2 * h)) /
                    (12.0 * h);
  const double ux = (-u(x + 2 * h, t) + 8.0 * u(x + h, t) - 8.0 * u(x - h, t) +
                     u(x - 2 * h, t)) /
                    (12.0 * h);
  const double uxxx =
      (u(x - 3 * h, t) - 8.0 * u(x - 2 * h, t) + 13.0 * u(x - h, t) -
       13.0 * u(x + h, t) + 8.0 * u(x + 2 * h, t) - u(x + 3 * h, t)) /
      (8.0 * h * h * h);
  return ut + u(x, t) * ux + uxxx;
}

}  // namespace kdv
