#pragma once

#include <stdexcept>

namespace kdv {

// Weight entering the weighted inner product.  Two kinds: the affine
// weight a + b*x used in the experiments, and the smoothed ramp
// max(1, min(1+x+R, 1+2R)) mollified with a bump of unit mass, the form
// the analysis works with.  Both satisfy phi >= 1 and phi_x >= 0 on
// their domain.
class WeightFunction {
public:
  static WeightFunction affine(double a, double b, double x_left,
                               double x_right);
  static WeightFunction smoothed_ramp(double R, double mollifier_width,
                                      double x_left, double x_right);

  // deriv in 0..3
  double eval(double x, int deriv = 0) const;

  bool is_affine() const { return kind_ == Kind::Affine; }
  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  double ramp_R() const { return R_; }
  double affine_a() const { return a_; }
  double affine_b() const { return b_; }

private:
  enum class Kind { Affine, SmoothedRamp };

  WeightFunction() = default;

  Kind kind_ = Kind::Affine;
  double a_ = 1.0, b_ = 0.0;           // affine
  double R_ = 1.0, width_ = 1.0;       // smoothed ramp
  double bump_norm_ = 1.0;             // mass of the unscaled bump
  double x_left_ = 0.0, x_right_ = 0.0;
};

struct WeightConstant {
  double C_R;
};

// Max over the domain of |phi|, |phi_x|, |phi_xx|, |phi_xxx|; exact for
// the affine kind, sampled on a fine uniform grid otherwise.
WeightConstant compute_cr(const WeightFunction &w, int samples_per_unit = 10);

}  // namespace kdv
