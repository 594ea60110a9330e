#pragma once

#include <functional>

#include "kdv/spline.hpp"
#include "kdv/weight.hpp"

namespace kdv {

double l2_norm(const SplineFunction &u);

// sqrt(int u^2 phi dx)
double weighted_norm(const SplineFunction &u, const WeightFunction &weight);

// Percentage L^2 error 100 * ||u - u_h|| / ||u|| on the mesh of u_h,
// order-10 cell quadrature.
double error_percent(const std::function<double(double)> &u_exact,
                     const SplineFunction &u_h);

// log2(E_coarse / E_fine) for a refinement factor of 2.
double convergence_rate(double e_coarse, double e_fine,
                        double refinement_factor = 2.0);

// int_{-R}^{R} u_x^2 dx, partial end cells integrated by sub-cell rules.
double h1_local_seminorm_sq(const SplineFunction &u, double R_window);

}  // namespace kdv
