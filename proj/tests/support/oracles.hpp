#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <array>
#include <vector>

#include "fjet/features.hpp"
#include "fjet/integrate.hpp"
#include "fjet/systems.hpp"

namespace fjet::testing {

/// Least squares through the normal equations (Gram matrix + Cholesky),
/// written without Eigen. cols[j] is the j-th design column.
std::vector<double> normal_equations_solve(const std::vector<std::vector<double>>& cols,
                                           const std::vector<double>& y);

/// Central difference of `f` in `var` at `rec`.
double finite_difference(const FeatureExpr& f, Var var, UpdateRecord rec, double h);

double evaluate(const LinearCombination& lc, const UpdateRecord& rec);

/// Normalized RK4 one-step coefficients (a1, a2, b1, b2) for the damped
/// oscillator, from the closed-form Taylor expansion of the scheme.
std::array<double, 4> rk4_ho_normalized(double eps, double omega0, double gamma);

/// Midpoint RK2 update coefficients (step matrix minus identity) of the damped
/// oscillator, raw, row-major: du = [0]u + [1]v, dv = [2]u + [3]v.
std::array<double, 4> rk2_ho_raw(double eps, double omega0, double gamma);

/// Damped oscillator solution by hand: u = e^{-γt}(c1 cos ωt + c2 sin ωt).
std::array<double, 2> ho_solution(double omega0, double gamma, double u0, double v0, double t);

/// Log-log slope of the one-step error from (1, 0) on the undamped
/// oscillator against eps (local order + 1).
double observed_order(Scheme scheme, const std::vector<double>& eps_list);

}  // namespace fjet::testing
