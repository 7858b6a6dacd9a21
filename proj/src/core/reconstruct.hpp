// SPDX-License-Identifier: Apache-2.0
//
// Time reconstructions of a trajectory and the exact L2-in-time norms
// between them.  Three interpolants are defined from the whole-step
// coefficient sequence X^0..X^N on the uniform grid t_n = n dt:
//
//   lagged constant:  X(t) = X^{n-1} on ((n-1) dt, n dt]  (adapted)
//   shifted constant: X(t) = X^n     on ((n-1) dt, n dt]
//   linear:           nodal interpolation, X(n dt) = X^n
//
// The auxiliary field v* uses the post-structure velocities and exists
// only in lagged form: v*(t) = v13^{n-1} on ((n-1) dt, n dt], which is
// also the exact time derivative of the linear displacement interpolant.
//
// All norms integrate exactly: on every subinterval of the merged
// breakpoint grid the difference is affine in time, so a three-term
// closed formula with the spatial Gram matrix gives the integral with
// no quadrature error.

#pragma once

#include <vector>

#include "core/splitting.hpp"
#include "core/types.hpp"

namespace sfsim {

enum class TfField { U, V, VStar, Eta };
enum class TfKind { Lagged, Shifted, Linear };

struct TimeFunction {
  TfField field = TfField::U;
  TfKind kind = TfKind::Lagged;
  double T = 0.0;
  int N = 0;  // number of time intervals
  std::vector<Vec> vals;  // N+1 whole-step levels, or N levels for v*

  double dt() const { return T / static_cast<double>(N); }
};

// Builds a reconstruction from a trajectory.  Throws ConfigError for
// the undefined combination (v* with shifted or linear kind).
TimeFunction make_time_function(const Trajectory& traj, TfField field,
                                TfKind kind);

// Value of f at time t; for the piecewise-constant kinds, points on the
// grid take the left-limit convention stated above (left-continuous).
Vec evaluate(const TimeFunction& f, double t);

// Exact squared L2(0,T; H) distance, H induced by the Gram matrix M.
// The two functions may live on different uniform grids over the same
// horizon; breakpoints are merged exactly.
double l2_time_diff_sq(const TimeFunction& f, const TimeFunction& g,
                       const SpMat& M);

// Plain norm variant.
double l2_time_norm_diff(const TimeFunction& f, const TimeFunction& g,
                         const SpMat& M);

// Exact squared time-shift modulus int_h^T |f(t) - f(t-h)|_M^2 dt.
double time_shift_modulus_sq(const TimeFunction& f, double h, const SpMat& M);

// Plain norm variant.
double time_shift_modulus(const TimeFunction& f, double h, const SpMat& M);

}  // namespace sfsim
