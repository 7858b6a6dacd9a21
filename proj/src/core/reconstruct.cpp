// SPDX-License-Identifier: Apache-2.0

#include "core/reconstruct.hpp"

#include <algorithm>
#include <cmath>

namespace sfsim {

namespace {

// Interval index k with t in (k dt, (k+1) dt], clamped to [0, N-1];
// selection by any interior point of the interval is exact because the
// callers only pass interior points of merged subintervals.
int interval_of(const TimeFunction& f, double t) {
  const int k = static_cast<int>(std::floor(t / f.dt()));
  return std::min(std::max(k, 0), f.N - 1);
}

// Value at time t when t is known to lie strictly inside the interval
// (lo, hi) of the merged grid; `at` picks the evaluation time for the
// linear kind (constants ignore it).
Vec eval_inside(const TimeFunction& f, double lo, double hi, double at) {
  const double mid = 0.5 * (lo + hi);
  const int k = interval_of(f, mid);
  switch (f.kind) {
    case TfKind::Lagged:
      return f.vals[k];
    case TfKind::Shifted:
      return f.vals[k + 1];
    case TfKind::Linear: {
      const double s = (at - k * f.dt()) / f.dt();
      return f.vals[k] + s * (f.vals[k + 1] - f.vals[k]);
    }
  }
  throw RuntimeFailure("eval_inside: unknown reconstruction kind");
}

// Exact integral over (a, b) of |d(t)|_M^2 where d is affine with
// values d0 at a and d1 at b.
double affine_piece_integral(const SpMat& M, const Vec& d0, const Vec& d1,
                             double len) {
  return len / 3.0 *
         (quad_form(M, d0, d0) + quad_form(M, d0, d1) + quad_form(M, d1, d1));
}

std::vector<double> merged_breakpoints(const TimeFunction& f,
                                       const TimeFunction& g) {
  std::vector<double> pts;
  pts.reserve(f.N + g.N + 2);
  for (int k = 0; k <= f.N; ++k)
    pts.push_back(f.T * (static_cast<double>(k) / f.N));
  for (int k = 0; k <= g.N; ++k)
    pts.push_back(g.T * (static_cast<double>(k) / g.N));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

TimeFunction make_time_function(const Trajectory& traj, TfField field,
                                TfKind kind) {
  if (field == TfField::VStar && kind != TfKind::Lagged)
    throw ConfigError(
        "make_time_function: v* is defined only as a lagged constant");
  TimeFunction f;
  f.field = field;
  f.kind = kind;
  f.T = traj.T;
  f.N = traj.N;
  switch (field) {
    case TfField::U:
      f.vals = traj.u;
      break;
    case TfField::V:
      f.vals = traj.v;
      break;
    case TfField::Eta:
      f.vals = traj.eta;
      break;
    case TfField::VStar:
      f.vals = traj.v13;
      break;
  }
  return f;
}

Vec evaluate(const TimeFunction& f, double t) {
  if (t <= 0.0) return f.vals[0];
  switch (f.kind) {
    case TfKind::Lagged:
    case TfKind::Shifted: {
      // t in (j dt, (j+1) dt]: grid points belong to the interval on
      // their left (left-continuous).
      int j = static_cast<int>(std::ceil(t / f.dt())) - 1;
      j = std::min(std::max(j, 0), f.N - 1);
      return f.kind == TfKind::Lagged ? f.vals[j] : f.vals[j + 1];
    }
    case TfKind::Linear: {
      const int k = interval_of(f, t);
      const double s = (t - k * f.dt()) / f.dt();
      return f.vals[k] + s * (f.vals[k + 1] - f.vals[k]);
    }
  }
  throw RuntimeFailure("evaluate: unknown reconstruction kind");
}

double l2_time_diff_sq(const TimeFunction& f, const TimeFunction& g,
                       const SpMat& M) {
  if (f.T != g.T)
    throw ConfigError("l2_time_diff_sq: horizons differ");
  if (!f.vals.empty() && !g.vals.empty() &&
      f.vals[0].size() != g.vals[0].size())
    throw ConfigError("l2_time_diff_sq: field shapes differ");
  const std::vector<double> pts = merged_breakpoints(f, g);
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double a = pts[i - 1], b = pts[i];
    const double len = b - a;
    if (!(len > 0.0)) continue;
    const Vec d0 = eval_inside(f, a, b, a) - eval_inside(g, a, b, a);
    const Vec d1 = eval_inside(f, a, b, b) - eval_inside(g, a, b, b);
    total += affine_piece_integral(M, d0, d1, len);
  }
  return total;
}

double l2_time_norm_diff(const TimeFunction& f, const TimeFunction& g,
                         const SpMat& M) {
  return std::sqrt(l2_time_diff_sq(f, g, M));
}

double time_shift_modulus_sq(const TimeFunction& f, double h, const SpMat& M) {
  if (!(h > 0.0) || !(h < f.T))
    throw ConfigError("time_shift_modulus: need 0 < h < T");
  // Breakpoints of t -> (f(t), f(t-h)) on (h, T): the grid and the grid
  // shifted by h.
  std::vector<double> pts = {h, f.T};
  for (int k = 0; k <= f.N; ++k) {
    const double t = f.T * (static_cast<double>(k) / f.N);
    if (t > h && t < f.T) pts.push_back(t);
    const double ts = t + h;
    if (ts > h && ts < f.T) pts.push_back(ts);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double a = pts[i - 1], b = pts[i];
    const double len = b - a;
    if (!(len > 0.0)) continue;
    const Vec d0 =
        eval_inside(f, a, b, a) - eval_inside(f, a - h, b - h, a - h);
    const Vec d1 =
        eval_inside(f, a, b, b) - eval_inside(f, a - h, b - h, b - h);
    total += affine_piece_integral(M, d0, d1, len);
  }
  return total;
}

double time_shift_modulus(const TimeFunction& f, double h, const SpMat& M) {
  return std::sqrt(time_shift_modulus_sq(f, h, M));
}

}  // namespace sfsim
