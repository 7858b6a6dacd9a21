// SPDX-License-Identifier: Apache-2.0

#include "core/reconstruct.hpp"

#include <cmath>
#include <vector>

#include "core/config.hpp"
#include "core/noise.hpp"
#include "doctest.h"

using namespace sfsim;

namespace {

Vec scalar(double x) { return Vec::Constant(1, x); }

TimeFunction scalar_function(TfKind kind, double T,
                             const std::vector<double>& levels) {
  TimeFunction f;
  f.field = TfField::U;
  f.kind = kind;
  f.T = T;
  f.N = static_cast<int>(levels.size()) - 1;
  for (double x : levels) f.vals.push_back(scalar(x));
  return f;
}

SpMat unit_gram() {
  SpMat M(1, 1);
  M.insert(0, 0) = 1.0;
  M.makeCompressed();
  return M;
}

}  // namespace

TEST_CASE("evaluation conventions of the three kinds") {
  // Binary-exact grid so points land exactly on the breakpoints.
  const std::vector<double> levels = {2.0, 5.0, 3.0, 7.0, 4.0};
  const TimeFunction lag = scalar_function(TfKind::Lagged, 1.0, levels);
  const TimeFunction shf = scalar_function(TfKind::Shifted, 1.0, levels);
  const TimeFunction lin = scalar_function(TfKind::Linear, 1.0, levels);

  // Left-continuity: a grid point belongs to the interval on its left.
  CHECK(evaluate(lag, 0.25)[0] == 2.0);
  CHECK(evaluate(shf, 0.25)[0] == 5.0);
  CHECK(evaluate(lag, 0.3)[0] == 5.0);
  CHECK(evaluate(shf, 0.3)[0] == 3.0);
  CHECK(evaluate(lag, 1.0)[0] == 7.0);
  CHECK(evaluate(shf, 1.0)[0] == 4.0);
  CHECK(evaluate(lag, 0.0)[0] == 2.0);
  CHECK(evaluate(shf, 0.0)[0] == 2.0);

  // The linear interpolant hits the levels at the nodes and averages at
  // the midpoints.
  CHECK(evaluate(lin, 0.0)[0] == 2.0);
  CHECK(evaluate(lin, 0.5)[0] == 3.0);
  CHECK(evaluate(lin, 1.0)[0] == 4.0);
  CHECK(evaluate(lin, 0.125)[0] == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(evaluate(lin, 0.875)[0] == doctest::Approx(5.5).epsilon(1e-15));
}

TEST_CASE("squared distance between piecewise constants on one grid") {
  const SpMat M = unit_gram();
  const TimeFunction lag =
      scalar_function(TfKind::Lagged, 1.0, {2.0, 5.0, 3.0, 7.0});
  const TimeFunction shf =
      scalar_function(TfKind::Shifted, 1.0, {2.0, 5.0, 3.0, 7.0});

  // dt * sum of squared jumps: (9 + 4 + 16) / 3.
  CHECK(l2_time_diff_sq(shf, lag, M) ==
        doctest::Approx(29.0 / 3.0).epsilon(1e-14));
  CHECK(l2_time_diff_sq(lag, shf, M) ==
        doctest::Approx(29.0 / 3.0).epsilon(1e-14));
  CHECK(l2_time_diff_sq(lag, lag, M) == 0.0);
  CHECK(l2_time_norm_diff(shf, lag, M) ==
        doctest::Approx(std::sqrt(29.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("squared distance merges two different grids exactly") {
  const SpMat M = unit_gram();
  const TimeFunction coarse =
      scalar_function(TfKind::Lagged, 1.0, {1.0, 4.0, 2.0});
  const TimeFunction fine =
      scalar_function(TfKind::Lagged, 1.0, {1.0, 3.0, 0.5, 5.0, 2.0});
  // Piecewise evaluation over the merged quarter grid:
  // 0 + (1-3)^2/4 + (4-0.5)^2/4 + (4-5)^2/4 = 4.3125.
  CHECK(l2_time_diff_sq(coarse, fine, M) ==
        doctest::Approx(4.3125).epsilon(1e-14));
  CHECK(l2_time_diff_sq(fine, coarse, M) ==
        doctest::Approx(4.3125).epsilon(1e-14));
}

TEST_CASE("linear versus constant reconstructions of the same levels") {
  const SpMat M = unit_gram();
  const std::vector<double> levels = {2.0, 5.0, 3.0, 7.0};
  const TimeFunction lag = scalar_function(TfKind::Lagged, 1.0, levels);
  const TimeFunction lin = scalar_function(TfKind::Linear, 1.0, levels);
  // (dt/3) * sum of squared jumps.
  CHECK(l2_time_diff_sq(lin, lag, M) ==
        doctest::Approx(29.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("time-shift modulus of a shifted reconstruction") {
  const SpMat M = unit_gram();
  const TimeFunction shf =
      scalar_function(TfKind::Shifted, 1.0, {2.0, 5.0, 3.0, 7.0});
  // For a lag below the step only the interior jumps contribute, each
  // over a window of length h: 0.2 * (4 + 16).
  CHECK(time_shift_modulus_sq(shf, 0.2, M) ==
        doctest::Approx(4.0).epsilon(1e-13));
  CHECK(time_shift_modulus(shf, 0.2, M) ==
        doctest::Approx(2.0).epsilon(1e-13));
  // A full-step lag sees every interior jump over a full step.
  CHECK(time_shift_modulus_sq(shf, 1.0 / 3.0, M) ==
        doctest::Approx((4.0 + 16.0) / 3.0).epsilon(1e-12));
  // The lag must lie strictly inside (0, T).
  CHECK_THROWS_AS((void)time_shift_modulus_sq(shf, 0.0, M), ConfigError);
  CHECK_THROWS_AS((void)time_shift_modulus_sq(shf, 1.0, M), ConfigError);
}

TEST_CASE("trajectory reconstructions satisfy the exact norm identities") {
  RunConfig cfg;
  cfg.T = 0.5;
  cfg.N = 5;
  cfg.nz = 3;
  cfg.nr = 3;
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.amplitude = 0.5;
  cfg.initial.seed = 3;
  const SplitContext ctx = make_split_context(cfg);
  const Trajectory traj = run_path(ctx, cfg, sample_path(3, 1, cfg.N, cfg.T));
  const double dt = cfg.dt();

  const TimeFunction lag = make_time_function(traj, TfField::V, TfKind::Lagged);
  const TimeFunction shf =
      make_time_function(traj, TfField::V, TfKind::Shifted);
  const TimeFunction lin = make_time_function(traj, TfField::V, TfKind::Linear);
  REQUIRE(static_cast<int>(lag.vals.size()) == cfg.N + 1);

  double jumps = 0.0;
  for (int n = 0; n < cfg.N; ++n) {
    const Vec d = traj.v[n + 1] - traj.v[n];
    jumps += d.dot(ctx.ops.M_gamma * d);
  }
  CHECK(l2_time_diff_sq(shf, lag, ctx.ops.M_gamma) ==
        doctest::Approx(dt * jumps).epsilon(1e-12));
  CHECK(l2_time_diff_sq(lin, lag, ctx.ops.M_gamma) ==
        doctest::Approx(dt / 3.0 * jumps).epsilon(1e-12));

  // v* is lagged only, holds the post-structure velocities, and is the
  // exact derivative of the linear displacement interpolant.
  const TimeFunction vs =
      make_time_function(traj, TfField::VStar, TfKind::Lagged);
  REQUIRE(static_cast<int>(vs.vals.size()) == cfg.N);
  for (int n = 0; n < cfg.N; ++n) {
    CHECK((vs.vals[n] - traj.v13[n]).cwiseAbs().maxCoeff() == 0.0);
    const Vec deriv = (traj.eta[n + 1] - traj.eta[n]) / dt;
    CHECK((deriv - traj.v13[n]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(
      (void)make_time_function(traj, TfField::VStar, TfKind::Shifted),
      ConfigError);
  CHECK_THROWS_AS(
      (void)make_time_function(traj, TfField::VStar, TfKind::Linear),
      ConfigError);
}
