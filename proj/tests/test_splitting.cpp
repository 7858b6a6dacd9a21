// SPDX-License-Identifier: Apache-2.0

#include "core/splitting.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "core/config.hpp"
#include "doctest.h"

using namespace sfsim;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.T = 0.5;
  cfg.N = 4;
  cfg.nz = 4;
  cfg.nr = 3;
  cfg.mu = 0.8;
  return cfg;
}

// The load the fluid substep adds on the interface trace rows.
Vec lift_interface(const DofLayout& layout, const Vec& g, int n_sys) {
  Vec out = Vec::Zero(n_sys);
  for (int k = 0; k < layout.n_i; ++k) out[layout.trace_ur_dof(k)] += g[k];
  return out;
}

double max_abs_diff(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("step-averaged pressure signals") {
  PressureSignal constant;
  constant.kind = PressureSignal::Kind::Constant;
  constant.value = 5.0;
  CHECK(average_pressure(constant, 0, 0.1) == 5.0);
  CHECK(average_pressure(constant, 7, 0.3) == 5.0);

  PressureSignal table;
  table.kind = PressureSignal::Kind::Table;
  table.times = {0.0, 1.0};
  table.values = {0.0, 0.5};
  // Mean of the linear ramp over its whole span.
  CHECK(average_pressure(table, 0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  // First half of the ramp: mean of a ramp from 0 to 0.25.
  CHECK(average_pressure(table, 0, 0.5) ==
        doctest::Approx(0.125).epsilon(1e-15));
  // Past the last knot the signal holds its final value.
  CHECK(average_pressure(table, 1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(average_pressure(table, 5, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  PressureSignal before;
  before.kind = PressureSignal::Kind::Table;
  before.times = {0.5, 1.0};
  before.values = {2.0, 4.0};
  // Before the first knot the signal holds its initial value.
  CHECK(average_pressure(before, 0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));

  PressureSignal sine;
  sine.kind = PressureSignal::Kind::Sine;
  sine.offset = 1.5;
  sine.amplitude = 2.0;
  sine.frequency = 1.0;
  sine.phase = 0.0;
  // A full period averages to the offset.
  CHECK(average_pressure(sine, 0, 1.0) == doctest::Approx(1.5).epsilon(1e-12));
  // Half a period of a unit sine averages to 2 / pi.
  sine.offset = 0.0;
  sine.amplitude = 1.0;
  CHECK(average_pressure(sine, 0, 0.5) ==
        doctest::Approx(2.0 / std::acos(-1.0)).epsilon(1e-13));
}

TEST_CASE("structure update on a single interior hat function") {
  // One interior linear node on [0, 1] with h = 1/2: the constrained mass
  // and stiffness entries are 1/3 and 4.  Starting from eta = 0, v = 1 and
  // dt = 1/10 the implicit update solves
  //   (1/3 + (1/100) 4) eta' = (1/3)(1/10), so eta' = 5/56.
  const InterfaceMesh imesh = build_interface_mesh(2, 1.0, 1);
  const StructureOperators ops = assemble_structure(imesh);
  const double dt = 0.1;
  const SpMat system = ops.M_s + (dt * dt) * ops.K_s;
  const SpdFactorization fac(system, "structure-test");

  Vec eta = Vec::Zero(3);
  Vec v = Vec::Zero(3);
  v[1] = 1.0;
  const Vec rhs = ops.M_s * (eta + dt * v);
  const Vec eta13 = fac.solve(rhs);
  const Vec v13 = (eta13 - eta) / dt;

  CHECK(eta13[0] == 0.0);
  CHECK(eta13[2] == 0.0);
  CHECK(eta13[1] == doctest::Approx(5.0 / 56.0).epsilon(1e-14));
  CHECK(v13[1] == doctest::Approx(25.0 / 28.0).epsilon(1e-14));
}

TEST_CASE("structure substep satisfies its defining equations") {
  RunConfig cfg = small_config();
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.amplitude = 0.5;
  cfg.initial.seed = 17;
  const SplitContext ctx = make_split_context(cfg);
  const SplitState s0 = ctx.initial_state;

  const SplitState s13 = structure_step(ctx, s0);
  CHECK(s13.stage == Stage::AfterStructure);

  // Fluid variables are untouched.
  CHECK(max_abs_diff(s13.u, s0.u) == 0.0);
  CHECK(max_abs_diff(s13.p, s0.p) == 0.0);

  // The velocity is the exact difference quotient of the displacement.
  const Vec quotient = (s13.eta - s0.eta) / ctx.dt;
  CHECK(max_abs_diff(s13.v, quotient) == 0.0);

  // The implicit equation holds: (M + dt^2 K) eta' = M (eta + dt v) on
  // the unconstrained rows, and the endpoints stay pinned.
  const Vec lhs = (ctx.ops.M_s + (ctx.dt * ctx.dt) * ctx.ops.K_s) * s13.eta;
  const Vec rhs = ctx.ops.M_s * (s0.eta + ctx.dt * s0.v);
  for (int k = 0; k < ctx.layout.n_i; ++k) {
    if (ctx.layout.interface_constrained[k]) {
      CHECK(s13.eta[k] == 0.0);
    } else {
      CHECK(std::abs(lhs[k] - rhs[k]) <= 1e-12);
    }
  }
}

TEST_CASE("stochastic substep shifts every interface node") {
  const RunConfig cfg = small_config();
  const SplitContext ctx = make_split_context(cfg);
  const SplitState s13 = structure_step(ctx, ctx.initial_state);
  const double dW = 0.37;
  const SplitState s23 = stochastic_step(ctx, s13, dW);

  CHECK(s23.stage == Stage::AfterNoise);
  REQUIRE(s23.v_free.size() == ctx.layout.n_i);
  for (int k = 0; k < ctx.layout.n_i; ++k) {
    CHECK(s23.v_free[k] == s13.v[k] + dW);
  }
  // The endpoints carry the kick too even though v is pinned there.
  CHECK(s23.v_free[0] == dW);
  CHECK(s23.v_free[ctx.layout.n_i - 1] == dW);
  // The constrained copy and the other variables are unchanged.
  CHECK(max_abs_diff(s23.v, s13.v) == 0.0);
  CHECK(max_abs_diff(s23.eta, s13.eta) == 0.0);
  CHECK(max_abs_diff(s23.u, s13.u) == 0.0);
}

TEST_CASE("fluid substep solves the coupled saddle system") {
  RunConfig cfg = small_config();
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.amplitude = 0.3;
  cfg.initial.seed = 5;
  const SplitContext ctx = make_split_context(cfg);
  const DofLayout& layout = ctx.layout;
  const int nu2 = 2 * layout.n_u;

  const SplitState s13 = structure_step(ctx, ctx.initial_state);
  const SplitState s23 = stochastic_step(ctx, s13, 0.2);
  const double p_in = 1.3;
  const double p_out = -0.4;
  const SplitState s1 = fluid_step(ctx, s23, p_in, p_out);

  CHECK(s1.stage == Stage::Whole);
  CHECK(s1.step_index == s23.step_index + 1);
  // The displacement is frozen through the fluid solve.
  CHECK(max_abs_diff(s1.eta, s23.eta) == 0.0);
  // The interface velocity is the u_r trace, entry by entry.
  for (int k = 0; k < layout.n_i; ++k) {
    CHECK(s1.v[k] == s1.u[layout.trace_ur_dof(k)]);
  }
  for (int i = 0; i < nu2; ++i) {
    if (layout.u_constrained[i]) CHECK(s1.u[i] == 0.0);
  }

  // Rebuild the saddle system and its right-hand side and measure the
  // residual of the returned coefficients.
  const SpMat S = build_coupled_saddle(ctx.ops, layout, ctx.dt,
                                       ctx.pressure_regularization);
  Vec rhs = Vec::Zero(layout.n_sys());
  rhs.head(nu2) = ctx.ops.M_f * s23.u;
  rhs.head(nu2) += lift_interface(layout, ctx.ops.M_gamma * s23.v_free,
                                  layout.n_sys())
                       .head(nu2);
  rhs.head(nu2) += (ctx.dt * p_in) * ctx.ops.b_in;
  rhs.head(nu2) -= (ctx.dt * p_out) * ctx.ops.b_out;
  for (int i = 0; i < nu2; ++i)
    if (layout.u_constrained[i]) rhs[i] = 0.0;

  Vec x(layout.n_sys());
  x.head(nu2) = s1.u;
  x.tail(layout.n_p) = ctx.dt * s1.p;
  const double resid = (S * x - rhs).norm();
  CHECK(resid <= 1e-10 * std::max(1.0, rhs.norm()));

  // The solution is discretely divergence free.
  CHECK((ctx.ops.B_div * s1.u).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("substeps reject states at the wrong stage") {
  const RunConfig cfg = small_config();
  const SplitContext ctx = make_split_context(cfg);
  const SplitState whole = ctx.initial_state;
  const SplitState s13 = structure_step(ctx, whole);
  const SplitState s23 = stochastic_step(ctx, s13, 0.0);

  CHECK_THROWS_AS((void)stochastic_step(ctx, whole, 0.1), RuntimeFailure);
  CHECK_THROWS_AS((void)fluid_step(ctx, whole, 0.0, 0.0), RuntimeFailure);
  CHECK_THROWS_AS((void)structure_step(ctx, s13), RuntimeFailure);
  CHECK_THROWS_AS((void)fluid_step(ctx, s13, 0.0, 0.0), RuntimeFailure);
  CHECK_THROWS_AS((void)structure_step(ctx, s23), RuntimeFailure);
  CHECK_THROWS_AS((void)stochastic_step(ctx, s23, 0.1), RuntimeFailure);
}

TEST_CASE("zero data with zero noise is an exact fixed point") {
  const RunConfig cfg = small_config();
  const SplitContext ctx = make_split_context(cfg);
  SplitState state = ctx.initial_state;
  for (int n = 0; n < cfg.N; ++n) {
    state = full_step(ctx, state, 0.0, 0.0, 0.0).after_fluid;
  }
  CHECK(state.u.cwiseAbs().maxCoeff() == 0.0);
  CHECK(state.p.cwiseAbs().maxCoeff() == 0.0);
  CHECK(state.eta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(state.v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trajectories are adapted to the driving path") {
  RunConfig cfg = small_config();
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.amplitude = 0.2;
  const SplitContext ctx = make_split_context(cfg);

  const BrownianPath path_a = sample_path(cfg.seed, 0, cfg.N, cfg.T);
  BrownianPath path_b = path_a;
  // Same increments through step 1, different afterwards.
  const int split_at = 2;
  for (int n = split_at; n < path_b.N; ++n) path_b.dw[n] = -path_b.dw[n];
  for (int n = 0; n < path_b.N; ++n)
    path_b.w[n + 1] = path_b.w[n] + path_b.dw[n];

  const Trajectory ta = run_path(ctx, cfg, path_a);
  const Trajectory tb = run_path(ctx, cfg, path_b);
  for (int n = 0; n <= split_at; ++n) {
    CHECK(max_abs_diff(ta.u[n], tb.u[n]) == 0.0);
    CHECK(max_abs_diff(ta.eta[n], tb.eta[n]) == 0.0);
    CHECK(max_abs_diff(ta.v[n], tb.v[n]) == 0.0);
  }
  CHECK(max_abs_diff(ta.u[cfg.N], tb.u[cfg.N]) > 0.0);
}

TEST_CASE("run_path is reproducible and records every stage") {
  RunConfig cfg = small_config();
  cfg.pressure_in.kind = PressureSignal::Kind::Sine;
  cfg.pressure_in.offset = 1.0;
  cfg.pressure_in.amplitude = 0.5;
  cfg.pressure_in.frequency = 2.0;
  const SplitContext ctx = make_split_context(cfg);
  const BrownianPath path = sample_path(cfg.seed, 3, cfg.N, cfg.T);

  const Trajectory a = run_path(ctx, cfg, path);
  REQUIRE(static_cast<int>(a.u.size()) == cfg.N + 1);
  REQUIRE(static_cast<int>(a.eta.size()) == cfg.N + 1);
  REQUIRE(static_cast<int>(a.v.size()) == cfg.N + 1);
  REQUIRE(static_cast<int>(a.v13.size()) == cfg.N);
  REQUIRE(static_cast<int>(a.v23.size()) == cfg.N);
  REQUIRE(static_cast<int>(a.p.size()) == cfg.N);
  REQUIRE(static_cast<int>(a.dW.size()) == cfg.N);
  CHECK(a.dt == cfg.dt());
  for (int n = 0; n < cfg.N; ++n) {
    CHECK(a.dW[n] == path.dw[n]);
    CHECK(a.p_in[n] == average_pressure(cfg.pressure_in, n, cfg.dt()));
    CHECK(a.p_out[n] == 0.0);
  }

  const Trajectory b = run_path(ctx, cfg, path);
  for (int n = 0; n <= cfg.N; ++n) {
    CHECK(max_abs_diff(a.u[n], b.u[n]) == 0.0);
    CHECK(max_abs_diff(a.eta[n], b.eta[n]) == 0.0);
  }

  // A context built from scratch gives the same coefficients bit for bit.
  const Trajectory c = run_path(cfg, path);
  for (int n = 0; n <= cfg.N; ++n) {
    CHECK(max_abs_diff(a.u[n], c.u[n]) == 0.0);
  }

  // Mismatched paths are rejected.
  const BrownianPath wrong_n = sample_path(cfg.seed, 3, cfg.N + 1, cfg.T);
  CHECK_THROWS_AS((void)run_path(ctx, cfg, wrong_n), ConfigError);
  const BrownianPath wrong_t = sample_path(cfg.seed, 3, cfg.N, 2.0 * cfg.T);
  CHECK_THROWS_AS((void)run_path(ctx, cfg, wrong_t), ConfigError);
}

TEST_CASE("initial data kinds project into the coupled space") {
  RunConfig cfg = small_config();
  cfg.initial.kind = InitialSpec::Kind::Bump;
  cfg.initial.amplitude = 0.7;
  const SplitContext ctx = make_split_context(cfg);
  const SplitState s0 = ctx.initial_state;

  // Projected data satisfies the same constraints as every whole state:
  // divergence free, constrained entries zero, trace identified.
  CHECK((ctx.ops.B_div * s0.u).lpNorm<Eigen::Infinity>() <= 1e-10);
  for (int i = 0; i < 2 * ctx.layout.n_u; ++i)
    if (ctx.layout.u_constrained[i]) CHECK(s0.u[i] == 0.0);
  for (int k = 0; k < ctx.layout.n_i; ++k) {
    CHECK(s0.v[k] == s0.u[ctx.layout.trace_ur_dof(k)]);
    if (ctx.layout.interface_constrained[k]) CHECK(s0.eta[k] == 0.0);
  }
  CHECK(s0.u.cwiseAbs().maxCoeff() > 0.0);
  CHECK(s0.eta.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("file initial data reproduces nodal values it can represent") {
  RunConfig cfg = small_config();
  const SplitContext probe = make_split_context(cfg);

  // Write nodal data for u = (0, 0), eta = hat, v = 0. The displacement
  // projection is exact for data already in the constrained space.
  const int n_i = probe.layout.n_i;
  std::string eta_json = "[";
  for (int k = 0; k < n_i; ++k) {
    const double z = probe.imesh.z[k];
    const double val =
        (k == 0 || k == n_i - 1) ? 0.0 : z * (cfg.L - z) / cfg.L / cfg.L;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", val);
    eta_json += (k ? "," : "") + std::string(buf);
  }
  eta_json += "]";
  const std::string path = "initial_test.json";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fprintf(f, "{\"eta\": %s}\n", eta_json.c_str());
    std::fclose(f);
  }

  cfg.initial.kind = InitialSpec::Kind::File;
  cfg.initial.path = path;
  const SplitContext ctx = make_split_context(cfg);
  CHECK(ctx.initial_state.u.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ctx.initial_state.eta.cwiseAbs().maxCoeff() > 0.0);
  for (int k = 0; k < n_i; ++k) {
    if (!ctx.layout.interface_constrained[k]) {
      const double z = ctx.imesh.z[k];
      CHECK(ctx.initial_state.eta[k] ==
            doctest::Approx(z * (cfg.L - z) / cfg.L / cfg.L).epsilon(1e-9));
    }
  }
  std::remove(path.c_str());

  cfg.initial.path = "does_not_exist.json";
  CHECK_THROWS_AS((void)make_split_context(cfg), ConfigError);
}
