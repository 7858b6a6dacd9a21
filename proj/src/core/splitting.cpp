// SPDX-License-Identifier: Apache-2.0

#include "core/splitting.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "core/config.hpp"

namespace sfsim {

namespace {

// Piecewise-linear interpolant of a table with clamped extrapolation.
double table_value(const PressureSignal& sig, double t) {
  const auto& ts = sig.times;
  const auto& vs = sig.values;
  if (t <= ts.front()) return vs.front();
  if (t >= ts.back()) return vs.back();
  std::size_t k = 1;
  while (ts[k] < t) ++k;
  const double s = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
  return vs[k - 1] + s * (vs[k] - vs[k - 1]);
}

// Exact integral of the table interpolant over [a, b]: split at the
// table breakpoints, trapezoid on each piece (the integrand is linear).
double table_integral(const PressureSignal& sig, double a, double b) {
  std::vector<double> cuts = {a};
  for (double t : sig.times)
    if (t > a && t < b) cuts.push_back(t);
  cuts.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double lo = cuts[i - 1], hi = cuts[i];
    sum += 0.5 * (table_value(sig, lo) + table_value(sig, hi)) * (hi - lo);
  }
  return sum;
}

void check_stage(const SplitState& state, Stage expected, const char* op) {
  if (state.stage != expected)
    throw RuntimeFailure(std::string(op) +
                         ": state is at the wrong substep stage");
}

// Adds the interface mass action M_gamma * v into the u_r trace rows.
void add_interface_load(const DofLayout& layout, const SpMat& M_gamma,
                        const Vec& v, Vec& rhs) {
  const Vec g = M_gamma * v;
  for (int k = 0; k < layout.n_i; ++k) rhs[layout.trace_ur_dof(k)] += g[k];
}

Vec extract_trace(const DofLayout& layout, const Vec& u) {
  Vec v(layout.n_i);
  for (int k = 0; k < layout.n_i; ++k) v[k] = u[layout.trace_ur_dof(k)];
  return v;
}

// Nodal interpolation of closed-form initial fields, then projection.
struct NodalFields {
  Vec u;    // 2 n_u, both components
  Vec eta;  // n_i
  Vec v;    // n_i
};

NodalFields bump_fields(const FluidMesh& fmesh, const InterfaceMesh& imesh,
                        const DofLayout& layout, double amp) {
  NodalFields f;
  f.u = Vec::Zero(2 * layout.n_u);
  f.eta = Vec::Zero(layout.n_i);
  f.v = Vec::Zero(layout.n_i);
  const double L = fmesh.L, R = fmesh.R;
  for (int n = 0; n < fmesh.n_vnodes(); ++n) {
    const double z = fmesh.vz[n], r = fmesh.vr[n];
    f.u[layout.uz_dof(n)] = amp * std::sin(M_PI * z / L) * std::sin(M_PI * r / R);
    f.u[layout.ur_dof(n)] = amp * std::sin(M_PI * z / L) * (r / R) * (r / R);
  }
  for (int k = 0; k < layout.n_i; ++k) {
    const double s = imesh.z[k] / L;
    f.eta[k] = 16.0 * amp * s * s * (1.0 - s) * (1.0 - s);
    f.v[k] = amp * std::sin(M_PI * s);
  }
  return f;
}

NodalFields file_fields(const std::string& path, const FluidMesh& fmesh,
                        const DofLayout& layout) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open initial-data file: " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("initial-data file is not valid JSON: " +
                      std::string(e.what()));
  }
  if (!root.is_object())
    throw ConfigError("initial-data file: root must be an object");
  auto read = [&](const char* key, Eigen::Index want) -> Vec {
    Vec out = Vec::Zero(want);
    if (!root.contains(key)) return out;
    const auto& arr = root[key];
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != want)
      throw ConfigError(std::string("initial-data field '") + key +
                        "' must be an array of length " +
                        std::to_string(want));
    for (Eigen::Index i = 0; i < want; ++i) out[i] = arr[i].get<double>();
    return out;
  };
  for (auto it = root.begin(); it != root.end(); ++it)
    if (std::string(it.key()) != "u_z" && std::string(it.key()) != "u_r" &&
        std::string(it.key()) != "eta" && std::string(it.key()) != "v")
      throw ConfigError("initial-data file: unknown field '" + it.key() + "'");
  NodalFields f;
  const Vec uz = read("u_z", fmesh.n_vnodes());
  const Vec ur = read("u_r", fmesh.n_vnodes());
  f.u = Vec::Zero(2 * layout.n_u);
  for (int n = 0; n < fmesh.n_vnodes(); ++n) {
    f.u[layout.uz_dof(n)] = uz[n];
    f.u[layout.ur_dof(n)] = ur[n];
  }
  f.eta = read("eta", layout.n_i);
  f.v = read("v", layout.n_i);
  return f;
}

// L2 projection of interpolated data onto the constrained, discretely
// divergence-free coupled space (velocity and interface velocity
// jointly) and the constrained displacement space.
SplitState project_initial(const SplitContext& ctx, const NodalFields& f) {
  const DofLayout& layout = ctx.layout;
  SplitState s;
  s.stage = Stage::Whole;
  s.step_index = 0;
  s.p = Vec::Zero(layout.n_p);

  const SpMat P =
      build_coupled_saddle(ctx.ops, layout, 0.0, ctx.pressure_regularization);
  LuFactorization proj(P, "initial-projection");
  Vec rhs = Vec::Zero(layout.n_sys());
  rhs.head(2 * layout.n_u) = ctx.ops.M_f * f.u;
  add_interface_load(layout, ctx.ops.M_gamma, f.v, rhs);
  for (int i = 0; i < 2 * layout.n_u; ++i)
    if (layout.u_constrained[i]) rhs[i] = 0.0;
  const Vec sol = proj.solve(rhs);
  s.u = sol.head(2 * layout.n_u);
  s.v = extract_trace(layout, s.u);

  SpdFactorization mass(ctx.ops.M_s, "interface-mass");
  Vec eta_rhs = ctx.ops.M_gamma * f.eta;
  apply_constraints_rhs(eta_rhs, layout.interface_constrained);
  s.eta = mass.solve(eta_rhs);
  for (int k = 0; k < layout.n_i; ++k)
    if (layout.interface_constrained[k]) s.eta[k] = 0.0;
  return s;
}

SplitState make_initial_state(const SplitContext& ctx, const RunConfig& cfg) {
  const DofLayout& layout = ctx.layout;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Zero: {
      SplitState s;
      s.stage = Stage::Whole;
      s.step_index = 0;
      s.u = Vec::Zero(2 * layout.n_u);
      s.p = Vec::Zero(layout.n_p);
      s.eta = Vec::Zero(layout.n_i);
      s.v = Vec::Zero(layout.n_i);
      return s;
    }
    case InitialSpec::Kind::Bump:
      return project_initial(
          ctx, bump_fields(ctx.fmesh, ctx.imesh, layout, cfg.initial.amplitude));
    case InitialSpec::Kind::File:
      return project_initial(ctx,
                             file_fields(cfg.initial.path, ctx.fmesh, layout));
    case InitialSpec::Kind::Random: {
      // Coefficients drawn directly in the discrete spaces; constrained
      // entries stay zero and the interface velocity is the u_r trace.
      SplitState s;
      s.stage = Stage::Whole;
      s.step_index = 0;
      s.p = Vec::Zero(layout.n_p);
      s.u = Vec::Zero(2 * layout.n_u);
      const double amp = cfg.initial.amplitude;
      for (int i = 0; i < 2 * layout.n_u; ++i)
        if (!layout.u_constrained[i])
          s.u[i] = amp * keyed_normal(cfg.initial.seed, 0, kPurposeInitial, 0,
                                      static_cast<std::uint32_t>(i));
      s.eta = Vec::Zero(layout.n_i);
      for (int k = 0; k < layout.n_i; ++k)
        if (!layout.interface_constrained[k])
          s.eta[k] =
              amp * keyed_normal(cfg.initial.seed, 0, kPurposeInitial, 0,
                                 static_cast<std::uint32_t>(2 * layout.n_u + k));
      s.v = extract_trace(layout, s.u);
      return s;
    }
  }
  throw ConfigError("unknown initial-data kind");
}

}  // namespace

double average_pressure(const PressureSignal& sig, int n, double dt) {
  const double a = n * dt, b = a + dt;
  switch (sig.kind) {
    case PressureSignal::Kind::Constant:
      return sig.value;
    case PressureSignal::Kind::Table:
      return table_integral(sig, a, b) / dt;
    case PressureSignal::Kind::Sine: {
      if (sig.frequency == 0.0)
        return sig.offset + sig.amplitude * std::sin(sig.phase);
      const double w = 2.0 * M_PI * sig.frequency;
      const double integral =
          sig.offset * dt + sig.amplitude *
                                (std::cos(w * a + sig.phase) -
                                 std::cos(w * b + sig.phase)) /
                                w;
      return integral / dt;
    }
  }
  throw ConfigError("unknown pressure signal kind");
}

SpMat build_coupled_saddle(const FluidOperators& ops, const DofLayout& layout,
                           double visc_coeff, double preg) {
  const int nu2 = 2 * layout.n_u;
  const int n_sys = layout.n_sys();
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(ops.M_f.nonZeros()) +
             ops.A_visc.nonZeros() + 2 * ops.B_div.nonZeros() +
             ops.M_gamma.nonZeros() + layout.n_p);

  for (int k = 0; k < ops.M_f.outerSize(); ++k)
    for (SpMat::InnerIterator it(ops.M_f, k); it; ++it)
      ts.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                      it.value());
  if (visc_coeff != 0.0)
    for (int k = 0; k < ops.A_visc.outerSize(); ++k)
      for (SpMat::InnerIterator it(ops.A_visc, k); it; ++it)
        ts.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                        visc_coeff * it.value());
  for (int k = 0; k < ops.M_gamma.outerSize(); ++k)
    for (SpMat::InnerIterator it(ops.M_gamma, k); it; ++it)
      ts.emplace_back(layout.trace_ur_dof(static_cast<int>(it.row())),
                      layout.trace_ur_dof(static_cast<int>(it.col())),
                      it.value());
  for (int k = 0; k < ops.B_div.outerSize(); ++k)
    for (SpMat::InnerIterator it(ops.B_div, k); it; ++it) {
      const int pi = static_cast<int>(it.row());
      const int uj = static_cast<int>(it.col());
      ts.emplace_back(uj, nu2 + pi, -it.value());
      ts.emplace_back(nu2 + pi, uj, -it.value());
    }
  if (preg != 0.0)
    for (int i = 0; i < layout.n_p; ++i)
      ts.emplace_back(nu2 + i, nu2 + i, -preg);

  SpMat S(n_sys, n_sys);
  S.setFromTriplets(ts.begin(), ts.end());
  S.makeCompressed();

  std::vector<char> mask(n_sys, 0);
  for (int i = 0; i < nu2; ++i) mask[i] = layout.u_constrained[i];
  return apply_constraints(S, mask);
}

SplitContext make_split_context(const RunConfig& cfg) {
  SplitContext ctx;
  auto meshes = build_meshes(cfg.nz, cfg.nr, cfg.L, cfg.R);
  ctx.fmesh = std::move(meshes.first);
  ctx.imesh = std::move(meshes.second);
  ctx.layout = build_dof_layout(ctx.fmesh, ctx.imesh);
  ctx.ops = assemble_fluid(ctx.fmesh, ctx.imesh, ctx.layout, cfg.mu);
  ctx.L = cfg.L;
  ctx.R = cfg.R;
  ctx.mu = cfg.mu;
  ctx.T = cfg.T;
  ctx.N = cfg.N;
  ctx.dt = cfg.dt();
  ctx.pressure_regularization = cfg.solver.pressure_regularization;

  const SpMat Ss = ctx.ops.M_s + (ctx.dt * ctx.dt) * ctx.ops.K_s;
  ctx.structure_fac.emplace(Ss, "structure");
  const SpMat Sf = build_coupled_saddle(ctx.ops, ctx.layout, ctx.dt,
                                        ctx.pressure_regularization);
  ctx.fluid_fac.emplace(Sf, "fluid");
  ctx.initial_state = make_initial_state(ctx, cfg);
  return ctx;
}

SplitState structure_step(const SplitContext& ctx, const SplitState& state) {
  check_stage(state, Stage::Whole, "structure_step");
  SplitState out = state;
  const Vec rhs = ctx.ops.M_s * (state.eta + ctx.dt * state.v);
  Vec eta13 = ctx.structure_fac->solve(rhs);
  for (int k = 0; k < ctx.layout.n_i; ++k)
    if (ctx.layout.interface_constrained[k]) eta13[k] = 0.0;
  out.v = (eta13 - state.eta) / ctx.dt;
  out.eta = std::move(eta13);
  out.stage = Stage::AfterStructure;
  return out;
}

SplitState stochastic_step(const SplitContext& ctx, const SplitState& state,
                           double dW) {
  check_stage(state, Stage::AfterStructure, "stochastic_step");
  SplitState out = state;
  out.v_free = state.v;
  out.v_free.array() += dW;
  (void)ctx;
  out.stage = Stage::AfterNoise;
  return out;
}

SplitState fluid_step(const SplitContext& ctx, const SplitState& state,
                      double p_in, double p_out) {
  check_stage(state, Stage::AfterNoise, "fluid_step");
  const DofLayout& layout = ctx.layout;
  const int nu2 = 2 * layout.n_u;

  Vec rhs = Vec::Zero(layout.n_sys());
  rhs.head(nu2) = ctx.ops.M_f * state.u;
  add_interface_load(layout, ctx.ops.M_gamma, state.v_free, rhs);
  rhs.head(nu2) += (ctx.dt * p_in) * ctx.ops.b_in;
  rhs.head(nu2) -= (ctx.dt * p_out) * ctx.ops.b_out;
  for (int i = 0; i < nu2; ++i)
    if (layout.u_constrained[i]) rhs[i] = 0.0;

  const Vec sol = ctx.fluid_fac->solve(rhs);
  SplitState out;
  out.u = sol.head(nu2);
  out.p = sol.tail(layout.n_p) / ctx.dt;
  out.eta = state.eta;
  out.v = extract_trace(layout, out.u);
  out.stage = Stage::Whole;
  out.step_index = state.step_index + 1;

  const double div_resid = (ctx.ops.B_div * out.u).lpNorm<Eigen::Infinity>();
  const double allowed =
      (1e-10 + ctx.pressure_regularization) * std::max(1.0, rhs.norm());
  if (!(div_resid <= allowed))
    throw RuntimeFailure("fluid_step: divergence residual " +
                         std::to_string(div_resid) + " exceeds tolerance");
  return out;
}

StepStates full_step(const SplitContext& ctx, const SplitState& state,
                     double dW, double p_in, double p_out) {
  StepStates s;
  s.after_structure = structure_step(ctx, state);
  s.after_noise = stochastic_step(ctx, s.after_structure, dW);
  s.after_fluid = fluid_step(ctx, s.after_noise, p_in, p_out);
  return s;
}

Trajectory run_path(const SplitContext& ctx, const RunConfig& cfg,
                    const BrownianPath& path) {
  if (path.N != ctx.N)
    throw ConfigError("run_path: path step count differs from config");
  if (path.T != ctx.T)
    throw ConfigError("run_path: path horizon differs from config");

  Trajectory traj;
  traj.N = ctx.N;
  traj.T = ctx.T;
  traj.dt = ctx.dt;
  traj.L = ctx.L;
  traj.u.reserve(ctx.N + 1);
  traj.eta.reserve(ctx.N + 1);
  traj.v.reserve(ctx.N + 1);
  traj.v13.reserve(ctx.N);
  traj.v23.reserve(ctx.N);
  traj.p.reserve(ctx.N);
  traj.dW.reserve(ctx.N);
  traj.p_in.reserve(ctx.N);
  traj.p_out.reserve(ctx.N);

  SplitState state = ctx.initial_state;
  traj.u.push_back(state.u);
  traj.eta.push_back(state.eta);
  traj.v.push_back(state.v);

  for (int n = 0; n < ctx.N; ++n) {
    const double dW = path.dw[n];
    const double pin = average_pressure(cfg.pressure_in, n, ctx.dt);
    const double pout = average_pressure(cfg.pressure_out, n, ctx.dt);
    StepStates s = full_step(ctx, state, dW, pin, pout);
    traj.v13.push_back(s.after_structure.v);
    traj.v23.push_back(s.after_noise.v_free);
    traj.u.push_back(s.after_fluid.u);
    traj.eta.push_back(s.after_fluid.eta);
    traj.v.push_back(s.after_fluid.v);
    traj.p.push_back(s.after_fluid.p);
    traj.dW.push_back(dW);
    traj.p_in.push_back(pin);
    traj.p_out.push_back(pout);
    state = std::move(s.after_fluid);
  }
  return traj;
}

Trajectory run_path(const RunConfig& cfg, const BrownianPath& path) {
  const SplitContext ctx = make_split_context(cfg);
  return run_path(ctx, cfg, path);
}

}  // namespace sfsim
