// SPDX-License-Identifier: Apache-2.0

#include "core/energetics.hpp"

#include <cmath>

namespace sfsim {

namespace {

double sq_norm(const SpMat& M, const Vec& x) { return quad_form(M, x, x); }

double relative(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double structure_residual(const FluidOperators& ops, const Vec& u,
                          const Vec& eta0, const Vec& v0, const Vec& eta13,
                          const Vec& v13) {
  const double E0 = 0.5 * (sq_norm(ops.M_f, u) + sq_norm(ops.M_gamma, v0) +
                           sq_norm(ops.K_gamma, eta0));
  const double E13 = 0.5 * (sq_norm(ops.M_f, u) + sq_norm(ops.M_gamma, v13) +
                            sq_norm(ops.K_gamma, eta13));
  const double lhs = E13 + 0.5 * sq_norm(ops.M_gamma, v13 - v0) +
                     0.5 * sq_norm(ops.K_gamma, eta13 - eta0);
  return relative(lhs, E0);
}

double stochastic_residual(const FluidOperators& ops, const Vec& u,
                           const Vec& eta13, const Vec& v13, const Vec& v23,
                           double dW, double L) {
  const double E13 = 0.5 * (sq_norm(ops.M_f, u) + sq_norm(ops.M_gamma, v13) +
                            sq_norm(ops.K_gamma, eta13));
  const double E23 = 0.5 * (sq_norm(ops.M_f, u) + sq_norm(ops.M_gamma, v23) +
                            sq_norm(ops.K_gamma, eta13));
  const double rhs = E13 + dW * ops.ones_gamma.dot(v13) + 0.5 * L * dW * dW;
  return relative(E23, rhs);
}

double fluid_residual(const FluidOperators& ops, double dt, const Vec& u0,
                      const Vec& v23, const Vec& eta13, const Vec& u1,
                      const Vec& v1, double p_in, double p_out) {
  const double E23 = 0.5 * (sq_norm(ops.M_f, u0) + sq_norm(ops.M_gamma, v23) +
                            sq_norm(ops.K_gamma, eta13));
  const double E1 = 0.5 * (sq_norm(ops.M_f, u1) + sq_norm(ops.M_gamma, v1) +
                           sq_norm(ops.K_gamma, eta13));
  const double lhs = E1 + dt * quad_form(ops.A_visc, u1, u1) +
                     0.5 * sq_norm(ops.M_f, u1 - u0) +
                     0.5 * sq_norm(ops.M_gamma, v1 - v23);
  const double rhs =
      E23 + dt * (p_in * ops.b_in.dot(u1) - p_out * ops.b_out.dot(u1));
  return relative(lhs, rhs);
}

}  // namespace

double discrete_energy(const FluidOperators& ops, const Vec& u, const Vec& v,
                       const Vec& eta) {
  return 0.5 * (sq_norm(ops.M_f, u) + sq_norm(ops.M_gamma, v) +
                sq_norm(ops.K_gamma, eta));
}

double discrete_energy(const SplitState& state, const FluidOperators& ops) {
  const Vec& v = state.stage == Stage::AfterNoise ? state.v_free : state.v;
  return discrete_energy(ops, state.u, v, state.eta);
}

double discrete_dissipation(const Vec& u, double dt,
                            const FluidOperators& ops) {
  // A_visc carries the factor 2 mu, so half its quadratic form times dt
  // is dt * mu * int |D(u)|^2.
  return 0.5 * dt * quad_form(ops.A_visc, u, u);
}

double check_step_identity(IdentityKind kind, const SplitState& before,
                           const SplitState& after, const FluidOperators& ops,
                           const StepInputs& inputs) {
  switch (kind) {
    case IdentityKind::Structure:
      if (before.stage != Stage::Whole || after.stage != Stage::AfterStructure)
        throw RuntimeFailure("check_step_identity: structure stage mismatch");
      return structure_residual(ops, before.u, before.eta, before.v, after.eta,
                                after.v);
    case IdentityKind::Stochastic:
      if (before.stage != Stage::AfterStructure ||
          after.stage != Stage::AfterNoise)
        throw RuntimeFailure("check_step_identity: stochastic stage mismatch");
      return stochastic_residual(ops, before.u, before.eta, before.v,
                                 after.v_free, inputs.dW, inputs.L);
    case IdentityKind::Fluid:
      if (before.stage != Stage::AfterNoise || after.stage != Stage::Whole)
        throw RuntimeFailure("check_step_identity: fluid stage mismatch");
      return fluid_residual(ops, inputs.dt, before.u, before.v_free,
                            before.eta, after.u, after.v, inputs.p_in,
                            inputs.p_out);
  }
  throw RuntimeFailure("check_step_identity: unknown kind");
}

EnergyLedger build_energy_ledger(const Trajectory& traj,
                                 const FluidOperators& ops) {
  EnergyLedger ledger;
  ledger.steps.reserve(traj.N);
  ledger.E_initial =
      discrete_energy(ops, traj.u[0], traj.v[0], traj.eta[0]);
  ledger.max_energy = ledger.E_initial;
  ledger.init_norm_v = std::sqrt(sq_norm(ops.M_gamma, traj.v[0]));
  ledger.init_norm_grad_eta = std::sqrt(sq_norm(ops.K_gamma, traj.eta[0]));
  ledger.init_norm_u = std::sqrt(sq_norm(ops.M_f, traj.u[0]));

  for (int n = 0; n < traj.N; ++n) {
    StepRecord rec;
    rec.n = n;
    const Vec& u0 = traj.u[n];
    const Vec& u1 = traj.u[n + 1];
    const Vec& eta0 = traj.eta[n];
    const Vec& eta13 = traj.eta[n + 1];  // eta is updated by the structure
    const Vec& v0 = traj.v[n];
    const Vec& v13 = traj.v13[n];
    const Vec& v23 = traj.v23[n];
    const Vec& v1 = traj.v[n + 1];
    rec.dW = traj.dW[n];

    rec.E0 = discrete_energy(ops, u0, v0, eta0);
    rec.E13 = discrete_energy(ops, u0, v13, eta13);
    rec.E23 = discrete_energy(ops, u0, v23, eta13);
    rec.E1 = discrete_energy(ops, u1, v1, eta13);
    rec.D = discrete_dissipation(u1, traj.dt, ops);

    rec.dv13_sq = sq_norm(ops.M_gamma, v13 - v0);
    rec.deta_grad_sq = sq_norm(ops.K_gamma, eta13 - eta0);
    rec.dv23_sq = sq_norm(ops.M_gamma, v23 - v13);
    rec.du_sq = sq_norm(ops.M_f, u1 - u0);
    rec.dv1_sq = sq_norm(ops.M_gamma, v1 - v23);
    rec.work_boundary = traj.dt * (traj.p_in[n] * ops.b_in.dot(u1) -
                                   traj.p_out[n] * ops.b_out.dot(u1));
    rec.work_stoch = rec.dW * ops.ones_gamma.dot(v13);

    rec.res_structure =
        structure_residual(ops, u0, eta0, v0, eta13, v13);
    rec.res_stochastic =
        stochastic_residual(ops, u0, eta13, v13, v23, rec.dW, traj.L);
    rec.res_fluid = fluid_residual(ops, traj.dt, u0, v23, eta13, u1, v1,
                                   traj.p_in[n], traj.p_out[n]);

    rec.norm_v13 = std::sqrt(sq_norm(ops.M_gamma, v13));
    rec.norm_v23 = std::sqrt(sq_norm(ops.M_gamma, v23));
    rec.norm_v1 = std::sqrt(sq_norm(ops.M_gamma, v1));
    rec.norm_grad_eta = std::sqrt(sq_norm(ops.K_gamma, eta13));
    rec.norm_u0 = std::sqrt(sq_norm(ops.M_f, u0));
    rec.norm_u1 = std::sqrt(sq_norm(ops.M_f, u1));

    ledger.max_energy = std::max(
        {ledger.max_energy, rec.E0, rec.E13, rec.E23, rec.E1});
    ledger.max_step_residual =
        std::max({ledger.max_step_residual, rec.res_structure,
                  rec.res_stochastic, rec.res_fluid});
    ledger.steps.push_back(rec);
  }
  ledger.E_final = ledger.steps.empty() ? ledger.E_initial
                                        : ledger.steps.back().E1;
  ledger.summed_residual = check_summed_identity(traj, ops);
  return ledger;
}

double check_summed_identity(const Trajectory& traj,
                             const FluidOperators& ops) {
  const double E0 =
      discrete_energy(ops, traj.u[0], traj.v[0], traj.eta[0]);
  double lhs = discrete_energy(ops, traj.u[traj.N], traj.v[traj.N],
                               traj.eta[traj.N]);
  double rhs = E0;
  for (int n = 0; n < traj.N; ++n) {
    const Vec& u1 = traj.u[n + 1];
    lhs += traj.dt * quad_form(ops.A_visc, u1, u1);
    lhs += 0.5 * (sq_norm(ops.M_gamma, traj.v13[n] - traj.v[n]) +
                  sq_norm(ops.K_gamma, traj.eta[n + 1] - traj.eta[n]) +
                  sq_norm(ops.M_f, u1 - traj.u[n]) +
                  sq_norm(ops.M_gamma, traj.v[n + 1] - traj.v23[n]));
    rhs += traj.dW[n] * ops.ones_gamma.dot(traj.v13[n]) +
           0.5 * traj.L * traj.dW[n] * traj.dW[n];
    rhs += traj.dt * (traj.p_in[n] * ops.b_in.dot(u1) -
                      traj.p_out[n] * ops.b_out.dot(u1));
  }
  return relative(lhs, rhs);
}

}  // namespace sfsim
