// SPDX-License-Identifier: Apache-2.0
//
// Discrete energy bookkeeping.  The scheme satisfies one exact energy
// identity per substep, pathwise:
//
//   structure:  E13 + 1/2|v13 - v|_M^2 + 1/2|grad(eta13 - eta)|_K^2 = E
//   stochastic: E23 = E13 + dW * int_G v13 + (L/2) dW^2
//   fluid:      E1 + dt u1'A_visc u1 + 1/2|u1 - u|_M^2
//                  + 1/2|v1 - v23|_M^2 = E23 + dt (Pin b_in - Pout b_out)'u1
//
// with E = 1/2 (u'M_f u + v'M_gamma v + eta'K_gamma eta).  Residuals are
// reported relative to max(1, |RHS|).  All quantities use the raw
// (unconstrained) matrices; constrained entries are zero by invariant,
// so the identities are exact up to solver tolerance.

#pragma once

#include <vector>

#include "core/assembly.hpp"
#include "core/splitting.hpp"
#include "core/types.hpp"

namespace sfsim {

// E = 1/2 (u'M_f u + v'M_gamma v + eta'K_gamma eta); at stage AfterNoise
// the unconstrained v_free carries the interface velocity.
double discrete_energy(const SplitState& state, const FluidOperators& ops);

// Same energy from bare coefficient vectors.
double discrete_energy(const FluidOperators& ops, const Vec& u, const Vec& v,
                       const Vec& eta);

// Fluid dissipation of one step: dt * mu * int |D(u)|^2 dx.
double discrete_dissipation(const Vec& u, double dt, const FluidOperators& ops);

// Inputs of the step the two states straddle.
struct StepInputs {
  double dt = 0.0;
  double dW = 0.0;
  double p_in = 0.0;
  double p_out = 0.0;
  double L = 0.0;  // interface length, the coefficient of dW^2/2
};

enum class IdentityKind { Structure, Stochastic, Fluid };

// Relative residual |LHS - RHS| / max(1, |RHS|) of the energy identity
// for one substep.  Throws RuntimeFailure if the stages do not match
// the requested kind.
double check_step_identity(IdentityKind kind, const SplitState& before,
                           const SplitState& after, const FluidOperators& ops,
                           const StepInputs& inputs);

// Per-step record of every energy, increment, and work term.
struct StepRecord {
  int n = 0;
  double E0 = 0, E13 = 0, E23 = 0, E1 = 0;
  double D = 0;  // mu dt int |D(u^{n+1})|^2
  double dv13_sq = 0;       // |v13 - v|_M^2
  double deta_grad_sq = 0;  // |grad(eta13 - eta)|_K^2
  double dv23_sq = 0;       // |v23 - v13|_M^2
  double du_sq = 0;         // |u1 - u|_M^2
  double dv1_sq = 0;        // |v1 - v23|_M^2
  double work_boundary = 0;  // dt (Pin b_in - Pout b_out)' u1
  double work_stoch = 0;     // dW * ones' v13
  double dW = 0;
  double res_structure = 0, res_stochastic = 0, res_fluid = 0;
  // Stage norms for the trajectory dump: |v|_M, |grad eta|_K, |u|_M.
  double norm_v13 = 0, norm_v23 = 0, norm_v1 = 0;
  double norm_grad_eta = 0;  // at eta^{n+1} = eta^{n+1/3}
  double norm_u0 = 0, norm_u1 = 0;
};

struct EnergyLedger {
  std::vector<StepRecord> steps;
  double E_initial = 0;
  double E_final = 0;
  double init_norm_v = 0, init_norm_grad_eta = 0, init_norm_u = 0;
  double max_energy = 0;         // over every stage of every step
  double max_step_residual = 0;  // over the three identities, all steps
  double summed_residual = 0;    // residual of the telescoped balance
};

// Builds the complete ledger of a trajectory, including all residuals.
EnergyLedger build_energy_ledger(const Trajectory& traj,
                                 const FluidOperators& ops);

// Relative residual of the summed (telescoped) energy balance over the
// whole trajectory.
double check_summed_identity(const Trajectory& traj,
                             const FluidOperators& ops);

}  // namespace sfsim
