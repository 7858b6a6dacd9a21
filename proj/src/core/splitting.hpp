// SPDX-License-Identifier: Apache-2.0
//
// Time-splitting scheme for the coupled fluid-membrane model.  Each step
// of size dt advances through three subproblems in a fixed order:
//
//   1. structure: implicit wave-equation update of (eta, v), fluid frozen;
//   2. stochastic: v <- v + dW at every interface node, eta and u frozen;
//   3. fluid: monolithic implicit solve for (u, p) with the interface
//      velocity as part of the unknown, eta frozen.
//
// The order is fixed; it is what makes the noise enter with a predictable
// integrand and gives each substep an exact discrete energy identity.

#pragma once

#include <optional>
#include <vector>

#include "core/assembly.hpp"
#include "core/geometry.hpp"
#include "core/linsolve.hpp"
#include "core/noise.hpp"
#include "core/types.hpp"

namespace sfsim {

struct RunConfig;

// Stage of the splitting within one step.  Whole means the state sits at
// a grid time t_n with all couplings restored; the other two label the
// intermediate thirds.
enum class Stage { Whole, AfterStructure, AfterNoise };

// One time level of the scheme.  The interface velocity v lives in the
// endpoint-constrained space except right after the stochastic substep,
// where the unconstrained copy v_free carries the noise at every node.
// At Whole stages the u_r trace entries on the interface equal v exactly.
struct SplitState {
  Vec u;       // fluid velocity coefficients, both components
  Vec p;       // pressure from the most recent fluid solve
  Vec eta;     // membrane displacement, zero at the endpoints
  Vec v;       // membrane velocity, zero at the endpoints
  Vec v_free;  // unconstrained membrane velocity at stage AfterNoise
  Stage stage = Stage::Whole;
  int step_index = 0;
};

// Inlet or outlet pressure as a function of time: a constant, a table
// with linear interpolation, or a sinusoid.  Step averages are computed
// in closed form so the scheme sees the exact interval mean.
struct PressureSignal {
  enum class Kind { Constant, Table, Sine };
  Kind kind = Kind::Constant;
  double value = 0.0;                 // Constant
  std::vector<double> times, values;  // Table, times strictly increasing
  double offset = 0.0, amplitude = 0.0, frequency = 0.0,
         phase = 0.0;  // Sine: offset + amplitude sin(2 pi f t + phase)
};

// (1/dt) * integral of the signal over [n dt, (n+1) dt], exact for every
// supported kind.
double average_pressure(const PressureSignal& sig, int n, double dt);

// Everything a path needs that depends only on (config minus noise):
// meshes, operators, the two factorizations, and the initial state.
// Shared read-only between threads; build one per worker when running
// ensembles so bit-reproducibility never depends on sharing.
struct SplitContext {
  FluidMesh fmesh;
  InterfaceMesh imesh;
  DofLayout layout;
  FluidOperators ops;
  double L = 0, R = 0, mu = 0, T = 0, dt = 0;
  int N = 0;
  double pressure_regularization = 0.0;
  std::optional<SpdFactorization> structure_fac;  // M_s + dt^2 K_s
  std::optional<LuFactorization> fluid_fac;       // coupled saddle system
  SplitState initial_state;
};

SplitContext make_split_context(const RunConfig& cfg);

// Assembles the coupled saddle matrix
//   [ Mhat + visc_coeff A_visc   -B^T ]
//   [ -B                         -preg I ]
// where Mhat adds the interface mass into the u_r trace rows/columns,
// with essential velocity constraints eliminated symmetrically.  Used
// with visc_coeff = dt for the fluid substep and visc_coeff = 0 for the
// initial-data projection.
SpMat build_coupled_saddle(const FluidOperators& ops, const DofLayout& layout,
                           double visc_coeff, double preg);

// The three substeps.  Each checks the incoming stage and throws
// RuntimeFailure on a mismatch.
SplitState structure_step(const SplitContext& ctx, const SplitState& state);
SplitState stochastic_step(const SplitContext& ctx, const SplitState& state,
                           double dW);
SplitState fluid_step(const SplitContext& ctx, const SplitState& state,
                      double p_in, double p_out);

// One full step; returns the three post-substep states in order.
struct StepStates {
  SplitState after_structure;
  SplitState after_noise;
  SplitState after_fluid;
};
StepStates full_step(const SplitContext& ctx, const SplitState& state,
                     double dW, double p_in, double p_out);

// Complete record of one path: coefficients of every stage the analysis
// needs, plus the step inputs that produced them.
struct Trajectory {
  int N = 0;
  double T = 0, dt = 0, L = 0;
  std::vector<Vec> u;        // N+1 whole-step velocities
  std::vector<Vec> eta;      // N+1 displacements
  std::vector<Vec> v;        // N+1 interface velocities
  std::vector<Vec> v13;      // N post-structure velocities
  std::vector<Vec> v23;      // N post-noise velocities (unconstrained)
  std::vector<Vec> p;        // N pressures, p[n] from step n's fluid solve
  std::vector<double> dW;    // N increments
  std::vector<double> p_in;  // N step-averaged inlet pressures
  std::vector<double> p_out;
};

// Advances the initial state through all N steps of the given path.
// The context must have been built from the same config.
Trajectory run_path(const SplitContext& ctx, const RunConfig& cfg,
                    const BrownianPath& path);

// Convenience overload that builds a fresh context.
Trajectory run_path(const RunConfig& cfg, const BrownianPath& path);

}  // namespace sfsim
