// SPDX-License-Identifier: Apache-2.0
//
// Path ensembles and coupled-step convergence studies.  Paths are
// distributed over a worker pool; every batch of results is reduced in
// path-id order with pairwise summation, and each worker builds its own
// context, so the report is bit-identical for any thread count.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/energetics.hpp"
#include "core/noise.hpp"
#include "core/splitting.hpp"
#include "core/types.hpp"

namespace sfsim {

// Sum with a fixed pairwise reduction order (split halves recursively);
// depends only on the operand order, never on thread scheduling.
double pairwise_sum(const std::vector<double>& xs);

// Mean and standard error (sample standard deviation / sqrt(n)).
// Requires at least two samples.
struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanStderr estimate_expectation(const std::vector<double>& samples);

// Scalar outcome of one path: everything the ensemble statistics and
// the acceptance gates need, with trajectories discarded.
struct PathSummary {
  double max_energy = 0;      // max over all stages of all steps
  double final_energy = 0;
  double sum_dissipation = 0;  // sum of mu dt int |D(u^{n+1})|^2
  double sum_dv13_sq = 0;      // sum |v13 - v|^2
  double sum_deta_grad_sq = 0;
  double sum_dv23_sq = 0;  // sum |v23 - v13|^2; expectation is L*T
  double sum_du_sq = 0;
  double sum_dv1_sq = 0;
  double vstar_quantity = 0;  // dt * sum |v13 - v|^2
  double stoch_work = 0;
  double boundary_work = 0;
  double holder = 0;  // 1/4-Hoelder quotient of the driving path
  double w_terminal = 0;
  double res_structure = 0, res_stochastic = 0, res_fluid = 0;
  double res_summed = 0;
};

PathSummary summarize_path(const Trajectory& traj, const BrownianPath& path,
                           const FluidOperators& ops);

// Full ensemble outcome.  Per-path summaries are kept (ordered by path
// id) so statistics can be recomputed and reductions stay deterministic;
// the first path's trajectory and driving noise are retained for the
// ledger dump.
struct McReport {
  RunConfig config;
  std::vector<PathSummary> paths;
  Trajectory first_trajectory;
  EnergyLedger first_ledger;
  BrownianPath first_path;
  double elapsed_seconds = 0.0;
  int threads = 1;

  std::vector<double> samples_of(double PathSummary::*member) const;
};

// Runs config.n_paths paths with the configured noise and initial data.
// Any path failure aborts the ensemble, reporting (seed, path_id).
McReport run_ensemble(const RunConfig& cfg);

// Generates the driving path for one ensemble member (Brownian or zero
// according to the config).
BrownianPath make_driving_path(const RunConfig& cfg, std::uint64_t path_id);

// One row of the coupled-refinement convergence table: the same
// Brownian path drives runs with N and 2N steps on the same mesh.
struct ConvergenceLevel {
  int N_coarse = 0;
  int N_fine = 0;
  MeanStderr u_diff_sq;    // E |u_N - u_2N|^2 over L2(0,T; L2)
  MeanStderr v_diff_sq;
  MeanStderr eta_diff_sq;
  MeanStderr vstar_quantity;  // E[dt sum |v13 - v|^2] at the coarse N
};

struct ConvergenceReport {
  RunConfig config;
  int n_paths = 0;
  std::vector<ConvergenceLevel> levels;
  double elapsed_seconds = 0.0;
  int threads = 1;
};

// Runs `levels` coupled comparisons starting from config.N, doubling
// each time; uses config.converge.n_paths paths.
ConvergenceReport convergence_study(const RunConfig& cfg, int levels);

}  // namespace sfsim
