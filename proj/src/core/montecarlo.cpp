// SPDX-License-Identifier: Apache-2.0

#include "core/montecarlo.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "core/reconstruct.hpp"

namespace sfsim {

namespace {

double pairwise_sum_range(const double* xs, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xs[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(xs, half) + pairwise_sum_range(xs + half, n - half);
}

// Runs `body(i)` for i in [0, count) on `threads` workers pulling from a
// shared counter.  The first exception wins and is rethrown after join.
void parallel_for(int count, int threads,
                  const std::function<void(int, int)>& body) {
  const int n_workers = std::max(1, std::min(threads, count));
  if (n_workers == 1) {
    for (int i = 0; i < count; ++i) body(i, 0);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum_range(xs.data(), xs.size());
}

MeanStderr estimate_expectation(const std::vector<double>& samples) {
  if (samples.size() < 2)
    throw ConfigError("estimate_expectation: need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

PathSummary summarize_path(const Trajectory& traj, const BrownianPath& path,
                           const FluidOperators& ops) {
  const EnergyLedger ledger = build_energy_ledger(traj, ops);
  PathSummary s;
  s.max_energy = ledger.max_energy;
  s.final_energy = ledger.E_final;
  for (const StepRecord& rec : ledger.steps) {
    s.sum_dissipation += rec.D;
    s.sum_dv13_sq += rec.dv13_sq;
    s.sum_deta_grad_sq += rec.deta_grad_sq;
    s.sum_dv23_sq += rec.dv23_sq;
    s.sum_du_sq += rec.du_sq;
    s.sum_dv1_sq += rec.dv1_sq;
    s.stoch_work += rec.work_stoch;
    s.boundary_work += rec.work_boundary;
    s.res_structure = std::max(s.res_structure, rec.res_structure);
    s.res_stochastic = std::max(s.res_stochastic, rec.res_stochastic);
    s.res_fluid = std::max(s.res_fluid, rec.res_fluid);
  }
  s.vstar_quantity = traj.dt * s.sum_dv13_sq;
  s.res_summed = ledger.summed_residual;
  s.holder = holder_quotient(path, 0.25);
  s.w_terminal = path.w[path.N];
  return s;
}

std::vector<double> McReport::samples_of(double PathSummary::*member) const {
  std::vector<double> out;
  out.reserve(paths.size());
  for (const PathSummary& p : paths) out.push_back(p.*member);
  return out;
}

BrownianPath make_driving_path(const RunConfig& cfg, std::uint64_t path_id) {
  if (cfg.noise.kind == NoiseSpec::Kind::Zero)
    return zero_path(cfg.N, cfg.T);
  return sample_path(cfg.seed, path_id, cfg.N, cfg.T);
}

McReport run_ensemble(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  McReport report;
  report.config = cfg;
  report.threads = cfg.threads;
  report.paths.resize(cfg.n_paths);

  // One context per worker: factorizations are deterministic, so every
  // worker holds bit-identical solvers and shares nothing mutable.
  const int n_workers = std::max(1, std::min(cfg.threads, cfg.n_paths));
  std::vector<SplitContext> contexts;
  contexts.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w)
    contexts.push_back(make_split_context(cfg));

  std::mutex first_mutex;
  try {
    parallel_for(cfg.n_paths, cfg.threads, [&](int i, int w) {
      const BrownianPath path =
          make_driving_path(cfg, static_cast<std::uint64_t>(i));
      const Trajectory traj = run_path(contexts[w], cfg, path);
      report.paths[i] =
          summarize_path(traj, path, contexts[w].ops);
      if (i == 0) {
        std::lock_guard<std::mutex> lock(first_mutex);
        report.first_trajectory = traj;
        report.first_ledger = build_energy_ledger(traj, contexts[w].ops);
        report.first_path = path;
      }
    });
  } catch (const std::exception& e) {
    throw RuntimeFailure("ensemble aborted (seed " + std::to_string(cfg.seed) +
                         "): " + e.what());
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

ConvergenceReport convergence_study(const RunConfig& cfg, int levels) {
  if (levels < 2) throw ConfigError("convergence_study: levels must be >= 2");
  const auto t_start = std::chrono::steady_clock::now();

  ConvergenceReport report;
  report.config = cfg;
  report.threads = cfg.threads;
  report.n_paths = cfg.converge.n_paths;

  // Step counts N, 2N, ..., N 2^levels; level j compares runs at index
  // j and j+1 driven by the same refined path.
  std::vector<RunConfig> level_cfgs(levels + 1, cfg);
  for (int j = 0; j <= levels; ++j) level_cfgs[j].N = cfg.N << j;

  const int n_paths = cfg.converge.n_paths;
  const int n_workers = std::max(1, std::min(cfg.threads, n_paths));
  std::vector<std::vector<SplitContext>> contexts(n_workers);
  for (int w = 0; w < n_workers; ++w)
    for (int j = 0; j <= levels; ++j)
      contexts[w].push_back(make_split_context(level_cfgs[j]));

  // samples[j][q][i]: level j, quantity q, path i.
  enum { kU, kV, kEta, kVstar, kNumQ };
  std::vector<std::array<std::vector<double>, kNumQ>> samples(levels);
  for (int j = 0; j < levels; ++j)
    for (int q = 0; q < kNumQ; ++q) samples[j][q].assign(n_paths, 0.0);

  parallel_for(n_paths, cfg.threads, [&](int i, int w) {
    std::vector<BrownianPath> paths;
    paths.reserve(levels + 1);
    paths.push_back(cfg.noise.kind == NoiseSpec::Kind::Zero
                        ? zero_path(cfg.N, cfg.T)
                        : sample_path(cfg.seed, static_cast<std::uint64_t>(i),
                                      cfg.N, cfg.T));
    for (int j = 1; j <= levels; ++j) {
      if (cfg.noise.kind == NoiseSpec::Kind::Zero)
        paths.push_back(zero_path(cfg.N << j, cfg.T));
      else
        paths.push_back(refine_path(paths[j - 1]));
    }

    std::vector<Trajectory> runs;
    runs.reserve(levels + 1);
    for (int j = 0; j <= levels; ++j)
      runs.push_back(run_path(contexts[w][j], level_cfgs[j], paths[j]));

    for (int j = 0; j < levels; ++j) {
      const Trajectory& coarse = runs[j];
      const Trajectory& fine = runs[j + 1];
      const TimeFunction fu = make_time_function(coarse, TfField::U,
                                                 TfKind::Lagged);
      const TimeFunction gu =
          make_time_function(fine, TfField::U, TfKind::Lagged);
      samples[j][kU][i] = l2_time_diff_sq(fu, gu, contexts[w][j].ops.M_f);
      const TimeFunction fv =
          make_time_function(coarse, TfField::V, TfKind::Lagged);
      const TimeFunction gv =
          make_time_function(fine, TfField::V, TfKind::Lagged);
      samples[j][kV][i] = l2_time_diff_sq(fv, gv, contexts[w][j].ops.M_gamma);
      const TimeFunction fe =
          make_time_function(coarse, TfField::Eta, TfKind::Lagged);
      const TimeFunction ge =
          make_time_function(fine, TfField::Eta, TfKind::Lagged);
      samples[j][kEta][i] =
          l2_time_diff_sq(fe, ge, contexts[w][j].ops.M_gamma);

      double dv13 = 0.0;
      for (int n = 0; n < coarse.N; ++n) {
        const Vec d = coarse.v13[n] - coarse.v[n];
        dv13 += quad_form(contexts[w][j].ops.M_gamma, d, d);
      }
      samples[j][kVstar][i] = coarse.dt * dv13;
    }
  });

  const auto estimate = [](const std::vector<double>& xs) -> MeanStderr {
    if (xs.size() == 1) return {xs[0], 0.0};
    return estimate_expectation(xs);
  };
  for (int j = 0; j < levels; ++j) {
    ConvergenceLevel lvl;
    lvl.N_coarse = cfg.N << j;
    lvl.N_fine = cfg.N << (j + 1);
    lvl.u_diff_sq = estimate(samples[j][kU]);
    lvl.v_diff_sq = estimate(samples[j][kV]);
    lvl.eta_diff_sq = estimate(samples[j][kEta]);
    lvl.vstar_quantity = estimate(samples[j][kVstar]);
    report.levels.push_back(lvl);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

}  // namespace sfsim
