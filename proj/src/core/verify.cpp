// SPDX-License-Identifier: Apache-2.0

#include "core/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "core/energetics.hpp"
#include "core/montecarlo.hpp"
#include "core/noise.hpp"
#include "core/quadrature.hpp"
#include "core/reconstruct.hpp"

namespace sfsim {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

CheckResult make_result(const std::string& name, bool passed,
                        const std::string& detail) {
  return CheckResult{name, passed, detail};
}

// Random vector in the essentially-constrained velocity space.
Vec random_constrained_u(const DofLayout& layout, std::uint64_t seed,
                         std::uint32_t tag) {
  Vec u = Vec::Zero(2 * layout.n_u);
  for (int i = 0; i < 2 * layout.n_u; ++i)
    if (!layout.u_constrained[i])
      u[i] = keyed_normal(seed, tag, kPurposeTest, 0,
                          static_cast<std::uint32_t>(i));
  return u;
}

RunConfig small_run_config(const RunConfig& base) {
  RunConfig cfg = base;
  cfg.nz = 4;
  cfg.nr = 4;
  cfg.N = 8;
  cfg.n_paths = 1;
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.amplitude = 1.0;
  cfg.initial.seed = base.seed;
  cfg.noise.kind = NoiseSpec::Kind::Brownian;
  cfg.pressure_in.kind = PressureSignal::Kind::Constant;
  cfg.pressure_in.value = 1.0;
  cfg.pressure_out.kind = PressureSignal::Kind::Sine;
  cfg.pressure_out.offset = 0.25;
  cfg.pressure_out.amplitude = 0.5;
  cfg.pressure_out.frequency = 1.5;
  cfg.pressure_out.phase = 0.3;
  return cfg;
}

CheckResult check_mesh_conformance() {
  const auto [fmesh, imesh] = build_meshes(4, 2, 1.0, 0.5);
  bool ok = fmesh.n_vnodes() == 45 && fmesh.n_pnodes() == 15 &&
            imesh.n_nodes() == 9 && fmesh.n_elems() == 8;
  // Top-edge coordinates must coincide bit-exactly with the interface.
  for (int k = 0; k < imesh.n_nodes(); ++k) {
    const int node = fmesh.vnode(k, fmesh.vny - 1);
    ok = ok && fmesh.vz[node] == imesh.z[k] && fmesh.vr[node] == 0.5;
  }
  return make_result("mesh_conformance", ok,
                     "4x2 mesh: 45 velocity nodes, 15 pressure nodes, 9 "
                     "interface nodes, trace coordinates coincide");
}

CheckResult check_dof_layout() {
  const auto [fmesh, imesh] = build_meshes(4, 2, 1.0, 0.5);
  const DofLayout layout = build_dof_layout(fmesh, imesh);
  int n_uz = 0, n_ur = 0;
  for (int n = 0; n < layout.n_u; ++n) {
    if (layout.u_constrained[layout.uz_dof(n)]) ++n_uz;
    if (layout.u_constrained[layout.ur_dof(n)]) ++n_ur;
  }
  // u_z pinned on the 9 interface nodes; u_r pinned on bottom (9) plus
  // the interior inlet/outlet columns (4 each).
  bool ok = n_uz == 9 && n_ur == 17;
  ok = ok && layout.n_i == 9 && layout.interface_constrained[0] &&
       layout.interface_constrained[8];
  for (int k = 0; k < layout.n_i; ++k)
    ok = ok && layout.trace_node[k] == fmesh.vnode(k, fmesh.vny - 1);
  std::ostringstream detail;
  detail << "constrained u_z=" << n_uz << " u_r=" << n_ur
         << ", trace map consistent";
  return make_result("dof_layout", ok, detail.str());
}

CheckResult check_quadrature_exactness() {
  double max_err = 0.0;
  for (int d = 0; d <= 5; ++d) {
    double approx = 0.0;
    for (int q = 0; q < Gauss3::n; ++q)
      approx += Gauss3::w[q] * std::pow(Gauss3::x[q], d);
    max_err = std::max(max_err, std::abs(approx - 1.0 / (d + 1)));
  }
  double deg6 = 0.0;
  for (int q = 0; q < Gauss3::n; ++q)
    deg6 += Gauss3::w[q] * std::pow(Gauss3::x[q], 6);
  const double defect = deg6 - 1.0 / 7.0;
  const bool ok =
      max_err <= 1e-15 && std::abs(defect - (-1.0 / 2800.0)) <= 1e-15;
  return make_result("quadrature_exactness", ok,
                     "degree<=5 error " + fmt(max_err) + ", degree-6 defect " +
                         fmt(defect));
}

CheckResult check_operator_symmetry() {
  const auto [fmesh, imesh] = build_meshes(4, 3, 1.2, 0.8);
  const DofLayout layout = build_dof_layout(fmesh, imesh);
  const FluidOperators ops = assemble_fluid(fmesh, imesh, layout, 0.7);
  auto asym = [](const SpMat& A) {
    const SpMat D = SpMat(A.transpose()) - A;
    double worst = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
      for (SpMat::InnerIterator it(D, k); it; ++it)
        worst = std::max(worst, std::abs(it.value()));
    return worst;
  };
  const double worst =
      std::max({asym(ops.M_v), asym(ops.M_f), asym(ops.A_visc),
                asym(ops.A_grad), asym(ops.A_divdiv), asym(ops.M_gamma),
                asym(ops.K_gamma)});
  return make_result("operator_symmetry", worst == 0.0,
                     "max |A - A'| over all symmetric forms = " + fmt(worst));
}

CheckResult check_mass_patch() {
  const double L = 1.5, R = 0.75;
  const auto [fmesh, imesh] = build_meshes(5, 3, L, R);
  const DofLayout layout = build_dof_layout(fmesh, imesh);
  const FluidOperators ops = assemble_fluid(fmesh, imesh, layout, 1.0);

  const Vec one_i = Vec::Ones(layout.n_i);
  const double mass_total = quad_form(ops.M_gamma, one_i, one_i);
  const double ones_total = ops.ones_gamma.dot(one_i);
  const double stiff_const = (ops.K_gamma * one_i).cwiseAbs().maxCoeff();

  Vec uz_one = Vec::Zero(2 * layout.n_u);
  for (int n = 0; n < layout.n_u; ++n) uz_one[layout.uz_dof(n)] = 1.0;
  const double area = quad_form(ops.M_f, uz_one, uz_one);
  const double flux_in = ops.b_in.dot(uz_one);
  const double flux_out = ops.b_out.dot(uz_one);

  // The linear field (z, -r) is exactly divergence free.
  Vec lin = Vec::Zero(2 * layout.n_u);
  for (int n = 0; n < layout.n_u; ++n) {
    lin[layout.uz_dof(n)] = fmesh.vz[n];
    lin[layout.ur_dof(n)] = -fmesh.vr[n];
  }
  const double div_resid = (ops.B_div * lin).cwiseAbs().maxCoeff();

  const bool ok = std::abs(mass_total - L) <= 1e-13 * L &&
                  std::abs(ones_total - L) <= 1e-13 * L &&
                  stiff_const <= 1e-12 && std::abs(area - L * R) <= 1e-13 &&
                  std::abs(flux_in - R) <= 1e-13 &&
                  std::abs(flux_out - R) <= 1e-13 && div_resid <= 1e-12;
  return make_result(
      "mass_patch_test", ok,
      "1'M1-L=" + fmt(mass_total - L) + " area err=" + fmt(area - L * R) +
          " flux err=" + fmt(flux_in - R) + " divfree resid=" + fmt(div_resid));
}

CheckResult check_korn_identity(std::uint64_t seed) {
  const auto [fmesh, imesh] = build_meshes(6, 4, 1.0, 1.0);
  const DofLayout layout = build_dof_layout(fmesh, imesh);
  const double mu = 1.0;
  const FluidOperators ops = assemble_fluid(fmesh, imesh, layout, mu);

  // Part 1: on the constrained space, twice the strain-rate energy
  // decomposes exactly into gradient plus divergence energies.
  double worst_decomp = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vec u = random_constrained_u(layout, seed, 1000 + t);
    const double lhs = quad_form(ops.A_visc, u, u) / mu;
    const double rhs =
        quad_form(ops.A_grad, u, u) + quad_form(ops.A_divdiv, u, u);
    worst_decomp =
        std::max(worst_decomp, std::abs(lhs - rhs) / std::max(1.0, rhs));
  }

  // Part 2: on discretely divergence-free fields the divergence term
  // drops and the equality 2 int|D(u)|^2 = int|grad u|^2 is exact.
  // Kernel basis from the constrained grad-div form.
  const SpMat Ac = apply_constraints(ops.A_divdiv, layout.u_constrained);
  const Mat dense = Mat(Ac);
  Eigen::SelfAdjointEigenSolver<Mat> eig(dense);
  const double lam_max = eig.eigenvalues().maxCoeff();
  std::vector<int> kernel;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()[i] <= 1e-13 * lam_max) kernel.push_back(i);

  double worst_equality = 0.0;
  if (kernel.empty()) {
    return make_result("korn_identity", false,
                       "no discrete divergence-free kernel found");
  }
  for (int t = 0; t < 100; ++t) {
    Vec u = Vec::Zero(2 * layout.n_u);
    for (std::size_t k = 0; k < kernel.size(); ++k)
      u += keyed_normal(seed, 2000 + t, kPurposeTest, 0,
                        static_cast<std::uint32_t>(k)) *
           eig.eigenvectors().col(kernel[k]);
    for (int i = 0; i < 2 * layout.n_u; ++i)
      if (layout.u_constrained[i]) u[i] = 0.0;
    const double twoD = quad_form(ops.A_visc, u, u) / mu;
    const double grad = quad_form(ops.A_grad, u, u);
    worst_equality =
        std::max(worst_equality, std::abs(twoD - grad) / std::max(1.0, grad));
  }
  const bool ok = worst_decomp <= 1e-12 && worst_equality <= 1e-12;
  return make_result("korn_identity", ok,
                     "decomposition rel err " + fmt(worst_decomp) +
                         ", divergence-free equality rel err " +
                         fmt(worst_equality) + ", kernel dim " +
                         std::to_string(kernel.size()));
}

CheckResult check_solver_residuals(std::uint64_t seed) {
  RunConfig cfg;
  cfg.nz = cfg.nr = 4;
  cfg.N = 8;
  const SplitContext ctx = make_split_context(cfg);

  double worst_spd = 0.0, worst_lu = 0.0;
  const SpMat Ss = ctx.ops.M_s + (ctx.dt * ctx.dt) * ctx.ops.K_s;
  const SpMat Sf = build_coupled_saddle(ctx.ops, ctx.layout, ctx.dt, 0.0);
  for (int t = 0; t < 20; ++t) {
    Vec b1(ctx.layout.n_i);
    for (int i = 0; i < b1.size(); ++i)
      b1[i] = keyed_normal(seed, 3000 + t, kPurposeTest, 0,
                           static_cast<std::uint32_t>(i));
    const Vec x1 = ctx.structure_fac->solve(b1);
    worst_spd = std::max(
        worst_spd, (Ss * x1 - b1).norm() / std::max(1.0, b1.norm()));

    Vec b2(ctx.layout.n_sys());
    for (int i = 0; i < b2.size(); ++i)
      b2[i] = keyed_normal(seed, 3100 + t, kPurposeTest, 0,
                           static_cast<std::uint32_t>(i));
    const Vec x2 = ctx.fluid_fac->solve(b2);
    worst_lu = std::max(worst_lu,
                        (Sf * x2 - b2).norm() / std::max(1.0, b2.norm()));
  }
  const bool ok = worst_spd <= 1e-12 && worst_lu <= 1e-10;
  return make_result("solver_residuals", ok,
                     "spd rel residual " + fmt(worst_spd) +
                         ", saddle rel residual " + fmt(worst_lu));
}

struct IdentityRun {
  RunConfig cfg;
  EnergyLedger ledger;
  Trajectory traj;
  SplitContext ctx;
};

IdentityRun make_identity_run(const RunConfig& base) {
  IdentityRun run{small_run_config(base), {}, {}, {}};
  run.ctx = make_split_context(run.cfg);
  run.traj = run_path(run.ctx, run.cfg, make_driving_path(run.cfg, 0));
  run.ledger = build_energy_ledger(run.traj, run.ctx.ops);
  return run;
}

CheckResult check_identity(const char* name, double resid, double tol) {
  return make_result(name, resid <= tol,
                     std::string("max relative residual ") + fmt(resid) +
                         " (tolerance " + fmt(tol) + ")");
}

CheckResult check_dissipativity(const RunConfig& base) {
  double worst = -1e300;
  for (int s = 0; s < 3; ++s) {
    RunConfig cfg = small_run_config(base);
    cfg.noise.kind = NoiseSpec::Kind::Zero;
    cfg.pressure_in = PressureSignal{};
    cfg.pressure_out = PressureSignal{};
    cfg.initial.seed = base.seed + s;
    const SplitContext ctx = make_split_context(cfg);
    const Trajectory traj = run_path(ctx, cfg, zero_path(cfg.N, cfg.T));
    const EnergyLedger ledger = build_energy_ledger(traj, ctx.ops);
    for (const StepRecord& rec : ledger.steps)
      worst = std::max(worst, rec.E1 - rec.E0);
  }
  return make_result("dissipativity", worst <= 1e-12,
                     "max energy increase per step " + fmt(worst) +
                         " with noise and pressure off");
}

CheckResult check_superposition(const RunConfig& base) {
  RunConfig cfg = small_run_config(base);
  cfg.pressure_in = PressureSignal{};
  cfg.pressure_out = PressureSignal{};
  const SplitContext ctx = make_split_context(cfg);

  const BrownianPath w1 = sample_path(cfg.seed, 0, cfg.N, cfg.T);
  const BrownianPath w2 = sample_path(cfg.seed, 1, cfg.N, cfg.T);
  BrownianPath w12 = w1;
  for (int n = 0; n < w12.N; ++n) w12.dw[n] = w1.dw[n] + w2.dw[n];
  for (int n = 0; n < w12.N; ++n) w12.w[n + 1] = w12.w[n] + w12.dw[n];

  const Trajectory t0 = run_path(ctx, cfg, zero_path(cfg.N, cfg.T));
  const Trajectory t1 = run_path(ctx, cfg, w1);
  const Trajectory t2 = run_path(ctx, cfg, w2);
  const Trajectory t12 = run_path(ctx, cfg, w12);

  double worst = 0.0;
  for (int n = 0; n <= cfg.N; ++n) {
    const Vec du = (t12.u[n] - t0.u[n]) - (t1.u[n] - t0.u[n]) -
                   (t2.u[n] - t0.u[n]);
    const Vec de = (t12.eta[n] - t0.eta[n]) - (t1.eta[n] - t0.eta[n]) -
                   (t2.eta[n] - t0.eta[n]);
    const Vec dv = (t12.v[n] - t0.v[n]) - (t1.v[n] - t0.v[n]) -
                   (t2.v[n] - t0.v[n]);
    worst = std::max(worst, std::sqrt(quad_form(ctx.ops.M_f, du, du)));
    worst = std::max(worst, std::sqrt(quad_form(ctx.ops.K_gamma, de, de)));
    worst = std::max(worst, std::sqrt(quad_form(ctx.ops.M_gamma, dv, dv)));
  }
  return make_result("superposition", worst <= 1e-9,
                     "max linearity defect over the trajectory " + fmt(worst));
}

CheckResult check_increment_variance(std::uint64_t seed) {
  const int n = 100000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = sample_path(seed, static_cast<std::uint64_t>(i), 1, 1.0).dw[0];
  const MeanStderr ms = estimate_expectation(xs);
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) sq[i] = xs[i] * xs[i];
  const double var = pairwise_sum(sq) / n - ms.mean * ms.mean;
  const bool ok =
      std::abs(ms.mean) <= 4.0 / std::sqrt(static_cast<double>(n)) &&
      std::abs(var - 1.0) <= 0.05;
  return make_result("increment_variance", ok,
                     "mean " + fmt(ms.mean) + ", variance " + fmt(var));
}

CheckResult check_ks_normality(std::uint64_t seed) {
  const int n = 10000, N = 16;
  std::vector<double> wt(n);
  for (int i = 0; i < n; ++i)
    wt[i] = sample_path(seed, static_cast<std::uint64_t>(i), N, 1.0).w[N];
  const KsResult ks = ks_test_standard_normal(wt);
  return make_result("ks_normality", ks.p_value >= 1e-3,
                     "KS D " + fmt(ks.d) + ", p " + fmt(ks.p_value));
}

CheckResult check_stochastic_work_mean(const RunConfig& base) {
  RunConfig cfg;
  cfg.nz = cfg.nr = 4;
  cfg.N = 8;
  cfg.n_paths = 200;
  cfg.seed = base.seed;
  cfg.threads = base.threads;
  const McReport report = run_ensemble(cfg);
  const MeanStderr ms =
      estimate_expectation(report.samples_of(&PathSummary::sum_dv23_sq));
  const double target = cfg.L * cfg.T;
  const bool ok = std::abs(ms.mean - target) <= 4.0 * ms.stderr_;
  return make_result("stochastic_work_mean", ok,
                     "mean " + fmt(ms.mean) + " stderr " + fmt(ms.stderr_) +
                         " target " + fmt(target));
}

CheckResult check_reconstruction(const IdentityRun& run) {
  const Trajectory& traj = run.traj;
  const FluidOperators& ops = run.ctx.ops;
  const double dt = traj.dt;
  double worst = 0.0;
  auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
  };

  struct FieldCase {
    TfField field;
    const std::vector<Vec>* levels;
    const SpMat* M;
  };
  const FieldCase cases[] = {{TfField::U, &traj.u, &ops.M_f},
                             {TfField::V, &traj.v, &ops.M_gamma},
                             {TfField::Eta, &traj.eta, &ops.M_gamma}};
  for (const FieldCase& c : cases) {
    double jumps = 0.0;
    for (int n = 0; n < traj.N; ++n) {
      const Vec d = (*c.levels)[n + 1] - (*c.levels)[n];
      jumps += quad_form(*c.M, d, d);
    }
    const TimeFunction lag = make_time_function(traj, c.field, TfKind::Lagged);
    const TimeFunction shf = make_time_function(traj, c.field, TfKind::Shifted);
    const TimeFunction lin = make_time_function(traj, c.field, TfKind::Linear);
    worst = std::max(worst, rel(l2_time_diff_sq(shf, lag, *c.M), dt * jumps));
    worst = std::max(
        worst, rel(l2_time_diff_sq(lin, lag, *c.M), dt / 3.0 * jumps));
    const double h = 0.4 * dt;
    double expected = 0.0;
    for (int n = 1; n < traj.N; ++n) {
      const Vec d = (*c.levels)[n + 1] - (*c.levels)[n];
      expected += quad_form(*c.M, d, d);
    }
    worst = std::max(
        worst, rel(time_shift_modulus_sq(shf, h, *c.M), h * expected));
  }

  // Lagged v* against lagged v realizes the per-step increments.
  const TimeFunction lv = make_time_function(traj, TfField::V, TfKind::Lagged);
  const TimeFunction lvs =
      make_time_function(traj, TfField::VStar, TfKind::Lagged);
  double vs = 0.0;
  for (int n = 0; n < traj.N; ++n) {
    const Vec d = traj.v13[n] - traj.v[n];
    vs += quad_form(ops.M_gamma, d, d);
  }
  worst = std::max(worst, rel(l2_time_diff_sq(lv, lvs, ops.M_gamma), dt * vs));

  // The linear displacement interpolant has v* as exact derivative.
  double deriv = 0.0;
  for (int n = 0; n < traj.N; ++n)
    deriv = std::max(deriv, ((traj.eta[n + 1] - traj.eta[n]) / dt -
                             traj.v13[n])
                                .cwiseAbs()
                                .maxCoeff());
  worst = std::max(worst, deriv);

  return make_result("reconstruction_equalities", worst <= 1e-10,
                     "max relative defect " + fmt(worst));
}

CheckResult check_reproducibility(const RunConfig& base) {
  RunConfig cfg;
  cfg.nz = cfg.nr = 4;
  cfg.N = 4;
  cfg.n_paths = 50;
  cfg.seed = base.seed;
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.seed = base.seed;

  McReport ref;
  bool ok = true;
  for (int threads : {1, 2, 4}) {
    cfg.threads = threads;
    McReport rep = run_ensemble(cfg);
    if (threads == 1) {
      ref = std::move(rep);
      continue;
    }
    for (int i = 0; i < cfg.n_paths && ok; ++i) {
      const PathSummary &a = ref.paths[i], &b = rep.paths[i];
      ok = a.max_energy == b.max_energy && a.final_energy == b.final_energy &&
           a.sum_dv23_sq == b.sum_dv23_sq && a.stoch_work == b.stoch_work &&
           a.sum_dissipation == b.sum_dissipation && a.holder == b.holder;
    }
    for (int n = 0; n <= cfg.N && ok; ++n) {
      const Vec diff = ref.first_trajectory.u[n] - rep.first_trajectory.u[n];
      ok = diff.cwiseAbs().maxCoeff() == 0.0;
    }
  }
  return make_result("reproducibility_threads", ok,
                     ok ? "bit-identical summaries for 1, 2, 4 threads"
                        : "thread count changed results");
}

}  // namespace

std::vector<CheckResult> run_verification(const RunConfig& cfg) {
  std::vector<CheckResult> checks;
  checks.push_back(check_mesh_conformance());
  checks.push_back(check_dof_layout());
  checks.push_back(check_quadrature_exactness());
  checks.push_back(check_operator_symmetry());
  checks.push_back(check_mass_patch());
  checks.push_back(check_korn_identity(cfg.seed));
  checks.push_back(check_solver_residuals(cfg.seed));

  const IdentityRun run = make_identity_run(cfg);
  double rs = 0, rn = 0, rf = 0;
  for (const StepRecord& rec : run.ledger.steps) {
    rs = std::max(rs, rec.res_structure);
    rn = std::max(rn, rec.res_stochastic);
    rf = std::max(rf, rec.res_fluid);
  }
  checks.push_back(check_identity("structure_identity", rs, 1e-8));
  checks.push_back(check_identity("stochastic_identity", rn, 1e-8));
  checks.push_back(check_identity("fluid_identity", rf, 1e-8));
  checks.push_back(
      check_identity("summed_identity", run.ledger.summed_residual, 1e-7));

  checks.push_back(check_dissipativity(cfg));
  checks.push_back(check_superposition(cfg));
  checks.push_back(check_increment_variance(cfg.seed));
  checks.push_back(check_ks_normality(cfg.seed));
  checks.push_back(check_stochastic_work_mean(cfg));
  checks.push_back(check_reconstruction(run));
  checks.push_back(check_reproducibility(cfg));
  return checks;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

}  // namespace sfsim
