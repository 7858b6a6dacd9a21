// SPDX-License-Identifier: Apache-2.0

#include "core/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sfsim {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_echo(const RunConfig& cfg) { return json::parse(config_to_json(cfg)); }

json meta_block(double elapsed_seconds, int threads) {
  return json{{"timestamp", utc_timestamp()},
              {"elapsed_seconds", elapsed_seconds},
              {"threads", threads}};
}

// Mean and standard error that tolerates a single sample (stderr 0).
json estimate_block(const std::vector<double>& samples) {
  if (samples.size() == 1) return json{{"mean", samples[0]}, {"stderr", 0.0}};
  const MeanStderr e = estimate_expectation(samples);
  return json{{"mean", e.mean}, {"stderr", e.stderr_}};
}

json estimate_block(const MeanStderr& e) {
  return json{{"mean", e.mean}, {"stderr", e.stderr_}};
}

double max_of(const McReport& rep, double PathSummary::*member) {
  double worst = 0.0;
  for (const PathSummary& s : rep.paths) worst = std::max(worst, s.*member);
  return worst;
}

// Comment header declaring the schema and the producing config.
void csv_preamble(std::ostringstream& out, const RunConfig& cfg) {
  out << "# schema_version 1\n";
  out << "# config " << config_echo(cfg).dump() << "\n";
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  double parsed = 0.0;
  std::sscanf(buf, "%lg", &parsed);
  if (parsed == value) {
    // Prefer the shortest form that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof shorter, "%.*g", prec, value);
      std::sscanf(shorter, "%lg", &parsed);
      if (parsed == value) return shorter;
    }
  }
  return buf;
}

std::string run_report_json(const McReport& rep) {
  json quantities;
  quantities["max_energy"] = estimate_block(rep.samples_of(&PathSummary::max_energy));
  quantities["final_energy"] = estimate_block(rep.samples_of(&PathSummary::final_energy));
  quantities["sum_dissipation"] = estimate_block(rep.samples_of(&PathSummary::sum_dissipation));
  quantities["sum_dv13_sq"] = estimate_block(rep.samples_of(&PathSummary::sum_dv13_sq));
  quantities["sum_deta_grad_sq"] = estimate_block(rep.samples_of(&PathSummary::sum_deta_grad_sq));
  quantities["sum_dv23_sq"] = estimate_block(rep.samples_of(&PathSummary::sum_dv23_sq));
  quantities["sum_du_sq"] = estimate_block(rep.samples_of(&PathSummary::sum_du_sq));
  quantities["sum_dv1_sq"] = estimate_block(rep.samples_of(&PathSummary::sum_dv1_sq));
  quantities["vstar_quantity"] = estimate_block(rep.samples_of(&PathSummary::vstar_quantity));
  quantities["stoch_work"] = estimate_block(rep.samples_of(&PathSummary::stoch_work));
  quantities["boundary_work"] = estimate_block(rep.samples_of(&PathSummary::boundary_work));
  quantities["holder"] = estimate_block(rep.samples_of(&PathSummary::holder));

  json residuals{{"structure", max_of(rep, &PathSummary::res_structure)},
                 {"stochastic", max_of(rep, &PathSummary::res_stochastic)},
                 {"fluid", max_of(rep, &PathSummary::res_fluid)},
                 {"summed", max_of(rep, &PathSummary::res_summed)}};

  json doc{{"schema_version", "1"},
           {"config", config_echo(rep.config)},
           {"n_paths", rep.paths.size()},
           {"quantities", quantities},
           {"identity_residuals", residuals},
           {"flags",
            {{"trivially_zero_trajectory", max_of(rep, &PathSummary::max_energy) == 0.0}}},
           {"meta", meta_block(rep.elapsed_seconds, rep.threads)}};

  if (rep.paths.size() >= 5 && rep.config.noise.kind == NoiseSpec::Kind::Brownian) {
    std::vector<double> scaled = rep.samples_of(&PathSummary::w_terminal);
    const double root_T = std::sqrt(rep.config.T);
    for (double& w : scaled) w /= root_T;
    const KsResult ks = ks_test_standard_normal(std::move(scaled));
    doc["ks"] = json{{"d", ks.d}, {"p_value", ks.p_value}};
  }
  return doc.dump(2) + "\n";
}

std::string converge_report_json(const ConvergenceReport& rep) {
  json levels = json::array();
  for (const ConvergenceLevel& lv : rep.levels) {
    levels.push_back(json{{"N_coarse", lv.N_coarse},
                          {"N_fine", lv.N_fine},
                          {"u_diff_sq", estimate_block(lv.u_diff_sq)},
                          {"v_diff_sq", estimate_block(lv.v_diff_sq)},
                          {"eta_diff_sq", estimate_block(lv.eta_diff_sq)},
                          {"vstar_quantity", estimate_block(lv.vstar_quantity)}});
  }
  json doc{{"schema_version", "1"},
           {"config", config_echo(rep.config)},
           {"n_paths", rep.n_paths},
           {"levels", levels},
           {"meta", meta_block(rep.elapsed_seconds, rep.threads)}};
  return doc.dump(2) + "\n";
}

std::string verify_report_json(const RunConfig& cfg,
                               const std::vector<CheckResult>& checks,
                               double elapsed_seconds) {
  json rows = json::array();
  for (const CheckResult& c : checks)
    rows.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json doc{{"schema_version", "1"},
           {"config", config_echo(cfg)},
           {"passed", all_passed(checks)},
           {"checks", rows},
           {"meta", meta_block(elapsed_seconds, cfg.threads)}};
  return doc.dump(2) + "\n";
}

std::string ledger_csv(const RunConfig& cfg, const EnergyLedger& ledger) {
  std::ostringstream out;
  csv_preamble(out, cfg);
  out << "n,stage,E,D,norm_v,norm_grad_eta,norm_u,dW\n";
  out << "0,0," << format_double(ledger.E_initial) << ",0,"
      << format_double(ledger.init_norm_v) << ","
      << format_double(ledger.init_norm_grad_eta) << ","
      << format_double(ledger.init_norm_u) << ",0\n";
  for (const StepRecord& s : ledger.steps) {
    out << s.n << ",1/3," << format_double(s.E13) << ",0,"
        << format_double(s.norm_v13) << "," << format_double(s.norm_grad_eta)
        << "," << format_double(s.norm_u0) << ",0\n";
    out << s.n << ",2/3," << format_double(s.E23) << ",0,"
        << format_double(s.norm_v23) << "," << format_double(s.norm_grad_eta)
        << "," << format_double(s.norm_u0) << "," << format_double(s.dW)
        << "\n";
    out << s.n << ",1," << format_double(s.E1) << "," << format_double(s.D)
        << "," << format_double(s.norm_v1) << ","
        << format_double(s.norm_grad_eta) << "," << format_double(s.norm_u1)
        << ",0\n";
  }
  return out.str();
}

std::string convergence_csv(const ConvergenceReport& rep) {
  std::ostringstream out;
  csv_preamble(out, rep.config);
  out << "N_coarse,N_fine,u_diff_sq_mean,u_diff_sq_stderr,v_diff_sq_mean,"
         "v_diff_sq_stderr,eta_diff_sq_mean,eta_diff_sq_stderr,"
         "vstar_mean,vstar_stderr\n";
  for (const ConvergenceLevel& lv : rep.levels) {
    out << lv.N_coarse << "," << lv.N_fine << ","
        << format_double(lv.u_diff_sq.mean) << ","
        << format_double(lv.u_diff_sq.stderr_) << ","
        << format_double(lv.v_diff_sq.mean) << ","
        << format_double(lv.v_diff_sq.stderr_) << ","
        << format_double(lv.eta_diff_sq.mean) << ","
        << format_double(lv.eta_diff_sq.stderr_) << ","
        << format_double(lv.vstar_quantity.mean) << ","
        << format_double(lv.vstar_quantity.stderr_) << "\n";
  }
  return out.str();
}

std::string path_csv(const RunConfig& cfg, const BrownianPath& path) {
  std::ostringstream out;
  csv_preamble(out, cfg);
  out << "n,t,W\n";
  for (int n = 0; n <= path.N; ++n) {
    const double t = path.T * (static_cast<double>(n) / path.N);
    out << n << "," << format_double(t) << "," << format_double(path.w[n])
        << "\n";
  }
  return out.str();
}

void write_artifacts(const std::string& dir,
                     const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  for (const auto& [name, content] : files) {
    const fs::path target = fs::path(dir) / name;
    std::ofstream out(target, std::ios::binary);
    if (!out) throw IoError("cannot open " + target.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + target.string());
  }
}

}  // namespace sfsim
