// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Parses flags, builds a config through the C
// API, dispatches one subcommand, and maps status codes to exit codes:
// 0 success, 1 runtime or suite failure, 2 invalid configuration.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfsim/sfsim.h"

namespace {

struct ConfigDeleter {
  void operator()(sfsim_config* c) const { sfsim_config_free(c); }
};
struct ReportDeleter {
  void operator()(sfsim_report* r) const { sfsim_report_free(r); }
};
using ConfigHandle = std::unique_ptr<sfsim_config, ConfigDeleter>;
using ReportHandle = std::unique_ptr<sfsim_report, ReportDeleter>;

int exit_code(sfsim_status status) {
  if (status == SFSIM_OK) return 0;
  std::fprintf(stderr, "error: %s\n", sfsim_last_error());
  return status == SFSIM_ERR_CONFIG ? 2 : 1;
}

// Flag values; the bools record which flags were actually given.
struct Overrides {
  std::string config_path;
  std::uint64_t seed = 0;
  int paths = 0, steps = 0, threads = 0;
  std::string out_dir;
  bool has_seed = false, has_paths = false, has_steps = false,
       has_threads = false, has_out = false;
};

sfsim_status build_config(const Overrides& opt, ConfigHandle* out) {
  sfsim_config* raw = nullptr;
  sfsim_status status =
      opt.config_path.empty()
          ? sfsim_config_create(&raw)
          : sfsim_config_load_file(opt.config_path.c_str(), &raw);
  if (status != SFSIM_OK) return status;
  ConfigHandle cfg(raw);

  auto set = [&](const char* key, const std::string& value) {
    return sfsim_config_set(cfg.get(), key, value.c_str());
  };
  if (opt.has_seed && status == SFSIM_OK)
    status = set("seed", std::to_string(opt.seed));
  if (opt.has_paths && status == SFSIM_OK)
    status = set("n_paths", std::to_string(opt.paths));
  if (opt.has_steps && status == SFSIM_OK)
    status = set("N", std::to_string(opt.steps));
  if (opt.has_threads && status == SFSIM_OK)
    status = set("threads", std::to_string(opt.threads));
  if (opt.has_out && status == SFSIM_OK)
    status = set("out_dir", nlohmann::json(opt.out_dir).dump());
  if (status != SFSIM_OK) return status;

  *out = std::move(cfg);
  return SFSIM_OK;
}

// The validated config echoes out_dir; read it back so file placement
// always matches what the report records.
sfsim_status resolve_out_dir(const ConfigHandle& cfg, std::string* out_dir) {
  const char* text = nullptr;
  sfsim_status status = sfsim_config_json(cfg.get(), &text);
  if (status != SFSIM_OK) return status;
  *out_dir = nlohmann::json::parse(text).at("out_dir").get<std::string>();
  return SFSIM_OK;
}

int cmd_run(const ConfigHandle& cfg, const std::string& out_dir) {
  sfsim_report* raw = nullptr;
  sfsim_status status = sfsim_run(cfg.get(), &raw);
  if (status != SFSIM_OK) return exit_code(status);
  ReportHandle rep(raw);
  status = sfsim_report_write(rep.get(), out_dir.c_str());
  if (status != SFSIM_OK) return exit_code(status);
  std::printf("wrote %s/report.json and %s/ledger.csv\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_verify(const ConfigHandle& cfg, const std::string& out_dir) {
  sfsim_report* raw = nullptr;
  sfsim_status status = sfsim_verify(cfg.get(), &raw);
  if (status != SFSIM_OK) return exit_code(status);
  ReportHandle rep(raw);

  const int count = sfsim_report_check_count(rep.get());
  for (int i = 0; i < count; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0;
    if (sfsim_report_check(rep.get(), i, &name, &passed, &detail) != SFSIM_OK)
      return exit_code(SFSIM_ERR_RUNTIME);
    std::printf("%-26s %s  %s\n", name, passed ? "PASS" : "FAIL", detail);
  }
  const bool all_ok = sfsim_report_passed(rep.get()) == 1;
  std::printf("verification: %d checks, %s\n", count,
              all_ok ? "all passed" : "FAILURES present");

  status = sfsim_report_write(rep.get(), out_dir.c_str());
  if (status != SFSIM_OK) return exit_code(status);
  return all_ok ? 0 : 1;
}

int cmd_converge(const ConfigHandle& cfg, const std::string& out_dir) {
  sfsim_report* raw = nullptr;
  sfsim_status status = sfsim_converge(cfg.get(), &raw);
  if (status != SFSIM_OK) return exit_code(status);
  ReportHandle rep(raw);

  const char* text = nullptr;
  if (sfsim_report_json(rep.get(), &text) == SFSIM_OK) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    std::printf("%8s %8s %14s %14s %14s %14s\n", "N_coarse", "N_fine",
                "E|du|^2", "E|dv|^2", "E|deta|^2", "vstar");
    for (const auto& lv : doc.at("levels")) {
      std::printf("%8d %8d %14.6e %14.6e %14.6e %14.6e\n",
                  lv.at("N_coarse").get<int>(), lv.at("N_fine").get<int>(),
                  lv.at("u_diff_sq").at("mean").get<double>(),
                  lv.at("v_diff_sq").at("mean").get<double>(),
                  lv.at("eta_diff_sq").at("mean").get<double>(),
                  lv.at("vstar_quantity").at("mean").get<double>());
    }
  }
  status = sfsim_report_write(rep.get(), out_dir.c_str());
  if (status != SFSIM_OK) return exit_code(status);
  std::printf("wrote %s/report.json and %s/convergence.csv\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_path_dump(const ConfigHandle& cfg, const std::string& out_dir) {
  const std::string target = out_dir + "/path.csv";
  sfsim_status status = sfsim_path_dump(cfg.get(), target.c_str());
  if (status != SFSIM_OK) return exit_code(status);
  std::printf("wrote %s\n", target.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sfsim: stochastic fluid-structure interaction simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--seed", opt.seed, "ensemble seed");
  app.add_option("--paths", opt.paths, "number of Monte Carlo paths");
  app.add_option("--steps", opt.steps, "number of time steps");
  app.add_option("--threads", opt.threads, "worker threads");
  app.add_option("--out", opt.out_dir, "output directory");

  CLI::App* sub_run = app.add_subcommand("run", "run the Monte Carlo ensemble");
  CLI::App* sub_verify =
      app.add_subcommand("verify", "run the verification suite");
  CLI::App* sub_converge =
      app.add_subcommand("converge", "run the time-refinement study");
  CLI::App* sub_path =
      app.add_subcommand("path-dump", "write one Brownian path as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.has_seed = app.count("--seed") > 0;
  opt.has_paths = app.count("--paths") > 0;
  opt.has_steps = app.count("--steps") > 0;
  opt.has_threads = app.count("--threads") > 0;
  opt.has_out = app.count("--out") > 0;

  ConfigHandle cfg;
  sfsim_status status = build_config(opt, &cfg);
  if (status != SFSIM_OK) return exit_code(status);

  std::string out_dir;
  status = resolve_out_dir(cfg, &out_dir);
  if (status != SFSIM_OK) return exit_code(status);

  if (sub_run->parsed()) return cmd_run(cfg, out_dir);
  if (sub_verify->parsed()) return cmd_verify(cfg, out_dir);
  if (sub_converge->parsed()) return cmd_converge(cfg, out_dir);
  if (sub_path->parsed()) return cmd_path_dump(cfg, out_dir);
  return 2;
}
