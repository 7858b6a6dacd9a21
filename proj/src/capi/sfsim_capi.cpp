// SPDX-License-Identifier: Apache-2.0
//
// C binding of the simulation core. Each exported function validates
// its arguments, forwards to the core, and converts exceptions into
// status codes with a thread-local message. Handles own plain structs;
// no core type crosses the boundary.

#include "sfsim/sfsim.h"

#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/config.hpp"
#include "core/montecarlo.hpp"
#include "core/report.hpp"
#include "core/types.hpp"
#include "core/verify.hpp"
#include "json.hpp"

struct sfsim_config {
  sfsim::RunConfig cfg;
  std::string json_cache;
};

struct sfsim_report {
  std::string json_text;
  std::map<std::string, std::string> files;  // artifact name -> content
  std::vector<sfsim::CheckResult> checks;
};

namespace {

thread_local std::string t_last_error;

sfsim_status fail(sfsim_status code, const std::string& message) {
  t_last_error = message;
  return code;
}

// Runs the body and maps exceptions onto status codes.
template <typename Fn>
sfsim_status guarded(Fn&& body) {
  try {
    return body();
  } catch (const sfsim::ConfigError& e) {
    return fail(SFSIM_ERR_CONFIG, e.what());
  } catch (const sfsim::IoError& e) {
    return fail(SFSIM_ERR_IO, e.what());
  } catch (const sfsim::RuntimeFailure& e) {
    return fail(SFSIM_ERR_RUNTIME, e.what());
  } catch (const std::exception& e) {
    return fail(SFSIM_ERR_RUNTIME, e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

extern "C" {

const char* sfsim_version(void) { return "1.0.0"; }

const char* sfsim_last_error(void) { return t_last_error.c_str(); }

sfsim_status sfsim_config_create(sfsim_config** out) {
  if (!out) return fail(SFSIM_ERR_INVALID_ARG, "config_create: out is NULL");
  return guarded([&] {
    *out = new sfsim_config{};
    return SFSIM_OK;
  });
}

sfsim_status sfsim_config_load_file(const char* path, sfsim_config** out) {
  if (!path || !out)
    return fail(SFSIM_ERR_INVALID_ARG, "config_load_file: NULL argument");
  return guarded([&] {
    auto handle = std::make_unique<sfsim_config>();
    handle->cfg = sfsim::parse_config_file(path);
    *out = handle.release();
    return SFSIM_OK;
  });
}

sfsim_status sfsim_config_load_json(const char* json_text, sfsim_config** out) {
  if (!json_text || !out)
    return fail(SFSIM_ERR_INVALID_ARG, "config_load_json: NULL argument");
  return guarded([&] {
    auto handle = std::make_unique<sfsim_config>();
    handle->cfg = sfsim::parse_config_json(json_text);
    *out = handle.release();
    return SFSIM_OK;
  });
}

sfsim_status sfsim_config_set(sfsim_config* cfg, const char* key,
                              const char* value) {
  if (!cfg || !key || !value)
    return fail(SFSIM_ERR_INVALID_ARG, "config_set: NULL argument");
  return guarded([&] {
    nlohmann::json doc = nlohmann::json::parse(sfsim::config_to_json(cfg->cfg));
    doc["threads"] = cfg->cfg.threads;
    nlohmann::json parsed =
        nlohmann::json::parse(value, nullptr, /*allow_exceptions=*/false);
    // Bare words (paths, file names) are taken as string values.
    doc[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
    cfg->cfg = sfsim::parse_config_json(doc.dump());
    return SFSIM_OK;
  });
}

sfsim_status sfsim_config_json(sfsim_config* cfg, const char** out_json) {
  if (!cfg || !out_json)
    return fail(SFSIM_ERR_INVALID_ARG, "config_json: NULL argument");
  return guarded([&] {
    cfg->json_cache = sfsim::config_to_json(cfg->cfg);
    *out_json = cfg->json_cache.c_str();
    return SFSIM_OK;
  });
}

void sfsim_config_free(sfsim_config* cfg) { delete cfg; }

sfsim_status sfsim_run(const sfsim_config* cfg, sfsim_report** out) {
  if (!cfg || !out) return fail(SFSIM_ERR_INVALID_ARG, "run: NULL argument");
  return guarded([&] {
    sfsim::McReport mc = sfsim::run_ensemble(cfg->cfg);
    auto rep = std::make_unique<sfsim_report>();
    rep->json_text = sfsim::run_report_json(mc);
    rep->files["report.json"] = rep->json_text;
    rep->files["ledger.csv"] = sfsim::ledger_csv(cfg->cfg, mc.first_ledger);
    *out = rep.release();
    return SFSIM_OK;
  });
}

sfsim_status sfsim_verify(const sfsim_config* cfg, sfsim_report** out) {
  if (!cfg || !out) return fail(SFSIM_ERR_INVALID_ARG, "verify: NULL argument");
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    std::vector<sfsim::CheckResult> checks = sfsim::run_verification(cfg->cfg);
    auto rep = std::make_unique<sfsim_report>();
    rep->json_text =
        sfsim::verify_report_json(cfg->cfg, checks, seconds_since(start));
    rep->files["report.json"] = rep->json_text;
    rep->checks = std::move(checks);
    *out = rep.release();
    return SFSIM_OK;
  });
}

sfsim_status sfsim_converge(const sfsim_config* cfg, sfsim_report** out) {
  if (!cfg || !out)
    return fail(SFSIM_ERR_INVALID_ARG, "converge: NULL argument");
  return guarded([&] {
    sfsim::ConvergenceReport cr =
        sfsim::convergence_study(cfg->cfg, cfg->cfg.converge.levels);
    auto rep = std::make_unique<sfsim_report>();
    rep->json_text = sfsim::converge_report_json(cr);
    rep->files["report.json"] = rep->json_text;
    rep->files["convergence.csv"] = sfsim::convergence_csv(cr);
    *out = rep.release();
    return SFSIM_OK;
  });
}

sfsim_status sfsim_path_dump(const sfsim_config* cfg, const char* path) {
  if (!cfg || !path)
    return fail(SFSIM_ERR_INVALID_ARG, "path_dump: NULL argument");
  return guarded([&] {
    const sfsim::BrownianPath bp = sfsim::make_driving_path(cfg->cfg, 0);
    const std::string table = sfsim::path_csv(cfg->cfg, bp);
    const std::filesystem::path target(path);
    std::error_code ec;
    if (target.has_parent_path())
      std::filesystem::create_directories(target.parent_path(), ec);
    std::ofstream file(target, std::ios::binary);
    if (!file)
      throw sfsim::IoError("cannot open " + target.string() + " for writing");
    file.write(table.data(), static_cast<std::streamsize>(table.size()));
    if (!file) throw sfsim::IoError("failed writing " + target.string());
    return SFSIM_OK;
  });
}

sfsim_status sfsim_report_json(const sfsim_report* rep, const char** out_json) {
  if (!rep || !out_json)
    return fail(SFSIM_ERR_INVALID_ARG, "report_json: NULL argument");
  *out_json = rep->json_text.c_str();
  return SFSIM_OK;
}

int sfsim_report_passed(const sfsim_report* rep) {
  if (!rep) return 0;
  return sfsim::all_passed(rep->checks) ? 1 : 0;
}

int sfsim_report_check_count(const sfsim_report* rep) {
  return rep ? static_cast<int>(rep->checks.size()) : 0;
}

sfsim_status sfsim_report_check(const sfsim_report* rep, int index,
                                const char** name, int* passed,
                                const char** detail) {
  if (!rep) return fail(SFSIM_ERR_INVALID_ARG, "report_check: rep is NULL");
  if (index < 0 || index >= static_cast<int>(rep->checks.size()))
    return fail(SFSIM_ERR_INVALID_ARG,
                "report_check: index " + std::to_string(index) +
                    " out of range");
  const sfsim::CheckResult& c = rep->checks[static_cast<std::size_t>(index)];
  if (name) *name = c.name.c_str();
  if (passed) *passed = c.passed ? 1 : 0;
  if (detail) *detail = c.detail.c_str();
  return SFSIM_OK;
}

sfsim_status sfsim_report_write(const sfsim_report* rep, const char* dir) {
  if (!rep || !dir)
    return fail(SFSIM_ERR_INVALID_ARG, "report_write: NULL argument");
  return guarded([&] {
    sfsim::write_artifacts(dir, rep->files);
    return SFSIM_OK;
  });
}

void sfsim_report_free(sfsim_report* rep) { delete rep; }

}  // extern "C"
