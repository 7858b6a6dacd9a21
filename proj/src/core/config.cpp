// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sfsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
}

double get_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(key, "expected a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(key, "expected an integer");
  return obj[key].get<int>();
}

std::uint64_t get_u64(const json& obj, const std::string& key,
                      std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer())
    fail(key, "expected a nonnegative integer");
  if (obj[key].is_number_integer() && obj[key].get<std::int64_t>() < 0)
    fail(key, "expected a nonnegative integer");
  return obj[key].get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) fail(key, "expected a string");
  return obj[key].get<std::string>();
}

PressureSignal parse_pressure(const json& node, const std::string& field) {
  PressureSignal sig;
  if (node.is_number()) {
    sig.kind = PressureSignal::Kind::Constant;
    sig.value = node.get<double>();
    return sig;
  }
  if (!node.is_object()) fail(field, "expected a number or an object");
  const std::string kind = get_string(node, "kind", "constant");
  if (kind == "constant") {
    require_keys(node, field, {"kind", "value"});
    sig.kind = PressureSignal::Kind::Constant;
    sig.value = get_number(node, "value", 0.0);
  } else if (kind == "table") {
    require_keys(node, field, {"kind", "times", "values"});
    sig.kind = PressureSignal::Kind::Table;
    if (!node.contains("times") || !node.contains("values"))
      fail(field, "table needs 'times' and 'values'");
    for (const auto& t : node["times"]) {
      if (!t.is_number()) fail(field + ".times", "expected numbers");
      sig.times.push_back(t.get<double>());
    }
    for (const auto& v : node["values"]) {
      if (!v.is_number()) fail(field + ".values", "expected numbers");
      sig.values.push_back(v.get<double>());
    }
    if (sig.times.size() != sig.values.size() || sig.times.size() < 2)
      fail(field, "times/values must have equal length >= 2");
    for (std::size_t i = 1; i < sig.times.size(); ++i)
      if (!(sig.times[i] > sig.times[i - 1]))
        fail(field + ".times", "must be strictly increasing");
  } else if (kind == "sine") {
    require_keys(node, field,
                 {"kind", "offset", "amplitude", "frequency", "phase"});
    sig.kind = PressureSignal::Kind::Sine;
    sig.offset = get_number(node, "offset", 0.0);
    sig.amplitude = get_number(node, "amplitude", 0.0);
    sig.frequency = get_number(node, "frequency", 0.0);
    sig.phase = get_number(node, "phase", 0.0);
  } else {
    fail(field + ".kind", "must be one of constant, table, sine");
  }
  return sig;
}

InitialSpec parse_initial(const json& node) {
  InitialSpec spec;
  if (!node.is_object()) fail("initial", "expected an object");
  const std::string kind = get_string(node, "kind", "zero");
  if (kind == "zero") {
    require_keys(node, "initial", {"kind"});
    spec.kind = InitialSpec::Kind::Zero;
  } else if (kind == "bump") {
    require_keys(node, "initial", {"kind", "amplitude"});
    spec.kind = InitialSpec::Kind::Bump;
    spec.amplitude = get_number(node, "amplitude", 1.0);
  } else if (kind == "random") {
    require_keys(node, "initial", {"kind", "amplitude", "seed"});
    spec.kind = InitialSpec::Kind::Random;
    spec.amplitude = get_number(node, "amplitude", 1.0);
    spec.seed = get_u64(node, "seed", 0);
  } else if (kind == "file") {
    require_keys(node, "initial", {"kind", "path"});
    spec.kind = InitialSpec::Kind::File;
    spec.path = get_string(node, "path", "");
    if (spec.path.empty()) fail("initial.path", "required for kind 'file'");
  } else {
    fail("initial.kind", "must be one of zero, bump, random, file");
  }
  return spec;
}

json pressure_to_json(const PressureSignal& sig) {
  json node;
  switch (sig.kind) {
    case PressureSignal::Kind::Constant:
      node["kind"] = "constant";
      node["value"] = sig.value;
      break;
    case PressureSignal::Kind::Table:
      node["kind"] = "table";
      node["times"] = sig.times;
      node["values"] = sig.values;
      break;
    case PressureSignal::Kind::Sine:
      node["kind"] = "sine";
      node["offset"] = sig.offset;
      node["amplitude"] = sig.amplitude;
      node["frequency"] = sig.frequency;
      node["phase"] = sig.phase;
      break;
  }
  return node;
}

}  // namespace

RunConfig parse_config_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  require_keys(root, "",
               {"L", "R", "mu", "T", "N", "nz", "nr", "n_paths", "seed",
                "threads", "pressure_in", "pressure_out", "initial", "noise",
                "solver", "converge", "out_dir"});

  RunConfig cfg;
  cfg.L = get_number(root, "L", cfg.L);
  cfg.R = get_number(root, "R", cfg.R);
  cfg.mu = get_number(root, "mu", cfg.mu);
  cfg.T = get_number(root, "T", cfg.T);
  cfg.N = get_int(root, "N", cfg.N);
  cfg.nz = get_int(root, "nz", cfg.nz);
  cfg.nr = get_int(root, "nr", cfg.nr);
  cfg.n_paths = get_int(root, "n_paths", cfg.n_paths);
  cfg.seed = get_u64(root, "seed", cfg.seed);
  cfg.threads = get_int(root, "threads", cfg.threads);
  cfg.out_dir = get_string(root, "out_dir", cfg.out_dir);

  if (root.contains("pressure_in"))
    cfg.pressure_in = parse_pressure(root["pressure_in"], "pressure_in");
  if (root.contains("pressure_out"))
    cfg.pressure_out = parse_pressure(root["pressure_out"], "pressure_out");
  if (root.contains("initial")) cfg.initial = parse_initial(root["initial"]);

  if (root.contains("noise")) {
    const json& n = root["noise"];
    if (!n.is_object()) fail("noise", "expected an object");
    require_keys(n, "noise", {"kind"});
    const std::string kind = get_string(n, "kind", "brownian");
    if (kind == "brownian")
      cfg.noise.kind = NoiseSpec::Kind::Brownian;
    else if (kind == "zero")
      cfg.noise.kind = NoiseSpec::Kind::Zero;
    else
      fail("noise.kind", "must be 'brownian' or 'zero'");
  }
  if (root.contains("solver")) {
    const json& s = root["solver"];
    if (!s.is_object()) fail("solver", "expected an object");
    require_keys(s, "solver", {"pressure_regularization"});
    cfg.solver.pressure_regularization =
        get_number(s, "pressure_regularization", 0.0);
  }
  if (root.contains("converge")) {
    const json& c = root["converge"];
    if (!c.is_object()) fail("converge", "expected an object");
    require_keys(c, "converge", {"levels", "n_paths"});
    cfg.converge.levels = get_int(c, "levels", cfg.converge.levels);
    cfg.converge.n_paths = get_int(c, "n_paths", cfg.converge.n_paths);
  }

  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

void apply_override_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
}
void apply_override_steps(RunConfig& cfg, int N) {
  cfg.N = N;
  validate_config(cfg);
}
void apply_override_paths(RunConfig& cfg, int n_paths) {
  cfg.n_paths = n_paths;
  validate_config(cfg);
}
void apply_override_threads(RunConfig& cfg, int threads) {
  cfg.threads = threads;
  validate_config(cfg);
}
void apply_override_out_dir(RunConfig& cfg, const std::string& dir) {
  cfg.out_dir = dir;
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.L > 0.0)) fail("L", "must be > 0");
  if (!(cfg.R > 0.0)) fail("R", "must be > 0");
  if (!(cfg.mu > 0.0)) fail("mu", "must be > 0");
  if (!(cfg.T > 0.0)) fail("T", "must be > 0");
  if (cfg.N < 1) fail("N", "must be >= 1");
  if (cfg.nz < 2) fail("nz", "must be >= 2");
  if (cfg.nr < 2) fail("nr", "must be >= 2");
  if (cfg.n_paths < 1) fail("n_paths", "must be >= 1");
  if (cfg.threads < 1) fail("threads", "must be >= 1");
  if (cfg.solver.pressure_regularization < 0.0)
    fail("solver.pressure_regularization", "must be >= 0");
  if (cfg.converge.levels < 2) fail("converge.levels", "must be >= 2");
  if (cfg.converge.n_paths < 1) fail("converge.n_paths", "must be >= 1");
  if (cfg.initial.kind == InitialSpec::Kind::Bump ||
      cfg.initial.kind == InitialSpec::Kind::Random) {
    if (!std::isfinite(cfg.initial.amplitude))
      fail("initial.amplitude", "must be finite");
  }
}

std::string config_to_json(const RunConfig& cfg) {
  json root;
  root["L"] = cfg.L;
  root["R"] = cfg.R;
  root["mu"] = cfg.mu;
  root["T"] = cfg.T;
  root["N"] = cfg.N;
  root["nz"] = cfg.nz;
  root["nr"] = cfg.nr;
  root["n_paths"] = cfg.n_paths;
  root["seed"] = cfg.seed;
  root["out_dir"] = cfg.out_dir;
  root["pressure_in"] = pressure_to_json(cfg.pressure_in);
  root["pressure_out"] = pressure_to_json(cfg.pressure_out);
  json init;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Zero:
      init["kind"] = "zero";
      break;
    case InitialSpec::Kind::Bump:
      init["kind"] = "bump";
      init["amplitude"] = cfg.initial.amplitude;
      break;
    case InitialSpec::Kind::Random:
      init["kind"] = "random";
      init["amplitude"] = cfg.initial.amplitude;
      init["seed"] = cfg.initial.seed;
      break;
    case InitialSpec::Kind::File:
      init["kind"] = "file";
      init["path"] = cfg.initial.path;
      break;
  }
  root["initial"] = init;
  root["noise"] = {
      {"kind", cfg.noise.kind == NoiseSpec::Kind::Brownian ? "brownian"
                                                           : "zero"}};
  root["solver"] = {
      {"pressure_regularization", cfg.solver.pressure_regularization}};
  root["converge"] = {{"levels", cfg.converge.levels},
                      {"n_paths", cfg.converge.n_paths}};
  return root.dump(2);
}

}  // namespace sfsim
