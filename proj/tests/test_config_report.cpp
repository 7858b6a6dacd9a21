// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"
#include "core/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using namespace sfsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Strips the one volatile key so two generations of a report can be
// compared for equality.
std::string strip_meta(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  doc.erase("meta");
  return doc.dump();
}

bool round_trips(double x) {
  const std::string s = format_double(x);
  double back = 0.0;
  REQUIRE(std::sscanf(s.c_str(), "%lf", &back) == 1);
  return back == x || (std::isnan(back) && std::isnan(x));
}

}  // namespace

TEST_CASE("config defaults, round trip, and rejection of bad input") {
  const RunConfig def = parse_config_json("{}");
  CHECK(def.L == 1.0);
  CHECK(def.N == 16);
  CHECK(def.nz == 8);
  CHECK(def.n_paths == 1000);
  CHECK(def.noise.kind == NoiseSpec::Kind::Brownian);
  CHECK(def.initial.kind == InitialSpec::Kind::Zero);
  CHECK(def.out_dir == "out");

  // Serialize, reparse, compare the canonical forms.
  const std::string canon = config_to_json(def);
  const RunConfig back = parse_config_json(canon);
  CHECK(config_to_json(back) == canon);

  // The canonical form never contains the thread count.
  CHECK(canon.find("threads") == std::string::npos);
  RunConfig threaded = def;
  threaded.threads = 7;
  CHECK(config_to_json(threaded) == canon);

  // Unknown keys are named in the error, at top level and nested.
  CHECK_THROWS_WITH_AS((void)parse_config_json("{\"typo_key\": 1}"),
                       doctest::Contains("typo_key"), ConfigError);
  CHECK_THROWS_WITH_AS(
      (void)parse_config_json("{\"initial\": {\"amplitude\": 1}}"),
      doctest::Contains("amplitude"), ConfigError);

  // Invalid values are named too.
  CHECK_THROWS_WITH_AS((void)parse_config_json("{\"N\": 0}"),
                       doctest::Contains("N"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("{\"T\": -1.0}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("{\"nz\": 1}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("{\"mu\": 0.0}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("{\"n_paths\": 0}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("not json"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("[1, 2]"), ConfigError);

  // Missing file.
  CHECK_THROWS_AS((void)parse_config_file("no_such_config.json"), ConfigError);
}

TEST_CASE("pressure signal configuration forms") {
  // A bare number is shorthand for a constant signal.
  const RunConfig num = parse_config_json("{\"pressure_in\": 2.5}");
  CHECK(num.pressure_in.kind == PressureSignal::Kind::Constant);
  CHECK(num.pressure_in.value == 2.5);

  const RunConfig obj = parse_config_json(
      "{\"pressure_out\": {\"kind\": \"constant\", \"value\": -1.0}}");
  CHECK(obj.pressure_out.kind == PressureSignal::Kind::Constant);
  CHECK(obj.pressure_out.value == -1.0);

  const RunConfig table = parse_config_json(
      "{\"pressure_in\": {\"kind\": \"table\", \"times\": [0.0, 1.0],"
      " \"values\": [0.0, 3.0]}}");
  CHECK(table.pressure_in.kind == PressureSignal::Kind::Table);
  REQUIRE(table.pressure_in.times.size() == 2);
  CHECK(table.pressure_in.values[1] == 3.0);

  const RunConfig sine = parse_config_json(
      "{\"pressure_in\": {\"kind\": \"sine\", \"offset\": 1.0,"
      " \"amplitude\": 0.5, \"frequency\": 2.0, \"phase\": 0.1}}");
  CHECK(sine.pressure_in.kind == PressureSignal::Kind::Sine);
  CHECK(sine.pressure_in.frequency == 2.0);

  // Table validation: lengths must match and times must increase.
  CHECK_THROWS_AS((void)parse_config_json(
                      "{\"pressure_in\": {\"kind\": \"table\","
                      " \"times\": [0.0, 1.0], \"values\": [1.0]}}"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config_json(
                      "{\"pressure_in\": {\"kind\": \"table\","
                      " \"times\": [1.0, 0.5], \"values\": [1.0, 2.0]}}"),
                  ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config_json("{\"pressure_in\": {\"kind\": \"square\"}}"),
      ConfigError);

  // Initial and noise kinds.
  const RunConfig rnd = parse_config_json(
      "{\"initial\": {\"kind\": \"random\", \"amplitude\": 0.2, \"seed\": 9}}");
  CHECK(rnd.initial.kind == InitialSpec::Kind::Random);
  CHECK(rnd.initial.amplitude == 0.2);
  CHECK(rnd.initial.seed == 9);
  const RunConfig off = parse_config_json("{\"noise\": {\"kind\": \"zero\"}}");
  CHECK(off.noise.kind == NoiseSpec::Kind::Zero);
  CHECK_THROWS_AS(
      (void)parse_config_json("{\"initial\": {\"kind\": \"vortex\"}}"),
      ConfigError);
  CHECK_THROWS_AS((void)parse_config_json("{\"noise\": {\"kind\": \"pink\"}}"),
                  ConfigError);
}

TEST_CASE("doubles are printed exactly and minimally") {
  CHECK(round_trips(0.0));
  CHECK(round_trips(1.0));
  CHECK(round_trips(0.1));
  CHECK(round_trips(1.0 / 3.0));
  CHECK(round_trips(1e-300));
  CHECK(round_trips(-2.5e17));
  CHECK(round_trips(4.0 * std::atan(1.0)));
  CHECK(round_trips(5.0 / 7.0));
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-3.0) == "-3");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("run report structure and determinism") {
  RunConfig cfg;
  cfg.T = 0.25;
  cfg.N = 2;
  cfg.nz = 3;
  cfg.nr = 3;
  cfg.n_paths = 6;
  cfg.initial.kind = InitialSpec::Kind::Random;
  cfg.initial.amplitude = 0.2;
  const McReport rep = run_ensemble(cfg);
  const std::string text = run_report_json(rep);
  const nlohmann::json doc = nlohmann::json::parse(text);

  CHECK(doc.at("schema_version").get<std::string>() == "1");
  CHECK(doc.at("config").at("N").get<int>() == 2);
  CHECK(doc.at("config").contains("threads") == false);
  CHECK(doc.at("n_paths").get<int>() == 6);

  const auto& q = doc.at("quantities");
  for (const char* name :
       {"max_energy", "final_energy", "sum_dissipation", "sum_dv23_sq",
        "vstar_quantity", "holder", "stoch_work", "boundary_work"}) {
    REQUIRE(q.contains(name));
    REQUIRE(q.at(name).contains("mean"));
    REQUIRE(q.at(name).contains("stderr"));
  }
  CHECK(q.at("max_energy").at("mean").get<double>() > 0.0);

  const auto& res = doc.at("identity_residuals");
  CHECK(res.at("structure").get<double>() <= 1e-10);
  CHECK(res.at("stochastic").get<double>() <= 1e-10);
  CHECK(res.at("fluid").get<double>() <= 1e-10);
  CHECK(res.at("summed").get<double>() <= 1e-10);

  CHECK(doc.at("flags").at("trivially_zero_trajectory").get<bool>() == false);
  // Too few paths for the normality test.
  CHECK(doc.contains("ks") == (cfg.n_paths >= 5));

  // The meta block is the only volatile part.
  REQUIRE(doc.contains("meta"));
  CHECK(doc.at("meta").contains("timestamp"));
  CHECK(doc.at("meta").contains("elapsed_seconds"));
  CHECK(doc.at("meta").contains("threads"));
  const McReport again = run_ensemble(cfg);
  CHECK(strip_meta(run_report_json(again)) == strip_meta(text));

  // A zero run raises the triviality flag.
  RunConfig zero = cfg;
  zero.initial.kind = InitialSpec::Kind::Zero;
  zero.noise.kind = NoiseSpec::Kind::Zero;
  const nlohmann::json zdoc =
      nlohmann::json::parse(run_report_json(run_ensemble(zero)));
  CHECK(zdoc.at("flags").at("trivially_zero_trajectory").get<bool>() == true);
  CHECK(zdoc.contains("ks") == false);
}

TEST_CASE("csv artifacts are self-describing and tabular") {
  RunConfig cfg;
  cfg.T = 0.25;
  cfg.N = 2;
  cfg.nz = 3;
  cfg.nr = 3;
  cfg.n_paths = 2;
  cfg.converge.n_paths = 2;
  const McReport rep = run_ensemble(cfg);

  const std::string ledger = ledger_csv(cfg, rep.first_ledger);
  std::istringstream lines(ledger);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "# schema_version 1");
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind("# config {", 0) == 0);
  REQUIRE(std::getline(lines, line));
  CHECK(line == "n,stage,E,D,norm_v,norm_grad_eta,norm_u,dW");
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  // One initial row plus three stages per step.
  CHECK(rows == 1 + 3 * cfg.N);

  const BrownianPath path = make_driving_path(cfg, 0);
  const std::string pcsv = path_csv(cfg, path);
  std::istringstream plines(pcsv);
  REQUIRE(std::getline(plines, line));
  CHECK(line == "# schema_version 1");
  REQUIRE(std::getline(plines, line));
  CHECK(line.rfind("# config ", 0) == 0);
  REQUIRE(std::getline(plines, line));
  CHECK(line == "n,t,W");
  REQUIRE(std::getline(plines, line));
  CHECK(line.rfind("0,0,", 0) == 0);
  rows = 1;
  while (std::getline(plines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == cfg.N + 1);

  const ConvergenceReport conv = convergence_study(cfg, 2);
  const std::string ccsv = convergence_csv(conv);
  std::istringstream clines(ccsv);
  REQUIRE(std::getline(clines, line));
  CHECK(line == "# schema_version 1");
  REQUIRE(std::getline(clines, line));
  CHECK(line.rfind("# config ", 0) == 0);
  REQUIRE(std::getline(clines, line));
  CHECK(line ==
        "N_coarse,N_fine,u_diff_sq_mean,u_diff_sq_stderr,v_diff_sq_mean,"
        "v_diff_sq_stderr,eta_diff_sq_mean,eta_diff_sq_stderr,"
        "vstar_mean,vstar_stderr");
  rows = 0;
  while (std::getline(clines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);

  // The embedded config echo parses back to the same canonical form.
  std::istringstream reread(ledger);
  std::getline(reread, line);
  std::getline(reread, line);
  const std::string echo = line.substr(std::string("# config ").size());
  CHECK(config_to_json(parse_config_json(echo)) == config_to_json(cfg));
}

TEST_CASE("artifact writing creates directories and reports failures") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "sfsim_report_test";
  fs::remove_all(root);

  write_artifacts((root / "a" / "b").string(),
                  {{"x.txt", "hello\n"}, {"y.csv", "1,2\n"}});
  CHECK(slurp(root / "a" / "b" / "x.txt") == "hello\n");
  CHECK(slurp(root / "a" / "b" / "y.csv") == "1,2\n");

  // A file standing where a directory must go is an I/O failure.
  std::ofstream(root / "file") << "occupied";
  CHECK_THROWS_AS(
      write_artifacts((root / "file" / "sub").string(), {{"x", "y"}}),
      IoError);
  fs::remove_all(root);
}
