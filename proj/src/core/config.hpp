// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: the JSON schema accepted by the library and the
// command line, with strict validation (unknown keys are errors) and
// documented defaults.  The canonical serialization excludes the thread
// count so reports from different thread counts compare byte-identical.

#pragma once

#include <cstdint>
#include <string>

#include "core/splitting.hpp"
#include "core/types.hpp"

namespace sfsim {

// Initial data selector.  Zero and Bump are closed forms, File reads
// nodal values from JSON, Random draws keyed coefficients directly in
// the discrete spaces.  Bump and File data are mapped into the discrete
// spaces by an L2 projection that respects the essential constraints,
// the divergence constraint, and the trace identification.
struct InitialSpec {
  enum class Kind { Zero, Bump, Random, File };
  Kind kind = Kind::Zero;
  double amplitude = 1.0;   // Bump, Random
  std::uint64_t seed = 0;   // Random
  std::string path;         // File
};

struct NoiseSpec {
  enum class Kind { Brownian, Zero };
  Kind kind = Kind::Brownian;
};

struct SolverSpec {
  double pressure_regularization = 0.0;  // >= 0, 0 disables
};

struct ConvergeSpec {
  int levels = 3;
  int n_paths = 100;
};

// Full run configuration.  Defaults: unit domain and coefficients
// (L = R = mu = T = 1), N = 16 steps, 8x8 mesh, 1000 paths, seed 0,
// zero pressures, zero initial data, Brownian noise, one thread.
struct RunConfig {
  double L = 1.0, R = 1.0, mu = 1.0, T = 1.0;
  int N = 16;
  int nz = 8, nr = 8;
  int n_paths = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  PressureSignal pressure_in, pressure_out;
  InitialSpec initial;
  NoiseSpec noise;
  SolverSpec solver;
  ConvergeSpec converge;
  std::string out_dir = "out";

  double dt() const { return T / static_cast<double>(N); }
};

// Parses and validates a JSON config text; throws ConfigError with a
// field-level message on any violation.  An empty object gives defaults.
RunConfig parse_config_json(const std::string& json_text);

// Reads the file and delegates to parse_config_json.
RunConfig parse_config_file(const std::string& path);

// Applies one "key=value" style override where key is a top-level
// scalar field (seed, N, n_paths, threads, out_dir).
void apply_override_seed(RunConfig& cfg, std::uint64_t seed);
void apply_override_steps(RunConfig& cfg, int N);
void apply_override_paths(RunConfig& cfg, int n_paths);
void apply_override_threads(RunConfig& cfg, int threads);
void apply_override_out_dir(RunConfig& cfg, const std::string& dir);

// Validates ranges after parsing or overrides; throws ConfigError.
void validate_config(const RunConfig& cfg);

// Canonical JSON serialization (sorted keys, two-space indent).  The
// thread count is intentionally omitted: it must never change results,
// so it is not part of a run's identity.
std::string config_to_json(const RunConfig& cfg);

}  // namespace sfsim
