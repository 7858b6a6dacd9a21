// SPDX-License-Identifier: Apache-2.0
//
// Serialization of run, verification, and convergence results.  Every
// artifact is self-describing: it carries a schema version and the
// exact configuration that produced it.  Volatile values (timestamp,
// wall time, thread count) appear only under the "meta" key of the
// JSON reports and never in the CSV tables, so identical invocations
// produce byte-identical payloads apart from that one key.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/energetics.hpp"
#include "core/montecarlo.hpp"
#include "core/noise.hpp"
#include "core/verify.hpp"

namespace sfsim {

// Shortest text form of a double that parses back to the same bits.
std::string format_double(double value);

// Ensemble report: per-quantity mean and standard error, worst identity
// residuals, a normality test of W(T)/sqrt(T) when the ensemble is
// large enough, and content flags.
std::string run_report_json(const McReport& rep);

std::string converge_report_json(const ConvergenceReport& rep);

std::string verify_report_json(const RunConfig& cfg,
                               const std::vector<CheckResult>& checks,
                               double elapsed_seconds);

// Stagewise trajectory table: one row per substep plus the initial row.
// Columns: n,stage,E,D,norm_v,norm_grad_eta,norm_u,dW where the row
// describes the state at time (n + stage) * dt.
std::string ledger_csv(const RunConfig& cfg, const EnergyLedger& ledger);

// One row per refinement comparison with means and standard errors.
std::string convergence_csv(const ConvergenceReport& rep);

// Driving Brownian path, columns n,t,W.
std::string path_csv(const RunConfig& cfg, const BrownianPath& path);

// Writes each (name, content) pair into dir, creating directories as
// needed.  Throws IoError naming the file on any failure.
void write_artifacts(const std::string& dir,
                     const std::map<std::string, std::string>& files);

}  // namespace sfsim
