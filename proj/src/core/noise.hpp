// SPDX-License-Identifier: Apache-2.0
//
// Driving noise for the coupled model: a counter-based generator, keyed
// normal draws, and Brownian paths with bit-exact dyadic refinement.
//
// Every random number is a pure function of (seed, path id, purpose,
// level, index), so ensembles can be evaluated in any order, on any
// number of threads, and reproduce exactly.  Refining a path keeps the
// sampled values at the coarse times bit-identical and fills midpoints
// with conditionally correct Brownian bridge draws.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace sfsim {

// Purpose tags select independent substreams under one seed.
enum : std::uint32_t {
  kPurposePath = 0,     // Brownian increments and bridge midpoints
  kPurposeInitial = 1,  // randomized initial data
  kPurposeTest = 2      // scratch draws for self tests
};

// One block of the counter-based permutation: four 32-bit words out for
// four counter words and two key words in (Philox-4x32 with 10 rounds).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Uniform draw on (0, 1] built from 53 bits of one 64-bit word.
double uniform_from_bits(std::uint64_t bits);

// Standard normal draw addressed by (seed, path, purpose, level, index).
// Uses one generator block per draw (Box-Muller, cosine branch).
double keyed_normal(std::uint64_t seed, std::uint64_t path_id,
                    std::uint32_t purpose, std::uint32_t level,
                    std::uint32_t index);

// Sampled Brownian motion on [0, T] with N uniform steps.  Values and
// increments are both stored: sampled paths define values as the running
// sum of drawn increments, refined paths define increments as value
// differences.  In both cases w[0] = 0 and w has N + 1 entries.
struct BrownianPath {
  double T = 0.0;
  int N = 0;
  int level = 0;  // 0 for directly sampled, +1 per refinement
  std::uint64_t seed = 0;
  std::uint64_t path_id = 0;
  std::vector<double> w;   // values at t_n = n T / N
  std::vector<double> dw;  // increments over each step

  double dt() const { return T / static_cast<double>(N); }
};

// Draws a fresh path at refinement level zero.
BrownianPath sample_path(std::uint64_t seed, std::uint64_t path_id, int N,
                         double T);

// The identically zero path (used to switch the noise off).
BrownianPath zero_path(int N, double T);

// Halves the step: even-index values are copied bit-exactly from the
// coarse path, odd-index values are conditional midpoint draws.
BrownianPath refine_path(const BrownianPath& coarse);

// sup |W(t) - W(s)| / |t - s|^alpha over sampled times.  All pairs are
// scanned for N <= 4096; beyond that only dyadic lags are used.
double holder_quotient(const BrownianPath& path, double alpha);

// Standard normal cumulative distribution function.
double normal_cdf(double x);

// Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

// One-sample Kolmogorov-Smirnov test of `samples` against the standard
// normal law.  Returns the statistic D and the asymptotic p-value with
// the small-sample correction lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
struct KsResult {
  double d = 0.0;
  double p_value = 0.0;
};
KsResult ks_test_standard_normal(std::vector<double> samples);

}  // namespace sfsim
