// SPDX-License-Identifier: Apache-2.0

#include "core/noise.hpp"

#include <algorithm>
#include <cmath>

namespace sfsim {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                     std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t join64(std::uint32_t lo, std::uint32_t hi) {
  return static_cast<std::uint64_t>(lo) |
         (static_cast<std::uint64_t>(hi) << 32);
}

// One generator block for a logical draw address.
std::array<std::uint32_t, 4> block_for(std::uint64_t seed,
                                       std::uint64_t path_id,
                                       std::uint32_t purpose,
                                       std::uint32_t level,
                                       std::uint32_t index) {
  const std::array<std::uint32_t, 4> ctr = {
      index, (purpose << 24) | (level & 0xFFFFFFu),
      static_cast<std::uint32_t>(path_id),
      static_cast<std::uint32_t>(path_id >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32(ctr, key);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hilo(kMult0, ctr[0], hi0, lo0);
    mul_hilo(kMult1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double uniform_from_bits(std::uint64_t bits) {
  // 53-bit mantissa shifted into (0, 1]; adding one excludes zero so the
  // logarithm below is always finite.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double keyed_normal(std::uint64_t seed, std::uint64_t path_id,
                    std::uint32_t purpose, std::uint32_t level,
                    std::uint32_t index) {
  const auto x = block_for(seed, path_id, purpose, level, index);
  const double u1 = uniform_from_bits(join64(x[0], x[1]));
  const double u2 = uniform_from_bits(join64(x[2], x[3]));
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * M_PI * u2);
}

BrownianPath sample_path(std::uint64_t seed, std::uint64_t path_id, int N,
                         double T) {
  if (N < 1 || !(T > 0.0))
    throw ConfigError("sample_path: need N >= 1 and T > 0");
  BrownianPath p;
  p.T = T;
  p.N = N;
  p.level = 0;
  p.seed = seed;
  p.path_id = path_id;
  p.dw.resize(N);
  p.w.resize(N + 1);
  const double root_dt = std::sqrt(p.dt());
  p.w[0] = 0.0;
  for (int n = 0; n < N; ++n) {
    p.dw[n] = root_dt * keyed_normal(seed, path_id, kPurposePath, 0,
                                     static_cast<std::uint32_t>(n));
    p.w[n + 1] = p.w[n] + p.dw[n];
  }
  return p;
}

BrownianPath zero_path(int N, double T) {
  if (N < 1 || !(T > 0.0))
    throw ConfigError("zero_path: need N >= 1 and T > 0");
  BrownianPath p;
  p.T = T;
  p.N = N;
  p.level = 0;
  p.w.assign(N + 1, 0.0);
  p.dw.assign(N, 0.0);
  return p;
}

BrownianPath refine_path(const BrownianPath& coarse) {
  BrownianPath f;
  f.T = coarse.T;
  f.N = 2 * coarse.N;
  f.level = coarse.level + 1;
  f.seed = coarse.seed;
  f.path_id = coarse.path_id;
  f.w.resize(f.N + 1);
  f.dw.resize(f.N);
  const double half_root = 0.5 * std::sqrt(coarse.dt());
  for (int i = 0; i < coarse.N; ++i) {
    f.w[2 * i] = coarse.w[i];
    const double mid = 0.5 * (coarse.w[i] + coarse.w[i + 1]);
    const double xi =
        half_root * keyed_normal(coarse.seed, coarse.path_id, kPurposePath,
                                 static_cast<std::uint32_t>(f.level),
                                 static_cast<std::uint32_t>(i));
    f.w[2 * i + 1] = mid + xi;
  }
  f.w[f.N] = coarse.w[coarse.N];
  for (int j = 0; j < f.N; ++j) f.dw[j] = f.w[j + 1] - f.w[j];
  return f;
}

double holder_quotient(const BrownianPath& path, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("holder_quotient: exponent must lie in (0, 1)");
  const int N = path.N;
  const double dt = path.dt();
  double best = 0.0;
  auto consider = [&](int i, int j) {
    const double gap = static_cast<double>(j - i) * dt;
    const double q = std::abs(path.w[j] - path.w[i]) / std::pow(gap, alpha);
    best = std::max(best, q);
  };
  if (N <= 4096) {
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j <= N; ++j) consider(i, j);
  } else {
    for (int lag = 1; lag <= N; lag *= 2)
      for (int i = 0; i + lag <= N; ++i) consider(i, i + lag);
  }
  return best;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_test_standard_normal(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("ks test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = normal_cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(c - lo, hi - c));
  }
  const double root_n = std::sqrt(n);
  const double lambda = (root_n + 0.12 + 0.11 / root_n) * d;
  return {d, kolmogorov_q(lambda)};
}

}  // namespace sfsim
