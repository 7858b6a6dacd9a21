// SPDX-License-Identifier: Apache-2.0

#include "core/linsolve.hpp"

#include <cmath>

#include "doctest.h"

#include "core/assembly.hpp"
#include "core/config.hpp"
#include "core/geometry.hpp"
#include "core/noise.hpp"
#include "core/splitting.hpp"

using namespace sfsim;

namespace {

Vec random_vec(int n, std::uint64_t tag) {
  Vec b(n);
  for (int i = 0; i < n; ++i)
    b[i] = keyed_normal(21, tag, kPurposeTest, 0,
                        static_cast<std::uint32_t>(i));
  return b;
}

}  // namespace

TEST_CASE("spd factorization solves the membrane operator") {
  const InterfaceMesh imesh = build_interface_mesh(8, 1.0, 2);
  const StructureOperators ops = assemble_structure(imesh);
  const double dt = 0.125;
  const SpMat S = SpMat(ops.M_s + dt * dt * ops.K_s);
  const SpdFactorization fac(S, "membrane");
  CHECK(fac.rows() == imesh.n_nodes());

  for (std::uint64_t t = 0; t < 20; ++t) {
    const Vec b = random_vec(imesh.n_nodes(), t);
    const Vec x = fac.solve(b);
    const double rel = (S * x - b).norm() / std::max(1.0, b.norm());
    CHECK(rel <= SpdFactorization::kResidualTol);
  }

  // Bit-determinism: repeated solves agree exactly.
  const Vec b = random_vec(imesh.n_nodes(), 99);
  const Vec x1 = fac.solve(b);
  const Vec x2 = fac.solve(b);
  CHECK((x1 - x2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lu factorization solves the coupled saddle system") {
  RunConfig cfg;
  cfg.nz = cfg.nr = 4;
  cfg.N = 8;
  const SplitContext ctx = make_split_context(cfg);
  const SpMat S = build_coupled_saddle(ctx.ops, ctx.layout, cfg.dt(), 0.0);
  const LuFactorization fac(S, "saddle");
  CHECK(fac.rows() == ctx.layout.n_sys());

  for (std::uint64_t t = 0; t < 10; ++t) {
    Vec b = random_vec(ctx.layout.n_sys(), 100 + t);
    apply_constraints_rhs(b, ctx.layout.u_constrained);
    const Vec x = fac.solve(b);
    const double rel = (S * x - b).norm() / std::max(1.0, b.norm());
    CHECK(rel <= LuFactorization::kResidualTol);
  }
}

TEST_CASE("solvers reject unusable systems") {
  // Indefinite matrix: factorization or the residual check must fail
  // loudly rather than return garbage.
  std::vector<Triplet> ts = {{0, 0, 0.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 0.0}};
  SpMat indefinite(2, 2);
  indefinite.setFromTriplets(ts.begin(), ts.end());
  Vec rhs(2);
  rhs << 1.0, 2.0;
  CHECK_THROWS_AS(
      [&] {
        const SpdFactorization fac(indefinite, "indefinite");
        (void)fac.solve(rhs);
      }(),
      RuntimeFailure);

  // Singular matrix: either factorization or the residual check throws.
  std::vector<Triplet> ss = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
  SpMat singular(2, 2);
  singular.setFromTriplets(ss.begin(), ss.end());
  Vec b(2);
  b << 1.0, 0.0;
  CHECK_THROWS_AS(
      [&] {
        const LuFactorization fac(singular, "singular");
        (void)fac.solve(b);
      }(),
      RuntimeFailure);
}
