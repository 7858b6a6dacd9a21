// SPDX-License-Identifier: Apache-2.0
//
// Direct sparse factorizations with residual verification.  Both solver
// types factor once at construction and then serve repeated right-hand
// sides; a simulation reuses one instance for every time step and path
// at a given mesh and step size.  Solves are deterministic: the same
// matrix and right-hand side always return bit-identical solutions.

#pragma once

#include <memory>
#include <string>

#include "core/types.hpp"

namespace sfsim {

// Cholesky-type factorization of a symmetric positive definite matrix.
// Construction throws RuntimeFailure if the factorization fails; every
// solve checks the relative residual against the stated bound.
class SpdFactorization {
 public:
  explicit SpdFactorization(const SpMat& A, std::string label = "spd");
  ~SpdFactorization();
  SpdFactorization(SpdFactorization&&) noexcept;
  SpdFactorization& operator=(SpdFactorization&&) noexcept;

  // Solves A x = b and verifies ||A x - b|| <= tol * max(1, ||b||).
  Vec solve(const Vec& b) const;

  int rows() const;
  static constexpr double kResidualTol = 1e-12;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// LU factorization of a general square sparse matrix, used for the
// saddle-point systems coupling velocity, pressure, and the interface.
class LuFactorization {
 public:
  explicit LuFactorization(const SpMat& A, std::string label = "saddle");
  ~LuFactorization();
  LuFactorization(LuFactorization&&) noexcept;
  LuFactorization& operator=(LuFactorization&&) noexcept;

  // Solves A x = b and verifies ||A x - b|| <= tol * max(1, ||b||).
  Vec solve(const Vec& b) const;

  int rows() const;
  static constexpr double kResidualTol = 1e-10;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sfsim
