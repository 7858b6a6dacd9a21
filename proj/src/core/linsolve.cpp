// SPDX-License-Identifier: Apache-2.0

#include "core/linsolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <utility>

namespace sfsim {

namespace {

void check_residual(const SpMat& A, const Vec& x, const Vec& b, double tol,
                    const std::string& label) {
  const double res = (A * x - b).norm();
  const double scale = std::max(1.0, b.norm());
  if (!(res <= tol * scale))
    throw RuntimeFailure("linear solve '" + label +
                         "' residual out of tolerance: " +
                         std::to_string(res / scale));
}

}  // namespace

struct SpdFactorization::Impl {
  SpMat A;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  std::string label;
};

SpdFactorization::SpdFactorization(const SpMat& A, std::string label)
    : impl_(std::make_unique<Impl>()) {
  impl_->A = A;
  impl_->A.makeCompressed();
  impl_->label = std::move(label);
  impl_->ldlt.compute(impl_->A);
  if (impl_->ldlt.info() != Eigen::Success)
    throw RuntimeFailure("factorization '" + impl_->label +
                         "' failed: matrix is not symmetric positive definite");
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept =
    default;

Vec SpdFactorization::solve(const Vec& b) const {
  Vec x = impl_->ldlt.solve(b);
  check_residual(impl_->A, x, b, kResidualTol, impl_->label);
  return x;
}

int SpdFactorization::rows() const { return static_cast<int>(impl_->A.rows()); }

struct LuFactorization::Impl {
  SpMat A;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  std::string label;
};

LuFactorization::LuFactorization(const SpMat& A, std::string label)
    : impl_(std::make_unique<Impl>()) {
  impl_->A = A;
  impl_->A.makeCompressed();
  impl_->label = std::move(label);
  impl_->lu.analyzePattern(impl_->A);
  impl_->lu.factorize(impl_->A);
  if (impl_->lu.info() != Eigen::Success)
    throw RuntimeFailure("factorization '" + impl_->label +
                         "' failed: matrix is singular or ill conditioned");
}

LuFactorization::~LuFactorization() = default;
LuFactorization::LuFactorization(LuFactorization&&) noexcept = default;
LuFactorization& LuFactorization::operator=(LuFactorization&&) noexcept =
    default;

Vec LuFactorization::solve(const Vec& b) const {
  Vec x = impl_->lu.solve(b);
  check_residual(impl_->A, x, b, kResidualTol, impl_->label);
  return x;
}

int LuFactorization::rows() const { return static_cast<int>(impl_->A.rows()); }

}  // namespace sfsim
