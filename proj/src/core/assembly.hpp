// SPDX-License-Identifier: Apache-2.0

// Global operator assembly for the coupled problem.
//
// Fluid operators on the biquadratic/bilinear pair: two-component mass,
// the strain-rate form 2*mu*int D(u):D(q), the full-gradient and
// grad-div forms (used by the Korn verification), the divergence
// coupling int chi div(u), the inlet/outlet load vectors
// int q_z dr over the vertical edges, and the membrane matrices (mass,
// stiffness, unit load) on the interface.
//
// All matrices are assembled unconstrained ("raw"). Constrained copies
// for the solvers are produced by apply_constraints, which performs
// symmetric row/column elimination with an identity diagonal so the
// energy bookkeeping built from the raw operators stays exact.

#pragma once

#include "core/geometry.hpp"
#include "core/types.hpp"

namespace sfsim {

struct StructureOperators {
  SpMat M_raw;  // interface mass, all nodes
  SpMat K_raw;  // interface stiffness, all nodes
  SpMat M_s;    // mass with endpoint constraints eliminated
  SpMat K_s;    // stiffness with endpoint constraints eliminated
  Vec ones;     // load vector of the constant 1, all nodes
};

struct FluidOperators {
  // Scalar biquadratic mass (one velocity component).
  SpMat M_v;
  // Two-component operators on [u_z; u_r], unconstrained.
  SpMat M_f;        // block-diagonal mass
  SpMat A_visc;     // 2*mu*int D(u):D(q)
  SpMat A_grad;     // int grad(u) : grad(q)
  SpMat A_divdiv;   // int div(u) div(q)
  SpMat B_div;      // n_p x 2*n_u, int chi div(u)
  Vec b_in, b_out;  // int over inlet/outlet of q_z
  // Interface (membrane) pieces, on interface nodes.
  SpMat M_gamma;  // mass, unconstrained
  SpMat K_gamma;  // stiffness, unconstrained
  SpMat M_s;      // mass, endpoints eliminated
  SpMat K_s;      // stiffness, endpoints eliminated
  Vec ones_gamma;
  double mu = 1.0;
};

// Membrane matrices for a 1D mesh of either order. The constrained
// copies pin the endpoint values (homogeneous Dirichlet).
StructureOperators assemble_structure(const InterfaceMesh& imesh);

// Assembles every operator needed by the scheme. Requires mu > 0.
FluidOperators assemble_fluid(const FluidMesh& fmesh,
                              const InterfaceMesh& imesh,
                              const DofLayout& layout, double mu);

// Symmetric elimination: zero row and column of each masked DOF and put
// 1 on the diagonal. Mask length must equal the matrix dimension.
SpMat apply_constraints(const SpMat& A, const std::vector<char>& mask);

// Zeroes masked entries of a right-hand side (the constrained values
// here are always homogeneous).
void apply_constraints_rhs(Vec& b, const std::vector<char>& mask);

// Quadratic form helper x' A y for sparse A.
double quad_form(const SpMat& A, const Vec& x, const Vec& y);

}  // namespace sfsim
