// SPDX-License-Identifier: Apache-2.0

// Structured meshes and global DOF numbering.
//
// The fluid domain is the rectangle [0,L] x [0,R], meshed by nz x nr
// axis-aligned quads. Velocity uses the biquadratic node lattice
// (2nz+1) x (2nr+1), pressure the bilinear vertex lattice
// (nz+1) x (nr+1). The membrane lives on the top edge (r = R) with a
// matching 1D quadratic mesh, so the kinematic coupling is imposed by
// sharing DOFs between the membrane velocity and the vertical fluid
// velocity trace.
//
// Boundary naming: the top edge is the moving interface, the bottom
// edge is the symmetry axis, the left/right edges are the inlet and
// outlet. Essential constraints: u_z = 0 on the interface, u_r = 0 on
// bottom/inlet/outlet, and membrane displacement/velocity pinned to 0
// at the interface endpoints.

#pragma once

#include <vector>

#include "core/types.hpp"

namespace sfsim {

// Bitmask tags for velocity lattice nodes; corners carry two bits.
enum BoundaryTag : unsigned char {
  TagInterface = 1,  // top edge, r = R
  TagBottom = 2,     // symmetry axis, r = 0
  TagInlet = 4,      // z = 0
  TagOutlet = 8,     // z = L
};

struct FluidMesh {
  int nz = 0, nr = 0;
  double L = 0.0, R = 0.0;

  int vnx = 0, vny = 0;    // velocity lattice dimensions (2nz+1, 2nr+1)
  int pnx = 0, pny = 0;    // pressure lattice dimensions (nz+1, nr+1)
  std::vector<double> vz;  // velocity node z coordinate, indexed by node id
  std::vector<double> vr;  // velocity node r coordinate
  std::vector<unsigned char> vtag;  // boundary bitmask per velocity node

  int vnode(int ix, int iy) const { return iy * vnx + ix; }
  int pnode(int ix, int iy) const { return iy * pnx + ix; }
  int n_vnodes() const { return vnx * vny; }
  int n_pnodes() const { return pnx * pny; }
  int n_elems() const { return nz * nr; }
  double hz() const { return L / nz; }
  double hr() const { return R / nr; }
};

struct InterfaceMesh {
  int nz = 0;
  double L = 0.0;
  int order = 2;          // polynomial order of the 1D space (1 or 2)
  std::vector<double> z;  // order*nz + 1 uniform nodes on [0,L]

  int n_nodes() const { return static_cast<int>(z.size()); }
};

struct DofLayout {
  int n_u = 0;  // velocity DOFs per component (= velocity lattice size)
  int n_p = 0;  // pressure DOFs
  int n_i = 0;  // interface nodes (displacement and velocity spaces)

  // Global numbering of the monolithic fluid system: first all u_z,
  // then all u_r, then pressure.
  int uz_dof(int node) const { return node; }
  int ur_dof(int node) const { return n_u + node; }
  int p_dof(int node) const { return 2 * n_u + node; }
  int n_sys() const { return 2 * n_u + n_p; }

  // Interface node k -> fluid velocity lattice node on the top edge.
  std::vector<int> trace_node;

  // Essential-constraint masks. u_constrained covers both velocity
  // components (size 2*n_u); interface_constrained marks the two
  // endpoint nodes shared by displacement and coupled velocity.
  std::vector<char> u_constrained;
  std::vector<char> interface_constrained;

  int trace_ur_dof(int k) const { return ur_dof(trace_node[k]); }
};

// The spatial discretization is fixed; the enum exists so the layout
// constructor names its contract explicitly.
enum class Discretization { TaylorHoodQ2Q1 };

// Builds the fluid mesh and the matching (quadratic) interface mesh.
// Throws ConfigError for nz/nr < 2 or nonpositive L, R.
std::pair<FluidMesh, InterfaceMesh> build_meshes(int nz, int nr, double L,
                                                 double R);

// Standalone 1D builder, used for the linear-element variant in tests.
InterfaceMesh build_interface_mesh(int nz, double L, int order);

// Numbers every unknown, lists essential constraints, and constructs
// the interface-to-trace identification map. Throws RuntimeFailure if
// the fluid top edge and the interface mesh disagree (construction bug).
DofLayout build_dof_layout(const FluidMesh& fmesh, const InterfaceMesh& imesh,
                           Discretization disc = Discretization::TaylorHoodQ2Q1);

}  // namespace sfsim
