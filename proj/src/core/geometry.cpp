// SPDX-License-Identifier: Apache-2.0

#include "core/geometry.hpp"

#include <cmath>

namespace sfsim {

namespace {

// Uniform lattice coordinate. Shared by every lattice so that
// coincident nodes (fluid top edge vs interface) agree bit-exactly.
double lattice_coord(int i, int n, double len) {
  return len * (static_cast<double>(i) / static_cast<double>(n));
}

}  // namespace

std::pair<FluidMesh, InterfaceMesh> build_meshes(int nz, int nr, double L,
                                                 double R) {
  if (nz < 2 || nr < 2)
    throw ConfigError("build_meshes: element counts must be >= 2 (got nz=" +
                      std::to_string(nz) + ", nr=" + std::to_string(nr) + ")");
  if (!(L > 0.0) || !(R > 0.0))
    throw ConfigError("build_meshes: domain dimensions must be positive");

  FluidMesh fm;
  fm.nz = nz;
  fm.nr = nr;
  fm.L = L;
  fm.R = R;
  fm.vnx = 2 * nz + 1;
  fm.vny = 2 * nr + 1;
  fm.pnx = nz + 1;
  fm.pny = nr + 1;

  const int nv = fm.n_vnodes();
  fm.vz.resize(nv);
  fm.vr.resize(nv);
  fm.vtag.assign(nv, 0);
  for (int iy = 0; iy < fm.vny; ++iy) {
    for (int ix = 0; ix < fm.vnx; ++ix) {
      const int id = fm.vnode(ix, iy);
      fm.vz[id] = lattice_coord(ix, 2 * nz, L);
      fm.vr[id] = lattice_coord(iy, 2 * nr, R);
      unsigned char tag = 0;
      if (iy == fm.vny - 1) tag |= TagInterface;
      if (iy == 0) tag |= TagBottom;
      if (ix == 0) tag |= TagInlet;
      if (ix == fm.vnx - 1) tag |= TagOutlet;
      fm.vtag[id] = tag;
    }
  }

  InterfaceMesh im = build_interface_mesh(nz, L, 2);
  return {std::move(fm), std::move(im)};
}

InterfaceMesh build_interface_mesh(int nz, double L, int order) {
  if (nz < 2) throw ConfigError("build_interface_mesh: need nz >= 2");
  if (!(L > 0.0)) throw ConfigError("build_interface_mesh: need L > 0");
  if (order != 1 && order != 2)
    throw ConfigError("build_interface_mesh: order must be 1 or 2");
  InterfaceMesh im;
  im.nz = nz;
  im.L = L;
  im.order = order;
  const int n = order * nz;
  im.z.resize(n + 1);
  for (int i = 0; i <= n; ++i) im.z[i] = lattice_coord(i, n, L);
  return im;
}

DofLayout build_dof_layout(const FluidMesh& fmesh, const InterfaceMesh& imesh,
                           Discretization disc) {
  (void)disc;  // single supported choice; parameter documents the contract
  if (imesh.order != 2 || imesh.nz != fmesh.nz)
    throw RuntimeFailure("build_dof_layout: interface mesh does not match the "
                         "fluid top edge");

  DofLayout layout;
  layout.n_u = fmesh.n_vnodes();
  layout.n_p = fmesh.n_pnodes();
  layout.n_i = imesh.n_nodes();

  // Identification: interface node k sits at the top-edge lattice node
  // with the same horizontal index. Positions must agree bit-exactly.
  layout.trace_node.resize(layout.n_i);
  const int top = fmesh.vny - 1;
  for (int k = 0; k < layout.n_i; ++k) {
    const int node = fmesh.vnode(k, top);
    if (fmesh.vz[node] != imesh.z[k] || fmesh.vr[node] != fmesh.R)
      throw RuntimeFailure("build_dof_layout: top-edge node " +
                           std::to_string(k) +
                           " does not coincide with the interface node");
    layout.trace_node[k] = node;
  }

  layout.u_constrained.assign(2 * layout.n_u, 0);
  for (int node = 0; node < layout.n_u; ++node) {
    const unsigned char tag = fmesh.vtag[node];
    if (tag & TagInterface) layout.u_constrained[layout.uz_dof(node)] = 1;
    if (tag & (TagBottom | TagInlet | TagOutlet))
      layout.u_constrained[layout.ur_dof(node)] = 1;
  }

  layout.interface_constrained.assign(layout.n_i, 0);
  layout.interface_constrained.front() = 1;
  layout.interface_constrained.back() = 1;
  return layout;
}

}  // namespace sfsim
