// SPDX-License-Identifier: Apache-2.0

#include "core/assembly.hpp"

#include <array>

#include "core/quadrature.hpp"

namespace sfsim {

namespace {

// Local 1D element contribution for either order, exact quadrature.
template <int NN>
void accumulate_1d(double z0, double h, int first_node,
                   void (*shape)(double, std::array<double, NN>&,
                                 std::array<double, NN>&),
                   std::vector<Triplet>& mass, std::vector<Triplet>& stiff,
                   Vec& ones) {
  (void)z0;  // uniform coefficients; position only fixes the node ids
  std::array<double, NN> N, dN;
  for (int q = 0; q < Gauss3::n; ++q) {
    shape(Gauss3::x[q], N, dN);
    const double wm = Gauss3::w[q] * h;  // mass weight
    const double wk = Gauss3::w[q] / h;  // stiffness weight
    for (int i = 0; i < NN; ++i) {
      ones[first_node + i] += wm * N[i];
      for (int j = 0; j < NN; ++j) {
        // Grouping the shape product keeps entries bitwise symmetric.
        mass.emplace_back(first_node + i, first_node + j, wm * (N[i] * N[j]));
        stiff.emplace_back(first_node + i, first_node + j,
                           wk * (dN[i] * dN[j]));
      }
    }
  }
}

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& ts) {
  SpMat A(rows, cols);
  A.setFromTriplets(ts.begin(), ts.end());
  A.makeCompressed();
  return A;
}

}  // namespace

StructureOperators assemble_structure(const InterfaceMesh& imesh) {
  const int n = imesh.n_nodes();
  if (n < 2) throw ConfigError("assemble_structure: mesh has no interior");
  std::vector<Triplet> mass, stiff;
  StructureOperators ops;
  ops.ones = Vec::Zero(n);
  for (int e = 0; e < imesh.nz; ++e) {
    const int first = imesh.order * e;
    const double h = imesh.z[first + imesh.order] - imesh.z[first];
    if (imesh.order == 1)
      accumulate_1d<2>(imesh.z[first], h, first, &shape_p1, mass, stiff,
                       ops.ones);
    else
      accumulate_1d<3>(imesh.z[first], h, first, &shape_p2, mass, stiff,
                       ops.ones);
  }
  ops.M_raw = from_triplets(n, n, mass);
  ops.K_raw = from_triplets(n, n, stiff);

  std::vector<char> endpoints(n, 0);
  endpoints.front() = endpoints.back() = 1;
  ops.M_s = apply_constraints(ops.M_raw, endpoints);
  ops.K_s = apply_constraints(ops.K_raw, endpoints);
  return ops;
}

FluidOperators assemble_fluid(const FluidMesh& fmesh,
                              const InterfaceMesh& imesh,
                              const DofLayout& layout, double mu) {
  if (!(mu > 0.0)) throw ConfigError("assemble_fluid: viscosity must be > 0");

  FluidOperators ops;
  ops.mu = mu;
  const int n_u = layout.n_u;
  const int n_p = layout.n_p;
  const double hz = fmesh.hz(), hr = fmesh.hr();

  std::vector<Triplet> t_mv, t_visc, t_grad, t_divdiv, t_b;
  // Per element: 9 velocity nodes x 9, several forms; reserve roughly.
  const int ne = fmesh.n_elems();
  t_mv.reserve(static_cast<size_t>(ne) * 81 * Gauss3::n * Gauss3::n / 4);

  std::array<double, 3> Nz, dNz, Nr, dNr;
  std::array<double, 2> Pz, dPz, Pr, dPr;

  for (int er = 0; er < fmesh.nr; ++er) {
    for (int ez = 0; ez < fmesh.nz; ++ez) {
      // Global ids of the 9 velocity and 4 pressure nodes.
      int vglob[9], pglob[4];
      for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a)
          vglob[b * 3 + a] = fmesh.vnode(2 * ez + a, 2 * er + b);
      for (int d = 0; d < 2; ++d)
        for (int c = 0; c < 2; ++c)
          pglob[d * 2 + c] = fmesh.pnode(ez + c, er + d);

      for (int qr = 0; qr < Gauss3::n; ++qr) {
        for (int qz = 0; qz < Gauss3::n; ++qz) {
          shape_p2(Gauss3::x[qz], Nz, dNz);
          shape_p2(Gauss3::x[qr], Nr, dNr);
          shape_p1(Gauss3::x[qz], Pz, dPz);
          shape_p1(Gauss3::x[qr], Pr, dPr);
          const double w = Gauss3::w[qz] * Gauss3::w[qr] * hz * hr;

          double phi[9], dz[9], dr[9], psi[4];
          for (int b = 0; b < 3; ++b)
            for (int a = 0; a < 3; ++a) {
              const int l = b * 3 + a;
              phi[l] = Nz[a] * Nr[b];
              dz[l] = dNz[a] * Nr[b] / hz;
              dr[l] = Nz[a] * dNr[b] / hr;
            }
          for (int d = 0; d < 2; ++d)
            for (int c = 0; c < 2; ++c) psi[d * 2 + c] = Pz[c] * Pr[d];

          for (int i = 0; i < 9; ++i) {
            const int gi = vglob[i];
            for (int j = 0; j < 9; ++j) {
              const int gj = vglob[j];
              t_mv.emplace_back(gi, gj, w * (phi[i] * phi[j]));

              // Strain-rate form, both components and the coupling.
              // Test (N_i, 0), trial (N_j, 0): dz dz + 1/2 dr dr.
              // Test (0, N_i), trial (0, N_j): dr dr + 1/2 dz dz.
              // Cross block: 1/2 (dr_i dz_j), written into both mirror
              // slots so the matrix is bitwise symmetric.
              const double czz = w * (dz[i] * dz[j] + 0.5 * (dr[i] * dr[j]));
              const double crr = w * (dr[i] * dr[j] + 0.5 * (dz[i] * dz[j]));
              const double czr = w * (0.5 * (dr[i] * dz[j]));
              const double s = 2.0 * mu;
              t_visc.emplace_back(layout.uz_dof(gi), layout.uz_dof(gj), s * czz);
              t_visc.emplace_back(layout.ur_dof(gi), layout.ur_dof(gj), s * crr);
              t_visc.emplace_back(layout.uz_dof(gi), layout.ur_dof(gj), s * czr);
              t_visc.emplace_back(layout.ur_dof(gj), layout.uz_dof(gi), s * czr);

              const double lap = w * (dz[i] * dz[j] + dr[i] * dr[j]);
              t_grad.emplace_back(layout.uz_dof(gi), layout.uz_dof(gj), lap);
              t_grad.emplace_back(layout.ur_dof(gi), layout.ur_dof(gj), lap);

              const double dmix = w * (dz[i] * dr[j]);
              t_divdiv.emplace_back(layout.uz_dof(gi), layout.uz_dof(gj),
                                    w * (dz[i] * dz[j]));
              t_divdiv.emplace_back(layout.ur_dof(gi), layout.ur_dof(gj),
                                    w * (dr[i] * dr[j]));
              t_divdiv.emplace_back(layout.uz_dof(gi), layout.ur_dof(gj),
                                    dmix);
              t_divdiv.emplace_back(layout.ur_dof(gj), layout.uz_dof(gi),
                                    dmix);
            }
            for (int k = 0; k < 4; ++k) {
              t_b.emplace_back(pglob[k], layout.uz_dof(gi), w * psi[k] * dz[i]);
              t_b.emplace_back(pglob[k], layout.ur_dof(gi), w * psi[k] * dr[i]);
            }
          }
        }
      }
    }
  }

  ops.M_v = from_triplets(n_u, n_u, t_mv);
  {
    // Two-component mass as a block diagonal of M_v.
    std::vector<Triplet> t_mf;
    t_mf.reserve(static_cast<size_t>(ops.M_v.nonZeros()) * 2);
    for (int k = 0; k < ops.M_v.outerSize(); ++k)
      for (SpMat::InnerIterator it(ops.M_v, k); it; ++it) {
        t_mf.emplace_back(layout.uz_dof(it.row()), layout.uz_dof(it.col()),
                          it.value());
        t_mf.emplace_back(layout.ur_dof(it.row()), layout.ur_dof(it.col()),
                          it.value());
      }
    ops.M_f = from_triplets(2 * n_u, 2 * n_u, t_mf);
  }
  ops.A_visc = from_triplets(2 * n_u, 2 * n_u, t_visc);
  ops.A_grad = from_triplets(2 * n_u, 2 * n_u, t_grad);
  ops.A_divdiv = from_triplets(2 * n_u, 2 * n_u, t_divdiv);
  ops.B_div = from_triplets(n_p, 2 * n_u, t_b);

  // Inlet/outlet load vectors: line integrals of q_z along the vertical
  // edges, one quadratic trace per edge element.
  ops.b_in = Vec::Zero(2 * n_u);
  ops.b_out = Vec::Zero(2 * n_u);
  std::array<double, 3> Ne, dNe;
  for (int er = 0; er < fmesh.nr; ++er) {
    for (int q = 0; q < Gauss3::n; ++q) {
      shape_p2(Gauss3::x[q], Ne, dNe);
      const double w = Gauss3::w[q] * hr;
      for (int b = 0; b < 3; ++b) {
        const int in_node = fmesh.vnode(0, 2 * er + b);
        const int out_node = fmesh.vnode(fmesh.vnx - 1, 2 * er + b);
        ops.b_in[layout.uz_dof(in_node)] += w * Ne[b];
        ops.b_out[layout.uz_dof(out_node)] += w * Ne[b];
      }
    }
  }

  StructureOperators s = assemble_structure(imesh);
  ops.M_gamma = std::move(s.M_raw);
  ops.K_gamma = std::move(s.K_raw);
  ops.M_s = std::move(s.M_s);
  ops.K_s = std::move(s.K_s);
  ops.ones_gamma = std::move(s.ones);
  return ops;
}

SpMat apply_constraints(const SpMat& A, const std::vector<char>& mask) {
  if (static_cast<int>(mask.size()) != A.rows() || A.rows() != A.cols())
    throw RuntimeFailure("apply_constraints: mask/matrix size mismatch");
  std::vector<Triplet> kept;
  kept.reserve(static_cast<size_t>(A.nonZeros()) + mask.size());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      if (!mask[it.row()] && !mask[it.col()])
        kept.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < static_cast<int>(mask.size()); ++i)
    if (mask[i]) kept.emplace_back(i, i, 1.0);
  return from_triplets(A.rows(), A.cols(), kept);
}

void apply_constraints_rhs(Vec& b, const std::vector<char>& mask) {
  for (int i = 0; i < b.size(); ++i)
    if (mask[i]) b[i] = 0.0;
}

double quad_form(const SpMat& A, const Vec& x, const Vec& y) {
  return x.dot(A * y);
}

}  // namespace sfsim
