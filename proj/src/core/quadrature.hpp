// SPDX-License-Identifier: Apache-2.0

// Gauss-Legendre quadrature on the unit interval and the 1D Lagrange
// shape functions the assembly is built from. Three points integrate
// polynomials through degree 5 exactly, which covers every product of
// quadratic basis functions and their derivatives appearing here, so
// assembled matrices carry no quadrature error.

#pragma once

#include <array>

namespace sfsim {

struct Gauss3 {
  static constexpr int n = 3;
  // Nodes (1 -+ sqrt(3/5))/2 and 1/2; weights 5/18, 8/18, 5/18.
  static constexpr std::array<double, 3> x = {
      0.11270166537925831, 0.5, 0.88729833462074169};
  static constexpr std::array<double, 3> w = {
      0.27777777777777778, 0.44444444444444444, 0.27777777777777778};
};

// Linear shape functions on [0,1], nodes at {0, 1}.
inline void shape_p1(double s, std::array<double, 2>& N,
                     std::array<double, 2>& dN) {
  N = {1.0 - s, s};
  dN = {-1.0, 1.0};
}

// Quadratic shape functions on [0,1], nodes at {0, 1/2, 1}.
inline void shape_p2(double s, std::array<double, 3>& N,
                     std::array<double, 3>& dN) {
  N = {(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)};
  dN = {4.0 * s - 3.0, 4.0 - 8.0 * s, 4.0 * s - 1.0};
}

}  // namespace sfsim
