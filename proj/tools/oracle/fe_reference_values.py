# SPDX-License-Identifier: Apache-2.0
"""Symbolic reference values for the finite element assembly tests.

Everything here is computed with sympy in exact arithmetic, independently
of the C++ quadrature code, and then frozen as literals in the unit tests.
Covers: 1D linear/quadratic element matrices, tensor-product biquadratic
mass entries, strain-rate/gradient/divergence quadratic forms for simple
polynomial fields, Gauss points, and the membrane step worked example.
"""
import sympy as sp

x, y, h = sp.symbols("x y h", positive=True)

# 1D linear shape functions on [0, h]
p1 = [1 - x / h, x / h]
# 1D quadratic shape functions on [0, h], nodes at 0, h/2, h
p2 = [(1 - x / h) * (1 - 2 * x / h), 4 * (x / h) * (1 - x / h), (x / h) * (2 * x / h - 1)]


def elem(basis):
    n = len(basis)
    M = sp.Matrix(n, n, lambda i, j: sp.integrate(basis[i] * basis[j], (x, 0, h)))
    K = sp.Matrix(n, n, lambda i, j: sp.integrate(sp.diff(basis[i], x) * sp.diff(basis[j], x), (x, 0, h)))
    ones = sp.Matrix(n, 1, lambda i, _: sp.integrate(basis[i], (x, 0, h)))
    return M, K, ones


def show(name, m):
    print(name, sp.simplify(m).tolist() if hasattr(m, "tolist") else sp.simplify(m))


M1e, K1e, o1e = elem(p1)
M2e, K2e, o2e = elem(p2)
show("P1 mass*30/h", sp.expand(M1e * 30 / h))
show("P1 stiff*h", sp.expand(K1e * h))
show("P1 ones/h", sp.expand(o1e / h))
show("P2 mass*30/h", sp.expand(M2e * 30 / h))
show("P2 stiff*3h", sp.expand(K2e * 3 * h))
show("P2 ones*6/h", sp.expand(o2e * 6 / h))

# Assembled single interior hat on a 2-element unit interval, h = 1/2:
# diagonal mass entry, stiffness entry and load, matching the module contract.
hval = sp.Rational(1, 2)
print("P1 hat mass:", 2 * M1e.subs(h, hval)[1, 1], " stiff:", 2 * K1e.subs(h, hval)[1, 1],
      " ones:", 2 * o1e.subs(h, hval)[1])

# Biquadratic tensor mass on an hz x hr element: M2d = (hz*m) x (hr*m).
m = (M2e / h).applyfunc(sp.nsimplify)
print("P2 unit mass center:", m[1, 1], " corner-corner:", m[0, 2])
print("Q2 unit-square mass center-center:", m[1, 1] ** 2, "=", float(m[1, 1] ** 2))

# Quadratic forms of simple fields on the unit square (z horizontal, r vertical):
z, r = sp.symbols("z r")


def forms(uz, ur):
    gz = [sp.diff(uz, z), sp.diff(uz, r)]
    gr = [sp.diff(ur, z), sp.diff(ur, r)]
    D2 = gz[0] ** 2 + gr[1] ** 2 + sp.Rational(1, 2) * (gz[1] + gr[0]) ** 2
    grad2 = gz[0] ** 2 + gz[1] ** 2 + gr[0] ** 2 + gr[1] ** 2
    div2 = (gz[0] + gr[1]) ** 2
    box = lambda f: sp.integrate(sp.integrate(f, (z, 0, 1)), (r, 0, 1))
    return box(2 * D2), box(grad2), box(div2)


for uz, ur, label in [(0, r, "(0, r)"), (0, r ** 2, "(0, r^2)"), (z * r, 0, "(z r, 0)")]:
    two_d, g2, dv2 = forms(uz, ur)
    print(f"u={label}: 2*int|D|^2={two_d}  int|grad|^2={g2}  int(div)^2={dv2}  sum check={sp.simplify(two_d - g2 - dv2)}")

# 3-point Gauss-Legendre on [0,1], 50 significant digits.
s35 = sp.sqrt(sp.Rational(3, 5))
pts = [(1 - s35) / 2, sp.Rational(1, 2), (1 + s35) / 2]
wts = [sp.Rational(5, 18), sp.Rational(8, 18), sp.Rational(5, 18)]
for p, w in zip(pts, wts):
    print("gauss", sp.N(p, 20), sp.N(w, 20))
# exactness through degree 5, failure at 6
for k in range(7):
    q = sum(w * p ** k for p, w in zip(pts, wts))
    print("deg", k, "quad-exact:", sp.simplify(q - sp.Rational(1, k + 1)))

# Membrane step worked example: single P1 hat, h=1/2, dt=1/10, eta=0, v=1.
dt = sp.Rational(1, 10)
Ms, Ks = sp.Rational(1, 3), sp.Integer(4)
eta13 = (dt * Ms * 1) / (Ms + dt ** 2 * Ks)
v13 = eta13 / dt
print("eta^{n+1/3} =", eta13, "=", float(eta13))
print("v^{n+1/3}   =", v13, "=", float(v13))
