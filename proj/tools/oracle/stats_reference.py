# SPDX-License-Identifier: Apache-2.0
"""Reference values for the statistics helpers and time-norm routines.

Freezes: Kolmogorov asymptotic survival values Q(lambda) against scipy,
a worked Kolmogorov-Smirnov case, the time-shift modulus of a small
piecewise-constant trajectory by brute-force quadrature, and an
L2-in-time difference of mismatched piecewise grids.
"""
import numpy as np
from scipy.special import kolmogorov
from scipy.stats import norm

for lam in (0.5, 0.8, 1.0, 1.5, 2.0):
    print(f"kolmogorov Q({lam}) = {kolmogorov(lam)!r}")

# Worked KS case: 8 fixed samples against the standard normal CDF.
samples = np.array([-1.5, -0.8, -0.3, 0.1, 0.4, 0.9, 1.3, 2.1])
n = len(samples)
cdf = norm.cdf(np.sort(samples))
dplus = np.max(np.arange(1, n + 1) / n - cdf)
dminus = np.max(cdf - np.arange(0, n) / n)
D = max(dplus, dminus)
lam = (np.sqrt(n) + 0.12 + 0.11 / np.sqrt(n)) * D
print(f"KS case: D={D!r} lambda={lam!r} p={kolmogorov(lam)!r}")

# Time-shift modulus, brute force: scalar trajectory X = [2, 5, 3, 7] on
# N = 3 steps, T = 1, shifted-constant field f(t) = X[n] on ((n-1)dt, n dt].
X = [2.0, 5.0, 3.0, 7.0]
T, N = 1.0, 3
dt = T / N
h = 0.2


def f(t):
    nidx = int(np.ceil(t / dt - 1e-15))
    nidx = min(max(nidx, 1), N)
    return X[nidx]


tt = np.linspace(h, T, 4_000_001)
vals = np.array([(f(t - h) - f(t)) ** 2 for t in tt])
brute = np.trapezoid(vals, tt)
closed = h * sum((X[n + 1] - X[n]) ** 2 for n in range(1, N))
print(f"time-shift modulus^2 brute={brute!r} closed={closed!r}")

# L2(0,T) difference of lagged-constant functions on N=2 and N=4 grids:
# coarse Y on ((n-1)*0.5, n*0.5] takes Y[n-1]; fine Z likewise with dt 0.25.
Y = [1.0, 4.0, 2.0]          # values at t = 0, 0.5, 1.0
Z = [1.0, 3.0, 0.5, 5.0, 2.0]  # values at t = 0, 0.25, ...


def lag(vals, dtv, t):
    nidx = int(np.ceil(t / dtv - 1e-15))
    nidx = min(max(nidx, 1), len(vals) - 1)
    return vals[nidx - 1]


tt = np.linspace(1e-12, 1.0, 4_000_001)
vals = np.array([(lag(Y, 0.5, t) - lag(Z, 0.25, t)) ** 2 for t in tt])
brute = np.trapezoid(vals, tt)
closed = 0.25 * ((1 - 1) ** 2 + (1 - 3) ** 2 + (4 - 0.5) ** 2 + (4 - 5) ** 2)
print(f"lagged-diff^2 brute={brute!r} closed={closed!r}")
