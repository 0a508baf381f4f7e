"""Expected |<0|U|0>|^2 for U = exp(i(vx X + vz Z)), vx ~ N(0, 1/2), vz ~ N(0, 1/4).

These are the coefficient variances at elapsed = t1 with t2 = 2 t1 (vy axis off).
"""
import numpy as np
from scipy import integrate

SX2, SZ2 = 0.5, 0.25


def survival(vx, vz):
    r = np.hypot(vx, vz)
    if r == 0.0:
        return 1.0
    return np.cos(r) ** 2 + np.sin(r) ** 2 * (vz / r) ** 2


def density(vx, vz):
    return np.exp(-vx**2 / (2 * SX2) - vz**2 / (2 * SZ2)) / (2 * np.pi * np.sqrt(SX2 * SZ2))


lim = 10.0
val, err = integrate.dblquad(lambda z, x: survival(x, z) * density(x, z), -lim, lim, -lim, lim, epsabs=1e-12)
print(f"{val:.12f} +- {err:.1e}")
