"""Pure-Python versions of the compiled kernels (same signatures)."""

import numpy as np


def orbit_jet(a, da, x0, n, cycle):
    x, dx, dt = float(x0), 1.0, 0.0
    m = len(a)
    for k in range(n):
        cycle[k] = x
        fx = 0.0
        for j in range(m - 1, 0, -1):
            fx = fx * x + j * a[j]
        ft = 0.0
        for c in reversed(da):
            ft = ft * x + c
        dt = fx * dt + ft
        dx = fx * dx
        acc = 0.0
        for c in reversed(a):
            acc = acc * x + c
        x = acc
    return x, dx, dt


def iterate_block(coeffs, x0, transient, keep, escape, out):
    # vectorized across rows; once a row escapes it stays NaN
    coeffs = np.asarray(coeffs)
    x = np.array(x0, dtype=float)
    alive = np.ones(x.shape[0], dtype=bool)
    cols = coeffs.T[::-1]
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(transient + keep):
            acc = np.zeros_like(x)
            for c in cols:
                acc = acc * x + c
            x = acc
            alive &= np.abs(x) <= escape
            x[~alive] = 0.0
            if k >= transient:
                out[:, k - transient] = np.where(alive, x, np.nan)
    out[~alive, :] = np.nan
    return int((~alive).sum())
