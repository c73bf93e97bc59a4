"""Central finite differences in binary64.

Steps are absolute; callers pick scale-aware steps with :func:`scaled_step`.
Directional second derivatives normalise their directions so the effective
step does not depend on the length of the direction vectors.
"""
from __future__ import annotations

import numpy as np

#: smallest step accepted before we call it an underflow
MIN_STEP = 1e-12


class StepUnderflowError(ValueError):
    pass


def scaled_step(base: float, x) -> float:
    """``base * (1 + |x|_inf)``."""
    x = np.asarray(x, dtype=float)
    h = base * (1.0 + (float(np.max(np.abs(x))) if x.size else 0.0))
    if not h > MIN_STEP:
        raise StepUnderflowError(f"finite-difference step {h!r} underflows")
    return h


def gradient(f, x, h: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def directional(f, x, u, h: float) -> float:
    """Derivative of f at x along the vector u (not normalised)."""
    u = np.asarray(u, dtype=float)
    nu = float(np.linalg.norm(u))
    if nu == 0.0:
        return 0.0
    d = u / nu
    x = np.asarray(x, dtype=float)
    return nu * (f(x + h * d) - f(x - h * d)) / (2 * h)


def second_directional(f, x, u, v, h: float) -> float:
    """``d^2 f(x)[u, v]`` by the four-point central stencil."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    a, b = h * u / nu, h * v / nv
    x = np.asarray(x, dtype=float)
    val = (f(x + a + b) - f(x + a - b) - f(x - a + b) + f(x - a - b)) / (4 * h * h)
    return nu * nv * val


def hessian(f, x, h: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (f(x + ei) - 2 * f0 + f(x - ei)) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = H[j, i] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h)
    return H


def laplacian(f, x, h: float) -> float:
    return float(np.trace(hessian(f, x, h)))


def richardson(estimate, h: float, order: int = 2):
    """One level of Richardson extrapolation: halve the step, cancel the h^order term."""
    coarse = estimate(h)
    fine = estimate(h / 2)
    k = 2.0 ** order
    return (k * np.asarray(fine) - np.asarray(coarse)) / (k - 1)


def jacobian(F, x, h: float) -> np.ndarray:
    """``J[:, i] = dF/dx_i`` for a vector- or matrix-valued F (stacked on the last axis)."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        cols.append((np.asarray(F(x + e), dtype=float) - np.asarray(F(x - e), dtype=float)) / (2 * h))
    return np.stack(cols, axis=-1)
