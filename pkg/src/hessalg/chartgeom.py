"""Symmetric bivector fields on a flat chart of R^n.

The connection is the canonical flat one (zero coefficients), so covariant
derivatives are plain partial derivatives and ``h_#(alpha) = H(x) alpha``.
Derivatives of H come from an optional exact evaluator or central differences.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import fd, linalg
from .report import SKIPPED, CheckReport, judged

log = logging.getLogger(__name__)

DEFAULT_SEED = 0xC0FFEE


@dataclass(frozen=True)
class BivectorFieldFn:
    """``evaluator(x) -> H(x)``; optional ``derivative(x, v) -> dH(x)[v]``.

    ``second_step_floor`` raises the outer second-difference step for fields
    whose values already carry finite-difference noise.
    """

    evaluator: Callable
    derivative: Optional[Callable] = None
    name: str = ""
    second_step_floor: float = 0.0

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(x, dtype=float)), dtype=float)


@dataclass(frozen=True)
class ChartConfig:
    dim: int
    points: Optional[tuple] = None
    seed: int = DEFAULT_SEED
    count: int = 10
    sampler: Optional[Callable] = field(default=None, repr=False)
    first_step: float = 1e-5
    second_step: float = 1e-4
    tol: float = 1e-5
    curvature_tol: float = 1e-4
    det_min: float = 1e-8
    block: Optional[tuple] = None
    symmetry_tol: float = 1e-9

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not (self.first_step > 0 and self.second_step > 0):
            raise ValueError("finite-difference steps must be positive")
        if self.tol <= 0 or self.curvature_tol <= 0:
            raise ValueError("tolerances must be positive")


def samples(h: BivectorFieldFn, cfg: ChartConfig) -> list:
    """Accepted sample points. Points where H cannot be evaluated, or the
    ``cfg.block`` minor has |det| < det_min, are rejected and logged."""
    if cfg.points is not None:
        cands = [np.asarray(p, dtype=float) for p in cfg.points]
    else:
        rng = np.random.default_rng(cfg.seed)
        draw = cfg.sampler or (lambda g: g.normal(size=cfg.dim))
        cands = [np.asarray(draw(rng), dtype=float) for _ in range(cfg.count)]
    out = []
    for x in cands:
        if x.shape != (cfg.dim,):
            raise ValueError(f"sample point has shape {x.shape}, expected ({cfg.dim},)")
        try:
            H = h(x)
        except (linalg.SingularMatrixError, np.linalg.LinAlgError, ArithmeticError) as err:
            log.info("rejected sample %s: %s", x.tolist(), err)
            continue
        if not np.all(np.isfinite(H)):
            log.info("rejected sample %s: non-finite H", x.tolist())
            continue
        if max_asym(H) > cfg.symmetry_tol * (1.0 + float(np.max(np.abs(H)))):
            raise ValueError(f"bivector is not symmetric at {x.tolist()}")
        if cfg.block is not None:
            blk = H[np.ix_(cfg.block, cfg.block)]
            if abs(np.linalg.det(blk)) < cfg.det_min:
                log.info("rejected sample %s: |det| of block below %g", x.tolist(), cfg.det_min)
                continue
        out.append(x)
    return out


def max_asym(H) -> float:
    return float(np.max(np.abs(H - H.T))) if H.size else 0.0


def dH(h: BivectorFieldFn, x, v, cfg: ChartConfig) -> np.ndarray:
    """Directional derivative of H at x along v."""
    x = np.asarray(x, dtype=float)
    if h.derivative is not None:
        return np.asarray(h.derivative(x, np.asarray(v, dtype=float)), dtype=float)
    step = fd.scaled_step(cfg.first_step, x)
    return _dir_matrix(h, x, v, step)


def _dir_matrix(h, x, v, step):
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return np.zeros((x.size, x.size))
    d = v / nv
    return nv * (h(x + step * d) - h(x - step * d)) / (2 * step)


def partials(h: BivectorFieldFn, x, cfg: ChartConfig) -> np.ndarray:
    """``D1[k] = dH/dx_k``."""
    n = cfg.dim
    return np.stack([dH(h, x, np.eye(n)[k], cfg) for k in range(n)])


def _second_base(h, cfg) -> float:
    return max(cfg.second_step, getattr(h, "second_step_floor", 0.0))


def second_partials(h: BivectorFieldFn, x, cfg: ChartConfig) -> np.ndarray:
    """``D2[m, k] = d^2 H / dx_m dx_k``: differences of the exact derivative if
    available, otherwise the nested four-point stencil with the second step."""
    n = cfg.dim
    x = np.asarray(x, dtype=float)
    e = np.eye(n)
    out = np.empty((n, n, n, n))
    if h.derivative is not None:
        s = fd.scaled_step(cfg.first_step, x)
        for m in range(n):
            for k in range(n):
                out[m, k] = (dH(h, x + s * e[m], e[k], cfg) - dH(h, x - s * e[m], e[k], cfg)) / (2 * s)
        return out
    s = fd.scaled_step(_second_base(h, cfg), x)
    for m in range(n):
        for k in range(m, n):
            a, b = s * e[m], s * e[k]
            val = (h(x + a + b) - h(x + a - b) - h(x - a + b) + h(x - a - b)) / (4 * s * s)
            out[m, k] = out[k, m] = val
    return out


def codazzi_defect(h: BivectorFieldFn, x, cfg: ChartConfig):
    """``C[i, j, k] = d_{H e_i} h_jk - d_{H e_j} h_ik`` and a derivative scale."""
    H = h(x)
    dv = np.stack([dH(h, x, H[:, i], cfg) for i in range(cfg.dim)])
    C = dv - dv.transpose(1, 0, 2)
    return C, float(np.max(np.abs(dv))) if dv.size else 0.0


def _sweep(name, h, cfg, tol, per_point):
    pts = samples(h, cfg)
    if not pts:
        return CheckReport(name, SKIPPED, 0, note="no accepted sample points")
    worst, where = 0.0, None
    for x in pts:
        t, scale = per_point(x)
        if not t.size:
            continue
        flat = int(np.argmax(np.abs(t)))
        rel = float(np.abs(t).flat[flat]) / (1.0 + scale)
        if where is None or rel > worst:
            worst, where = rel, tuple(int(i) + 1 for i in np.unravel_index(flat, t.shape))
    return judged(name, worst, tol, where, note=f"{len(pts)} accepted points")


def codazzi_check(h: BivectorFieldFn, cfg: ChartConfig) -> CheckReport:
    """``nabla_{h#(a)} h(b, c) - nabla_{h#(b)} h(a, c) = 0`` on dual-basis triples."""
    return _sweep("codazzi", h, cfg, cfg.tol, lambda x: codazzi_defect(h, x, cfg))


def hamiltonian_field(h: BivectorFieldFn, f, x, cfg: Optional[ChartConfig] = None) -> np.ndarray:
    """``X_f = h_#(df)`` with a central-difference gradient."""
    x = np.asarray(x, dtype=float)
    step = fd.scaled_step(1e-5 if cfg is None else cfg.first_step, x)
    return h(x) @ fd.gradient(f, x, step)


def _coordinate(i):
    return lambda x: float(x[i])


def hamilton_equiv_check(h: BivectorFieldFn, cfg: ChartConfig) -> CheckReport:
    """Coordinate-function form: ``nabla_{X_i} X_k (x_j) = nabla_{X_j} X_k (x_i)``.

    Computed from FD Jacobians of the Hamiltonian fields X_{x_k} only (the
    derivative evaluator is not used), so it is an independent path to the
    Codazzi condition.
    """
    n = cfg.dim

    def per_point(x):
        step = fd.scaled_step(cfg.first_step, x)
        X = [(lambda k: (lambda y: hamiltonian_field(h, _coordinate(k), y, cfg)))(k) for k in range(n)]
        vals = np.stack([X[k](x) for k in range(n)], axis=1)  # vals[:, i] = X_i(x)
        J = [fd.jacobian(X[k], x, step) for k in range(n)]     # J[k][a, m] = d_m (X_k)_a
        E = np.empty((n, n, n))
        for k in range(n):
            nab = J[k] @ vals  # nab[a, i] = (nabla_{X_i} X_k)_a
            E[:, :, k] = nab.T - nab  # E[i, j, k] = (nabla_{X_i}X_k)_j - (nabla_{X_j}X_k)_i
        scale = max(float(np.max(np.abs(Jk @ vals))) for Jk in J)
        return E, scale

    return _sweep("hamilton_equiv", h, cfg, cfg.tol, per_point)


def triple_bracket(h: BivectorFieldFn, f, g, m, x, cfg: Optional[ChartConfig] = None) -> float:
    """``{f, g, m} = [X_f, X_g](m) = X_f(X_g m) - X_g(X_f m)``.

    ``X_g m = dm(H dg)`` is a scalar function; its derivative along X_f uses a
    central difference with the second step.
    """
    cfg = cfg or ChartConfig(dim=len(x))
    x = np.asarray(x, dtype=float)
    s1 = fd.scaled_step(cfg.first_step, x)
    s2 = fd.scaled_step(_second_base(h, cfg), x)

    def act(u, w):
        return lambda y: float(fd.gradient(w, y, s1) @ h(y) @ fd.gradient(u, y, s1))

    Xf = h(x) @ fd.gradient(f, x, s1)
    Xg = h(x) @ fd.gradient(g, x, s1)
    return fd.directional(act(g, m), x, Xf, s2) - fd.directional(act(f, m), x, Xg, s2)


def cyclic_defect(h, f, g, m, x, cfg=None) -> float:
    return triple_bracket(h, f, g, m, x, cfg) + triple_bracket(h, g, m, f, x, cfg) + triple_bracket(h, m, f, g, x, cfg)


def inverse_hessian_bivector(f, r: int, cfg: ChartConfig, hessian: Optional[Callable] = None,
                             hessian_step: Optional[float] = None, richardson: bool = True) -> BivectorFieldFn:
    """h with the inverse of the r x r Hessian block of f in the upper-left corner.

    ``hessian`` may supply the exact Hessian; otherwise a central-difference
    Hessian is used. Because H is then differentiated again, the default step
    for this inner Hessian is larger (1e-2, scale-aware) with one Richardson
    level, and the outer second differences use a step of at least 1e-3 so
    the inner noise is not amplified.
    """
    n = cfg.dim
    if not 1 <= r <= n:
        raise ValueError("block size must be in 1..n")
    base = 1e-2 if hessian_step is None else hessian_step

    def hess(x):
        if hessian is not None:
            return np.asarray(hessian(x), dtype=float)[:r, :r]
        fr = lambda y: f(np.concatenate([y, x[r:]]))
        s = fd.scaled_step(base, x)
        if richardson:
            return fd.richardson(lambda t: fd.hessian(fr, x[:r], t), s)
        return fd.hessian(fr, x[:r], s)

    def evaluator(x):
        x = np.asarray(x, dtype=float)
        B = hess(x)
        if abs(np.linalg.det(B)) < cfg.det_min:
            raise linalg.SingularMatrixError(f"Hessian block is singular at {x.tolist()}")
        out = np.zeros((n, n))
        out[:r, :r] = np.linalg.inv(B)
        return 0.5 * (out + out.T)

    floor = 0.0 if hessian is not None else 1e-3
    return BivectorFieldFn(evaluator, None, f"inverse Hessian ({r}x{r})", floor)


def d_product(h: BivectorFieldFn, alpha, beta, x, cfg: Optional[ChartConfig] = None) -> np.ndarray:
    """``D_alpha beta = d(h(alpha, beta))`` for constant covectors."""
    x = np.asarray(x, dtype=float)
    cfg = cfg or ChartConfig(dim=x.size)
    a, b = np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)
    D1 = partials(h, x, cfg)
    return np.einsum("i,kij,j->k", a, D1, b)


def d_curvature(h: BivectorFieldFn, x, cfg: ChartConfig):
    """``R[a, b, c] = R^D(e_a^*, e_b^*) e_c^*`` and a scale for relative judging.

    For constant covectors D_b c = theta_bc with theta_bc,k = b^T dH_k c, and
    D_a theta = a^T dH_k theta + (H a)^m d_m theta_k.
    """
    H = h(x)
    D1 = partials(h, x, cfg)          # D1[k, i, j]
    D2 = second_partials(h, x, cfg)   # D2[m, k, i, j]
    theta = D1.transpose(1, 2, 0)     # theta[b, c, k]
    t1 = np.einsum("kal,bcl->abck", D1, theta)
    t2 = np.einsum("ma,mkbc->abck", H, D2)
    R = t1 + t2
    R = R - R.transpose(1, 0, 2, 3)
    scale = float(np.max(np.abs(D1))) ** 2 + float(np.max(np.abs(H))) * float(np.max(np.abs(D2)))
    return R, scale


def d_curvature_fd(h: BivectorFieldFn, cfg: ChartConfig) -> CheckReport:
    return _sweep("D_curvature", h, cfg, cfg.curvature_tol, lambda x: d_curvature(h, x, cfg))


def triple_cyclic_check(h: BivectorFieldFn, cfg: ChartConfig, functions=None, tol: Optional[float] = None) -> CheckReport:
    """Cyclic identity of the triple bracket over function triples at the samples.

    Default functions are the coordinates x_1..x_n plus the quadratic
    x_1 x_n; all ordered triples of distinct functions are tested.
    """
    n = cfg.dim
    fs = list(functions) if functions is not None else [_coordinate(i) for i in range(n)] + [
        lambda x: float(x[0] * x[-1])]
    trip = [(a, b, c) for a in range(len(fs)) for b in range(len(fs)) for c in range(len(fs)) if len({a, b, c}) == 3]

    def per_point(x):
        vals = np.array([cyclic_defect(h, fs[a], fs[b], fs[c], x, cfg) for a, b, c in trip])
        scale = float(np.max(np.abs(h(x)))) ** 2
        return vals, scale

    return _sweep("triple_cyclic", h, cfg, cfg.tol if tol is None else tol, per_point)


def linear_bivector(A, exact_derivative: bool = False) -> BivectorFieldFn:
    """The linear bivector ``H(mu)_ij = <mu, e_i e_j>`` of an algebra."""
    c = np.asarray(A.as_float().c, dtype=float)

    def ev(mu):
        return np.einsum("ijk,k->ij", c, mu)

    deriv = (lambda mu, v: np.einsum("ijk,k->ij", c, v)) if exact_derivative else None
    return BivectorFieldFn(ev, deriv, "linear")
