"""Linear pseudo-Hessian geometry on the dual of a commutative associative algebra.

For mu in A* the bivector is ``H_ij(mu) = <mu, e_i e_j>``, the fundamental field
of u is ``X_u(mu) = L_u^T mu`` (so column i of H is X_{e_i}(mu)), and the
orbits of ``(u, mu) -> exp(L_u^T) mu`` carry the metric g(X_a, X_b) = <mu, ab>.
"""
from __future__ import annotations

import ast
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import fd, linalg
from .algcore import Algebra, _tensor_report, power_ideal
from .numeric import einsum, float_array, is_exact, like, zero_threshold, zeros
from .report import FAIL, PASS, CheckReport, judged, worst

log = logging.getLogger(__name__)

DEFAULT_SEED = 0xC0FFEE
FD_BASE_STEP = 1e-4
FD_TOL = 1e-5


class NotCommutativeAssociativeError(ValueError):
    pass


class DomainError(ValueError):
    """A point fails a potential's domain guard."""


def _require_ca(A: Algebra):
    if not (A.commutative and A.associative):
        raise NotCommutativeAssociativeError("algebra must be commutative and associative")


def _point(A: Algebra, mu) -> np.ndarray:
    mu = like(mu, A.c)
    if mu.shape != (A.dim,):
        raise ValueError(f"point must have length {A.dim}")
    return mu


def _half(exact):
    return Fraction(1, 2) if exact else 0.5


# -- Gram data ---------------------------------------------------------------

@dataclass(frozen=True)
class GramData:
    H: np.ndarray
    rank: int
    tangent_indices: tuple
    G: np.ndarray
    signature: tuple


def gram_matrix(A: Algebra, mu) -> np.ndarray:
    """``H[i, j] = sum_k c_ij^k mu_k``."""
    return einsum("ijk,k->ij", A.c, _point(A, mu))


def pivot_columns(H: np.ndarray, thr=None) -> tuple:
    """Greedy column pivoting on residual norms, ties to the lowest index.

    Exact input uses squared norms and exact projections, so the choice is
    exact too. The number of pivots is the rank.
    """
    exact = is_exact(H)
    thr = zero_threshold(H) if thr is None else thr
    n = H.shape[1]
    resid = [H[:, j].copy() for j in range(n)]
    chosen = []
    while True:
        norms = [sum(v * v for v in resid[j]) if j not in chosen else -1 for j in range(n)]
        if exact:
            best = max(norms) if norms else 0
            if best <= 0:
                break
        else:
            best = max(norms) if norms else 0.0
            if best <= thr * thr:
                break
        j = norms.index(best)  # first index attaining the maximum
        chosen.append(j)
        q = resid[j]
        qq = sum(v * v for v in q)
        for k in range(n):
            if k not in chosen:
                resid[k] = resid[k] - q * (sum(a * b for a, b in zip(q, resid[k])) / qq)
    return tuple(sorted(chosen))


def h_matrix(A: Algebra, mu) -> GramData:
    _require_ca(A)
    H = gram_matrix(A, mu)
    idx = pivot_columns(H)
    G = H[np.ix_(idx, idx)]
    sig = linalg.signature(G) if idx else (0, 0, 0)
    return GramData(H, len(idx), idx, G, sig)


def orbit_metric(A: Algebra, mu) -> GramData:
    """Orbit metric on the pivot generators X_{e_i}, i in tangent_indices."""
    return h_matrix(A, mu)


def fundamental_vector(A: Algebra, u, mu) -> np.ndarray:
    """``nu_j = <mu, u e_j>``, i.e. L_u^T mu."""
    u, mu = _point(A, u), _point(A, mu)
    return A.st.left(u).T @ mu


def orbit_map(A: Algebra, u, mu) -> np.ndarray:
    """``exp(L_u^T) mu``; exact when L_u is nilpotent and the input is exact."""
    u, mu = _point(A, u), _point(A, mu)
    M = A.st.left(u).T
    if linalg.is_nilpotent(M):
        return linalg.expm_nilpotent(M) @ mu
    return linalg.expm_pade6(M) @ float_array(mu)


def orbit_rank(A: Algebra, mu) -> int:
    return linalg.rank(gram_matrix(A, mu))


def orbit_sample(A: Algebra, mu, count: int, seed: int = DEFAULT_SEED, scale: float = 1.0,
                 guard: Optional[Callable] = None, max_tries: int = 1000) -> list:
    """Points ``exp(L_u^T) mu`` for pseudo-random u ~ N(0, scale^2).

    Samples that fail ``guard`` or drop the rank are rejected and logged.
    """
    rng = np.random.default_rng(seed)
    fA = A.as_float()
    mu = float_array(mu)
    r0 = orbit_rank(fA, mu)
    out, tries = [], 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"only {len(out)} of {count} samples accepted after {max_tries} tries")
        u = rng.normal(scale=scale, size=A.dim)
        nu = orbit_map(fA, u, mu)
        if guard is not None and not guard(nu):
            log.info("rejected sample %s: domain guard", nu.tolist())
            continue
        if orbit_rank(fA, nu) != r0:
            log.info("rejected sample %s: rank drop", nu.tolist())
            continue
        out.append(nu)
    return out


def ambient_metric(A: Algebra, mu) -> np.ndarray:
    """``H(mu)^{-1}``, the metric of an open orbit in the linear coordinates of A*."""
    _require_ca(A)
    H = gram_matrix(A, mu)
    if linalg.rank(H) < A.dim:
        raise linalg.SingularMatrixError("H(mu) is singular: the orbit is not open")
    return linalg.inverse(H)


# -- Hessian curvature, Koszul forms, connections --------------------------------

def triple_products(A: Algebra) -> np.ndarray:
    """``P[a, b, c] = (e_a e_b) e_c``."""
    return einsum("abm,mck->abck", A.c, A.c)


def hessian_curvature(A: Algebra, a, b, c, mu) -> np.ndarray:
    """``Q(X_a, X_b) X_c = X_{abc} / 2`` at mu."""
    st = A.st
    a, b, c = _point(A, a), _point(A, b), _point(A, c)
    abc = st(st(a, b), c)
    return fundamental_vector(A, abc, mu) * _half(A.exact)


def hessian_curvature_check(A: Algebra, tol=None) -> CheckReport:
    """Q = 0 as a tensor field: max over basis triples of the coefficients of mu -> X_{abc}(mu)/2."""
    _require_ca(A)
    P = triple_products(A)
    # coefficient of mu_k in X_{abc}(mu)_j is ((abc) e_j)_k
    q = einsum("abcm,mjk->abcjk", P, A.c) * _half(A.exact)
    return _tensor_report("hessian_curvature_zero", q, zero_threshold(A.c) if tol is None else tol, 3)


def _trace(m):
    return sum(m[i, i] for i in range(m.shape[0])) if is_exact(m) else float(np.trace(m))


def koszul_alpha(A: Algebra, a):
    """First Koszul form on X_a: ``-tr(L_a) / 2``."""
    return -_trace(A.st.left(_point(A, a))) * _half(A.exact)


def koszul_beta(A: Algebra, a, b):
    """Second Koszul form on (X_a, X_b): ``tr(L_{ab}) / 2``."""
    a, b = _point(A, a), _point(A, b)
    return _trace(A.st.left(A.st(a, b))) * _half(A.exact)


def koszul_checks(A: Algebra, tol=None) -> list[CheckReport]:
    """beta symmetric, and beta(a, b) = -alpha(ab), on basis pairs."""
    n = A.dim
    t = zero_threshold(A.c) if tol is None else tol
    sym = [((i + 1, j + 1), koszul_beta(A, A.basis(i), A.basis(j)) - koszul_beta(A, A.basis(j), A.basis(i)))
           for i in range(n) for j in range(n)]
    rel = [((i + 1, j + 1), koszul_beta(A, A.basis(i), A.basis(j)) + koszul_alpha(A, A.st(A.basis(i), A.basis(j))))
           for i in range(n) for j in range(n)]
    d1, w1 = worst(sym)
    d2, w2 = worst(rel)
    return [judged("koszul_beta_symmetric", d1, t, w1), judged("koszul_beta_alpha", d2, t, w2)]


@dataclass(frozen=True)
class ConnectionTable:
    """Coefficients on fundamental fields: ``nabla[a, b] = ab``, ``D = ab/2``, ``nabla' = 0``."""

    nabla: np.ndarray
    D: np.ndarray
    nabla_prime: np.ndarray
    flatness: CheckReport


def d_flatness_defect(A: Algebra) -> np.ndarray:
    """``R^D(X_a, X_b) X_c = (a(bc) - b(ac)) / 4`` since [X_a, X_b] = 0."""
    c = A.c
    abc = einsum("bcm,amk->abck", c, c)
    q = _half(A.exact) ** 2
    return (abc - abc.transpose(1, 0, 2, 3)) * q


def connection_table(A: Algebra, tol=None) -> ConnectionTable:
    c = A.c
    flat = _tensor_report("D_flat", d_flatness_defect(A), zero_threshold(c) if tol is None else tol, 3)
    return ConnectionTable(c, c * _half(A.exact), zeros(c.shape, A.exact), flat)


def codazzi_tensor_check(A: Algebra, tol=None) -> CheckReport:
    """``T(du*, dv*, dw*) = (uvw)*`` is totally symmetric (both parenthesizations)."""
    _require_ca(A)
    P = triple_products(A)
    other = einsum("bcm,amk->abck", A.c, A.c)  # e_a (e_b e_c)
    perms = [(0, 2, 1, 3), (1, 0, 2, 3), (1, 2, 0, 3), (2, 0, 1, 3), (2, 1, 0, 3)]
    parts = [P - other] + [P - P.transpose(p) for p in perms]
    defect = np.stack(parts, axis=3)  # [a, b, c, which, k]
    return _tensor_report("codazzi_tensor", defect, zero_threshold(A.c) if tol is None else tol, 3)


def special_real_check(A: Algebra, tol=None) -> CheckReport:
    """``DT(du*, dv*, dw*, dx*) = -2 (uvwx)*``; passes iff that vanishes (A^4 = 0)."""
    _require_ca(A)
    quad = einsum("abcm,mdk->abcdk", triple_products(A), A.c) * 2
    dim4 = len(power_ideal(A, 4))
    rep = _tensor_report("special_real", quad, zero_threshold(A.c) if tol is None else tol, 4)
    return CheckReport(rep.name, rep.status, rep.defect, rep.witness, note=f"dim A^4 = {dim4}")


def special_real_consistency(A: Algebra) -> CheckReport:
    """special_real_check and power_ideal(A, 4) must agree."""
    sr = special_real_check(A).passed
    zero4 = len(power_ideal(A, 4)) == 0
    ok = sr == zero4
    return CheckReport("special_real_vs_power_ideal", PASS if ok else FAIL, 0 if ok else 1,
                       note=f"special_real={'pass' if sr else 'fail'}, A^4={'0' if zero4 else 'nonzero'}")


# -- potentials ---------------------------------------------------------------

_FUNCS = {
    "log": np.log, "ln": np.log, "exp": np.exp, "sqrt": np.sqrt, "abs": np.abs,
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "arctan": np.arctan, "atan": np.arctan,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def _always(_x) -> bool:
    return True


@dataclass(frozen=True)
class PotentialFn:
    """A scalar function on an open subset of A* with a domain guard."""

    fn: Callable
    guard: Callable = _always
    name: str = ""

    def __call__(self, x) -> float:
        return float(self.fn(np.asarray(x, dtype=float)))

    def check_domain(self, x):
        x = np.asarray(x, dtype=float)
        if not self.guard(x):
            raise DomainError(f"{self.name or 'potential'}: point {x.tolist()} fails the domain guard")
        if not math.isfinite(self(x)):
            raise DomainError(f"{self.name or 'potential'}: non-finite value at {x.tolist()}")

    @classmethod
    def from_expression(cls, expr: str, variables, guard: Optional[str] = None) -> "PotentialFn":
        """Arithmetic expression in the given variable names, e.g. ``"z*log(abs(y)) + x**2/(2*y)"``.

        Only + - * / **, numeric constants, pi, e and a fixed set of
        elementary functions are accepted. ``guard``, if given, is an
        expression that must be nonzero on the domain (e.g. ``"y"``).
        """
        variables = tuple(variables)
        code = _compile(expr, variables)
        gcode = _compile(guard, variables) if guard else None

        def fn(x):
            return _eval(code, variables, x)

        def g(x):
            if gcode is None:
                return True
            v = _eval(gcode, variables, x)
            return bool(np.isfinite(v) and v != 0)

        return cls(fn, g, expr)


def _compile(expr: str, variables):
    tree = ast.parse(expr, mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise ValueError(f"unsupported syntax in expression: {type(node).__name__}")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
            raise ValueError("only elementary functions may be called")
        if isinstance(node, ast.Name) and node.id not in _FUNCS and node.id not in _CONSTS and node.id not in variables:
            raise ValueError(f"unknown name {node.id!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ValueError("only numeric constants are allowed")
    return compile(tree, "<potential>", "eval")


def _eval(code, variables, x):
    env = dict(_FUNCS)
    env.update(_CONSTS)
    env.update({v: float(x[i]) for i, v in enumerate(variables)})
    with np.errstate(all="ignore"):
        return float(eval(code, {"__builtins__": {}}, env))


def _fd_hessian(phi, x, h, richardson):
    if richardson:
        return fd.richardson(lambda s: fd.hessian(phi, x, s), h)
    return fd.hessian(phi, x, h)


def _fd_pair(phi, x, u, v, h, richardson):
    if richardson:
        return float(fd.richardson(lambda s: fd.second_directional(phi, x, u, v, s), h))
    return fd.second_directional(phi, x, u, v, h)


def _rel(err, ref):
    scale = float(np.max(np.abs(ref))) if np.size(ref) else 0.0
    return err / scale if scale > 0 else err


def potential_check(A: Algebra, phi: PotentialFn, mu, step: Optional[float] = None, tol: float = FD_TOL,
                    richardson: bool = False, name: str = "potential") -> CheckReport:
    """Finite-difference ``nabla d phi`` along orbit generators against the orbit metric.

    Compares ``d^2 phi(mu)[X_{e_i}, X_{e_j}]`` with ``H_ij(mu)`` for i, j in the
    pivot subset; on open orbits the full FD Hessian is also compared with
    ``H(mu)^{-1}``. The defect is the larger max relative error.
    """
    _require_ca(A)
    fA = A.as_float()
    mu = float_array(mu)
    phi.check_domain(mu)
    h = fd.scaled_step(FD_BASE_STEP if step is None else step, mu)
    gd = h_matrix(fA, mu)
    H, idx = gd.H, gd.tangent_indices
    if not idx:
        return CheckReport(name, PASS, 0.0, note="rank 0 orbit: nothing to compare")
    fd_g = np.array([[_fd_pair(phi, mu, H[:, i], H[:, j], h, richardson) for j in idx] for i in idx])
    errs = np.abs(fd_g - gd.G)
    defect = _rel(float(np.max(errs)), gd.G)
    k = np.unravel_index(int(np.argmax(errs)), errs.shape)
    witness = (idx[k[0]] + 1, idx[k[1]] + 1)
    note = f"orbit rank {gd.rank}"
    if gd.rank == A.dim:
        g = linalg.inverse(H)
        full = _fd_hessian(phi, mu, h, richardson)
        e2 = np.abs(full - g)
        d2 = _rel(float(np.max(e2)), g)
        if d2 > defect:
            defect = d2
            k = np.unravel_index(int(np.argmax(e2)), e2.shape)
            witness = (int(k[0]) + 1, int(k[1]) + 1)
        note += "; full Hessian compared with H^-1"
    return judged(name, defect, tol, witness, note)


def harmonic_check(phi: PotentialFn, mu, step: Optional[float] = None, tol: float = 1e-6,
                   name: str = "harmonic") -> CheckReport:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (2,):
        raise ValueError("harmonic_check is defined on 2-dimensional domains")
    phi.check_domain(mu)
    h = fd.scaled_step(FD_BASE_STEP if step is None else step, mu)
    lap = abs(fd.laplacian(phi, mu, h))
    return judged(name, lap, tol, note=f"laplacian {lap:.3e}")
