"""Finite-dimensional algebras given by structure constants.

Conventions: ``c[i, j, k]`` is the coefficient of ``e_k`` in ``e_i . e_j``
(0-based internally, 1-based in every report and file). Vectors and
covectors are 1-d arrays of coordinates; bilinear forms are square arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .numeric import einsum, exact_array, float_array, frozen, is_exact, like, max_abs, to_fraction, zero_threshold, zeros
from .report import CheckReport, judged, worst


class AlgebraInputError(ValueError):
    """Malformed algebra / r-matrix input."""


@dataclass(frozen=True)
class StructureTensor:
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise ValueError(f"structure tensor must be n x n x n with n >= 1, got {c.shape}")
        if c.dtype != object:
            c = c.astype(float)
            if not np.all(np.isfinite(c)):
                raise ValueError("structure constants must be finite")
        object.__setattr__(self, "c", frozen(c))

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.c)

    def as_float(self) -> "StructureTensor":
        return self if not self.exact else StructureTensor(float_array(self.c))

    def as_exact(self) -> "StructureTensor":
        return self if self.exact else StructureTensor(exact_array(self.c))

    def left(self, x) -> np.ndarray:
        """Matrix of y -> x.y, i.e. column j holds the coordinates of x.e_j."""
        return einsum("i,ijk->kj", like(x, self.c), self.c)

    def right(self, y) -> np.ndarray:
        return einsum("j,ijk->ki", like(y, self.c), self.c)

    def __call__(self, x, y) -> np.ndarray:
        return einsum("i,j,ijk->k", like(x, self.c), like(y, self.c), self.c)


# the phase-space code talks about products on A and A*; same data, different role
ProductTensor = StructureTensor


@dataclass(frozen=True)
class BracketTensor:
    """Antisymmetric bilinear bracket; ``b[i, j]`` holds ``[e_i, e_j]``."""

    b: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b)
        if b.ndim != 3 or not (b.shape[0] == b.shape[1] == b.shape[2]):
            raise ValueError(f"bracket tensor must be n x n x n, got {b.shape}")
        if b.dtype != object:
            b = b.astype(float)
        d = max_abs(b + b.transpose(1, 0, 2))
        if d > zero_threshold(b):
            raise ValueError(f"bracket is not antisymmetric (defect {float(d):.3g})")
        object.__setattr__(self, "b", frozen(b))

    @property
    def dim(self) -> int:
        return self.b.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.b)

    def __call__(self, x, y) -> np.ndarray:
        return einsum("i,j,ijk->k", like(x, self.b), like(y, self.b), self.b)

    def ad(self, x) -> np.ndarray:
        return einsum("i,ijk->kj", like(x, self.b), self.b)


def _tol(a, tol):
    return zero_threshold(a) if tol is None else tol


def associator(st: StructureTensor) -> np.ndarray:
    """``A[i, j, k] = (e_i e_j) e_k - e_i (e_j e_k)``."""
    c = st.c
    left = einsum("ijm,mkl->ijkl", c, c)
    right = einsum("jkm,iml->ijkl", c, c)
    return left - right


def _tensor_report(name, t, tol, nidx):
    d, where = worst((idx[:nidx], v) for idx, v in np.ndenumerate(t))
    w = tuple(i + 1 for i in where) if where is not None else None
    return judged(name, d, tol, w)


@dataclass(frozen=True)
class Algebra:
    st: StructureTensor
    basis_names: Optional[tuple] = None
    commutative: bool = field(init=False)
    associative: bool = field(init=False)
    left_symmetric: bool = field(init=False)

    def __post_init__(self):
        if not isinstance(self.st, StructureTensor):
            object.__setattr__(self, "st", StructureTensor(self.st))
        if self.basis_names is not None:
            names = tuple(str(s) for s in self.basis_names)
            if len(names) != self.dim:
                raise ValueError("basis_names length must equal dim")
            object.__setattr__(self, "basis_names", names)
        # flags are fixed at construction, never computed lazily
        object.__setattr__(self, "commutative", check_commutative(self).passed)
        object.__setattr__(self, "associative", check_associative(self).passed)
        object.__setattr__(self, "left_symmetric", check_left_symmetric(self).passed)

    @property
    def dim(self) -> int:
        return self.st.dim

    @property
    def c(self) -> np.ndarray:
        return self.st.c

    @property
    def exact(self) -> bool:
        return self.st.exact

    def as_float(self) -> "Algebra":
        return self if not self.exact else Algebra(self.st.as_float(), self.basis_names)

    def as_exact(self) -> "Algebra":
        return self if self.exact else Algebra(self.st.as_exact(), self.basis_names)

    def name(self, i: int) -> str:
        return self.basis_names[i] if self.basis_names else f"e{i + 1}"

    def basis(self, i: int) -> np.ndarray:
        v = zeros(self.dim, self.exact)
        v[i] = Fraction(1) if self.exact else 1.0
        return v


def _st(A) -> StructureTensor:
    return A.st if isinstance(A, Algebra) else A


def _check_dim(A, *vecs):
    n = _st(A).dim
    for v in vecs:
        if np.shape(v) != (n,):
            raise ValueError(f"dimension mismatch: expected length {n}, got {np.shape(v)}")


def multiply(A, a, b) -> np.ndarray:
    _check_dim(A, a, b)
    return _st(A)(a, b)


def left_mult_matrix(A, a) -> np.ndarray:
    _check_dim(A, a)
    return _st(A).left(a)


def check_commutative(A, tol=None) -> CheckReport:
    c = _st(A).c
    return _tensor_report("commutative", c - c.transpose(1, 0, 2), _tol(c, tol), 2)


def check_associative(A, tol=None) -> CheckReport:
    st = _st(A)
    return _tensor_report("associative", associator(st), _tol(st.c, tol), 3)


def check_left_symmetric(A, tol=None) -> CheckReport:
    st = _st(A)
    a = associator(st)
    return _tensor_report("left_symmetric", a - a.transpose(1, 0, 2, 3), _tol(st.c, tol), 3)


def commutator_bracket(A) -> BracketTensor:
    c = _st(A).c
    return BracketTensor(c - c.transpose(1, 0, 2))


def jacobiator(b: BracketTensor) -> np.ndarray:
    """``J[i, j, k] = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]``."""
    if not isinstance(b, BracketTensor):
        b = BracketTensor(b)
    t = b.b
    ab_c = einsum("ijm,mkl->ijkl", t, t)
    return ab_c + ab_c.transpose(1, 2, 0, 3) + ab_c.transpose(2, 0, 1, 3)


def check_jacobi(b: BracketTensor, tol=None) -> CheckReport:
    j = jacobiator(b)
    return _tensor_report("jacobi", j, _tol(b.b, tol), 3)


def power_ideal(A, k: int) -> np.ndarray:
    """Basis (rows, row-reduced) of A^k over every parenthesization.

    A^1 = A and A^k = span{A^p . A^q : p + q = k}.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    st = _st(A)
    n, exact = st.dim, st.exact
    powers = {1: linalg.row_basis(np.eye(n, dtype=int) if not exact else exact_array(np.eye(n, dtype=int)), n, exact)}
    if not exact:
        powers[1] = powers[1].astype(float)
    for m in range(2, k + 1):
        prods = []
        for p in range(1, m):
            for u in powers[p]:
                for v in powers[m - p]:
                    prods.append(st(u, v))
        powers[m] = linalg.row_basis(np.array(prods, dtype=st.c.dtype).reshape(-1, n), n, exact)
    return powers[k]


def signature(f) -> tuple[int, int, int]:
    return linalg.signature(np.asarray(f))


# -- constructors -----------------------------------------------------------

def from_products(dim: int, products, exact: bool = True, basis_names=None, symmetrize: bool = False) -> Algebra:
    """Build an algebra from ``(i, j, k, coeff)`` entries (1-based indices)."""
    c = zeros((dim, dim, dim), exact)
    seen = {}
    for (i, j, k, v) in products:
        for idx in (i, j, k):
            if not (isinstance(idx, int) and 1 <= idx <= dim):
                raise AlgebraInputError(f"index {idx!r} outside 1..{dim}")
        v = to_fraction(v) if exact else float(v)
        key = (i, j, k)
        if key in seen:
            raise AlgebraInputError(f"duplicate product entry {key}")
        seen[key] = v
        c[i - 1, j - 1, k - 1] = v
    if symmetrize:
        for (i, j, k), v in seen.items():
            other = seen.get((j, i, k))
            if other is not None and other != v:
                raise AlgebraInputError(f"symmetrize: c[{i},{j}]^{k} = {v} but c[{j},{i}]^{k} = {other}")
            c[j - 1, i - 1, k - 1] = v
    return Algebra(StructureTensor(c), basis_names)


def truncated_polynomial(k: int, nilpotent: bool = False, exact: bool = True) -> Algebra:
    """R[x]/(x^k) with basis 1, x, ..., x^{k-1}; or its ideal x, ..., x^{k-1}."""
    if k < 1 or (nilpotent and k < 2):
        raise ValueError("k too small")
    powers = list(range(1, k)) if nilpotent else list(range(k))
    pos = {p: i + 1 for i, p in enumerate(powers)}
    prods = [(pos[p], pos[q], pos[p + q], 1) for p in powers for q in powers if p + q < k]
    names = [("1" if p == 0 else "x" if p == 1 else f"x^{p}") for p in powers]
    return from_products(len(powers), prods, exact, names)


def direct_sum(A: Algebra, B: Algebra) -> Algebra:
    exact = A.exact and B.exact
    ca, cb = (A.c, B.c) if exact else (float_array(A.c), float_array(B.c))
    n, m = A.dim, B.dim
    c = zeros((n + m, n + m, n + m), exact)
    c[:n, :n, :n] = ca
    c[n:, n:, n:] = cb
    names = None
    if A.basis_names or B.basis_names:
        names = [A.name(i) for i in range(n)] + [B.name(i) for i in range(m)]
    return Algebra(StructureTensor(c), names)


def transport(A: Algebra, P) -> Algebra:
    """Same algebra in the basis f_a = sum_i P[i, a] e_i."""
    P = like(P, A.c)
    Pinv = linalg.inverse(P)
    c = einsum("ia,jb,ijk,ck->abc", P, P, A.c, Pinv)
    return Algebra(StructureTensor(c))


# -- JSON --------------------------------------------------------------------

def _parse_number(v, exact: bool):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)) and not hasattr(v, "as_integer_ratio"):
        raise AlgebraInputError(f"not a number: {v!r}")
    try:
        f = to_fraction(v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise AlgebraInputError(f"not a number: {v!r}") from exc
    return f if exact else float(f)


def _load(data):
    from decimal import Decimal
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            return json.loads(data, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise AlgebraInputError(f"malformed JSON: {exc}") from exc
    return data


def from_json(data, exact: bool = True) -> Algebra:
    """Parse the algebra wire format (bytes, str, or an already-decoded dict)."""
    d = _load(data)
    if not isinstance(d, dict):
        raise AlgebraInputError("algebra JSON must be an object")
    unknown = set(d) - {"dim", "basis", "symmetrize", "products"}
    if unknown:
        raise AlgebraInputError(f"unknown keys {sorted(unknown)}")
    dim = d.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise AlgebraInputError("'dim' must be a positive integer")
    basis = d.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim or not all(isinstance(s, str) for s in basis)):
        raise AlgebraInputError("'basis' must be a list of dim strings")
    sym = d.get("symmetrize", False)
    if not isinstance(sym, bool):
        raise AlgebraInputError("'symmetrize' must be a boolean")
    prods = d.get("products", [])
    if not isinstance(prods, list):
        raise AlgebraInputError("'products' must be a list")
    entries = []
    for p in prods:
        if not isinstance(p, dict) or set(p) != {"i", "j", "k", "c"}:
            raise AlgebraInputError(f"bad product entry {p!r}")
        entries.append((p["i"], p["j"], p["k"], _parse_number(p["c"], True)))
    return from_products(dim, entries, exact, basis, sym)


def to_json(A: Algebra) -> dict:
    out = {"dim": A.dim}
    if A.basis_names:
        out["basis"] = list(A.basis_names)
    prods = []
    for (i, j, k), v in np.ndenumerate(A.c):
        if v != 0:
            val = str(v) if isinstance(v, Fraction) and v.denominator != 1 else (int(v) if isinstance(v, Fraction) else float(v))
            prods.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": val})
    out["products"] = prods
    return out


def rmatrix_from_json(data, exact: bool = True) -> np.ndarray:
    """Parse ``{"dim": n, "entries": [[...], ...]}`` into an n x n matrix."""
    d = _load(data)
    if not isinstance(d, dict) or set(d) != {"dim", "entries"}:
        raise AlgebraInputError("r-matrix JSON must be {'dim', 'entries'}")
    n = d["dim"]
    rows = d["entries"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise AlgebraInputError("'dim' must be a positive integer")
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise AlgebraInputError("'entries' must be an n x n list of rows")
    m = zeros((n, n), exact)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            m[i, j] = _parse_number(v, exact)
    return m


def rmatrix_to_json(r) -> dict:
    r = np.asarray(r)
    conv = lambda v: (str(v) if v.denominator != 1 else int(v)) if isinstance(v, Fraction) else float(v)
    return {"dim": r.shape[0], "entries": [[conv(v) for v in row] for row in r]}
