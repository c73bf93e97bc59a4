"""Small dense linear algebra over Fractions or binary64.

Everything here is written for n <= ~10; clarity beats speed.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numeric import eye, float_array, is_exact, max_abs, zero_threshold, zeros


class SingularMatrixError(ValueError):
    pass


def _is_zero(v, thr) -> bool:
    return v == 0 if thr == 0 else abs(v) <= thr


def rref(m: np.ndarray, thr=None):
    """Reduced row echelon form and pivot columns.

    Partial pivoting picks the largest entry in the column (float) or the
    first nonzero one (exact), so exact results do not depend on magnitudes.
    """
    a = np.array(m, dtype=m.dtype, copy=True)
    if thr is None:
        thr = zero_threshold(m)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        if thr == 0:
            cand = [i for i in range(r, rows) if a[i, c] != 0]
            if not cand:
                continue
            p = cand[0]
        else:
            p = r + int(np.argmax(np.abs(a[r:, c])))
            if abs(a[p, c]) <= thr:
                a[r:, c] = 0.0
                continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and not _is_zero(a[i, c], 0):
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if is_exact(m):
        return len(rref(m)[1])
    s = np.linalg.svd(float_array(m), compute_uv=False)
    return int(np.sum(s > zero_threshold(m)))


def row_basis(vectors: np.ndarray, dim: int, exact: bool) -> np.ndarray:
    """Row-reduced basis (as rows) of the span of the given row vectors."""
    vectors = np.asarray(vectors)
    if vectors.size == 0:
        return zeros((0, dim), exact)
    red, piv = rref(vectors)
    return red[: len(piv)]


def nullspace(m: np.ndarray) -> np.ndarray:
    """Basis of {x : m x = 0} as rows. Exact input gives an exact basis."""
    m = np.asarray(m)
    rows, cols = m.shape
    exact = is_exact(m)
    red, piv = rref(m)
    free = [c for c in range(cols) if c not in piv]
    out = zeros((len(free), cols), exact)
    one = Fraction(1) if exact else 1.0
    for k, f in enumerate(free):
        out[k, f] = one
        for r, p in enumerate(piv):
            out[k, p] = -red[r, f]
    return out


def inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    exact = is_exact(m)
    if not exact:
        if rank(m) < n:
            raise SingularMatrixError("matrix is singular at the working threshold")
        return np.linalg.inv(float_array(m))
    aug = np.concatenate([m, eye(n, True)], axis=1)
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return red[:, n:]


def det(m: np.ndarray):
    """Exact determinant by fraction-free elimination, or numpy's for floats."""
    if not is_exact(m):
        return float(np.linalg.det(float_array(m)))
    a = np.array(m, dtype=object, copy=True)
    n = a.shape[0]
    sign = 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i, c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[[c, p]] = a[[p, c]]
            sign = -sign
        for i in range(c + 1, n):
            if a[i, c] != 0:
                a[i] = a[i] - (a[i, c] / a[c, c]) * a[c]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i, i]
    return out


def signature(m: np.ndarray, thr=None) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia counts of a symmetric matrix.

    Symmetric congruence reduction (pivoted LDL^T). When every remaining
    diagonal entry vanishes but an off-diagonal one does not, the congruence
    e_i -> e_i + e_j produces the nonzero pivot 2*a_ij.
    """
    a = np.array(m, dtype=m.dtype, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("signature needs a square matrix")
    if thr is None:
        thr = zero_threshold(m)
    asym = max_abs(a - a.T) if n else 0
    if not _is_zero(asym, thr):
        raise ValueError("signature needs a symmetric matrix")
    pos = neg = 0
    while a.shape[0]:
        k = a.shape[0]
        diag = [a[i, i] for i in range(k)]
        if thr == 0:
            p = next((i for i in range(k) if diag[i] != 0), None)
        else:
            p = int(np.argmax(np.abs(np.array(diag, dtype=float))))
            if abs(diag[p]) <= thr:
                p = None
        if p is None:
            off = [(i, j) for i in range(k) for j in range(i + 1, k) if not _is_zero(a[i, j], thr)]
            if not off:
                break
            if thr != 0:
                off.sort(key=lambda ij: -abs(a[ij]))
            i, j = off[0]
            a[i, :] = a[i, :] + a[j, :]
            a[:, i] = a[:, i] + a[:, j]
            p = i
        if p != 0:
            a[[0, p]] = a[[p, 0]]
            a[:, [0, p]] = a[:, [p, 0]]
        d = a[0, 0]
        if d > 0:
            pos += 1
        else:
            neg += 1
        col = a[1:, 0]
        a = a[1:, 1:] - np.outer(col, col) / d
    return pos, neg, n - pos - neg


def is_nilpotent(m: np.ndarray) -> bool:
    n = m.shape[0]
    p = np.array(m, dtype=m.dtype, copy=True)
    for _ in range(max(n - 1, 0)):
        p = p @ m
    thr = 0 if is_exact(m) else 1e-12 * (1.0 + max_abs(m)) ** n
    return _is_zero(max_abs(p), thr) if n else True


def expm_nilpotent(m: np.ndarray) -> np.ndarray:
    """Finite exponential series sum_{k<n} m^k / k!; exact for Fraction input."""
    n = m.shape[0]
    exact = is_exact(m)
    out = eye(n, exact)
    term = eye(n, exact)
    for k in range(1, n):
        term = term @ m
        out = out + term * (Fraction(1, math.factorial(k)) if exact else 1.0 / math.factorial(k))
    return out


_PADE6 = [math.factorial(12 - k) * math.factorial(6) / (math.factorial(12) * math.factorial(k) * math.factorial(6 - k))
          for k in range(7)]


def expm_pade6(m: np.ndarray) -> np.ndarray:
    """Scaling and squaring with the degree-6 diagonal Pade approximant.

    The scaled matrix has 1-norm <= 1/2, where the [6/6] truncation error is
    below 1e-16; the squaring phase dominates the final ~1e-12 relative error.
    """
    a = float_array(m)
    n = a.shape[0]
    norm = np.linalg.norm(a, 1) if n else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    a = a / (2.0 ** s)
    ident = np.eye(n)
    num = np.zeros((n, n))
    den = np.zeros((n, n))
    power = ident
    for k, c in enumerate(_PADE6):
        num += c * power
        den += ((-1) ** k) * c * power
        power = power @ a
    e = np.linalg.solve(den, num)
    for _ in range(s):
        e = e @ e
    return e


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential: exact finite series when nilpotent, Pade otherwise."""
    if is_nilpotent(m):
        return expm_nilpotent(m)
    return expm_pade6(m)
