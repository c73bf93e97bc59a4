"""Scalar plumbing shared by the exact (Fraction) and binary64 paths.

Arrays are plain numpy arrays. Exact arrays use ``dtype=object`` and hold
``fractions.Fraction`` entries; float arrays are ``float64``. Every routine in
the package accepts either kind and keeps the kind of its input.
"""
from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

import numpy as np

#: relative zero threshold for float rank/signature decisions
ZERO_RTOL = 1e-10


def is_exact(a) -> bool:
    if isinstance(a, np.ndarray):
        return a.dtype == object
    return isinstance(a, Rational)


def to_fraction(value) -> Fraction:
    """Parse a number or decimal/rational string without rounding."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (float, Decimal)):
        # floats go through repr so 0.1 means 1/10, as written in the input
        return Fraction(Decimal(repr(value)) if isinstance(value, float) else value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, np.floating):
        return to_fraction(float(value))
    raise TypeError(f"cannot interpret {value!r} as a rational scalar")


def exact_array(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def float_array(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    return arr.astype(float)


def like(a, template) -> np.ndarray:
    """Convert ``a`` to the arithmetic kind of ``template``."""
    return exact_array(a) if is_exact(template) else float_array(a)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def eye(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def max_abs(a):
    """Largest absolute entry; ``0`` for empty input. Exact input gives a Fraction."""
    arr = np.asarray(a)
    if arr.size == 0:
        return Fraction(0) if arr.dtype == object else 0.0
    if arr.dtype == object:
        return max(abs(v) for v in arr.flat)
    return float(np.max(np.abs(arr)))


def zero_threshold(a) -> float:
    """Scale-aware float threshold ``1e-10 * (1 + max|a|)``; exact input gets 0."""
    if is_exact(a):
        return 0
    return ZERO_RTOL * (1.0 + max_abs(a))


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=a.dtype, copy=True)
    a.flags.writeable = False
    return a


def as_number(x):
    """JSON-friendly number: Fractions become floats (ints when integral)."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _integerize(a: np.ndarray):
    """``(ints, d)`` with ``a == ints / d``; ints is an object array of Python ints."""
    d = 1
    for v in a.flat:
        d = math.lcm(d, v.denominator)
    ints = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        ints[idx] = v.numerator * (d // v.denominator)
    return ints, d


def einsum(subscripts: str, *operands) -> np.ndarray:
    """``np.einsum`` that is fast on exact input.

    Fraction operands are scaled to integer arrays, contracted with Python
    integer arithmetic, and divided by the common denominator once at the end.
    Float operands go straight to numpy.
    """
    ops = [np.asarray(o) for o in operands]
    if not all(o.dtype == object for o in ops):
        return np.einsum(subscripts, *ops)
    den = 1
    ints = []
    for o in ops:
        i, d = _integerize(o)
        ints.append(i)
        den *= d
    raw = np.einsum(subscripts, *ints, optimize=len(ints) > 2)
    if not isinstance(raw, np.ndarray):
        return Fraction(int(raw), den)
    out = np.empty(raw.shape, dtype=object)
    for idx, v in np.ndenumerate(raw):
        out[idx] = Fraction(int(v), den)
    return out
