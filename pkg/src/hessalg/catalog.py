"""The six worked commutative associative algebras, with their published data.

Every published statement (closed forms, fundamental fields, orbit
dimensions, metric formulas, signatures, potentials, power claims) is stored
as data and re-checked at run time. Agreement is recorded as a ``published:`` check;
disagreement becomes a DISCREPANCY string and never fails the run.

Report keys per example:

* ``checks``: tool-level verifications; any failure is a tool failure.
* ``properties``: computed properties of the algebra (e.g. special real or
  not); pass/fail there is a mathematical fact, not an error.
* ``discrepancies``: published claims that disagree with the computation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import hessdual as hd
from . import linalg
from .algcore import Algebra, check_associative, check_commutative, from_products, power_ideal
from .report import FAIL, PASS, CheckReport, judged

FACT_RTOL = 1e-9
SAMPLES = 10


def _close(a, b, rtol=FACT_RTOL):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b))) <= rtol * (1.0 + float(np.max(np.abs(b))) if b.size else 1.0)


def _pm(rng, lo, hi, size=None):
    """Uniform magnitude in [lo, hi] with a random sign."""
    return rng.uniform(lo, hi, size) * rng.choice([-1.0, 1.0], size)


@dataclass
class _Run:
    index: int
    checks: list = field(default_factory=list)
    properties: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)

    def fact(self, label: str, agrees: bool, claim: str, computed: str):
        if agrees:
            self.checks.append(CheckReport(f"published: {label}", PASS, 0, note=f"published claim: {claim}"))
        else:
            self.discrepancies.append(f"DISCREPANCY ex.{self.index}: {label}: published claim {claim}; computed {computed}")

    def check(self, rep: CheckReport):
        self.checks.append(rep)

    def potential(self, label, A, phi, points, published: bool, restricted_note=""):
        """Aggregate potential_check over points; worst defect wins."""
        reps = [hd.potential_check(A, phi, p, name=label) for p in points]
        worst = max(reps, key=lambda r: r.defect)
        failed = [p for p, r in zip(points, reps) if r.failed]
        note = f"{len(points)} points{restricted_note}; worst {worst.note}"
        rep = CheckReport(label, FAIL if failed else PASS, worst.defect, worst.witness if failed else None, note)
        if not published:
            self.check(rep)
        elif not failed:
            self.check(CheckReport(f"published: {label}", PASS, rep.defect, note=f"published claim; {note}"))
        else:
            self.properties.append(rep)
            p = np.round(np.asarray(failed[0], dtype=float), 6).tolist()
            self.discrepancies.append(
                f"DISCREPANCY ex.{self.index}: {label}: published claim g = restriction of the Hessian of the potential; "
                f"computed relative error {float(worst.defect):.3e} (first failing point {p})")


@dataclass(frozen=True)
class CatalogEntry:
    index: int
    title: str
    algebra: Algebra
    facts: Callable = field(repr=False)


# -- algebras -----------------------------------------------------------------

def ex1_algebra(n: int = 3) -> Algebra:
    return from_products(n, [(i, i, i, 1) for i in range(1, n + 1)])


def ex2_algebra() -> Algebra:
    return from_products(2, [(1, 1, 1, 1), (1, 2, 2, 1), (2, 2, 1, -1)], symmetrize=True)


def ex3_algebra() -> Algebra:
    return from_products(3, [(1, 1, 2, 1), (1, 2, 3, 1)], symmetrize=True)


def ex4_algebra() -> Algebra:
    return from_products(3, [(1, 1, 2, 1), (1, 3, 1, 1), (2, 3, 2, 1), (3, 3, 3, 1)], symmetrize=True)


def ex5_algebra() -> Algebra:
    return from_products(4, [(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 1), (2, 2, 4, 1)], symmetrize=True)


def ex6_algebra() -> Algebra:
    return from_products(4, [(1, 1, 1, 1), (1, 2, 2, 1), (1, 3, 3, 1), (1, 4, 4, 1), (2, 2, 3, 1), (2, 3, 4, 1)],
                         symmetrize=True)


# -- potentials ---------------------------------------------------------------

def _nonzero(*idx):
    return lambda v: all(abs(v[i]) > 1e-12 for i in idx)


def ex1_potential(n: int = 3) -> hd.PotentialFn:
    return hd.PotentialFn(lambda u: float(np.sum(u * np.log(np.abs(u)))), _nonzero(*range(n)), "sum u ln|u|")


def ex2_potential() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: 0.5 * v[0] * np.log(v[0] ** 2 + v[1] ** 2) + v[1] * np.arctan(v[0] / v[1]),
                          _nonzero(1), "a ln(a^2+b^2)/2 + b arctan(a/b)")


def ex3_potential() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: -v[1] ** 3 / (6 * v[2] ** 2) + v[0] * v[1] / v[2], _nonzero(2),
                          "-y^3/(6z^2) + xy/z")


def ex3_line_potential() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: v[0] ** 2 / (2 * v[1]), _nonzero(1), "x^2/(2y)")


def ex4_potential() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: v[2] * np.log(abs(v[1])) + v[0] ** 2 / (2 * v[1]), _nonzero(1),
                          "z ln|y| + x^2/(2y)")


def ex5_potential_published() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: v[2] ** 4 / (12 * v[3] ** 3) + v[1] ** 2 / (2 * v[3])
                          - v[2] ** 2 * v[1] / (2 * v[3]) + v[0] * v[2] / v[3], _nonzero(3),
                          "z^4/(12t^3) + y^2/(2t) - z^2 y/(2t) + xz/t")


def ex5_potential_corrected() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: v[2] ** 4 / (12 * v[3] ** 3) + v[1] ** 2 / (2 * v[3])
                          - v[2] ** 2 * v[1] / (2 * v[3] ** 2) + v[0] * v[2] / v[3], _nonzero(3),
                          "z^4/(12t^3) + y^2/(2t) - z^2 y/(2t^2) + xz/t")


def ex6_potential() -> hd.PotentialFn:
    return hd.PotentialFn(lambda v: -v[2] ** 3 / (6 * v[3] ** 2) + v[1] * v[2] / v[3] + v[0] * np.log(abs(v[3])),
                          _nonzero(3), "-z^3/(6t^2) + yz/t + x ln|t|")


# -- shared tool checks ---------------------------------------------------------

def _common(run: _Run, A: Algebra, rng, base_points):
    run.check(check_commutative(A, 0))
    run.check(check_associative(A, 0))
    run.check(hd.codazzi_tensor_check(A))
    run.check(hd.connection_table(A).flatness)
    for rep in hd.koszul_checks(A):
        run.check(rep)
    run.check(hd.special_real_consistency(A))
    sr = hd.special_real_check(A)
    q = hd.hessian_curvature_check(A)
    run.properties += [sr, q]
    same = sr.passed == q.passed
    run.check(CheckReport("Q_zero_iff_A4_zero", PASS if same else FAIL, 0 if same else 1,
                          note=f"Q zero: {q.passed}, A^4 = 0: {sr.passed}"))
    fA = A.as_float()
    law, gram, ranks = 0.0, 0.0, []
    for mu in base_points:
        u, v = rng.normal(size=A.dim), rng.normal(size=A.dim)
        lhs = hd.orbit_map(fA, u + v, mu)
        rhs = hd.orbit_map(fA, u, hd.orbit_map(fA, v, mu))
        law = max(law, float(np.max(np.abs(lhs - rhs))) / (1.0 + float(np.max(np.abs(lhs)))))
        r0 = hd.orbit_rank(fA, mu)
        ranks += [hd.orbit_rank(fA, nu) == r0 for nu in hd.orbit_sample(fA, mu, 3, seed=int(rng.integers(2 ** 31)))]
        H = hd.gram_matrix(fA, mu)
        if r0 == A.dim:
            g = linalg.inverse(H)
            gram = max(gram, float(np.max(np.abs(H.T @ g @ H - H))) / (1.0 + float(np.max(np.abs(H)))))
    run.check(judged("action_law", law, 1e-9))
    run.check(CheckReport("rank_constant_on_orbits", PASS if all(ranks) else FAIL, ranks.count(False)))
    run.check(judged("gram_consistency", gram, 1e-9))


def _fields_fact(run, A, points, formula):
    fA = A.as_float()
    ok = all(_close(hd.fundamental_vector(fA, fA.basis(i), mu), formula(mu)[i])
             for mu in points for i in range(A.dim))
    run.fact("fundamental fields", ok, "the displayed X_{e_i} formulas", "mismatch at a sample" if not ok else "agree")


def _closed_form_fact(run, A, rng, points, formula):
    fA = A.as_float()
    bad = None
    for mu in points:
        u = rng.normal(size=A.dim)
        got = hd.orbit_map(fA, u, mu)
        if not _close(got, formula(u, mu)):
            bad = (u, got)
            break
    run.fact("orbit closed form", bad is None, "the displayed closed form of Phi(a, mu)",
             "agree" if bad is None else f"exp(L_u^T) mu = {np.round(bad[1], 6).tolist()}")


def _metric_formula_fact(run, label, points, metric_of, formula):
    for mu in points:
        got, claimed = np.asarray(metric_of(mu), dtype=float), np.asarray(formula(mu), dtype=float)
        if not _close(claimed, got):
            i, j = np.unravel_index(int(np.argmax(np.abs(claimed - got))), got.shape)
            p = np.round(np.asarray(mu, dtype=float), 6).tolist()
            run.fact(label, False, "the displayed metric in linear coordinates",
                     f"entry ({i + 1},{j + 1}) at {p} is {got[i, j]:.6g}, the formula gives {claimed[i, j]:.6g}")
            return
    run.fact(label, True, "the displayed metric in linear coordinates", "agree")


def _signature_fact(run, label, A, points, expected, restrict=None):
    fA = A.as_float()
    got = set()
    for mu in points:
        got.add(tuple(hd.h_matrix(fA, mu).signature))
    run.fact(label, got == {tuple(expected)}, f"signature {tuple(expected)}", str(sorted(got)))


def _rank_fact(run, label, A, points, expected):
    got = {hd.orbit_rank(A.as_float(), mu) for mu in points}
    run.fact(label, got == {expected}, f"orbit dimension {expected}", str(sorted(got)))


def _power_fact(run, A, k, claim_zero: bool):
    dim = len(power_ideal(A, k))
    ok = (dim == 0) == claim_zero
    shown = "0" if dim == 0 else f"span of {dim} vector(s): {_span_str(power_ideal(A, k))}"
    run.fact(f"A^{k} {'=' if claim_zero else '!='} 0", ok, f"A^{k} {'= 0' if claim_zero else '!= 0'}", f"A^{k} = {shown}")


def _span_str(rows):
    out = []
    for r in rows:
        terms = [f"{'' if v == 1 else v}e{i + 1}" for i, v in enumerate(r) if v != 0]
        out.append("+".join(terms))
    return "{" + ", ".join(out) + "}"


# -- per-example facts ------------------------------------------------------------

def _facts1(run, A, rng):
    n = A.dim
    pts = [_pm(rng, 0.3, 3.0, n) for _ in range(SAMPLES)]
    _common(run, A, rng, pts[:3])
    _closed_form_fact(run, A, rng, pts[:3], lambda u, x: np.exp(u) * x)
    _fields_fact(run, A, pts[:3], lambda x: np.diag(x))
    ok = all(hd.h_matrix(A.as_float(), x).signature == (int(np.sum(x > 0)), int(np.sum(x < 0)), 0) for x in pts)
    run.fact("signature (p, q) counts signs", ok, "p = #{x_i > 0}, q = #{x_i < 0}", "agree" if ok else "mismatch")
    run.potential("potential sum u ln|u|", A, ex1_potential(n), pts, published=True)


def _facts2(run, A, rng):
    pts = [np.array([rng.uniform(-3, 3), _pm(rng, 0.3, 3.0)]) for _ in range(SAMPLES)]
    _common(run, A, rng, pts[:3])
    _closed_form_fact(run, A, rng, pts[:3], lambda u, m: np.exp(u[0]) * np.array(
        [m[0] * np.cos(u[1]) + m[1] * np.sin(u[1]), -m[0] * np.sin(u[1]) + m[1] * np.cos(u[1])]))
    _fields_fact(run, A, pts[:3], lambda m: np.array([[m[0], m[1]], [m[1], -m[0]]]))
    ranks = {hd.orbit_rank(A, p) for p in pts}
    zero = hd.orbit_rank(A, [0, 0])
    run.fact("two orbits", ranks == {2} and zero == 0, "orbits are the origin and its complement",
             f"rank {sorted(ranks)} off the origin, {zero} at the origin")
    _metric_formula_fact(run, "metric formula", pts, lambda m: hd.ambient_metric(A.as_float(), m),
                         lambda m: np.array([[m[0], m[1]], [m[1], -m[0]]]) / (m[0] ** 2 + m[1] ** 2))
    _signature_fact(run, "Lorentzian", A, pts, (1, 1, 0))
    run.potential("potential", A, ex2_potential(), pts, published=True)
    reps = [hd.harmonic_check(ex2_potential(), p) for p in pts]
    ok = all(r.passed for r in reps)
    run.fact("potential is harmonic", ok, "the potential is harmonic",
             f"max |laplacian| {max(float(r.defect) for r in reps):.3e}")


def _facts3(run, A, rng):
    plane = [np.array([rng.uniform(-2, 2), rng.uniform(-2, 2), _pm(rng, 0.5, 2.0)]) for _ in range(SAMPLES)]
    line = [np.array([rng.uniform(-2, 2), _pm(rng, 0.5, 2.0), 0.0]) for _ in range(SAMPLES)]
    _common(run, A, rng, plane[:3])
    _power_fact(run, A, 3, False)
    _power_fact(run, A, 4, True)
    _fields_fact(run, A, plane[:3], lambda m: np.array([[m[1], m[2], 0], [m[2], 0, 0], [0, 0, 0]]))
    _closed_form_fact(run, A, rng, plane[:3], lambda u, m: np.array(
        [m[0] + u[0] * m[1] + (0.5 * u[0] ** 2 + u[1]) * m[2], m[1] + u[0] * m[2], m[2]]))
    _rank_fact(run, "planes z = c are orbits", A, plane, 2)
    _rank_fact(run, "lines z = 0, y = c are orbits", A, line, 1)
    _rank_fact(run, "points (c, 0, 0) are orbits", A, [np.array([rng.uniform(-2, 2), 0.0, 0.0]) for _ in range(3)], 0)
    ok = all(_close(hd.h_matrix(A.as_float(), m).G, [[m[1], m[2]], [m[2], 0]]) for m in plane)
    run.fact("g_c on (X_e1, X_e2)", ok, "g_c(X1,X1) = y, g_c(X1,X2) = c, g_c(X2,X2) = 0", "agree" if ok else "mismatch")
    _signature_fact(run, "g_c Lorentzian", A, plane, (1, 1, 0))
    run.potential("potential on z = c", A, ex3_potential(), plane, published=True, restricted_note=", restricted")
    run.potential("potential on z = 0, y = c", A, ex3_line_potential(), line, published=True,
                  restricted_note=", restricted")
    sr = hd.special_real_check(A)
    run.fact("special real", sr.passed, "M_c is affine special real", sr.status)


def _facts4(run, A, rng):
    up = [np.array([rng.uniform(-2, 2), rng.uniform(0.3, 2.0), rng.uniform(-2, 2)]) for _ in range(SAMPLES)]
    down = [p * np.array([1.0, -1.0, 1.0]) for p in up]
    _common(run, A, rng, up[:3])
    _closed_form_fact(run, A, rng, up[:3], lambda u, m: np.exp(u[2]) * np.array(
        [m[0] + u[0] * m[1], m[1], u[0] * m[0] + 0.5 * (u[0] ** 2 + 2 * u[1]) * m[1] + m[2]]))
    _fields_fact(run, A, up[:3], lambda m: np.array([[m[1], 0, m[0]], [0, 0, m[1]], [m[0], m[1], m[2]]]))
    _rank_fact(run, "open orbits y != 0", A, up + down, 3)
    _rank_fact(run, "orbits y = 0, x != 0", A, [np.array([_pm(rng, 0.3, 2), 0.0, rng.uniform(-2, 2)]) for _ in range(3)], 2)
    _rank_fact(run, "orbits y = x = 0, z != 0", A, [np.array([0.0, 0.0, _pm(rng, 0.3, 2)]) for _ in range(3)], 1)
    _rank_fact(run, "origin", A, [np.zeros(3)], 0)
    _metric_formula_fact(run, "metric formula", up + down, lambda m: hd.ambient_metric(A.as_float(), m),
                         lambda m: np.array([[1.0, -m[0] / m[1], 0.0],
                                             [-m[0] / m[1], (m[0] ** 2 - m[1] * m[2]) / m[1], 1.0],
                                             [0.0, 1.0, 0.0]]) / m[1])
    _signature_fact(run, "signature in y > 0", A, up, (2, 1, 0))
    _signature_fact(run, "signature in y < 0", A, down, (1, 2, 0))
    run.potential("potential", A, ex4_potential(), up + down, published=True)


def _facts5(run, A, rng):
    def plane(c_lo, c_hi, fixed=None):
        return [np.array([rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                          fixed if fixed is not None else _pm(rng, c_lo, c_hi)]) for _ in range(SAMPLES)]
    general, unit = plane(0.5, 2.0), plane(0, 0, fixed=1.0)
    off_unit = [p * np.array([1, 1, 1, 0]) + np.array([0, 0, 0, 2.0]) for p in unit]
    _common(run, A, rng, general[:3])
    _power_fact(run, A, 3, False)
    _power_fact(run, A, 4, True)
    _closed_form_fact(run, A, rng, general[:3], lambda u, m: np.array([
        m[0] + u[0] * m[1] + (0.5 * u[0] ** 2 + u[1]) * m[2] + (u[0] ** 3 / 6 + u[0] * u[1] + u[2]) * m[3],
        m[1] + u[0] * m[2] + (0.5 * u[0] ** 2 + u[1]) * m[3], m[2] + u[0] * m[3], m[3]]))
    _fields_fact(run, A, general[:3], lambda m: np.array(
        [[m[1], m[2], m[3], 0], [m[2], m[3], 0, 0], [m[3], 0, 0, 0], [0, 0, 0, 0]]))
    _rank_fact(run, "hyperplanes t = c are orbits", A, general, 3)

    def gc(m):
        c, y, z = m[3], m[1], m[2]
        return np.array([[0, 0, 1], [0, 1, -z / c], [1, -z / c, (z * z - y * c) / c ** 2]]) / c

    def restricted_inverse(m):
        gd = hd.h_matrix(A.as_float(), m)
        return np.linalg.inv(gd.G)

    _metric_formula_fact(run, "g_c formula", general, restricted_inverse, gc)
    _signature_fact(run, "signature for c > 0", A, [p for p in general if p[3] > 0] or unit, (2, 1, 0))
    _signature_fact(run, "signature for c < 0", A, [p for p in general if p[3] < 0], (1, 2, 0))
    run.potential("potential on t = 1", A, ex5_potential_published(), unit, published=True,
                  restricted_note=", restricted")
    run.potential("potential on t = 2", A, ex5_potential_published(), off_unit, published=True,
                  restricted_note=", restricted")
    run.potential("corrected potential on t = c", A, ex5_potential_corrected(), general, published=False,
                  restricted_note=", restricted")
    sr = hd.special_real_check(A)
    run.fact("special real", sr.passed, "M_c is affine special real", f"{sr.status} ({sr.note})")


def _facts6(run, A, rng):
    pts = [np.array([*rng.uniform(-2, 2, 3), _pm(rng, 0.5, 2.0)]) for _ in range(SAMPLES)]
    _common(run, A, rng, pts[:3])
    _fields_fact(run, A, pts[:3], lambda m: np.array(
        [[m[0], m[1], m[2], m[3]], [m[1], m[2], m[3], 0], [m[2], m[3], 0, 0], [m[3], 0, 0, 0]]))
    _rank_fact(run, "t > 0 and t < 0 are orbits", A, pts, 4)

    def g(m):
        x, y, z, t = m
        out = np.zeros((4, 4))
        out[0, 3] = out[3, 0] = 1.0
        out[1, 2] = out[2, 1] = 1.0
        out[1, 3] = out[3, 1] = -z / t
        out[2, 2] = -z / t
        out[2, 3] = out[3, 2] = (z * z - y * t) / t ** 2
        out[3, 3] = (2 * z * y * t - x * t * t - z ** 3) / t ** 3
        return out / t

    _metric_formula_fact(run, "metric formula", pts, lambda m: hd.ambient_metric(A.as_float(), m), g)
    _signature_fact(run, "signature", A, pts + [np.ones(4)], (2, 2, 0))
    run.potential("potential", A, ex6_potential(), pts, published=True)


def catalog() -> list[CatalogEntry]:
    return [
        CatalogEntry(1, "R^n as n copies of R (n = 3)", ex1_algebra(), _facts1),
        CatalogEntry(2, "complex numbers", ex2_algebra(), _facts2),
        CatalogEntry(3, "e1e1 = e2, e1e2 = e3", ex3_algebra(), _facts3),
        CatalogEntry(4, "e1e1 = e2, e1e3 = e1, e2e3 = e2, e3e3 = e3", ex4_algebra(), _facts4),
        CatalogEntry(5, "e1e1 = e2, e1e2 = e3, e1e3 = e2e2 = e4", ex5_algebra(), _facts5),
        CatalogEntry(6, "unital, e2e2 = e3, e2e3 = e4", ex6_algebra(), _facts6),
    ]


def run_entry(entry: CatalogEntry, seed: int = hd.DEFAULT_SEED) -> dict:
    run = _Run(entry.index)
    rng = np.random.default_rng([seed, entry.index])
    entry.facts(run, entry.algebra, rng)
    return {
        "example": entry.index,
        "title": entry.title,
        "checks": [c.to_json() for c in run.checks],
        "properties": [c.to_json() for c in run.properties],
        "discrepancies": list(run.discrepancies),
    }


def run_catalog(seed: int = hd.DEFAULT_SEED, only=None) -> list[dict]:
    entries = [e for e in catalog() if only is None or e.index in only]
    return [run_entry(e, seed) for e in sorted(entries, key=lambda e: e.index)]


def tool_failures(results: list[dict]) -> list[str]:
    return [f"ex.{r['example']}: {c['name']}" for r in results for c in r["checks"] if c["status"] == FAIL]
