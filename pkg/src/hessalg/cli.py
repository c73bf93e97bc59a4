"""Command-line front end.

Usage:
    hessalg algebra check  (PATH | --example N) [--require commutative,associative]
    hessalg algebra powers (PATH | --example N) [--max-k K]
    hessalg phase build    (PATH | --example N) [--r RPATH]
    hessalg phase verify   (PATH | --example N) --r RPATH
    hessalg phase smatrix  (PATH | --example N) --r RPATH
    hessalg dual orbit     (PATH | --example N) --point P --element U
    hessalg dual metric    (PATH | --example N) --point P
    hessalg dual curvature (PATH | --example N)
    hessalg dual koszul    (PATH | --example N) [--element U]
    hessalg dual potential (PATH | --example N) --expr E --vars x,y,.. --point P [--point P ...]
    hessalg chart codazzi  (PATH | --example N | --inverse-hessian E --vars ..) [--samples SPEC]
    hessalg chart triple   (same inputs as codazzi)
    hessalg catalog run    [--only 1,5]

Global flags (accepted after the subcommand): --exact, --seed N, --tol X,
--out PATH, --format json|md, --timing. HESSALG_SEED sets the default seed.

Exit codes:
    0: every gating check passed
    1: at least one gating check failed
    2: input or usage error
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from . import algcore, catalog, chartgeom, hessdual, linalg, phasespace
from .numeric import exact_array, float_array, to_fraction
from .report import FAIL

log = logging.getLogger("hessalg")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = hessdual.DEFAULT_SEED
AXIOMS = {
    "commutative": algcore.check_commutative,
    "associative": algcore.check_associative,
    "left_symmetric": algcore.check_left_symmetric,
}


class InputError(ValueError):
    """Bad input file, point or option value (exit code 2)."""


# -- report bundle -------------------------------------------------------------

def _num(v):
    """Deterministic JSON scalar: exact values stay exact (``"p/q"`` strings)."""
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    return v


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()] if x.dtype != object else [_jsonable(v) for v in x]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return _num(x)


@dataclass
class ReportBundle:
    command: str
    inputs: dict = field(default_factory=dict)      # label -> sha256
    checks: list = field(default_factory=list)      # gating CheckReports
    properties: list = field(default_factory=list)  # reported, not gating
    discrepancies: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    entries: Optional[list] = None                  # catalog entries
    seed: int = DEFAULT_SEED
    elapsed: float = 0.0

    @property
    def failed(self) -> bool:
        if any(c.failed for c in self.checks):
            return True
        return bool(self.entries and catalog.tool_failures(self.entries))

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "tool": "hessalg",
            "version": __version__,
            "command": self.command,
            "seed": self.seed,
            "inputs": dict(sorted(self.inputs.items())),
            "status": FAIL if self.failed else "pass",
            "checks": [c.to_json() for c in self.checks],
            "properties": [c.to_json() for c in self.properties],
            "discrepancies": list(self.discrepancies),
            "results": _jsonable(self.results),
        }
        if self.entries is not None:
            out["entries"] = self.entries
            out["discrepancies"] = [d for e in self.entries for d in e["discrepancies"]]
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out


def dumps(bundle: ReportBundle, timing: bool = False) -> str:
    return json.dumps(bundle.to_json(timing), indent=2, sort_keys=True, allow_nan=True) + "\n"


def _md_checks(rows, title):
    if not rows:
        return []
    out = [f"### {title}", "", "| check | status | defect | witness | note |", "|---|---|---|---|---|"]
    for c in rows:
        w = ",".join(str(i) for i in c.get("witness", [])) if c.get("witness") else ""
        out.append(f"| {c['name']} | {c['status']} | {c['defect']} | {w} | {c.get('note', '')} |")
    out.append("")
    return out


def to_markdown(bundle: ReportBundle, timing: bool = False) -> str:
    d = bundle.to_json(timing)
    out = [f"# hessalg {d['command']}", "", f"version {d['version']}, seed {d['seed']}, status **{d['status']}**", ""]
    for label, digest in d["inputs"].items():
        out.append(f"- input `{label}`: sha256 `{digest}`")
    if d["inputs"]:
        out.append("")
    out += _md_checks(d["checks"], "Checks")
    out += _md_checks(d["properties"], "Properties (not gating)")
    for e in d.get("entries") or []:
        out.append(f"## Example {e['example']}: {e['title']}")
        out.append("")
        out += _md_checks(e["checks"], "Checks")
        out += _md_checks(e["properties"], "Properties (not gating)")
        for s in e["discrepancies"]:
            out.append(f"- {s}")
        if e["discrepancies"]:
            out.append("")
    if d["results"]:
        out += ["### Results", "", "```json", json.dumps(d["results"], indent=2, sort_keys=True), "```", ""]
    if d["discrepancies"]:
        out += ["### Discrepancies", ""] + [f"- {s}" for s in d["discrepancies"]] + [""]
    if timing:
        out.append(f"elapsed {d['elapsed_seconds']} s")
    return "\n".join(out).rstrip() + "\n"


# -- input helpers -------------------------------------------------------------

def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_algebra(args, bundle: ReportBundle) -> algcore.Algebra:
    exact = args.exact
    if getattr(args, "example", None) is not None:
        entries = {e.index: e for e in catalog.catalog()}
        if args.example not in entries:
            raise InputError(f"--example must be one of {sorted(entries)}")
        A = entries[args.example].algebra
        canon = json.dumps(algcore.to_json(A), sort_keys=True).encode()
        bundle.inputs[f"example:{args.example}"] = _digest(canon)
        return A if exact else A.as_float()
    if not getattr(args, "algebra", None):
        raise InputError("an algebra path or --example N is required")
    raw = _read(args.algebra)
    bundle.inputs[args.algebra] = _digest(raw)
    try:
        return algcore.from_json(raw, exact=exact)
    except algcore.AlgebraInputError as exc:
        raise InputError(f"{args.algebra}: {exc}") from exc


def load_r(path: str, n: int, exact: bool, bundle: ReportBundle) -> np.ndarray:
    raw = _read(path)
    bundle.inputs[path] = _digest(raw)
    try:
        r = algcore.rmatrix_from_json(raw, exact=exact)
    except algcore.AlgebraInputError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if r.shape != (n, n):
        raise InputError(f"{path}: r has dim {r.shape[0]}, algebra has dim {n}")
    return r


def parse_vector(text: str, n: Optional[int], exact: bool, what: str = "point") -> np.ndarray:
    """Comma-separated numbers; decimals and p/q are parsed exactly in exact mode."""
    try:
        vals = [to_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad {what} {text!r}: {exc}") from exc
    if n is not None and len(vals) != n:
        raise InputError(f"{what} {text!r} has {len(vals)} entries, expected {n}")
    return exact_array(vals) if exact else float_array(vals)


def _tol(args, default=None):
    return args.tol if args.tol is not None else default


def _matrix(m):
    return _jsonable(np.asarray(m))


# -- algebra -------------------------------------------------------------------

def cmd_algebra(args, bundle: ReportBundle):
    A = load_algebra(args, bundle)
    tol = _tol(args)
    if args.action == "check":
        wanted = [s.strip() for s in args.require.split(",") if s.strip()]
        bad = [w for w in wanted if w not in AXIOMS and w != "jacobi"]
        if bad:
            raise InputError(f"unknown checks {bad}; choose from {sorted(AXIOMS) + ['jacobi']}")
        for name in list(AXIOMS) + ["jacobi"]:
            if name == "jacobi":
                rep = algcore.check_jacobi(algcore.commutator_bracket(A), tol)
            else:
                rep = AXIOMS[name](A, tol)
            (bundle.checks if name in wanted else bundle.properties).append(rep)
    bundle.results["dim"] = A.dim
    kmax = getattr(args, "max_k", None) or A.dim + 1
    dims = {}
    for k in range(1, kmax + 1):
        dims[str(k)] = int(algcore.power_ideal(A, k).shape[0])
    bundle.results["power_ideal_dims"] = dims


# -- phase ---------------------------------------------------------------------

def _left_symmetric_gate(A, bundle, tol) -> bool:
    rep = algcore.check_left_symmetric(A, tol)
    bundle.checks.append(rep)
    return rep.passed


def cmd_phase(args, bundle: ReportBundle):
    A = load_algebra(args, bundle)
    tol = _tol(args)
    if args.action in ("verify", "smatrix") and not args.r:
        raise InputError(f"phase {args.action} needs --r")
    if not _left_symmetric_gate(A, bundle, tol):
        return
    if not args.r:
        P = phasespace.build_triangular(A)
        bundle.results["construction"] = "triangular"
        bundle.checks += phasespace.para_kahler_verify(P, tol)
        bundle.results["metric"] = _matrix(P.metric)
        bundle.results["K"] = _matrix(P.K)
        return
    r = load_r(args.r, A.dim, args.exact, bundle)
    quasi = phasespace.check_quasi_s_matrix(A, r, tol)
    bundle.checks += quasi
    if args.action == "smatrix":
        bundle.results["quasi_s"] = phasespace.theorem_conditions_hold(quasi)
        return
    P = phasespace.build_phase_space_r(A, r, enforce=False)
    bundle.results["construction"] = "r-twisted triangular"
    bundle.checks += phasespace.para_kahler_verify(P, tol)
    if args.action == "verify":
        bundle.checks.append(phasespace.xi_check(A, r, tol))
        bundle.checks += phasespace.xi_structure_check(A, r, tol)
    else:
        bundle.results["metric"] = _matrix(P.metric)
        bundle.results["K"] = _matrix(P.K)


# -- dual ----------------------------------------------------------------------

def cmd_dual(args, bundle: ReportBundle):
    A = load_algebra(args, bundle)
    tol = _tol(args)
    n = A.dim
    try:
        hessdual._require_ca(A)
    except hessdual.NotCommutativeAssociativeError as exc:
        raise InputError(str(exc)) from exc
    act = args.action
    if act in ("orbit", "metric") and not args.point:
        raise InputError(f"dual {act} needs --point")
    if act == "orbit":
        if not args.element:
            raise InputError("dual orbit needs --element")
        mu = parse_vector(args.point[0], n, args.exact)
        u = parse_vector(args.element, n, args.exact, "element")
        bundle.results["image"] = list(hessdual.orbit_map(A, u, mu))
        bundle.results["fundamental_vector"] = list(hessdual.fundamental_vector(A, u, mu))
        bundle.results["orbit_rank"] = hessdual.orbit_rank(A, mu)
    elif act == "metric":
        out = []
        for p in args.point:
            mu = parse_vector(p, n, args.exact)
            gd = hessdual.h_matrix(A, mu)
            row = {"point": list(mu), "rank": gd.rank, "tangent_indices": [i + 1 for i in gd.tangent_indices],
                   "orbit_metric": _matrix(gd.G), "signature": list(gd.signature)}
            if gd.rank == n:
                g = hessdual.ambient_metric(A, mu)
                row["ambient_metric"] = _matrix(g)
                row["signature"] = list(linalg.signature(g))
            out.append(row)
        bundle.results["metrics"] = out
    elif act == "curvature":
        bundle.checks.append(hessdual.special_real_consistency(A))
        bundle.properties.append(hessdual.special_real_check(A, tol))
        bundle.properties.append(hessdual.hessian_curvature_check(A, tol))
        bundle.checks.append(hessdual.codazzi_tensor_check(A, tol))
        bundle.checks.append(hessdual.connection_table(A, tol).flatness)
    elif act == "koszul":
        bundle.checks += hessdual.koszul_checks(A, tol)
        if args.element:
            u = parse_vector(args.element, n, args.exact, "element")
            bundle.results["alpha"] = hessdual.koszul_alpha(A, u)
        bundle.results["alpha_basis"] = [hessdual.koszul_alpha(A, A.basis(i)) for i in range(n)]
    elif act == "potential":
        if not (args.expr and args.vars and args.point):
            raise InputError("dual potential needs --expr, --vars and at least one --point")
        names = [v.strip() for v in args.vars.split(",")]
        if len(names) != n:
            raise InputError(f"--vars lists {len(names)} names, algebra has dim {n}")
        try:
            phi = hessdual.PotentialFn.from_expression(args.expr, names, args.guard)
        except (ValueError, SyntaxError) as exc:
            raise InputError(f"bad expression: {exc}") from exc
        ptol = _tol(args, hessdual.FD_TOL)
        for k, p in enumerate(args.point, 1):
            mu = parse_vector(p, n, False)
            try:
                bundle.checks.append(hessdual.potential_check(A, phi, mu, tol=ptol, richardson=args.richardson,
                                                              name=f"potential[{k}]"))
            except hessdual.DomainError as exc:
                raise InputError(str(exc)) from exc


# -- chart ---------------------------------------------------------------------

def _sample_spec(args, bundle):
    spec = {}
    if args.samples:
        raw = _read(args.samples)
        bundle.inputs[args.samples] = _digest(raw)
        try:
            spec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.samples}: malformed JSON: {exc}") from exc
        if not isinstance(spec, dict) or set(spec) - {"points", "seed", "count"}:
            raise InputError(f"{args.samples}: expected an object with keys points, seed, count")
    return spec


def cmd_chart(args, bundle: ReportBundle):
    spec = _sample_spec(args, bundle)
    if args.inverse_hessian:
        if not (args.vars and args.block):
            raise InputError("--inverse-hessian needs --vars and --block")
        names = [v.strip() for v in args.vars.split(",")]
        n = len(names)
        try:
            phi = hessdual.PotentialFn.from_expression(args.inverse_hessian, names)
        except (ValueError, SyntaxError) as exc:
            raise InputError(f"bad expression: {exc}") from exc
        bundle.inputs["inverse-hessian"] = _digest(args.inverse_hessian.encode())
        block = tuple(range(args.block))
        make = lambda cfg: chartgeom.inverse_hessian_bivector(phi, args.block, cfg)
    else:
        A = load_algebra(args, bundle)
        n, block = A.dim, None
        make = lambda cfg: chartgeom.linear_bivector(A)
    sampler = None
    if args.box:
        lo, hi = (float(t) for t in parse_vector(args.box, 2, False, "box"))
        sampler = lambda g: g.uniform(lo, hi, n)
    points = spec.get("points")
    try:
        cfg = chartgeom.ChartConfig(
            dim=n,
            points=tuple(tuple(float(v) for v in p) for p in points) if points is not None else None,
            seed=int(spec.get("seed", bundle.seed)),
            count=int(spec.get("count", args.count)),
            sampler=sampler,
            tol=_tol(args, 1e-5),
            block=block,
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad sample specification: {exc}") from exc
    h = make(cfg)
    try:
        if args.action == "codazzi":
            bundle.checks += [chartgeom.codazzi_check(h, cfg), chartgeom.hamilton_equiv_check(h, cfg),
                              chartgeom.d_curvature_fd(h, cfg)]
        else:
            bundle.checks.append(chartgeom.triple_cyclic_check(h, cfg))
        bundle.results["accepted_points"] = len(chartgeom.samples(h, cfg))
    except chartgeom.fd.StepUnderflowError as exc:
        raise InputError(str(exc)) from exc


# -- catalog -------------------------------------------------------------------

def cmd_catalog(args, bundle: ReportBundle):
    only = None
    if args.only:
        try:
            only = {int(t) for t in args.only.split(",")}
        except ValueError as exc:
            raise InputError(f"bad --only {args.only!r}") from exc
    bundle.entries = catalog.run_catalog(bundle.seed, only)


# -- parser --------------------------------------------------------------------

def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--exact", action="store_true", help="parse inputs as exact rationals")
    g.add_argument("--seed", type=int, default=None, help="RNG seed (default: $HESSALG_SEED or 0xC0FFEE)")
    g.add_argument("--tol", type=_positive_float, default=None, help="tolerance for float checks")
    g.add_argument("--out", default=None, help="write the report here instead of stdout")
    g.add_argument("--format", choices=["json", "md"], default="json")
    g.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    g.add_argument("-v", "--verbose", action="store_true", help="log rejected samples and progress")
    return p


def _algebra_input(p):
    p.add_argument("algebra", nargs="?", help="algebra JSON file")
    p.add_argument("--example", type=int, default=None, help="use a built-in example algebra (1-6)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hessalg", description="Checks for left-symmetric algebras, "
                                     "phase spaces, Hessian structures on dual spaces and flat charts.")
    parser.add_argument("--version", action="version", version=f"hessalg {__version__}")
    top = parser.add_subparsers(dest="group", required=True)

    g = top.add_parser("algebra", help="axiom checks and power ideals").add_subparsers(dest="action", required=True)
    p = g.add_parser("check", parents=[common])
    _algebra_input(p)
    p.add_argument("--require", default="commutative,associative",
                   help="comma list of gating checks: commutative, associative, left_symmetric, jacobi")
    p = g.add_parser("powers", parents=[common])
    _algebra_input(p)
    p.add_argument("--max-k", type=int, default=None)

    g = top.add_parser("phase", help="phase spaces and quasi-S-matrices").add_subparsers(dest="action", required=True)
    for name in ("build", "verify", "smatrix"):
        p = g.add_parser(name, parents=[common])
        _algebra_input(p)
        p.add_argument("--r", default=None, help="r-matrix JSON file")

    g = top.add_parser("dual", help="orbits and Hessian structures on A*").add_subparsers(dest="action", required=True)
    for name in ("orbit", "metric", "curvature", "koszul", "potential"):
        p = g.add_parser(name, parents=[common])
        _algebra_input(p)
        p.add_argument("--point", action="append", default=None, help="comma-separated point of A*")
        p.add_argument("--element", default=None, help="comma-separated element of A")
        p.add_argument("--expr", default=None, help="potential expression")
        p.add_argument("--vars", default=None, help="comma-separated variable names")
        p.add_argument("--guard", default=None, help="expression nonzero on the domain")
        p.add_argument("--richardson", action="store_true")

    g = top.add_parser("chart", help="bivector fields on a flat chart").add_subparsers(dest="action", required=True)
    for name in ("codazzi", "triple"):
        p = g.add_parser(name, parents=[common])
        _algebra_input(p)
        p.add_argument("--inverse-hessian", default=None, help="expression f; h is the inverse Hessian block")
        p.add_argument("--vars", default=None)
        p.add_argument("--block", type=int, default=None, help="size r of the Hessian block")
        p.add_argument("--samples", default=None, help='JSON {"points": [...], "seed": s, "count": c}')
        p.add_argument("--count", type=int, default=10)
        p.add_argument("--box", default=None, help="lo,hi: sample uniformly from [lo, hi]^n")

    g = top.add_parser("catalog", help="run the six worked examples").add_subparsers(dest="action", required=True)
    p = g.add_parser("run", parents=[common])
    p.add_argument("--only", default=None, help="comma list of example numbers")
    return parser


HANDLERS = {"algebra": cmd_algebra, "phase": cmd_phase, "dual": cmd_dual, "chart": cmd_chart, "catalog": cmd_catalog}


def resolve_seed(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("HESSALG_SEED")
    if env:
        try:
            return int(env, 0)
        except ValueError as exc:
            raise InputError(f"HESSALG_SEED={env!r} is not an integer") from exc
    return DEFAULT_SEED


def run(argv=None) -> tuple[int, ReportBundle, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    bundle = ReportBundle(command=f"{args.group} {args.action}")
    t0 = time.perf_counter()
    bundle.seed = resolve_seed(args.seed)
    HANDLERS[args.group](args, bundle)
    bundle.elapsed = time.perf_counter() - t0
    return (EXIT_FAIL if bundle.failed else EXIT_OK), bundle, args


def main(argv=None) -> int:
    try:
        code, bundle, args = run(argv)
    except InputError as exc:
        print(f"hessalg: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = to_markdown(bundle, args.timing) if args.format == "md" else dumps(bundle, args.timing)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"hessalg: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    if args.timing:
        print(f"elapsed {bundle.elapsed:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
