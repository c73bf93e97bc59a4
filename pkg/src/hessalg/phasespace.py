"""Para-Kahler phase spaces of left-symmetric algebras (Lie algebroids over a point).

Over a point the anchor is zero, so every ``rho(X).f`` term of the algebroid
formulas drops out. Conventions used throughout:

* ``S`` is a product on A with ``S[i, j, k]`` = coefficient of e_k in S_{e_i} e_j;
  ``Sm[x]`` is the matrix of S_{e_x}.
* The dual action is ``S_X^* = -(S_X)^T`` acting on covector coordinates.
* ``r`` is an n x n matrix with r(alpha, beta) = alpha^T r beta, so
  ``r_#(alpha) = r^T alpha``.
* Phase space coordinates: 0..n-1 span A, n..2n-1 span A*.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algcore import BracketTensor, StructureTensor, _tensor_report, check_jacobi, check_left_symmetric
from .numeric import einsum, eye, is_exact, like, max_abs, zero_threshold, zeros
from .report import FAIL, PASS, SKIPPED, VACUOUS, CheckReport


class NotLeftSymmetricError(ValueError):
    pass


class CompatibilityError(ValueError):
    pass


def _half(exact):
    return Fraction(1, 2) if exact else 0.5


def _st(S) -> StructureTensor:
    return S.st if hasattr(S, "st") else (S if isinstance(S, StructureTensor) else StructureTensor(S))


def _mats(S: StructureTensor) -> np.ndarray:
    """Stack of S_{e_x} matrices: ``out[x][k, j] = S[x, j, k]``."""
    return np.ascontiguousarray(S.c.transpose(0, 2, 1))


def _dual_mats(S: StructureTensor) -> np.ndarray:
    return -S.c  # (-(S_x)^T)[j, k] = -S[x, j, k]


def _combo(mats: np.ndarray, v) -> np.ndarray:
    return einsum("m,mab->ab", v, mats)


def _r(S, r):
    r = like(r, S.c)
    if r.shape != (S.dim, S.dim):
        raise ValueError(f"r must be {S.dim} x {S.dim}, got {r.shape}")
    return r


def split_r(r):
    """Symmetric and skew parts ``(s, a)`` with ``r = s + a`` exactly."""
    r = np.asarray(r)
    h = _half(is_exact(r))
    return (r + r.T) * h, (r - r.T) * h


def r_sharp(r) -> np.ndarray:
    return np.asarray(r).T


def dual_action(S, X) -> np.ndarray:
    """Matrix of S_X^* on A*, i.e. minus the transpose of S_X."""
    S = _st(S)
    return -S.left(X).T


def bracket_of(S) -> np.ndarray:
    """``[e_i, e_j]_S`` as an n x n x n array."""
    c = _st(S).c
    return c - c.transpose(1, 0, 2)


def t_from_r(S, r) -> StructureTensor:
    """The product T on A* induced by r.

    At a point: <T_a b, X> = -r(S_X^* a, b) - r(a, S_X^* b) + <S^*_{r_#(a)} b, X>.
    Returned with ``T[i, j, x] = <T_{e_i^*} e_j^*, e_x>``.
    """
    S = _st(S)
    r = _r(S, r)
    Sm = _mats(S)
    t1 = einsum("xia,aj->ijx", Sm, r)         # a^T S_X r b
    t2 = einsum("ia,xja->ijx", r, Sm)         # a^T r S_X^T b
    t3 = -einsum("im,mxj->ijx", r, S.c)       # -<b, S_{r_# a} X>
    return StructureTensor(t1 + t2 + t3)


def t_star(S, r, alpha) -> np.ndarray:
    """Matrix of X -> T_alpha^* X = r_#(S_X^* alpha) + [r_#(alpha), X]_S."""
    S = _st(S)
    r = _r(S, r)
    alpha = like(alpha, S.c)
    y = r_sharp(r) @ alpha
    D = _dual_mats(S)
    cols = [r_sharp(r) @ (D[x] @ alpha) for x in range(S.dim)]
    first = np.stack(cols, axis=1)
    return first + (S.left(y) - S.right(y))


def _t_star_mats(T: StructureTensor) -> np.ndarray:
    """``out[i] = T_{e_i^*}^*`` acting on A (minus transpose of T_{e_i^*})."""
    return -T.c


def delta_r(S, r) -> np.ndarray:
    """``D[i, j] = r_#([e_i^*, e_j^*]_T) - [r_# e_i^*, r_# e_j^*]_S`` in A."""
    S = _st(S)
    r = _r(S, r)
    T = t_from_r(S, r)
    bT = T.c - T.c.transpose(1, 0, 2)
    rs = r_sharp(r)
    first = einsum("ka,ija->ijk", rs, bT)
    bS = bracket_of(S)
    second = einsum("ai,bj,abk->ijk", rs, rs, bS)
    return first - second


def s_derivative(S, m) -> np.ndarray:
    """``out[x, i, j] = (S_{e_x} m)(e_i^*, e_j^*)`` for a bilinear form m on A*."""
    S = _st(S)
    m = like(m, S.c)
    Sm = _mats(S)
    return einsum("xia,aj->xij", Sm, m) + einsum("ia,xja->xij", m, Sm)


def s_second_derivative(S, m) -> np.ndarray:
    """``out[x, y, i, j] = (S_X S_Y m - S_{S_X Y} m)(e_i^*, e_j^*)``."""
    S = _st(S)
    Sm = _mats(S)
    d1 = s_derivative(S, m)
    xy = einsum("xia,yaj->xyij", Sm, d1) + einsum("yia,xja->xyij", d1, Sm)
    return xy - einsum("xyz,zij->xyij", S.c, d1)


def symmetric_basis(n: int, exact: bool = True) -> list:
    """``E_ij + E_ji`` (and ``E_ii``) for i <= j."""
    out = []
    for i in range(n):
        for j in range(i, n):
            m = zeros((n, n), exact)
            m[i, j] = m[j, i] = Fraction(1) if exact else 1.0
            out.append(m)
    return out


def s_parallel_basis(S) -> list:
    """Basis of the symmetric forms m on A* with ``S_X m = 0`` for all X.

    Solved as the kernel of the linear map m -> (S_{e_x} m)_x restricted to
    symmetric m; exact on exact input.
    """
    S = _st(S)
    basis = symmetric_basis(S.dim, S.exact)
    M = np.stack([s_derivative(S, b).ravel() for b in basis], axis=1)
    ker = linalg.nullspace(M)
    return [sum((k * b for k, b in zip(row, basis)), zeros((S.dim, S.dim), S.exact)) for row in ker]


def q_delta(S, r) -> np.ndarray:
    """``out[x, i, j] = [e_x, D(e_i^*,e_j^*)]_S - D(S_x^* e_i^*, e_j^*) - D(e_i^*, S_x^* e_j^*)``."""
    S = _st(S)
    D = delta_r(S, r)
    bS = bracket_of(S)
    first = einsum("xak,ija->xijk", bS, D)
    Sd = _dual_mats(S)  # Sd[x][a, i] = component a of S_x^* e_i^*
    second = einsum("xai,ajk->xijk", Sd, D)
    third = einsum("xaj,iak->xijk", Sd, D)
    return first - second - third


def _require_left_symmetric(S, tol=None):
    rep = check_left_symmetric(S, tol)
    if not rep.passed:
        raise NotLeftSymmetricError(f"S is not left-symmetric (defect {float(rep.defect):.3g} at {rep.witness})")
    return rep


def check_quasi_s_matrix(S, r, tol=None) -> list[CheckReport]:
    """Separate reports for S a = 0, S^2 a = 0, Q Delta(r) = 0; anchor condition is vacuous."""
    S = _st(S)
    _require_left_symmetric(S, tol)
    r = _r(S, r)
    _, a = split_r(r)
    t = zero_threshold(np.concatenate([S.c.ravel(), r.ravel()])) if tol is None else tol
    return [
        _tensor_report("S_skew_part", s_derivative(S, a), t, 3),
        _tensor_report("S2_skew_part", s_second_derivative(S, a), t, 4),
        _tensor_report("Q_delta", q_delta(S, r), t, 3),
        CheckReport("anchor_delta", VACUOUS, 0, note="anchor is zero over a point"),
    ]


def theorem_conditions_hold(reports) -> bool:
    """The gating set used by the builders: S^2 a = 0 and Q Delta(r) = 0."""
    by = {r.name: r for r in reports}
    return by["S2_skew_part"].passed and by["Q_delta"].passed


# -- phase spaces ------------------------------------------------------------

@dataclass(frozen=True)
class PhaseSpace:
    """A 2n-dim Lie algebra with metric, K and 2-form; block layout (A, A*)."""

    bracket: BracketTensor
    metric: np.ndarray
    K: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        m = self.bracket.dim
        for name in ("metric", "K", "omega"):
            if np.shape(getattr(self, name)) != (m, m):
                raise ValueError(f"{name} must be {m} x {m}")
        thr = zero_threshold(self.metric)
        if max_abs(self.metric - self.metric.T) > thr:
            raise ValueError("metric must be symmetric")
        if max_abs(self.omega + self.omega.T) > zero_threshold(self.omega):
            raise ValueError("omega must be antisymmetric")

    @property
    def dim(self) -> int:
        return self.bracket.dim

    def with_K(self, K) -> "PhaseSpace":
        """Same bracket, metric and omega with K replaced (e.g. a corrupted K)."""
        return PhaseSpace(self.bracket, self.metric, like(K, self.metric), self.omega)


def _hyperbolic(n, exact, s=None):
    g = zeros((2 * n, 2 * n), exact)
    I = eye(n, exact)
    g[:n, n:] = I
    g[n:, :n] = I
    if s is not None:
        g[n:, n:] = -2 * s
    return g


def _K0(n, exact):
    K = eye(2 * n, exact)
    K[n:, n:] = -eye(n, exact)
    return K


def triangular_bracket(S) -> np.ndarray:
    """``[X+a, Y+b] = [X,Y]_S + S_X^* b - S_Y^* a`` as a 2n x 2n x 2n array."""
    S = _st(S)
    n = S.dim
    out = zeros((2 * n, 2 * n, 2 * n), S.exact)
    out[:n, :n, :n] = bracket_of(S)
    Sd = _dual_mats(S)
    # [e_x, e_j^*] = S_x^* e_j^* = column j of Sd[x]
    out[:n, n:, n:] = Sd.transpose(0, 2, 1)
    out[n:, :n, n:] = -Sd.transpose(2, 0, 1)
    return out


def build_triangular(S) -> PhaseSpace:
    S = _st(S)
    _require_left_symmetric(S)
    n, ex = S.dim, S.exact
    K = _K0(n, ex)
    g = _hyperbolic(n, ex)
    return PhaseSpace(BracketTensor(triangular_bracket(S)), g, K, K.T @ g)


def r_bracket_triangular(S, r) -> np.ndarray:
    """``[,]^{tri, r} = [,]^tri + Delta(r)(a, b)`` on the A*-A* block."""
    S = _st(S)
    n = S.dim
    out = triangular_bracket(S)
    out[n:, n:, :n] = out[n:, n:, :n] + delta_r(S, r)
    return out


def K_r(r) -> np.ndarray:
    """K_r(X + a) = X - a - 2 r_#(a)."""
    r = np.asarray(r)
    n, ex = r.shape[0], is_exact(r)
    K = _K0(n, ex)
    K[:n, n:] = -2 * r_sharp(r)
    return K


def metric_r(r) -> np.ndarray:
    s, _ = split_r(r)
    return _hyperbolic(s.shape[0], is_exact(s), s)


def build_phase_space_r(S, r, enforce: bool = True) -> PhaseSpace:
    """Phase space with [,]^{tri,r}, <,>_r and K_r.

    With ``enforce`` the quasi-S conditions (S^2 a = 0, Q Delta = 0) must hold;
    pass ``enforce=False`` to study what breaks when they do not.
    """
    S = _st(S)
    r = _r(S, r)
    if enforce:
        reps = check_quasi_s_matrix(S, r)
        if not theorem_conditions_hold(reps):
            bad = [x.name for x in reps if x.failed]
            raise CompatibilityError(f"r fails quasi-S conditions: {bad}")
    else:
        _require_left_symmetric(S)
    K = K_r(r)
    g = metric_r(r)
    return PhaseSpace(BracketTensor(r_bracket_triangular(S, r)), g, K, K.T @ g)


def pair_bracket(S, T) -> np.ndarray:
    """Bracket of the extension of (S on A, T on A*):

    [X+a, Y+b] = [X,Y]_S + [a,b]_T + T_a^* Y - T_b^* X + S_X^* b - S_Y^* a.
    """
    S, T = _st(S), _st(T)
    n = S.dim
    if T.dim != n:
        raise ValueError("S and T must have the same dimension")
    out = triangular_bracket(S)
    out[n:, n:, n:] = T.c - T.c.transpose(1, 0, 2)
    Ts = _t_star_mats(T)  # Ts[i][k, y] = component k of T_{e_i^*}^* e_y
    out[n:, :n, :n] = Ts.transpose(0, 2, 1)
    out[:n, n:, :n] = -Ts.transpose(2, 0, 1)
    return out


def build_bracket_r(S, r) -> BracketTensor:
    S = _st(S)
    return BracketTensor(pair_bracket(S, t_from_r(S, r)))


def xi_matrix(r) -> np.ndarray:
    """xi(X + a) = X - r_#(a) + a."""
    r = np.asarray(r)
    n = r.shape[0]
    x = eye(2 * n, is_exact(r))
    x[:n, n:] = -r_sharp(r)
    return x


def _apply_bracket(B, U, V):
    """``out[p, q] = [U e_p, V e_q]``."""
    return einsum("ap,bq,abk->pqk", U, V, B)


def xi_check(S, r, tol=None) -> CheckReport:
    """xi [u, v]^{tri,r} = [xi u, xi v]^r on every pair of basis vectors."""
    S = _st(S)
    r = _r(S, r)
    lhs_b = r_bracket_triangular(S, r)
    rhs_b = pair_bracket(S, t_from_r(S, r))
    xi = xi_matrix(r)
    lhs = einsum("kl,pql->pqk", xi, lhs_b)
    rhs = _apply_bracket(rhs_b, xi, xi)
    t = zero_threshold(np.concatenate([S.c.ravel(), r.ravel()])) if tol is None else tol
    return _tensor_report("xi_morphism", lhs - rhs, t, 2)


def xi_structure_check(S, r, tol=None) -> list[CheckReport]:
    """xi carries <,>_r to <,>_0 and K_r to K_0."""
    S = _st(S)
    r = _r(S, r)
    n, ex = S.dim, S.exact
    xi = xi_matrix(r)
    t = zero_threshold(r) if tol is None else tol
    dm = xi.T @ _hyperbolic(n, ex) @ xi - metric_r(r)
    dk = xi @ K_r(r) - _K0(n, ex) @ xi
    return [_tensor_report("xi_metric", dm, t, 2), _tensor_report("xi_K", dk, t, 2)]


# -- Levi-Civita, Nijenhuis, d Omega -----------------------------------------

def levi_civita_point(b, g) -> np.ndarray:
    """``N[a, b] = nabla_{e_a} e_b`` from the Koszul formula (zero anchor)."""
    B = b.b if isinstance(b, BracketTensor) else np.asarray(b)
    g = like(g, B)
    gi = linalg.inverse(g)  # raises SingularMatrixError on a degenerate metric
    lowered = einsum("abk,kc->abc", B, g)  # <[a,b], c>
    w = lowered.transpose(1, 2, 0) + lowered.transpose(2, 1, 0) + lowered  # <[c,a],b> + <[c,b],a> + <[a,b],c>
    w = w * _half(is_exact(B))
    return einsum("kc,abc->abk", gi, w)


def nijenhuis(b, K) -> np.ndarray:
    B = b.b if isinstance(b, BracketTensor) else np.asarray(b)
    K = like(K, B)
    m = K.shape[0]
    I = eye(m, is_exact(B))
    t1 = _apply_bracket(B, K, K)
    t2 = einsum("kl,pql->pqk", K, _apply_bracket(B, K, I))
    t3 = einsum("kl,pql->pqk", K, _apply_bracket(B, I, K))
    t4 = einsum("kl,pql->pqk", K @ K, B)
    return t1 - t2 - t3 + t4


def ce_differential_2form(b, w) -> np.ndarray:
    """``d w(a, b, c) = -w([a,b],c) - w([b,c],a) - w([c,a],b)``."""
    B = b.b if isinstance(b, BracketTensor) else np.asarray(b)
    w = like(w, B)
    return -(einsum("abk,kc->abc", B, w) + einsum("bck,ka->abc", B, w) + einsum("cak,kb->abc", B, w))


def nabla_K(N, K) -> np.ndarray:
    """``(nabla_a K) e_b = nabla_a (K e_b) - K nabla_a e_b``."""
    return einsum("mb,amk->abk", K, N) - einsum("km,abm->abk", K, N)


def para_kahler_verify(P: PhaseSpace, tol=None) -> list[CheckReport]:
    """Every para-Kahler axiom as its own line item, plus the equivalence flag.

    The last entry compares status(nabla K = 0) with status(N_K = 0 and
    d Omega_K = 0). A disagreement while K^2 = Id and K is skew is a tool
    error (fail); outside those hypotheses it is reported as vacuous.
    """
    B = P.bracket.b
    g, K = like(P.metric, B), like(P.K, B)
    m = P.dim
    exact = is_exact(B)
    scale = max(max_abs(B), max_abs(g), max_abs(K))
    t = (0 if exact else 1e-9 * (1.0 + float(scale)) ** 3) if tol is None else tol
    reps = []
    rk = linalg.rank(g)
    nondeg = CheckReport("metric_nondegenerate", PASS if rk == m else FAIL, m - rk)
    reps.append(nondeg)
    reps.append(check_jacobi(P.bracket, t))
    reps[-1] = CheckReport("jacobi", reps[-1].status, reps[-1].defect, reps[-1].witness)
    reps.append(_tensor_report("K_squared_identity", K @ K - eye(m, exact), t, 2))
    reps.append(_tensor_report("K_skew", K.T @ g + g @ K, t, 2))
    if nondeg.passed:
        N = levi_civita_point(B, g)
        reps.append(_tensor_report("nabla_K", nabla_K(N, K), t, 2))
    else:
        reps.append(CheckReport("nabla_K", SKIPPED, 0, note="metric is degenerate"))
    reps.append(_tensor_report("nijenhuis_K", nijenhuis(B, K), t, 2))
    reps.append(_tensor_report("d_omega_K", ce_differential_2form(B, K.T @ g), t, 3))
    by = {r.name: r for r in reps}
    reps.append(_equi_flag(by))
    return reps


def _equi_flag(by) -> CheckReport:
    nk = by["nabla_K"]
    if nk.status == SKIPPED:
        return CheckReport("equi_consistency", SKIPPED, 0, note="nabla K unavailable")
    left = nk.passed
    right = by["nijenhuis_K"].passed and by["d_omega_K"].passed
    if left == right:
        return CheckReport("equi_consistency", PASS, 0, note=f"both sides {'hold' if left else 'fail'}")
    if by["K_squared_identity"].passed and by["K_skew"].passed:
        return CheckReport("equi_consistency", FAIL, 1,
                           note=f"nabla K = 0 is {left} but N_K = 0 and d Omega = 0 is {right}")
    return CheckReport("equi_consistency", VACUOUS, 0,
                       note="statuses differ but K^2 = Id / skewness hypotheses do not hold")


# -- compatibility of two left-symmetric products ------------------------------

def mixed_curvatures(S, T):
    """The two mixed curvature blocks of the extended product.

    Returns ``(R1, R2)`` with ``R1[x, i] = R(e_x, e_i^*)`` acting on A and
    ``R2[i, x] = R(e_i^*, e_x)`` acting on A*, both as matrices.
    """
    S, T = _st(S), _st(T)
    Sm, Sd = _mats(S), _dual_mats(S)
    Tm, Td = _mats(T), _t_star_mats(T)
    R1 = (einsum("xab,ibc->xiac", Sm, Td) - einsum("iab,xbc->xiac", Td, Sm)
          + einsum("iax,apq->xipq", Td, Sm)              # S_{T_a^* X}
          - einsum("xai,apq->xipq", Sd, Td))             # T^*_{S_X^* a}
    R2 = (einsum("iab,xbc->ixac", Tm, Sd) - einsum("xab,ibc->ixac", Sd, Tm)
          + einsum("xai,apq->ixpq", Sd, Tm)              # T_{S_X^* a}
          - einsum("iax,apq->ixpq", Td, Sd))             # S^*_{T_a^* X}
    return R1, R2


def compatibility_defects(S, T):
    """``d1[x, i, y] = R(X,a)Y - R(Y,a)X`` and ``d2[i, x, j] = R(a,X)b - R(b,X)a``."""
    R1, R2 = mixed_curvatures(S, T)
    a = R1.transpose(0, 1, 3, 2)  # a[x, i, y] = R1[x, i] e_y
    d1 = a - a.transpose(2, 1, 0, 3)
    b = R2.transpose(0, 1, 3, 2)  # b[i, x, j] = R2[i, x] e_j^*
    d2 = b - b.transpose(2, 1, 0, 3)
    return d1, d2


def lie_extendible_check(S, T, tol=None) -> list[CheckReport]:
    S, T = _st(S), _st(T)
    t = zero_threshold(np.concatenate([S.c.ravel(), T.c.ravel()])) if tol is None else tol
    reps = [check_left_symmetric(S, t), check_left_symmetric(T, t)]
    reps = [CheckReport("S_left_symmetric", reps[0].status, reps[0].defect, reps[0].witness),
            CheckReport("T_left_symmetric", reps[1].status, reps[1].defect, reps[1].witness)]
    d1, d2 = compatibility_defects(S, T)
    reps.append(_tensor_report("compat_X_alpha_Y", d1, t, 3))
    reps.append(_tensor_report("compat_alpha_X_beta", d2, t, 3))
    return reps


def lemma_check(S, r, tol=None) -> list[CheckReport]:
    """Mixed curvatures of (S, T = t_from_r(S, r)) for an arbitrary r.

    ``R(X,a)Y - R(Y,a)X`` must vanish identically, and
    ``<R(a,X)b - R(b,X)a, Y>`` must equal ``-2 (S^2_{X,Y} a)(a, b)``.
    """
    S = _st(S)
    r = _r(S, r)
    d1, d2 = compatibility_defects(S, t_from_r(S, r))
    _, skew = split_r(r)
    rhs = -2 * einsum("xyij->ixjy", s_second_derivative(S, skew))
    t = zero_threshold(np.concatenate([S.c.ravel(), r.ravel()])) if tol is None else tol
    return [_tensor_report("lemma_X_alpha_Y", d1, t, 4), _tensor_report("lemma_alpha_X_beta", d2 - rhs, t, 4)]


def build_from_pair(S, T) -> PhaseSpace:
    S, T = _st(S), _st(T)
    reps = lie_extendible_check(S, T)
    if any(r.failed for r in reps):
        raise CompatibilityError(f"not Lie-extendible: {[r.name for r in reps if r.failed]}")
    n, ex = S.dim, S.exact
    K = _K0(n, ex)
    g = _hyperbolic(n, ex)
    return PhaseSpace(BracketTensor(pair_bracket(S, T)), g, K, K.T @ g)


def curvature(p) -> np.ndarray:
    """``R[a, b, c] = [T_a, T_b] e_c - T_{[a,b]_T} e_c`` for a product T."""
    T = _st(p)
    Tm = _mats(T)
    comm = einsum("akm,bmc->abkc", Tm, Tm) - einsum("bkm,amc->abkc", Tm, Tm)
    bT = T.c - T.c.transpose(1, 0, 2)
    last = einsum("abm,mkc->abkc", bT, Tm)
    return (comm - last).transpose(0, 1, 3, 2)


def check_flat(p, tol=None) -> CheckReport:
    T = _st(p)
    return _tensor_report("curvature", curvature(T), zero_threshold(T.c) if tol is None else tol, 3)
