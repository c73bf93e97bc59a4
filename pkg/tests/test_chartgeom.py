import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hessalg import catalog as cat
from hessalg import chartgeom as cg
from hessalg import hessdual as hd
from hessalg.report import PASS


def xlogx(x):
    return float(np.sum(x * np.log(x)))


ORTHANT = cg.ChartConfig(dim=3, sampler=lambda g: g.uniform(0.5, 3.0, 3))
CONST = cg.BivectorFieldFn(lambda x: np.array([[2.0, 1.0], [1.0, -1.0]]), name="constant")
NON_CODAZZI = cg.BivectorFieldFn(lambda x: np.array([[1.0, x[0]], [x[0], 1.0]]), name="non-codazzi")


def test_config_validation():
    with pytest.raises(ValueError):
        cg.ChartConfig(dim=0)
    with pytest.raises(ValueError):
        cg.ChartConfig(dim=2, tol=0)
    with pytest.raises(ValueError):
        cg.ChartConfig(dim=2, first_step=-1)


def test_samples_reject_singular_points():
    cfg = cg.ChartConfig(dim=1, points=((1.0,), (0.0,), (2.0,)), block=(0,))
    h = cg.BivectorFieldFn(lambda x: np.array([[x[0]]]))
    assert [p.tolist() for p in cg.samples(h, cfg)] == [[1.0], [2.0]]
    asym = cg.BivectorFieldFn(lambda x: np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        cg.samples(asym, cg.ChartConfig(dim=2))


@pytest.mark.parametrize("idx", range(1, 7))
def test_linear_h_passes_everything(idx):
    A = cat.catalog()[idx - 1].algebra
    cfg = cg.ChartConfig(dim=A.dim)
    h = cg.linear_bivector(A)
    for rep in (cg.codazzi_check(h, cfg), cg.hamilton_equiv_check(h, cfg), cg.d_curvature_fd(h, cfg),
                cg.triple_cyclic_check(h, cfg)):
        assert rep.status == PASS, rep


def test_constant_h_passes():
    cfg = cg.ChartConfig(dim=2)
    assert cg.codazzi_check(CONST, cfg).passed and cg.codazzi_check(CONST, cfg).defect == 0
    assert cg.hamilton_equiv_check(CONST, cfg).passed
    assert cg.d_curvature_fd(CONST, cfg).passed
    assert np.allclose(cg.d_product(CONST, [1, 0], [0, 1], np.zeros(2)), 0)


def test_non_codazzi_h_agrees_across_checks():
    cfg = cg.ChartConfig(dim=2, points=((0.0, 0.0), (0.3, -1.0)))
    c, hm = cg.codazzi_check(NON_CODAZZI, cfg), cg.hamilton_equiv_check(NON_CODAZZI, cfg)
    assert c.failed and hm.failed and c.status == hm.status
    # direct evaluation at the origin: only dh/dx1 is nonzero and equals [[0,1],[1,0]]
    t, _ = cg.codazzi_defect(NON_CODAZZI, np.zeros(2), cfg)
    assert np.max(np.abs(t)) == pytest.approx(1.0, rel=1e-8)


def test_hamiltonian_field_examples():
    A = cat.ex4_algebra()
    h = cg.linear_bivector(A)
    mu = np.array([1.0, 2.0, 3.0])
    for i in range(3):
        Xf = cg.hamiltonian_field(h, lambda x, i=i: float(x[i]), mu)
        np.testing.assert_allclose(Xf, hd.fundamental_vector(A.as_float(), np.eye(3)[i], mu), atol=1e-9)
    ident = cg.BivectorFieldFn(lambda x: np.eye(2))
    np.testing.assert_allclose(cg.hamiltonian_field(ident, lambda x: 0.5 * float(x @ x), np.array([1.0, -2.0])),
                               [1.0, -2.0], atol=1e-8)
    assert np.allclose(cg.hamiltonian_field(ident, lambda x: 4.0, np.array([1.0, 2.0])), 0)


def test_triple_bracket_identities():
    h = cg.linear_bivector(cat.ex6_algebra())
    x = np.array([1.0, 0.5, -0.3, 2.0])
    f = lambda y: float(y[0] * y[3])
    g = lambda y: float(y[1] ** 2)
    m1 = lambda y: float(y[2])
    m2 = lambda y: float(y[0] + y[1])
    tol = 1e-5 * (1 + float(np.max(np.abs(h(x))))) ** 2
    assert abs(cg.triple_bracket(h, f, g, m1, x) + cg.triple_bracket(h, g, f, m1, x)) <= 10 * tol
    assert abs(cg.cyclic_defect(h, f, g, m1, x)) <= tol
    prod = lambda y: m1(y) * m2(y)
    leib = cg.triple_bracket(h, f, g, m1, x) * m2(x) + cg.triple_bracket(h, f, g, m2, x) * m1(x)
    assert cg.triple_bracket(h, f, g, prod, x) == pytest.approx(leib, abs=10 * tol)


def test_inverse_hessian_examples():
    h = cg.inverse_hessian_bivector(xlogx, 3, ORTHANT)
    x = np.array([0.7, 1.5, 2.2])
    np.testing.assert_allclose(h(x), np.diag(x), rtol=1e-7, atol=1e-9)
    lin = cg.linear_bivector(cat.ex1_algebra(3))
    np.testing.assert_allclose(h(x), lin(x), rtol=1e-7, atol=1e-9)
    quad = cg.inverse_hessian_bivector(lambda y: 0.5 * float(y @ y), 2, cg.ChartConfig(dim=2))
    np.testing.assert_allclose(quad(np.array([0.3, -4.0])), np.eye(2), atol=1e-8)
    quartic = cg.inverse_hessian_bivector(lambda y: float(y[0] ** 4 / 12), 1, cg.ChartConfig(dim=1))
    assert quartic(np.array([2.0]))[0, 0] == pytest.approx(0.25, rel=1e-6)
    assert cg.codazzi_check(quartic, cg.ChartConfig(dim=1, sampler=lambda g: g.uniform(1, 2, 1))).passed


def test_inverse_hessian_partial_block():
    f = lambda y: float(np.exp(y[0]) + y[0] * y[1] ** 2)
    h = cg.inverse_hessian_bivector(f, 1, cg.ChartConfig(dim=2))
    x = np.array([0.5, 1.0])
    H = h(x)
    assert H[0, 0] == pytest.approx(np.exp(-0.5), rel=1e-7)
    assert H[1, 1] == 0 and H[0, 1] == 0


def test_inverse_hessian_singular_block():
    h = cg.inverse_hessian_bivector(lambda y: float(y[0] ** 3), 1, cg.ChartConfig(dim=1))
    with pytest.raises(Exception):
        h(np.array([0.0]))
    cfg = cg.ChartConfig(dim=1, points=((0.0,), (1.0,)))
    assert len(cg.samples(h, cfg)) == 1


def test_inverse_hessian_chart_suite():
    h = cg.inverse_hessian_bivector(xlogx, 3, ORTHANT)
    for rep in (cg.codazzi_check(h, ORTHANT), cg.hamilton_equiv_check(h, ORTHANT),
                cg.d_curvature_fd(h, ORTHANT), cg.triple_cyclic_check(h, ORTHANT)):
        assert rep.passed, rep


def test_d_product_examples():
    A = cat.ex5_algebra()
    h = cg.linear_bivector(A)
    mu = np.array([0.3, -1.2, 0.8, 1.7])
    Af = A.as_float()
    for i in range(4):
        for j in range(4):
            u, v = np.eye(4)[i], np.eye(4)[j]
            expect = np.einsum("i,j,ijk->k", u, v, Af.c)
            np.testing.assert_allclose(cg.d_product(h, u, v, mu), expect, atol=1e-8)
    diag = cg.BivectorFieldFn(lambda x: np.diag(x))
    np.testing.assert_allclose(cg.d_product(diag, [1, 0], [1, 0], np.array([1.0, 2.0])), [1, 0], atol=1e-8)


def test_exact_derivative_mode_matches_fd():
    A = cat.ex4_algebra()
    cfg = cg.ChartConfig(dim=3)
    fd_h, ex_h = cg.linear_bivector(A), cg.linear_bivector(A, exact_derivative=True)
    x = np.array([0.4, 1.1, -0.7])
    np.testing.assert_allclose(cg.partials(fd_h, x, cfg), cg.partials(ex_h, x, cfg), atol=1e-9)
    f = lambda y: float(y[0])
    g = lambda y: float(y[1] * y[2])
    m = lambda y: float(y[2] ** 2)
    a = cg.triple_bracket(ex_h, f, g, m, x, cfg)
    b = cg.triple_bracket(ex_h, g, f, m, x, cfg)
    assert a + b == 0.0


# -- properties ----------------------------------------------------------------

@settings(max_examples=10)
@given(st.sampled_from(range(1, 7)), st.integers(0, 2 ** 16))
def test_codazzi_and_hamilton_statuses_agree(idx, seed):
    A = cat.catalog()[idx - 1].algebra
    cfg = cg.ChartConfig(dim=A.dim, seed=seed, count=3)
    for h in (cg.linear_bivector(A), CONST if A.dim == 2 else cg.linear_bivector(A)):
        assert cg.codazzi_check(h, cfg).status == cg.hamilton_equiv_check(h, cfg).status


@settings(max_examples=10)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_non_codazzi_statuses_agree(a, b):
    cfg = cg.ChartConfig(dim=2, points=((a, b),))
    assert cg.codazzi_check(NON_CODAZZI, cfg).status == cg.hamilton_equiv_check(NON_CODAZZI, cfg).status


@settings(max_examples=4)
@given(st.lists(st.floats(0.2, 1.0), min_size=3, max_size=3), st.integers(0, 2 ** 16))
def test_weighted_entropy_inverse_hessian(weights, seed):
    w = np.array(weights)
    f = lambda x: float(np.sum(w * x * np.log(x)))
    cfg = cg.ChartConfig(dim=3, seed=seed, count=3, sampler=lambda g: g.uniform(0.5, 3.0, 3))
    h = cg.inverse_hessian_bivector(f, 3, cfg)
    assert cg.codazzi_check(h, cfg).passed
    assert cg.triple_cyclic_check(h, cfg).passed
