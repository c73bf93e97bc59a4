from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from hessalg import fd, linalg
from hessalg.numeric import as_number, exact_array, float_array, is_exact, max_abs, to_fraction, zero_threshold

from conftest import invertible_matrix, rational_matrix


def test_to_fraction_parses_decimal_strings_exactly():
    assert to_fraction("0.1") == Fraction(1, 10)
    assert to_fraction(0.1) == Fraction(1, 10)
    assert to_fraction("-3/2") == Fraction(-3, 2)
    assert to_fraction(Decimal("2.50")) == Fraction(5, 2)
    with pytest.raises(TypeError):
        to_fraction(True)
    with pytest.raises(ValueError):
        to_fraction("abc")


def test_as_number():
    assert as_number(Fraction(4, 2)) == 2 and isinstance(as_number(Fraction(4, 2)), int)
    assert as_number(Fraction(1, 4)) == 0.25
    assert isinstance(as_number(np.float64(1.5)), float)


def test_zero_threshold_scales():
    assert zero_threshold(exact_array([[1]])) == 0
    assert zero_threshold(np.array([[100.0]])) == pytest.approx(1e-10 * 101)


def test_exact_inverse_and_det():
    m = exact_array([[2, 1], [1, 1]])
    assert linalg.det(m) == 1
    inv = linalg.inverse(m)
    assert inv.tolist() == [[1, -1], [-1, 2]]
    with pytest.raises(linalg.SingularMatrixError):
        linalg.inverse(exact_array([[1, 2], [2, 4]]))


def test_nullspace_exact():
    m = exact_array([[1, 2, 3], [2, 4, 6]])
    ns = linalg.nullspace(m)
    assert ns.shape == (2, 3)
    assert max_abs(m @ ns.T) == 0


@pytest.mark.parametrize("m, expected", [
    (np.eye(3), (3, 0, 0)),
    (np.zeros((3, 3)), (0, 0, 3)),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), (1, 1, 0)),
    (exact_array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]), (1, 1, 1)),
])
def test_signature_examples(m, expected):
    assert linalg.signature(m) == expected


@given(rational_matrix(4), invertible_matrix(4))
def test_signature_congruence_invariant(a, P):
    f = a + a.T
    s_exact = linalg.signature(f)
    assert linalg.signature(P.T @ f @ P) == s_exact
    # float path agrees with the exact path on rational input
    assert linalg.signature(float_array(P.T @ f @ P)) == s_exact


@given(rational_matrix(4))
def test_signature_matches_eigenvalues(a):
    f = float_array(a + a.T)
    ev = np.linalg.eigvalsh(f)
    thr = 1e-8
    assert linalg.signature(f) == (int(np.sum(ev > thr)), int(np.sum(ev < -thr)), int(np.sum(np.abs(ev) <= thr)))


@given(rational_matrix(4, 3))
def test_rank_exact_matches_float(m):
    assert linalg.rank(m) == np.linalg.matrix_rank(float_array(m))


def test_expm_nilpotent_exact():
    n = exact_array([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    e = linalg.expm(n)
    assert is_exact(e)
    assert e.tolist() == [[1, 1, Fraction(1, 2)], [0, 1, 1], [0, 0, 1]]


@given(st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_expm_pade_matches_scipy(vals):
    m = np.array(vals).reshape(3, 3)
    ref = scipy.linalg.expm(m)
    got = linalg.expm_pade6(m)
    assert np.max(np.abs(got - ref)) <= 1e-10 * (1 + np.max(np.abs(ref)))


def test_expm_diagonal():
    got = linalg.expm(np.diag([np.log(2.0), 0.0]))
    np.testing.assert_allclose(got, np.diag([2.0, 1.0]), rtol=1e-13)


def test_fd_scaled_step_and_underflow():
    assert fd.scaled_step(1e-4, [3.0, -5.0]) == pytest.approx(6e-4)
    with pytest.raises(fd.StepUnderflowError):
        fd.scaled_step(1e-14, [0.0])


def test_fd_derivatives_of_polynomial():
    f = lambda x: float(x[0] ** 3 + x[0] * x[1] ** 2)
    x = np.array([1.0, 2.0])
    np.testing.assert_allclose(fd.gradient(f, x, 1e-5), [3 + 4, 4], rtol=1e-8)
    H = fd.richardson(lambda h: fd.hessian(f, x, h), 1e-2)
    np.testing.assert_allclose(H, [[6, 4], [4, 2]], rtol=1e-8)
    assert fd.second_directional(f, x, [2, 0], [0, 1], 1e-3) == pytest.approx(2 * 4, rel=1e-6)
    J = fd.jacobian(lambda y: np.array([y[0] * y[1], y[1]]), x, 1e-5)
    np.testing.assert_allclose(J, [[2, 1], [0, 1]], atol=1e-8)
