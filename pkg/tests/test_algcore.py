import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hessalg import algcore as ac
from hessalg import catalog as cat
from hessalg import linalg
from hessalg.numeric import exact_array, max_abs

from conftest import LSA_SEEDS, any_algebras, ca_algebras, invertible_matrix, left_symmetric_algebras, lsa_seed


def _e(A, i):
    return A.basis(i - 1)


def test_multiply_examples(examples):
    A5, A4 = examples[5], examples[4]
    assert list(ac.multiply(A5, _e(A5, 1), _e(A5, 3))) == [0, 0, 0, 1]
    assert list(ac.multiply(A4, _e(A4, 3), _e(A4, 3))) == [0, 0, 1]
    assert max_abs(ac.multiply(A4, exact_array([0, 0, 0]), _e(A4, 2))) == 0
    with pytest.raises(ValueError):
        ac.multiply(A4, _e(A4, 1), exact_array([1, 0]))


def test_left_mult_matrix_examples(examples):
    A6, A1 = examples[6], examples[1]
    assert (ac.left_mult_matrix(A6, _e(A6, 1)) == exact_array(np.eye(4, dtype=int))).all()
    assert (ac.left_mult_matrix(A1, _e(A1, 1)) == exact_array(np.diag([1, 0, 0]))).all()
    assert max_abs(ac.left_mult_matrix(A1, exact_array([0, 0, 0]))) == 0


def test_axiom_checks_on_small_algebras(examples):
    rep_c, rep_a = ac.check_commutative(examples[5]), ac.check_associative(examples[5])
    assert rep_c.passed and rep_a.passed and rep_c.defect == 0
    bad = ac.from_products(2, [(1, 1, 1, 1), (1, 2, 1, 1), (2, 1, 1, 1)])
    rep = ac.check_associative(bad)
    assert rep.failed and rep.witness is not None and len(rep.witness) == 3
    i, j, k = (w - 1 for w in rep.witness)
    lhs = ac.multiply(bad, ac.multiply(bad, bad.basis(i), bad.basis(j)), bad.basis(k))
    rhs = ac.multiply(bad, bad.basis(i), ac.multiply(bad, bad.basis(j), bad.basis(k)))
    assert max_abs(lhs - rhs) == rep.defect
    zero = ac.from_products(2, [])
    assert ac.check_commutative(zero).passed and ac.check_associative(zero).passed


def test_left_symmetric_examples():
    assert ac.from_products(2, [(1, 1, 2, 1)]).left_symmetric
    for name in LSA_SEEDS:
        A = lsa_seed(name)
        assert A.left_symmetric and not A.commutative, name


def test_commutator_bracket_examples():
    A = ac.from_products(2, [(1, 1, 1, 1), (1, 2, 2, 1)])
    assert A.left_symmetric
    b = ac.commutator_bracket(A)
    assert list(b(A.basis(0), A.basis(1))) == [0, 1]
    assert max_abs(ac.commutator_bracket(cat.ex4_algebra()).b) == 0


def test_jacobiator_so3():
    b = np.zeros((3, 3, 3), dtype=object)
    b.fill(Fraction(0))
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        b[i, j, k], b[j, i, k] = Fraction(1), Fraction(-1)
    assert ac.check_jacobi(ac.BracketTensor(b)).passed


def test_power_ideal_examples(examples):
    A3 = examples[3]
    assert ac.power_ideal(A3, 3).tolist() == [[0, 0, 1]]
    assert ac.power_ideal(A3, 4).shape[0] == 0
    for k in range(1, 5):
        assert ac.power_ideal(examples[1], k).shape[0] == 3
    assert ac.power_ideal(examples[5], 4).tolist() == [[0, 0, 0, 1]]


def test_constructors():
    tp = ac.truncated_polynomial(4, nilpotent=True)
    assert np.array_equal(tp.c, cat.ex3_algebra().c)
    R = ac.truncated_polynomial(1)
    s = ac.direct_sum(ac.direct_sum(R, R), R)
    assert np.array_equal(s.c, cat.ex1_algebra(3).c)


def test_json_round_trip_and_errors(examples):
    for A in examples.values():
        B = ac.from_json(json.dumps(ac.to_json(A)))
        assert np.array_equal(A.c, B.c)
    for bad in ["{", "[]", '{"dim": 0}', '{"dim": 2, "products": [{"i": 3, "j": 1, "k": 1, "c": 1}]}',
                '{"dim": 2, "extra": 1}', '{"dim": 2, "products": [{"i": 1, "j": 1, "k": 1, "c": "x"}]}']:
        with pytest.raises(ac.AlgebraInputError):
            ac.from_json(bad)
    with pytest.raises(ac.AlgebraInputError):
        ac.from_json('{"dim": 2, "symmetrize": true, "products": ['
                     '{"i": 1, "j": 2, "k": 1, "c": 1}, {"i": 2, "j": 1, "k": 1, "c": 2}]}')
    A = ac.from_json('{"dim": 1, "products": [{"i": 1, "j": 1, "k": 1, "c": "0.1"}]}')
    assert A.c[0, 0, 0] == Fraction(1, 10)


def test_symmetrize_flag():
    data = {"dim": 2, "symmetrize": True, "products": [{"i": 1, "j": 2, "k": 2, "c": 1}]}
    assert ac.from_json(json.dumps(data)).commutative
    data["symmetrize"] = False
    rep = ac.check_commutative(ac.from_json(json.dumps(data)))
    assert rep.failed and rep.witness == (1, 2)


def test_rmatrix_json():
    r = ac.rmatrix_from_json('{"dim": 2, "entries": [[1, "1/2"], [0, "0.25"]]}')
    assert r[0, 1] == Fraction(1, 2) and r[1, 1] == Fraction(1, 4)
    assert ac.rmatrix_to_json(r) == {"dim": 2, "entries": [[1, "1/2"], [0, "1/4"]]}
    with pytest.raises(ac.AlgebraInputError):
        ac.rmatrix_from_json('{"dim": 2, "entries": [[1]]}')


# -- properties ----------------------------------------------------------------

@given(ca_algebras())
def test_triple_product_totally_symmetric(A):
    P = np.einsum("abm,mck->abck", A.c, A.c)
    for perm in [(1, 0, 2, 3), (0, 2, 1, 3), (2, 1, 0, 3)]:
        assert max_abs(P - P.transpose(perm)) == 0


@given(left_symmetric_algebras())
def test_jacobi_from_left_symmetry(A):
    assert ac.check_left_symmetric(A).passed
    assert ac.check_jacobi(ac.commutator_bracket(A)).passed


@given(any_algebras())
def test_jacobi_whenever_left_symmetric(A):
    if ac.check_left_symmetric(A).passed:
        assert ac.check_jacobi(ac.commutator_bracket(A)).passed


@given(ca_algebras(), st.integers(1, 5))
def test_power_ideal_monotone(A, k):
    big = ac.power_ideal(A, k)
    small = ac.power_ideal(A, k + 1)
    if small.shape[0]:
        assert linalg.rank(np.concatenate([big, small])) == big.shape[0]


@given(any_algebras())
def test_exact_and_float_axiom_checks_agree(A):
    F = A.as_float()
    for check in (ac.check_commutative, ac.check_associative, ac.check_left_symmetric):
        assert check(A).status == check(F).status
    assert (A.commutative, A.associative, A.left_symmetric) == (F.commutative, F.associative, F.left_symmetric)


@given(any_algebras(max_dim=2), invertible_matrix(2))
def test_transport_preserves_axioms(A, P):
    if A.dim != 2:
        return
    B = ac.transport(A, P)
    assert (A.commutative, A.associative, A.left_symmetric) == (B.commutative, B.associative, B.left_symmetric)


def test_flags_are_frozen():
    A = cat.ex4_algebra()
    with pytest.raises(ValueError):
        A.c[0, 0, 0] = 5
