import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hessalg import algcore as ac
from hessalg import catalog as cat
from hessalg.numeric import exact_array

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# non-commutative left-symmetric seeds (checked in test_algcore)
LSA_SEEDS = {
    "affine_line": [(2, 1, 1, 1), (2, 2, 2, 1)],
    "scaled_unit": [(1, 1, 1, 2), (1, 2, 2, 1)],
    "graded": [(2, 1, 1, 1), (2, 2, 2, 2)],
    "graded_square": [(2, 1, 1, 1), (2, 2, 2, 2), (1, 1, 2, 1)],
    "graded3": [(2, 1, 1, 1), (2, 2, 2, 2), (1, 1, 2, 1), (2, 3, 3, 1)],
}


def lsa_seed(name) -> ac.Algebra:
    prods = LSA_SEEDS[name]
    return ac.from_products(max(max(p[:3]) for p in prods), prods)


def ca_seeds():
    out = [e.algebra for e in cat.catalog()]
    out += [ac.truncated_polynomial(k, nilpotent=nil) for k in range(2, 6) for nil in (False, True)]
    out.append(ac.direct_sum(ac.truncated_polynomial(2), ac.truncated_polynomial(2, nilpotent=True)))
    return [A for A in out if A.dim <= 5]


CA_SEEDS = ca_seeds()

small_fraction = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def rational_matrix(draw, n, m=None):
    m = n if m is None else m
    vals = draw(st.lists(small_fraction, min_size=n * m, max_size=n * m))
    return exact_array(np.array(vals, dtype=object).reshape(n, m))


@st.composite
def invertible_matrix(draw, n):
    P = draw(rational_matrix(n))
    from hessalg import linalg
    if linalg.det(P) == 0:
        P = P + exact_array(np.eye(n, dtype=int) * 5)
    if linalg.det(P) == 0:
        P = exact_array(np.eye(n, dtype=int))
    return P


@st.composite
def ca_algebras(draw, transported=True):
    """Commutative associative algebras (dim <= 5), optionally in a random basis."""
    A = draw(st.sampled_from(CA_SEEDS))
    if transported and draw(st.booleans()):
        A = ac.transport(A, draw(invertible_matrix(A.dim)))
    return A


@st.composite
def left_symmetric_algebras(draw):
    if draw(st.booleans()):
        return draw(ca_algebras())
    A = lsa_seed(draw(st.sampled_from(sorted(LSA_SEEDS))))
    if draw(st.booleans()):
        A = ac.transport(A, draw(invertible_matrix(A.dim)))
    return A


@st.composite
def any_algebras(draw, max_dim=3):
    n = draw(st.integers(1, max_dim))
    c = draw(rational_matrix(n, n * n))
    return ac.Algebra(ac.StructureTensor(c.reshape(n, n, n)))


@pytest.fixture(scope="session")
def examples():
    return {e.index: e.algebra for e in cat.catalog()}


# acceptance criterion -> one summary line, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
