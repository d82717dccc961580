from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kspoly.algebra import ONE, X, BivariatePoly
from kspoly.weyl import DiffOp

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=8)
poly_exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.builds(
    BivariatePoly, st.dictionaries(poly_exponents, rationals, max_size=5)
)


def op_keys(max_order):
    return st.tuples(
        st.integers(0, 2),
        st.integers(0, 2),
        st.integers(0, max_order),
        st.integers(0, max_order),
    ).filter(lambda k: k[2] + k[3] <= max_order)


def ops(max_order=2):
    return st.builds(
        DiffOp, st.dictionaries(op_keys(max_order), rationals, max_size=4)
    )


DX = DiffOp.partial(1, 0)
MX = DiffOp.from_poly(X)


# -- application ---------------------------------------------------------------


def test_euler_operator():
    euler = DiffOp.coeff_term(X, 1, 0)
    assert euler.apply(X**3) == 3 * X**3


def test_apply_to_zero():
    anything = DiffOp({(1, 2, 2, 1): F(3, 7), (0, 0, 1, 0): 2})
    assert anything.apply(BivariatePoly.zero()) == BivariatePoly.zero()


def test_apply_kills_low_degree():
    assert DiffOp.partial(2, 0).apply(X) == BivariatePoly.zero()


# -- composition -----------------------------------------------------------------


def test_canonical_commutation():
    assert DX @ MX == DiffOp({(1, 0, 1, 0): 1, (0, 0, 0, 0): 1})


def test_leibniz_second_order():
    assert DiffOp.partial(2, 0) @ MX == DiffOp(
        {(1, 0, 2, 0): 1, (0, 0, 1, 0): 2}
    )


def test_commutator_dx_x():
    assert DX.commutator(MX) == DiffOp.identity()


def test_self_commutator_vanishes():
    a = DiffOp({(1, 1, 1, 0): F(2, 3), (0, 0, 0, 2): -1})
    assert a.commutator(a).is_zero()


def test_left_mul_example():
    two_x_minus_one = 2 * X - ONE
    assert DiffOp.identity().left_mul(two_x_minus_one) == DiffOp.from_poly(
        two_x_minus_one
    )


def test_scale_and_add_cancel():
    a = DiffOp({(0, 1, 1, 1): F(5, 2), (2, 0, 0, 0): 1})
    assert (a + (-1) * a).is_zero()


def test_order_property():
    assert DiffOp.zero().order == -1
    assert DiffOp.identity().order == 0
    assert DiffOp({(0, 0, 2, 1): 1, (5, 5, 1, 0): 1}).order == 3


def test_records_roundtrip_and_order():
    a = DiffOp({(1, 0, 1, 0): 2, (0, 0, 0, 0): F(-1, 3), (0, 1, 0, 2): 1})
    recs = a.to_records()
    assert [(r["k"], r["l"]) for r in recs] == [(0, 0), (1, 0), (0, 2)]
    assert DiffOp.from_records(recs) == a


# -- properties -------------------------------------------------------------------


@given(ops(), ops(), polys)
def test_composition_is_application(a, b, p):
    assert (a @ b).apply(p) == a.apply(b.apply(p))


@given(ops(), ops(), ops())
def test_composition_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@given(ops(), ops())
def test_commutator_antisymmetric(a, b):
    assert a.commutator(b) == (-1) * b.commutator(a)


@given(ops(), ops(), ops())
def test_commutator_bilinear(a, b, c):
    assert a.commutator(b + c) == a.commutator(b) + a.commutator(c)
    assert (2 * a).commutator(b) == 2 * a.commutator(b)


@given(ops(max_order=1), ops(max_order=1), ops(max_order=1))
def test_jacobi_identity(a, b, c):
    total = (
        a.commutator(b.commutator(c))
        + b.commutator(c.commutator(a))
        + c.commutator(a.commutator(b))
    )
    assert total.is_zero()


def test_rejects_negative_indices():
    with pytest.raises(ValueError):
        DiffOp({(0, 0, -1, 0): F(1)})
