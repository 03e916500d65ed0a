from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from braidtower.braiding import make_flip
from braidtower.catalog import corrupted_lift_algebra, rank_two_diagonal, scalar_diagonal, yang_baxter_breaking
from braidtower.exactla import QQ
from braidtower.tensoralg import (
    TensorElement, TruncatedTensorAlgebra, check_bialgebra_axioms, coproduct, multiply, parse,
    primitive_elements, reduced_coproduct, render,
)

letters = st.lists(st.integers(0, 1), max_size=4).map(tuple)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
elements = st.dictionaries(letters, coeffs.filter(bool), max_size=4).map(TensorElement)


def test_rank_two_primitive_dims():
    t = TruncatedTensorAlgebra(rank_two_diagonal(), 5)
    dims = [len(primitive_elements(t, d)) for d in range(1, 6)]
    assert dims == [2, 2, 2, 1, 4]
    assert [render(e) for e in primitive_elements(t, 2)] == ["x1.x1", "x2.x2"]


def test_flip_primitives_are_lie_polynomials():
    t = TruncatedTensorAlgebra(make_flip(2), 4)
    # free Lie algebra on two letters: 2, 1, 2, 3
    assert [len(primitive_elements(t, d)) for d in range(1, 5)] == [2, 1, 2, 3]


def test_letter_coproduct():
    t = TruncatedTensorAlgebra(make_flip(2), 3)
    d = coproduct(t, TensorElement.word((0,)))
    assert d.terms == {((0,), ()): 1, ((), (0,)): 1}
    assert reduced_coproduct(t, TensorElement.word((0,))).terms == {}


@given(elements)
def test_render_parse_round_trip(x):
    assert parse(render(x), QQ) == x


def test_render_format():
    x = parse("5 - 1/2*x2 + 3*x1.x2.x1", QQ)
    assert render(x) == "5 - 1/2*x2 + 3*x1.x2.x1"
    assert render(TensorElement({})) == "0"


def test_truncated_product_flagged():
    x = TensorElement.word((0, 1, 0))
    y = multiply(x, x, D=4)
    assert y.is_zero() and y.truncated


@pytest.mark.parametrize("space", [rank_two_diagonal(), make_flip(2), make_flip(3), scalar_diagonal(-1),
                                   scalar_diagonal(2)], ids=["rank-two", "flip2", "flip3", "q=-1", "q=2"])
def test_axioms_hold(space):
    report = check_bialgebra_axioms(TruncatedTensorAlgebra(space, 4))
    assert report.passed, report.first_failure()


def test_braid_relation_failure_has_witness():
    report = check_bialgebra_axioms(TruncatedTensorAlgebra(yang_baxter_breaking(), 4))
    failed = {r.name.split()[0] for r in report.results if not r.passed}
    assert {"Yang-Baxter", "coassociativity"} <= failed
    assert report.first_failure().witness


def test_corrupted_lift_breaks_multiplicativity():
    report = check_bialgebra_axioms(corrupted_lift_algebra(make_flip(2), 4))
    br1 = next(r for r in report.results if r.name.startswith("Br1"))
    assert not br1.passed and "Δ(xy)" in br1.witness


@given(elements, elements)
def test_coproduct_multiplicative_property(x, y):
    from braidtower.tensoralg import multiply_twosided
    t = TruncatedTensorAlgebra(rank_two_diagonal(), 4)
    xy = multiply(x, y, D=4)
    if xy.truncated:
        return
    lhs = coproduct(t, xy)
    rhs = multiply_twosided(t, coproduct(t, x), coproduct(t, y))
    assert lhs.terms == rhs.terms
