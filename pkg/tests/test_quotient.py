import pytest
from hypothesis import given, strategies as st

from braidtower.braiding import make_flip
from braidtower.catalog import rank_two_diagonal
from braidtower.exactla import QQ
from braidtower.quotient import (
    QuotientAlgebra, UnstableTruncation, check_braided_ideal, generates_as_algebra, ideal_span, normal_form,
    quotient_primitives,
)
from braidtower.tensoralg import TensorElement, TruncatedTensorAlgebra, parse, render

W = "x1.x2.x1.x2 + x2.x1.x2.x1"


def first_quotient(D=5):
    t = TruncatedTensorAlgebra(rank_two_diagonal(), D)
    return QuotientAlgebra(t, ideal_span(t, [parse("x1.x1", QQ), parse("x2.x2", QQ)]))


def test_first_quotient_dims_and_primitives():
    q = first_quotient()
    assert q.graded_dims() == [1, 2, 2, 2, 2, 2]
    prims = quotient_primitives(q)[5]
    got = sorted(render(TensorElement.from_vec(r)) for r in prims.rows)
    assert got == sorted(["x1", "x2", W])


def test_adding_top_primitive_gives_nichols_dims():
    t = TruncatedTensorAlgebra(rank_two_diagonal(), 5)
    q = QuotientAlgebra(t, ideal_span(t, [parse(s, QQ) for s in ("x1.x1", "x2.x2", W)]))
    assert q.graded_dims() == [1, 2, 2, 2, 1, 0]
    assert q.vanishes_above


def test_flip_letter_killed():
    t = TruncatedTensorAlgebra(make_flip(2), 3)
    q = QuotientAlgebra(t, ideal_span(t, [parse("x1", QQ)]))
    assert q.graded_dims() == [1, 1, 1, 1]


def test_braided_ideal_check():
    assert check_braided_ideal(first_quotient(4)).passed


def test_generation_by_letters():
    from braidtower.exactla import SubspaceBasis
    from braidtower.tensoralg import wkey
    q = first_quotient(4)
    letters = SubspaceBasis.span([{wkey((0,)): 1}, {wkey((1,)): 1}])
    assert generates_as_algebra(q, letters)


words = st.lists(st.integers(0, 1), min_size=0, max_size=5).map(tuple)


@given(st.dictionaries(words, st.integers(-2, 2).filter(bool), max_size=5))
def test_normal_form_idempotent(terms):
    q = first_quotient()
    x = TensorElement({w: QQ(a) for w, a in terms.items()})
    nf = normal_form(q, x)
    assert normal_form(q, nf) == nf
    assert all(w in set(q.standard_words()) for w in nf.terms)


def test_inhomogeneous_generator_stabilizes_or_refuses():
    t = TruncatedTensorAlgebra(make_flip(2), 3)
    # x1 x2 - x2 x1 - x1: a Lie-type relation; slack search must settle
    ideal = ideal_span(t, [parse("x1.x2 - x2.x1 - x1", QQ)])
    assert ideal.stabilized
    assert QuotientAlgebra(t, ideal).filtered_dims() == [1, 3, 6, 10]


def test_unstable_budget_raises():
    t = TruncatedTensorAlgebra(make_flip(2), 3)
    with pytest.raises(UnstableTruncation):
        ideal_span(t, [parse("x1.x1 - x2", QQ), parse("x2.x2 - x1", QQ)], slack_budget=0)
