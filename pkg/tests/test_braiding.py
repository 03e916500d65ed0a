import pytest
from hypothesis import given, strategies as st

from braidtower.braiding import (
    InvalidBraiding, LiftedBraiding, TensorAmbient, VectorAmbient, format_polynomial, hecke_mark,
    hexagon_violation, is_categorical, is_precategorical, make_braiding, make_diagonal, make_flip,
    minimal_polynomial, yang_baxter_violation,
)
from braidtower.catalog import rank_two_diagonal, scalar_diagonal, yang_baxter_breaking
from braidtower.exactla import GF, QQ, SubspaceBasis

nonzero = st.sampled_from([-2, -1, 1, 2, 3])


@st.composite
def diagonal_spaces(draw):
    n = draw(st.integers(1, 2))
    return make_diagonal([[draw(nonzero) for _ in range(n)] for _ in range(n)])


def test_minimal_polynomial_rank_two():
    assert format_polynomial(minimal_polynomial(rank_two_diagonal())) == "X^3 + X^2 + X + 1"
    assert hecke_mark(rank_two_diagonal()) is None


def test_hecke_marks():
    assert hecke_mark(make_flip(2)) == 1
    assert hecke_mark(make_flip(1)) == 1
    assert hecke_mark(scalar_diagonal(-1)) is None


def test_zero_diagonal_rejected():
    with pytest.raises(InvalidBraiding, match="invalid braiding"):
        make_diagonal([[1, 0], [1, 1]])


def test_yang_baxter_detection():
    assert yang_baxter_violation(yang_baxter_breaking()) is not None
    with pytest.raises(InvalidBraiding):
        make_braiding(2, yang_baxter_breaking().c.tolist(), QQ)


@given(diagonal_spaces())
def test_diagonal_braidings_satisfy_braid_relation(bs):
    assert yang_baxter_violation(bs) is None


@given(diagonal_spaces())
def test_lifted_hexagons(bs):
    assert hexagon_violation(LiftedBraiding(bs), 4) is None


def test_flip_lift_is_block_swap():
    lb = LiftedBraiding(make_flip(2))
    assert lb.apply_word(2, (0, 1, 1)) == {(1, 0, 1): 1}


def test_diagonal_lift_scalar():
    lb = LiftedBraiding(rank_two_diagonal())
    # c(x1 x2 ⊗ x1) = q11 q21 x1 ⊗ x1 x2
    assert lb.apply_pair((0, 1), (0,)) == {((0,), (0, 1)): 1}


def test_categorical_subspaces():
    bs = rank_two_diagonal()
    amb = VectorAmbient(bs)
    line = SubspaceBasis.span([{0: 1}], 2)
    assert is_categorical(line, amb) and is_precategorical(line, amb)
    diag = SubspaceBasis.span([{0: 1, 1: 1}], 2)
    assert not is_categorical(diag, amb)


@given(st.lists(st.sampled_from([(0,), (1,), (0, 1), (1, 0), (0, 0)]), max_size=3))
def test_categorical_implies_precategorical(ws):
    amb = TensorAmbient(LiftedBraiding(rank_two_diagonal()), 2)
    s = SubspaceBasis.span([{w: 1} for w in ws])
    if is_categorical(s, amb):
        assert is_precategorical(s, amb)


def test_prime_field_minimal_polynomial():
    # over F_2 the sign braiding is the flip, and q = 1 = -1 carries no mark
    bs = make_diagonal([[-1]], GF(2))
    assert format_polynomial(minimal_polynomial(bs)) == "X + 1"
    assert hecke_mark(bs) is None
