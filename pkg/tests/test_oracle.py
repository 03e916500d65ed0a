from math import comb

import pytest
from hypothesis import given, strategies as st

from braidtower.braiding import LiftedBraiding, make_flip
from braidtower.catalog import CorruptedLift, abelian_constants, rank_two_diagonal, scalar_diagonal
from braidtower.envelope import classical_envelope, nichols_truncation, perturbed_sl2_constants, sl2_constants
from braidtower.exactla import GF
from braidtower.oracle import (
    OracleRefusal, all_reduced_words, nichols_dims_via_symmetrizer, pbw_dims, permutation_lift_check,
    reduced_word, reduced_word_independence,
)


@given(st.permutations(range(5)))
def test_reduced_word_length_is_inversion_count(p):
    inv = sum(1 for i in range(5) for j in range(i + 1, 5) if p[i] > p[j])
    assert len(reduced_word(p)) == inv


def test_all_reduced_words_longest_element():
    # longest element of S_3 has two reduced words
    assert sorted(all_reduced_words((2, 1, 0))) == [[0, 1, 0], [1, 0, 1]]


@pytest.mark.parametrize("space", [rank_two_diagonal(), make_flip(2), scalar_diagonal(2)])
def test_reduced_word_independence(space):
    assert reduced_word_independence(LiftedBraiding(space), 4) is None


def test_symmetrizer_rank_two():
    assert nichols_dims_via_symmetrizer(LiftedBraiding(rank_two_diagonal()), 5) == [1, 2, 2, 2, 1, 0]


def test_symmetrizer_flip_gives_symmetric_powers():
    assert nichols_dims_via_symmetrizer(LiftedBraiding(make_flip(3)), 4) == [comb(3 + d - 1, d) for d in range(5)]


def test_symmetrizer_char_two_truncates():
    assert nichols_dims_via_symmetrizer(LiftedBraiding(make_flip(1, GF(2))), 3) == [1, 1, 0, 0]


@pytest.mark.parametrize("space", [scalar_diagonal(-1), scalar_diagonal(3), make_flip(2)])
def test_oracle_agrees_with_tower(space):
    assert nichols_dims_via_symmetrizer(LiftedBraiding(space), 4) == list(nichols_truncation(space, 4).dims)


def test_symmetrizer_guardrail():
    with pytest.raises(OracleRefusal):
        nichols_dims_via_symmetrizer(LiftedBraiding(make_flip(1)), 8)


def test_pbw_abelian_and_sl2():
    assert pbw_dims(abelian_constants(2), 3) == [1, 3, 6, 10]
    assert pbw_dims(sl2_constants(), 4) == [1, 4, 10, 20, 35]
    assert pbw_dims(sl2_constants(), 4) == classical_envelope(sl2_constants(), 4).final.quotient.filtered_dims()


def test_pbw_refuses_jacobi_failure():
    with pytest.raises(OracleRefusal) as err:
        pbw_dims(perturbed_sl2_constants(), 3)
    assert err.value.witness[0] == (1, 2, 3)


def test_permutation_lift():
    lb = LiftedBraiding(make_flip(2))
    assert permutation_lift_check(lb, 1, 1)
    assert permutation_lift_check(lb, 2, 3)
    assert not permutation_lift_check(CorruptedLift(make_flip(2)), 1, 2)
    with pytest.raises(OracleRefusal):
        permutation_lift_check(LiftedBraiding(rank_two_diagonal()), 1, 1)
