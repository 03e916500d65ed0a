from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from braidtower.exactla import (
    GF, QQ, DenseMatrix, DimensionError, Echelon, FieldError, SubspaceBasis, intersect, kernel_basis, membership,
    rank, rref, solve_affine, subspace_sum,
)

small = st.integers(-3, 3)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def spaces(dim=4):
    return st.lists(st.lists(small, min_size=dim, max_size=dim), max_size=4).map(
        lambda rows: SubspaceBasis.span(({j: Fraction(x) for j, x in enumerate(r) if x} for r in rows), dim))


def test_prime_field_arithmetic():
    F = GF(5)
    a = F(3)
    assert a * F(2) == F(1)
    assert F("1/2") == F(3)
    assert -a == F(2)
    assert not F(10)
    with pytest.raises(FieldError):
        F(Fraction(1, 5))
    with pytest.raises(FieldError):
        GF(4)


def test_char_guards():
    with pytest.raises(FieldError):
        GF(2).require_char_not(2, "division by two")
    QQ.require_char_zero("anything")


@given(matrices())
def test_rref_idempotent(rows):
    m = DenseMatrix.from_rows(QQ, rows)
    basis, r = rref(m)
    again, r2 = rref(basis.to_dense(QQ))
    assert again == basis and r == r2


@given(matrices())
def test_rank_nullity(rows):
    m = DenseMatrix.from_rows(QQ, rows)
    ker = kernel_basis(m)
    assert rank(m) + ker.dim == m.cols
    for v in ker.rows:
        assert all(not x for x in m.apply([v.get(j, 0) for j in range(m.cols)]))


@given(matrices())
def test_rank_over_prime_field_never_exceeds_rational_rank(rows):
    assert rank(DenseMatrix.from_rows(GF(3), rows)) <= rank(DenseMatrix.from_rows(QQ, rows))


@given(spaces(), spaces())
def test_intersection_dimension_formula(a, b):
    i, s = intersect(a, b), subspace_sum(a, b)
    assert i.is_subspace_of(a) and i.is_subspace_of(b)
    assert a.is_subspace_of(s) and b.is_subspace_of(s)
    assert i.dim + s.dim == a.dim + b.dim


@given(spaces())
def test_coordinates_reconstruct(a):
    for r in a.rows:
        assert membership(r, a)
        assert a.coordinates(r) is not None


def test_intersect_rejects_mismatch():
    with pytest.raises(DimensionError):
        intersect(SubspaceBasis.span([], 2), SubspaceBasis.span([], 3))


def test_membership_dense_and_sparse():
    s = SubspaceBasis.span([{0: Fraction(1), 1: Fraction(1)}], 2)
    assert membership([2, 2], s) and not membership({0: 1}, s)


def test_solve_affine():
    sol = solve_affine([({"a": 1, "b": 1}, 2), ({"a": 1, "b": -1}, 0)], ["a", "b"], QQ)
    assert sol is not None
    part, dirs = sol
    assert part == {"a": 1, "b": 1} and dirs == []
    assert solve_affine([({"a": 1}, 1), ({"a": 2}, 1)], ["a"], QQ) is None
    part, dirs = solve_affine([({"a": 1, "b": 1}, 0)], ["a", "b"], QQ)
    assert len(dirs) == 1


def test_echelon_add_reports_growth():
    e = Echelon()
    assert e.add({0: 2}) and not e.add({0: 5}) and e.add({1: 1, 0: 1})
    assert len(e) == 2


def test_dense_algebra():
    a = DenseMatrix.from_rows(QQ, [[1, 2], [3, 4]])
    i = DenseMatrix.identity(QQ, 2)
    assert a @ i == a
    assert (a - a).is_zero()
    assert a.kron(i).rows == 4
    assert a.transpose()[0, 1] == 3
