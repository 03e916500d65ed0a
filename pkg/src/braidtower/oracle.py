"""Brute-force cross-checks that share no code path with the tower.

* Quantum symmetrizers: dim of the degree-d Nichols piece is rank S_d with
  S_d = Σ_σ T_σ, T_σ the braid lift of σ along a reduced word.
* PBW straightening for classical Lie algebras.
* Block-swap permutations for lifts of the flip.
"""
from __future__ import annotations

import itertools
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .braiding import LiftedBraiding, apply_at, word_index, words
from .exactla import DenseMatrix, Echelon, Field, FieldError, QQ, axpy

SYMMETRIZER_MAX_DEGREE = 7


class OracleRefusal(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def reduced_word(perm: Sequence[int]) -> List[int]:
    """A reduced word for ``perm`` (one-line notation) read off bubble sort.

    Sorting swaps adjacent positions; their reverse is a product of simple
    transpositions equal to ``perm`` with as many factors as inversions.
    """
    p = list(perm)
    swaps = []
    changed = True
    while changed:
        changed = False
        for i in range(len(p) - 1):
            if p[i] > p[i + 1]:
                p[i], p[i + 1] = p[i + 1], p[i]
                swaps.append(i)
                changed = True
    return swaps[::-1]


def all_reduced_words(perm: Sequence[int]) -> List[List[int]]:
    p = tuple(perm)
    n = len(p)
    if all(p[i] < p[i + 1] for i in range(n - 1)):
        return [[]]
    out = []
    for i in range(n - 1):
        if p[i] > p[i + 1]:
            q = list(p)
            q[i], q[i + 1] = q[i + 1], q[i]
            for rest in all_reduced_words(q):
                out.append(rest + [i])
    return out


def _apply_word(lb: LiftedBraiding, positions: Sequence[int], vec: Dict) -> Dict:
    # the word s_{i1} s_{i2} ... acts right-to-left
    for pos in reversed(positions):
        vec = apply_at(lb.space, vec, pos)
    return vec


def quantum_symmetrizer(lb: LiftedBraiding, d: int) -> DenseMatrix:
    if d > SYMMETRIZER_MAX_DEGREE:
        raise OracleRefusal(f"symmetrizer degree {d} exceeds the guardrail {SYMMETRIZER_MAX_DEGREE}")
    n = lb.space.n
    F = lb.space.field
    if d == 0:
        return DenseMatrix.identity(F, 1)
    perms = [reduced_word(p) for p in itertools.permutations(range(d))]
    cols = []
    for w in words(n, d):
        acc: Dict = {}
        for rw in perms:
            axpy(acc, 1, _apply_word(lb, rw, {w: F.one}))
        cols.append({word_index(x, n): a for x, a in acc.items()})
    return DenseMatrix.from_columns(F, n ** d, cols)


def reduced_word_independence(lb: LiftedBraiding, d: int) -> Optional[Tuple]:
    """First permutation whose reduced words give different lifts, or None."""
    n = lb.space.n
    F = lb.space.field
    for p in itertools.permutations(range(d)):
        rws = all_reduced_words(p)
        for w in words(n, d):
            ref = _apply_word(lb, rws[0], {w: F.one})
            for rw in rws[1:]:
                if _apply_word(lb, rw, {w: F.one}) != ref:
                    return p, rws[0], rw, w
    return None


def nichols_dims_via_symmetrizer(lb: LiftedBraiding, D: int) -> List[int]:
    if D > SYMMETRIZER_MAX_DEGREE:
        raise OracleRefusal(f"symmetrizer degree {D} exceeds the guardrail {SYMMETRIZER_MAX_DEGREE}")
    out = []
    for d in range(D + 1):
        S = quantum_symmetrizer(lb, d)
        out.append(len(Echelon(S.sparse_column(j) for j in range(S.cols))))
    return out


# ---------------------------------------------------------------------------
# PBW straightening


def _bracket_vec(constants, i: int, j: int) -> Dict[int, object]:
    return {k: a for k, a in enumerate(constants[i][j]) if a}


def jacobiator_witness(constants, field: Field):
    n = len(constants)
    for i, j, k in itertools.product(range(n), repeat=3):
        total: Dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, x in _bracket_vec(constants, a, b).items():
                for r, y in _bracket_vec(constants, m, c).items():
                    axpy(total, x * y, {r: 1})
        if total:
            return (i + 1, j + 1, k + 1), total
    return None


def straighten(constants, vec: Dict[Tuple[int, ...], object], rightmost: bool = False) -> Dict:
    """Rewrite x_i x_j → x_j x_i + [x_i, x_j] (i > j) until every word is non-decreasing."""
    out: Dict = {}
    todo = dict(vec)
    while todo:
        w, a = todo.popitem()
        if not a:
            continue
        idx = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
        if not idx:
            axpy(out, a, {w: 1})
            continue
        p = idx[-1] if rightmost else idx[0]
        i, j = w[p], w[p + 1]
        axpy(todo, a, {w[:p] + (j, i) + w[p + 2:]: 1})
        for k, c in _bracket_vec(constants, i, j).items():
            axpy(todo, a * c, {w[:p] + (k,) + w[p + 2:]: 1})
    return out


def pbw_dims(structure_constants, D: int, field: Field = QQ) -> List[int]:
    """Filtered dims of U(g) from ordered monomials, after checking confluence."""
    if field.characteristic != 0:
        raise FieldError("PBW oracle requires characteristic 0")
    consts = [[[field(a) for a in v] for v in row] for row in structure_constants]
    n = len(consts)
    wit = jacobiator_witness(consts, field)
    if wit is not None:
        raise OracleRefusal(f"Jacobi identity fails on basis triple {wit[0]}", wit)
    for d in range(D + 1):
        for w in words(n, d):
            if straighten(consts, {w: field.one}) != straighten(consts, {w: field.one}, rightmost=True):
                raise OracleRefusal(f"rewriting is not confluent on {w}", w)
    # ordered monomials of length ≤ d span, and by confluence they are independent
    out = []
    for d in range(D + 1):
        span = Echelon()
        for k in range(d + 1):
            for w in words(n, k):
                span.add({x: a for x, a in straighten(consts, {w: field.one}).items()})
        out.append(len(span))
        assert out[-1] == comb(n + d, d)
    return out


# ---------------------------------------------------------------------------
# flip lifts


def permutation_lift_check(lb: LiftedBraiding, a: int, b: int, lifted: Optional[DenseMatrix] = None) -> bool:
    """Compare c_{a,b} with the block swap u⊗v ↦ v⊗u (flip braidings only)."""
    if not lb.space.is_flip():
        raise OracleRefusal("permutation oracle applies to the flip braiding only")
    n = lb.space.n
    m = lb.matrix(a, b) if lifted is None else lifted
    F = lb.space.field
    for w in words(n, a + b):
        src = word_index(w, n)
        dst = word_index(w[a:] + w[:a], n)
        for r in range(m.rows):
            want = F.one if r == dst else F.zero
            if m[r, src] != want:
                return False
    return True
