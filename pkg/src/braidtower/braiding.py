"""Braided vector spaces, the Yang-Baxter check and lifted braidings.

Basis vectors of V are indexed ``0..n-1`` and rendered ``x1..xn``.  A basis
word of V^{⊗k} is a tuple of indices; dense coordinates of V^{⊗k} list words in
lexicographic order, so word ``w`` sits at index ``sum(w[i] * n**(k-1-i))``.
"""
from __future__ import annotations

import itertools
import threading
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .exactla import (
    QQ, DenseMatrix, Echelon, Field, SubspaceBasis, axpy, kernel_of_map,
)

Word = Tuple[int, ...]


class InvalidBraiding(ValueError):
    """The proposed map is not a braiding (zero diagonal entry, YB failure, bad shape)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def words(n: int, k: int):
    return itertools.product(range(n), repeat=k)


def word_index(w: Sequence[int], n: int) -> int:
    idx = 0
    for a in w:
        idx = idx * n + a
    return idx


def index_word(idx: int, n: int, k: int) -> Word:
    out = []
    for _ in range(k):
        idx, r = divmod(idx, n)
        out.append(r)
    return tuple(reversed(out))


class BraidedSpace:
    """A finite-dimensional space V with a braiding c on V⊗V.

    ``c`` is an n²×n² :class:`DenseMatrix`; column ``i*n+j`` is c(e_i⊗e_j).
    The Yang-Baxter equation is verified on construction unless ``check`` is
    false (used only to build deliberately broken fixtures).
    """

    def __init__(self, n: int, c: DenseMatrix, field: Field = QQ, check: bool = True, label: str = ""):
        if n < 1:
            raise InvalidBraiding("dimension must be at least 1")
        if (c.rows, c.cols) != (n * n, n * n):
            raise InvalidBraiding(f"braiding must be {n*n}x{n*n}, got {c.rows}x{c.cols}")
        if c.field != field:
            raise InvalidBraiding("braiding matrix is over a different field")
        self.n = n
        self.c = c
        self.field = field
        self.label = label
        # sparse images: (i, j) -> {(k, l): coeff}
        self.images: Dict[Tuple[int, int], Dict[Tuple[int, int], object]] = {}
        for i in range(n):
            for j in range(n):
                col = c.sparse_column(i * n + j)
                self.images[(i, j)] = {divmod(r, n): v for r, v in col.items()}
        if check:
            witness = yang_baxter_violation(self)
            if witness is not None:
                raise InvalidBraiding(f"Yang-Baxter equation fails on {witness}", witness)

    def braid(self, i: int, j: int) -> Dict[Tuple[int, int], object]:
        return self.images[(i, j)]

    def is_flip(self) -> bool:
        one = self.field.one
        return all(img == {(j, i): one} for (i, j), img in self.images.items())

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"BraidedSpace(n={self.n}, field={self.field.name}{tag})"


def make_diagonal(q: Sequence[Sequence], field: Field = QQ) -> BraidedSpace:
    n = len(q)
    if any(len(row) != n for row in q):
        raise InvalidBraiding("q-matrix must be square")
    qs = [[field(x) for x in row] for row in q]
    for i in range(n):
        for j in range(n):
            if not qs[i][j]:
                raise InvalidBraiding(f"invalid braiding: q[{i+1}][{j+1}] is zero")
    cols = [{j * n + i: qs[i][j]} for i in range(n) for j in range(n)]
    c = DenseMatrix.from_columns(field, n * n, cols)
    bs = BraidedSpace(n, c, field, check=False, label="diagonal")
    bs.q = qs
    return bs


def make_flip(n: int, field: Field = QQ) -> BraidedSpace:
    if n < 1:
        raise InvalidBraiding("dimension must be at least 1")
    return make_diagonal([[1] * n for _ in range(n)], field)


def make_braiding(n: int, matrix: Sequence[Sequence], field: Field = QQ, check: bool = True) -> BraidedSpace:
    """Braided space from an explicit n²×n² matrix (rows act on column vectors)."""
    return BraidedSpace(n, DenseMatrix.from_rows(field, matrix), field, check=check, label="matrix")


# ---------------------------------------------------------------------------
# sparse application of c at a position of a word

def apply_at(bs: BraidedSpace, vec: Mapping[Word, object], pos: int) -> Dict[Word, object]:
    """Apply c to letters ``pos, pos+1`` of every word in ``vec``."""
    out: Dict[Word, object] = {}
    for w, a in vec.items():
        img = bs.images[(w[pos], w[pos + 1])]
        head, tail = w[:pos], w[pos + 2:]
        for (k, l), v in img.items():
            nw = head + (k, l) + tail
            s = out.get(nw)
            s = a * v if s is None else s + a * v
            if s:
                out[nw] = s
            else:
                out.pop(nw, None)
    return out


def yang_baxter_violation(bs: BraidedSpace) -> Optional[Tuple[int, int, int]]:
    """First basis triple (1-based) where c1c2c1 and c2c1c2 differ, or None."""
    for w in words(bs.n, 3):
        v = {w: bs.field.one}
        lhs = apply_at(bs, apply_at(bs, apply_at(bs, v, 0), 1), 0)
        rhs = apply_at(bs, apply_at(bs, apply_at(bs, v, 1), 0), 1)
        if lhs != rhs:
            return tuple(a + 1 for a in w)
    return None


def check_yang_baxter(bs: BraidedSpace) -> bool:
    return yang_baxter_violation(bs) is None


# ---------------------------------------------------------------------------
# minimal polynomial and Hecke mark

def minimal_polynomial(bs: BraidedSpace) -> List:
    """Monic minimal polynomial of c, coefficients from constant term upwards."""
    F = bs.field
    N = bs.c.rows
    ident = DenseMatrix.identity(F, N)
    powers = [ident]
    while True:
        k = len(powers) - 1
        cols = [(j, {i: x for i, x in enumerate(p.entries) if x}) for j, p in enumerate(powers)]
        ker = kernel_of_map(cols, F.one)
        if ker.dim:
            # the unique kernel vector has its pivot at the smallest power; take the
            # relation involving the top power and normalize it to be monic
            row = ker.rows[0]
            top = row.get(k)
            if top is None:
                raise AssertionError("power dependency found late")
            return [row.get(j, F.zero) / top for j in range(k + 1)]
        powers.append(powers[-1] @ bs.c)


def format_polynomial(coeffs: Sequence, var: str = "X") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        a = coeffs[k]
        if not a:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and a == 1:
            term = mono
        elif mono and a == -1:
            term = "-" + mono
        else:
            term = f"{a}*{mono}" if mono else f"{a}"
        parts.append(term)
    s = " + ".join(parts) if parts else "0"
    return s.replace("+ -", "- ")


def hecke_mark(bs: BraidedSpace):
    """Mark q with (c+1)(c-q)=0, when the minimal polynomial pins it down.

    A quadratic minimal polynomial must equal (X+1)(X-q).  A linear one X-q
    with q != -1 also determines q uniquely.  ``c = -Id`` satisfies the
    relation for every q, so no mark is reported.
    """
    mp = minimal_polynomial(bs)
    if len(mp) == 2:
        q = -mp[0]
        if q == -1 or not q:
            return None
        return q
    if len(mp) == 3:
        a0, a1 = mp[0], mp[1]
        q = -a0
        if q and a1 == 1 - q:
            return q
    return None


# ---------------------------------------------------------------------------
# lifted braidings

class LiftedBraiding:
    """The braiding of T(V) between V^{⊗a} and V^{⊗b}.

    c_{a,b} moves the block of the last ``b`` letters across the first ``a``
    letters, one crossing at a time: the letter at position a-1 is pushed right
    first, then a-2, and so on.
    """

    def __init__(self, space: BraidedSpace):
        self.space = space
        self._sparse: Dict[Tuple[int, Word], Dict[Word, object]] = {}
        self._dense: Dict[Tuple[int, int], DenseMatrix] = {}
        self._lock = threading.Lock()

    def apply_word(self, a: int, w: Word) -> Dict[Word, object]:
        """c_{a,|w|-a} applied to the basis word ``w``; result maps words to scalars."""
        key = (a, w)
        hit = self._sparse.get(key)
        if hit is not None:
            return hit
        b = len(w) - a
        vec = {w: self.space.field.one}
        if a and b:
            for i in range(a - 1, -1, -1):
                for j in range(i, i + b):
                    vec = apply_at(self.space, vec, j)
        with self._lock:
            self._sparse.setdefault(key, vec)
        return vec

    def apply_pair(self, u: Word, v: Word) -> Dict[Tuple[Word, Word], object]:
        """c(u⊗v) as a map from word pairs (v', u') to scalars."""
        b = len(v)
        out = {}
        for w, x in self.apply_word(len(u), u + v).items():
            out[(w[:b], w[b:])] = x
        return out

    def apply_vec(self, a: int, vec: Mapping[Word, object]) -> Dict[Word, object]:
        out: Dict[Word, object] = {}
        for w, x in vec.items():
            axpy(out, x, self.apply_word(a, w))
        return out

    def matrix(self, a: int, b: int) -> DenseMatrix:
        key = (a, b)
        hit = self._dense.get(key)
        if hit is not None:
            return hit
        n = self.space.n
        cols = []
        for w in words(n, a + b):
            img = self.apply_word(a, w)
            cols.append({word_index(x, n): v for x, v in img.items()})
        m = DenseMatrix.from_columns(self.space.field, n ** (a + b), cols)
        with self._lock:
            self._dense.setdefault(key, m)
        return m


def lift_braiding(lb: LiftedBraiding, a: int, b: int) -> DenseMatrix:
    if a < 0 or b < 0:
        raise ValueError("degrees must be non-negative")
    return lb.matrix(a, b)


def hexagon_violation(lb: LiftedBraiding, D: int):
    """First (identity, a, a', b) or (identity, a, b, b') where a hexagon fails."""
    n = lb.space.n
    one = lb.space.field.one
    for total in range(2, D + 1):
        for a, a2, b in _triples(total):
            for w in words(n, total):
                # c_{a+a',b} = (c_{a,b} ⊗ Id)(Id_a ⊗ c_{a',b})
                lhs = lb.apply_word(a + a2, w)
                rhs: Dict[Word, object] = {}
                for x, s in lb.apply_word(a2, w[a:]).items():
                    for y, t in lb.apply_word(a, w[:a] + x[:b]).items():
                        axpy(rhs, s * t, {y + x[b:]: one})
                if lhs != rhs:
                    return ("left", a, a2, b, w)
        for a, b, b2 in _triples(total):
            for w in words(n, total):
                # c_{a,b+b'} = (Id_b ⊗ c_{a,b'})(c_{a,b} ⊗ Id)
                lhs = lb.apply_word(a, w)
                rhs = {}
                for x, s in lb.apply_word(a, w[:a + b]).items():
                    for y, t in lb.apply_word(a, x[b:] + w[a + b:]).items():
                        axpy(rhs, s * t, {x[:b] + y: one})
                if lhs != rhs:
                    return ("right", a, b, b2, w)
    return None


def _triples(total: int):
    for a in range(1, total):
        for a2 in range(1, total - a):
            b = total - a - a2
            if b >= 1:
                yield a, a2, b


# ---------------------------------------------------------------------------
# pre-categorical and categorical subspaces

class TensorAmbient:
    """The truncated tensor algebra T(V)_{≤D} as an ambient space with braiding.

    Keys are words; subspaces over it are keyed :class:`SubspaceBasis` values.
    """

    def __init__(self, lb: LiftedBraiding, max_degree: int):
        self.lb = lb
        self.max_degree = max_degree
        self.field = lb.space.field

    def basis(self) -> List[Word]:
        n = self.lb.space.n
        return [w for k in range(self.max_degree + 1) for w in words(n, k)]

    def braid(self, u: Word, v: Word) -> Dict[Tuple[Word, Word], object]:
        return self.lb.apply_pair(u, v)

    def ambient_dim(self):
        return None


class VectorAmbient:
    """V itself, with integer keys 0..n-1."""

    def __init__(self, space: BraidedSpace):
        self.space = space
        self.field = space.field

    def basis(self) -> List[int]:
        return list(range(self.space.n))

    def braid(self, i: int, j: int):
        return self.space.braid(i, j)

    def ambient_dim(self):
        return self.space.n


def _ambient(obj):
    if isinstance(obj, BraidedSpace):
        return VectorAmbient(obj)
    if isinstance(obj, LiftedBraiding):
        raise TypeError("wrap a LiftedBraiding in TensorAmbient(lb, max_degree)")
    return obj


def _check_ambient(s: SubspaceBasis, amb) -> None:
    if s.ambient_dim != amb.ambient_dim():
        raise ValueError(f"ambient mismatch: subspace has ambient {s.ambient_dim}, braiding acts on {amb.ambient_dim()}")


def _braid_vec_pair(amb, x: Mapping, y: Mapping) -> Dict[Tuple, object]:
    out: Dict[Tuple, object] = {}
    for k1, a in x.items():
        for k2, b in y.items():
            axpy(out, a * b, amb.braid(k1, k2))
    return out


def is_precategorical(s: SubspaceBasis, ambient) -> bool:
    """c(L⊗W + W⊗L) ⊆ L⊗W + W⊗L, tested by reducing both factors modulo L."""
    amb = _ambient(ambient)
    _check_ambient(s, amb)
    ech = s.echelon()
    one = amb.field.one
    nf_cache: Dict = {}

    def nf(k):
        r = nf_cache.get(k)
        if r is None:
            r = nf_cache[k] = ech.reduce({k: one})
        return r

    basis = amb.basis()
    for l in s.rows:
        for w in basis:
            for img in (_braid_vec_pair(amb, l, {w: one}), _braid_vec_pair(amb, {w: one}, l)):
                acc: Dict = {}
                for (k1, k2), a in img.items():
                    n1 = nf(k1)
                    if not n1:
                        continue
                    n2 = nf(k2)
                    for p, x in n1.items():
                        for q, y in n2.items():
                            axpy(acc, a * x * y, {(p, q): one})
                if acc:
                    return False
    return True


def _slices(img: Mapping[Tuple, object], side: int) -> Dict:
    out: Dict = {}
    for (k1, k2), a in img.items():
        key, other = (k1, k2) if side == 0 else (k2, k1)
        out.setdefault(key, {})[other] = a
    return out


def is_categorical(s: SubspaceBasis, ambient) -> bool:
    """c(L⊗W) ⊆ W⊗L and c(W⊗L) ⊆ L⊗W."""
    amb = _ambient(ambient)
    _check_ambient(s, amb)
    ech = s.echelon()
    one = amb.field.one
    for l in s.rows:
        for w in amb.basis():
            # c(l⊗w) ∈ W⊗L: every slice by first key lies in L
            for part in _slices(_braid_vec_pair(amb, l, {w: one}), 0).values():
                if not ech.contains(part):
                    return False
            for part in _slices(_braid_vec_pair(amb, {w: one}, l), 1).values():
                if not ech.contains(part):
                    return False
    return True
