"""Exact scalars and linear algebra.

Two ground fields are supported: the rationals (``QQ``, backed by
:class:`fractions.Fraction`) and prime fields ``GF(p)``.  All subspaces are
kept in reduced row-echelon form, so equality of subspaces is equality of
their row lists.

Vectors are sparse dictionaries ``{column key: scalar}`` with no zero
entries.  Column keys may be any totally ordered hashable values; the pivot of
a row is its smallest key.  Dense matrices (:class:`DenseMatrix`) use integer
columns ``0..cols-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple


class FieldError(ValueError):
    """Raised when a computation is not valid over the requested field."""


class DimensionError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Mod:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Mod(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return Mod(pow(self.v, -1, self.p), self.p) ** (-k)
        return Mod(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


class Field:
    """Ground field descriptor: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise FieldError(f"{characteristic} is not prime")
        self.characteristic = characteristic
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, value: Any):
        if isinstance(value, str):
            value = Fraction(value.strip())
        p = self.characteristic
        if p == 0:
            if isinstance(value, Mod):
                raise FieldError("cannot coerce an F_p element into Q")
            return Fraction(value)
        if isinstance(value, Mod):
            if value.p != p:
                raise FieldError(f"mixing F_{p} and F_{value.p}")
            return value
        value = Fraction(value)
        if value.denominator % p == 0:
            raise FieldError(f"{value} has no image in F_{p}")
        return Mod(value.numerator * pow(value.denominator, -1, p), p)

    def require_char_not(self, p: int, what: str) -> None:
        if self.characteristic == p:
            raise FieldError(f"{what} requires characteristic != {p}")

    def require_char_zero(self, what: str) -> None:
        if self.characteristic != 0:
            raise FieldError(f"{what} requires characteristic 0")

    def format(self, x) -> str:
        return str(x)

    @property
    def name(self) -> str:
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return f"Field({self.name})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------------------
# sparse vector helpers

Vec = Dict[Hashable, Any]


def axpy(target: Vec, a, x: Mapping) -> None:
    """target += a * x, in place, dropping zeros."""
    for k, v in x.items():
        s = target.get(k)
        s = a * v if s is None else s + a * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def scale(a, x: Mapping) -> Vec:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def vec_add(*vs: Mapping) -> Vec:
    out: Vec = {}
    for v in vs:
        axpy(out, 1, v)
    return out


def vec_sub(x: Mapping, y: Mapping) -> Vec:
    out = dict(x)
    axpy(out, -1, y)
    return out


# ---------------------------------------------------------------------------
# reduced echelon engine


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    Rows are stored by pivot (the smallest key of the row), normalized so the
    pivot entry is one, and every other row is zero at every pivot column.
    """

    def __init__(self, rows: Iterable[Mapping] = ()):
        self.rows: Dict[Hashable, Vec] = {}
        self._where: Dict[Hashable, set] = {}  # column -> pivots of rows using it
        for r in rows:
            self.add(r)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        e._where = {k: set(s) for k, s in self._where.items()}
        return e

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping) -> Vec:
        r = dict(vec)
        rows = self.rows
        for k in list(vec.keys()):
            row = rows.get(k)
            if row is not None:
                a = r.get(k)
                if a:
                    axpy(r, -a, row)
        return r

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return True when the span grew."""
        r = self.reduce(vec)
        if not r:
            return False
        piv = min(r)
        lead = r[piv]
        inv = Fraction(1, lead) if isinstance(lead, int) else 1 / lead
        if inv != 1:
            r = {k: v * inv for k, v in r.items()}
        for q in list(self._where.get(piv, ())):
            row = self.rows[q]
            a = row[piv]
            old = set(row)
            axpy(row, -a, r)
            new = set(row)
            for k in old - new:
                s = self._where[k]
                s.discard(q)
            for k in new - old:
                self._where.setdefault(k, set()).add(q)
        self.rows[piv] = r
        for k in r:
            if k != piv:
                self._where.setdefault(k, set()).add(piv)
        return True

    def coordinates(self, vec: Mapping) -> Optional[Dict[Hashable, Any]]:
        """Coefficients of ``vec`` against the rows (by pivot), or None if outside."""
        coords = {k: vec[k] for k in vec if k in self.rows and vec[k]}
        rest = dict(vec)
        for k, a in coords.items():
            axpy(rest, -a, self.rows[k])
        if rest:
            return None
        return coords

    def sorted_rows(self) -> List[Tuple[Hashable, Vec]]:
        return [(p, self.rows[p]) for p in sorted(self.rows)]


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace in canonical (reduced row-echelon) form.

    ``rows`` is a tuple of sparse rows sorted by pivot.  ``ambient_dim`` is the
    number of integer columns for dense ambients and ``None`` for keyed
    ambients (e.g. words of a tensor algebra).
    """

    ambient_dim: Optional[int]
    rows: Tuple[Vec, ...]

    @staticmethod
    def from_echelon(ech: Echelon, ambient_dim: Optional[int] = None) -> "SubspaceBasis":
        return SubspaceBasis(ambient_dim, tuple(dict(r) for _, r in ech.sorted_rows()))

    @staticmethod
    def span(vectors: Iterable[Mapping], ambient_dim: Optional[int] = None) -> "SubspaceBasis":
        return SubspaceBasis.from_echelon(Echelon(vectors), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[Hashable]:
        return [min(r) for r in self.rows]

    def echelon(self) -> Echelon:
        e = Echelon()
        for r in self.rows:
            p = min(r)
            e.rows[p] = dict(r)
            for k in r:
                if k != p:
                    e._where.setdefault(k, set()).add(p)
        return e

    def contains(self, vec: Mapping) -> bool:
        return self.echelon().contains(vec)

    def coordinates(self, vec: Mapping) -> Optional[List]:
        """Coordinates of ``vec`` in this basis (row order), or None."""
        c = self.echelon().coordinates(vec)
        if c is None:
            return None
        return [c.get(min(r), 0) for r in self.rows]

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        e = other.echelon()
        return all(e.contains(r) for r in self.rows)

    def to_dense(self, field: Field) -> "DenseMatrix":
        if self.ambient_dim is None:
            raise DimensionError("keyed subspace has no dense form")
        return DenseMatrix.from_rows(
            field, [[r.get(j, field.zero) for j in range(self.ambient_dim)] for r in self.rows],
            cols=self.ambient_dim,
        )

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and list(self.rows) == list(other.rows)

    def __hash__(self):
        return hash((self.ambient_dim, len(self.rows)))

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"


# ---------------------------------------------------------------------------
# dense matrices


@dataclass(frozen=True)
class DenseMatrix:
    field: Field
    rows: int
    cols: int
    entries: Tuple  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError("entries length must equal rows*cols")

    @staticmethod
    def from_rows(field: Field, data: Sequence[Sequence], cols: Optional[int] = None) -> "DenseMatrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise DimensionError("ragged matrix")
        return DenseMatrix(field, len(data), cols, tuple(field(x) for r in data for x in r))

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "DenseMatrix":
        return DenseMatrix(field, rows, cols, (field.zero,) * (rows * cols))

    @staticmethod
    def identity(field: Field, n: int) -> "DenseMatrix":
        return DenseMatrix(field, n, n, tuple(field.one if i == j else field.zero
                                              for i in range(n) for j in range(n)))

    @staticmethod
    def from_columns(field: Field, n_rows: int, columns: Sequence[Mapping]) -> "DenseMatrix":
        """Build from sparse columns ``{row index: value}``."""
        ent = [field.zero] * (n_rows * len(columns))
        m = len(columns)
        for j, col in enumerate(columns):
            for i, v in col.items():
                ent[i * m + j] = v
        return DenseMatrix(field, n_rows, m, tuple(ent))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def tolist(self) -> List[List]:
        return [self.row(i) for i in range(self.rows)]

    def sparse_row(self, i: int) -> Vec:
        base = i * self.cols
        return {j: v for j in range(self.cols) if (v := self.entries[base + j])}

    def sparse_column(self, j: int) -> Vec:
        return {i: v for i in range(self.rows) if (v := self.entries[i * self.cols + j])}

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(self.field, self.cols, self.rows,
                           tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = self.field.zero
        out = []
        ocols = [other.sparse_column(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.sparse_row(i)
            for col in ocols:
                s = zero
                for k, v in col.items():
                    a = r.get(k)
                    if a:
                        s += a * v
                out.append(s)
        return DenseMatrix(self.field, self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence) -> List:
        return [sum((self.entries[i * self.cols + j] * vec[j] for j in range(self.cols)), self.field.zero)
                for i in range(self.rows)]

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        return DenseMatrix(self.field, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._same_shape(other)
        return DenseMatrix(self.field, self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scaled(self, a) -> "DenseMatrix":
        return DenseMatrix(self.field, self.rows, self.cols, tuple(a * x for x in self.entries))

    def kron(self, other: "DenseMatrix") -> "DenseMatrix":
        rows, cols = self.rows * other.rows, self.cols * other.cols
        ent = []
        for i1 in range(self.rows):
            for i2 in range(other.rows):
                for j1 in range(self.cols):
                    a = self[i1, j1]
                    for j2 in range(other.cols):
                        ent.append(a * other[i2, j2])
        return DenseMatrix(self.field, rows, cols, tuple(ent))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")


# ---------------------------------------------------------------------------
# public kernels


def rref(m: DenseMatrix) -> Tuple[SubspaceBasis, int]:
    ech = Echelon(m.sparse_row(i) for i in range(m.rows))
    basis = SubspaceBasis.from_echelon(ech, m.cols)
    return basis, basis.dim


def rank(m: DenseMatrix) -> int:
    return rref(m)[1]


def kernel_of_map(columns: Iterable[Tuple[Hashable, Mapping]], one=Fraction(1)) -> SubspaceBasis:
    """Kernel of a linear map given by ``(source key, image vector)`` pairs.

    Returns the kernel as a keyed subspace over the source keys.  The image and
    source key spaces are kept apart by tagging, with image columns ordered
    first so that rows pivoting on source columns are exactly kernel vectors.
    """
    ech = Echelon()
    for src, img in columns:
        v = {(0, k): a for k, a in img.items()}
        v[(1, src)] = one
        ech.add(v)
    ker = [{k[1]: a for k, a in row.items()} for p, row in ech.sorted_rows() if p[0] == 1]
    return SubspaceBasis(None, tuple(ker))


def kernel_basis(m: DenseMatrix) -> SubspaceBasis:
    cols = ((j, m.sparse_column(j)) for j in range(m.cols))
    ker = kernel_of_map(cols, m.field.one)
    return SubspaceBasis(m.cols, ker.rows)


def image_basis(m: DenseMatrix) -> SubspaceBasis:
    return rref(m.transpose())[0]


def intersect(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Canonical basis of a ∩ b (Zassenhaus)."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    ech = Echelon()
    for r in a.rows:
        v = {(0, k): x for k, x in r.items()}
        v.update({(1, k): x for k, x in r.items()})
        ech.add(v)
    for r in b.rows:
        ech.add({(0, k): x for k, x in r.items()})
    rows = [{k[1]: x for k, x in row.items()} for p, row in ech.sorted_rows() if p[0] == 1]
    return SubspaceBasis.span(rows, a.ambient_dim)


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    return SubspaceBasis.span(list(a.rows) + list(b.rows), a.ambient_dim)


def membership(v, s: SubspaceBasis) -> bool:
    """True iff ``v`` (dense sequence or sparse dict) lies in the span of ``s``."""
    if not isinstance(v, Mapping):
        if s.ambient_dim is not None and len(v) != s.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        v = {j: x for j, x in enumerate(v) if x}
    return s.contains(v)


def solve_affine(equations: Iterable[Tuple[Mapping, Any]], unknowns: Sequence[Hashable], field: Field):
    """Solve a linear system ``sum(coeff[u] * u) = rhs`` exactly.

    Returns ``(particular, directions)``: a particular solution (dict) and a
    basis of the homogeneous solution space (list of dicts), or ``None`` when
    the system is inconsistent.
    """
    order = {u: i for i, u in enumerate(unknowns)}
    RHS = (len(order),)
    ech = Echelon()
    for coeffs, rhs in equations:
        row = {(order[u],): a for u, a in coeffs.items() if a}
        if rhs:
            row[RHS] = field(rhs) if not isinstance(rhs, (Fraction, Mod)) else rhs
        if row:
            ech.add(row)
    if RHS in ech.rows:
        return None
    particular = {u: field.zero for u in unknowns}
    pivots = set()
    for p, row in ech.rows.items():
        u = unknowns[p[0]]
        pivots.add(p[0])
        particular[u] = row.get(RHS, field.zero)
    free = [i for i in range(len(unknowns)) if i not in pivots]
    directions = []
    for f in free:
        d = {u: field.zero for u in unknowns}
        d[unknowns[f]] = field.one
        for p, row in ech.rows.items():
            a = row.get((f,))
            if a:
                d[unknowns[p[0]]] = -a
        directions.append(d)
    return particular, directions
