"""Finite-dimensional braided bialgebras given by structure tables.

Vectors of A are sparse dicts over basis indices ``0..dim-1``; tensors over
index pairs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..braiding import BraidedSpace
from ..exactla import DenseMatrix, Echelon, Field, SubspaceBasis, axpy, kernel_of_map
from ..quotient import QuotientAlgebra, generates_as_algebra
from ..tensoralg import TensorElement, TruncatedTensorAlgebra, render_word, unkey, wkey
from .tower import EnvelopeError, TowerRun, TowerState, bracket_matrix, run_tower


class InvalidBialgebra(ValueError):
    def __init__(self, axiom: str, witness: str):
        super().__init__(f"{axiom} fails: {witness}")
        self.axiom = axiom
        self.witness = witness


class NotPrimitivelyGenerated(ValueError):
    pass


Vec = Dict[int, object]


class FiniteBraidedBialgebra:
    """Braided bialgebra with exact multiplication, comultiplication and braiding tables.

    ``mult[(i, j)]``, ``comult[i]`` and ``braiding[(i, j)]`` are sparse vectors;
    missing products are zero.  Every axiom is checked on basis elements at
    construction.
    """

    def __init__(self, field: Field, dim: int, mult: Mapping, comult: Mapping, unit: Mapping,
                 counit: Sequence, braiding: Mapping, names: Optional[Sequence[str]] = None, check: bool = True):
        self.field = field
        self.dim = dim
        F = field
        self.mult = {(i, j): {k: F(a) for k, a in mult.get((i, j), {}).items() if a}
                     for i in range(dim) for j in range(dim)}
        self.comult = {i: {kl: F(a) for kl, a in comult.get(i, {}).items() if a} for i in range(dim)}
        self.unit = {k: F(a) for k, a in unit.items() if a}
        self.counit = [F(a) for a in counit]
        self.braiding = {(i, j): {kl: F(a) for kl, a in braiding.get((i, j), {}).items() if a}
                         for i in range(dim) for j in range(dim)}
        self.names = list(names) if names else [f"e{i}" for i in range(dim)]
        if len(self.counit) != dim:
            raise InvalidBialgebra("shape", "counit has the wrong length")
        if check:
            self.check_axioms()

    # -- linear maps on sparse vectors

    def mul(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                axpy(out, a * b, self.mult[(i, j)])
        return out

    def delta(self, x: Vec) -> Dict:
        out: Dict = {}
        for i, a in x.items():
            axpy(out, a, self.comult[i])
        return out

    def eps(self, x: Vec):
        return sum((a * self.counit[i] for i, a in x.items()), self.field.zero)

    def braid(self, x: Vec, y: Vec) -> Dict:
        out: Dict = {}
        for i, a in x.items():
            for j, b in y.items():
                axpy(out, a * b, self.braiding[(i, j)])
        return out

    def basis_vec(self, i: int) -> Vec:
        return {i: self.field.one}

    # -- helpers on tensors

    def _on_factor(self, t: Mapping, pos: int, fn) -> Dict:
        """Apply a map from basis index to sparse tensor at factor ``pos``."""
        out: Dict = {}
        for key, a in t.items():
            img = fn(key[pos])
            for k2, b in img.items():
                k2 = k2 if isinstance(k2, tuple) else (k2,)
                axpy(out, a * b, {key[:pos] + k2 + key[pos + 1:]: 1})
        return out

    def _braid_at(self, t: Mapping, pos: int) -> Dict:
        out: Dict = {}
        for key, a in t.items():
            for kl, b in self.braiding[(key[pos], key[pos + 1])].items():
                axpy(out, a * b, {key[:pos] + kl + key[pos + 2:]: 1})
        return out

    def _mul_at(self, t: Mapping, pos: int) -> Dict:
        out: Dict = {}
        for key, a in t.items():
            for k, b in self.mult[(key[pos], key[pos + 1])].items():
                axpy(out, a * b, {key[:pos] + (k,) + key[pos + 2:]: 1})
        return out

    def check_axioms(self) -> None:
        F = self.field
        one = F.one
        rng = range(self.dim)
        e = self.basis_vec

        def fail(axiom, witness):
            raise InvalidBialgebra(axiom, witness)

        nm = self.names
        for i, j, k in itertools.product(rng, rng, rng):
            if self.mul(self.mul(e(i), e(j)), e(k)) != self.mul(e(i), self.mul(e(j), e(k))):
                fail("associativity", f"({nm[i]}·{nm[j]})·{nm[k]}")
        for i in rng:
            if self.mul(self.unit, e(i)) != e(i) or self.mul(e(i), self.unit) != e(i):
                fail("unit", nm[i])
        for i in rng:
            d = {k: a for k, a in self.comult[i].items()}
            if self._on_factor(d, 0, lambda a: self.comult[a]) != self._on_factor(d, 1, lambda a: self.comult[a]):
                fail("coassociativity", nm[i])
            left = {}
            right = {}
            for (a, b), x in d.items():
                axpy(left, x * self.counit[a], {b: 1})
                axpy(right, x * self.counit[b], {a: 1})
            if left != e(i) or right != e(i):
                fail("counit", nm[i])
        if self.delta(self.unit) != {(u1, u2): a * b for u1, a in self.unit.items() for u2, b in self.unit.items()}:
            fail("Δ(1) = 1⊗1", "unit")
        if self.eps(self.unit) != one:
            fail("ε(1) = 1", "unit")
        for i, j in itertools.product(rng, rng):
            if self.eps(self.mult[(i, j)]) != self.counit[i] * self.counit[j]:
                fail("ε multiplicative", f"{nm[i]}, {nm[j]}")
            # Br1: Δ(ab) = (m⊗m)(Id⊗c⊗Id)(Δa⊗Δb)
            lhs = self.delta(self.mult[(i, j)])
            t4 = {}
            for (a1, a2), x in self.comult[i].items():
                for (b1, b2), y in self.comult[j].items():
                    axpy(t4, x * y, {(a1, a2, b1, b2): 1})
            t4 = self._braid_at(t4, 1)
            t4 = self._mul_at(t4, 2)
            rhs = self._mul_at(t4, 0)
            if lhs != rhs:
                fail("Br1", f"Δ({nm[i]}·{nm[j]})")
        for i, j, k in itertools.product(rng, rng, rng):
            base = {(i, j, k): one}
            # Br2: c(m⊗Id) = (Id⊗m)(c⊗Id)(Id⊗c)
            lhs = self._braid_at(self._mul_at(base, 0), 0)
            rhs = self._mul_at(self._braid_at(self._braid_at(base, 1), 0), 1)
            if lhs != rhs:
                fail("Br2", f"{nm[i]}⊗{nm[j]}⊗{nm[k]}")
            # Br3: c(Id⊗m) = (m⊗Id)(Id⊗c)(c⊗Id)
            lhs = self._braid_at(self._mul_at(base, 1), 0)
            rhs = self._mul_at(self._braid_at(self._braid_at(base, 0), 1), 0)
            if lhs != rhs:
                fail("Br3", f"{nm[i]}⊗{nm[j]}⊗{nm[k]}")
            # Yang-Baxter
            lhs = self._braid_at(self._braid_at(self._braid_at(base, 0), 1), 0)
            rhs = self._braid_at(self._braid_at(self._braid_at(base, 1), 0), 1)
            if lhs != rhs:
                fail("Yang-Baxter", f"{nm[i]}⊗{nm[j]}⊗{nm[k]}")
        for i in rng:
            # Br4: c(1⊗x) = x⊗1, c(x⊗1) = 1⊗x
            lhs = self.braid(self.unit, e(i))
            want = {(i, u): a for u, a in self.unit.items()}
            if lhs != want or self.braid(e(i), self.unit) != {(u, i): a for u, a in self.unit.items()}:
                fail("Br4", nm[i])
        for i, j in itertools.product(rng, rng):
            base = {(i, j): one}
            cij = self.braiding[(i, j)]
            # Br5: (Δ⊗Id)c = (Id⊗c)(c⊗Id)(Id⊗Δ)
            lhs = self._on_factor(cij, 0, lambda a: self.comult[a])
            rhs = self._braid_at(self._braid_at(self._on_factor(base, 1, lambda a: self.comult[a]), 0), 1)
            if lhs != rhs:
                fail("Br5", f"{nm[i]}⊗{nm[j]}")
            # Br6: (Id⊗Δ)c = (c⊗Id)(Id⊗c)(Δ⊗Id)
            lhs = self._on_factor(cij, 1, lambda a: self.comult[a])
            rhs = self._braid_at(self._braid_at(self._on_factor(base, 0, lambda a: self.comult[a]), 1), 0)
            if lhs != rhs:
                fail("Br6", f"{nm[i]}⊗{nm[j]}")
            # Br7: (ε⊗Id)c = Id⊗ε, (Id⊗ε)c = ε⊗Id
            l1, l2 = {}, {}
            for (a, b), x in cij.items():
                axpy(l1, x * self.counit[a], {b: 1})
                axpy(l2, x * self.counit[b], {a: 1})
            if l1 != ({i: self.counit[j]} if self.counit[j] else {}) or l2 != ({j: self.counit[i]} if self.counit[i] else {}):
                fail("Br7", f"{nm[i]}⊗{nm[j]}")

    # -- derived structure

    def primitives(self) -> SubspaceBasis:
        """Ker(x ↦ x⊗1 + 1⊗x - Δx) inside Ker ε, as a dense subspace of A."""
        cols = []
        for i in range(self.dim):
            img: Dict = {}
            for u, a in self.unit.items():
                axpy(img, a, {(i, u): 1})
                axpy(img, a, {(u, i): 1})
            axpy(img, -1, self.comult[i])
            if self.counit[i]:
                img[(-1, -1)] = self.counit[i]  # ε coordinate
            cols.append((i, img))
        ker = kernel_of_map(cols, self.field.one)
        return SubspaceBasis(self.dim, ker.rows)

    def generates_as_algebra(self, s: SubspaceBasis) -> bool:
        span = Echelon([dict(self.unit)])
        frontier = [dict(self.unit)]
        gens = [dict(r) for r in s.rows]
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    p = self.mul(f, g)
                    if span.add(p):
                        nxt.append(p)
            frontier = nxt
        return len(span) == self.dim

    def render(self, x: Vec) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            a = x[i]
            s = str(a)
            parts.append(self.names[i] if s == "1" else f"{s}*{self.names[i]}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# fixtures


def char2_example(field: Field) -> FiniteBraidedBialgebra:
    """K[x,y]/(x², y², yx - xy) with Δy = 1⊗y + x⊗x + y⊗1, flip braiding."""
    one, x, y, xy = 0, 1, 2, 3
    mult = {
        (one, one): {one: 1}, (one, x): {x: 1}, (one, y): {y: 1}, (one, xy): {xy: 1},
        (x, one): {x: 1}, (y, one): {y: 1}, (xy, one): {xy: 1},
        (x, y): {xy: 1}, (y, x): {xy: 1},
    }
    comult = {
        one: {(one, one): 1},
        x: {(x, one): 1, (one, x): 1},
        y: {(one, y): 1, (x, x): 1, (y, one): 1},
        xy: {(xy, one): 1, (x, y): 1, (y, x): 1, (one, xy): 1},
    }
    flip = {(i, j): {(j, i): 1} for i in range(4) for j in range(4)}
    return FiniteBraidedBialgebra(field, 4, mult, comult, {one: 1}, [1, 0, 0, 0], flip, ["1", "x", "y", "xy"])


def truncated_polynomial(field: Field, q=1) -> FiniteBraidedBialgebra:
    """K[x]/(x²) with x primitive and braiding c(x⊗x) = q x⊗x.

    A bialgebra when 1 + q = 0 in K (q = -1, or q = 1 in characteristic 2).
    """
    F = field
    mult = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    comult = {0: {(0, 0): 1}, 1: {(1, 0): 1, (0, 1): 1}}
    br = {(0, 0): {(0, 0): 1}, (0, 1): {(1, 0): 1}, (1, 0): {(0, 1): 1}, (1, 1): {(1, 1): F(q)}}
    return FiniteBraidedBialgebra(F, 2, mult, comult, {0: 1}, [1, 0], br, ["1", "x"])


def trivial_bialgebra(field: Field) -> FiniteBraidedBialgebra:
    return FiniteBraidedBialgebra(field, 1, {(0, 0): {0: 1}}, {0: {(0, 0): 1}}, {0: 1}, [1],
                                  {(0, 0): {(0, 0): 1}}, ["1"])


def finite_from_quotient(q: QuotientAlgebra) -> FiniteBraidedBialgebra:
    """Tables of a quotient whose ideal contains every word of degree D."""
    if not q.vanishes_above:
        raise EnvelopeError("quotient is not known to be finite-dimensional at this truncation")
    words = list(q.standard)
    index = {wkey(w): i for i, w in enumerate(words)}

    def to_idx(vec):
        return {index[k]: a for k, a in vec.items()}

    mult = {}
    comult = {}
    braiding = {}
    lb = q.base.lifted
    for i, u in enumerate(words):
        d = q.nf_pair(q.base.delta_word(u))
        comult[i] = {(index[a], index[b]): x for (a, b), x in d.items()}
        for j, v in enumerate(words):
            mult[(i, j)] = to_idx(q.nf_word(u + v))
            c = q.nf_pair(lb.apply_pair(u, v))
            braiding[(i, j)] = {(index[a], index[b]): x for (a, b), x in c.items()}
    counit = [q.field.one if not w else q.field.zero for w in words]
    return FiniteBraidedBialgebra(q.field, len(words), mult, comult, {index[wkey(())]: 1}, counit, braiding,
                                  [render_word(w) for w in words])


# ---------------------------------------------------------------------------
# infinitesimal braided Lie algebra and reconstruction


@dataclass
class InfinitesimalLie:
    algebra: FiniteBraidedBialgebra
    P: SubspaceBasis
    space: Optional[BraidedSpace]
    run: Optional[TowerRun]

    def phi_word(self, w) -> Vec:
        """Evaluation T(P) → A on a word in the P basis."""
        A = self.algebra
        out = dict(A.unit)
        for a in w:
            out = A.mul(out, dict(self.P.rows[a]))
        return out

    def phi_vec(self, vec) -> Vec:
        out: Vec = {}
        for k, a in vec.items():
            axpy(out, a, self.phi_word(unkey(k)))
        return out


def restricted_braiding(A: FiniteBraidedBialgebra, P: SubspaceBasis) -> BraidedSpace:
    """c restricted to P⊗P, in the P basis; P must be mapped into P⊗P."""
    m = P.dim
    F = A.field
    cols = []
    for a in range(m):
        for b in range(m):
            img = A.braid(dict(P.rows[a]), dict(P.rows[b]))
            # express the second factor in P coordinates, then the first
            slices: Dict = {}
            for (i, j), x in img.items():
                slices.setdefault(i, {})[j] = x
            second: Dict = {}
            for i, vec in slices.items():
                co = P.coordinates(vec)
                if co is None:
                    raise AssertionError("braiding does not map P⊗P into A⊗P")
                for d, y in enumerate(co):
                    if y:
                        second.setdefault(d, {})[i] = y
            col: Dict = {}
            for d, vec in second.items():
                co = P.coordinates(vec)
                if co is None:
                    raise AssertionError("braiding does not map P⊗P into P⊗P")
                for c, y in enumerate(co):
                    if y:
                        col[c * m + d] = y
            cols.append(col)
    c = DenseMatrix.from_columns(F, m * m, cols)
    return BraidedSpace(m, c, F, label="restricted")


def infinitesimal_lie(A: FiniteBraidedBialgebra, D: int) -> InfinitesimalLie:
    """P(A) with its restricted braiding and the stagewise evaluation bracket."""
    P = A.primitives()
    if P.dim == 0:
        return InfinitesimalLie(A, P, None, None)
    bs = restricted_braiding(A, P)
    res = InfinitesimalLie(A, P, bs, None)
    P_ech = P.echelon()

    def provider(ts: TowerState):
        for g in ts.ideal.generators:
            if res.phi_vec(g.to_vec()):
                raise AssertionError(f"evaluation does not vanish on a relation of stage {ts.stage}")
        cols = []
        for row in ts.P.rows:
            val = res.phi_vec(row)
            co = P.coordinates(val)
            if co is None:
                raise AssertionError(f"evaluation of a stage-{ts.stage} primitive leaves P(A)")
            cols.append(co)
        return bracket_matrix(ts, cols)

    t = TruncatedTensorAlgebra(bs, D)
    res.run = run_tower(t, provider, "canonical-from-algebra")
    return res


@dataclass
class ReconstructionReport:
    dim_algebra: int
    dim_envelope: int
    rank_of_evaluation: int
    complete: bool
    coalgebra_map: bool
    truncation: int

    @property
    def isomorphism(self) -> bool:
        return self.complete and self.coalgebra_map and self.dim_algebra == self.dim_envelope == self.rank_of_evaluation

    def as_dict(self):
        return {"dim_algebra": self.dim_algebra, "dim_envelope": self.dim_envelope,
                "rank_of_evaluation": self.rank_of_evaluation, "envelope_finite_at_truncation": self.complete,
                "coalgebra_map": self.coalgebra_map, "isomorphism": self.isomorphism, "truncation": self.truncation}


def reconstruct(A: FiniteBraidedBialgebra, D: int) -> ReconstructionReport:
    """Compare A with the enveloping algebra of its infinitesimal braided Lie algebra."""
    P = A.primitives()
    if not A.generates_as_algebra(P):
        raise NotPrimitivelyGenerated(
            "reconstruction needs A generated as an algebra by its primitive elements; this one is not")
    inf = infinitesimal_lie(A, D)
    if inf.run is None:
        # P = 0 and A is spanned by 1
        return ReconstructionReport(A.dim, 1, 1 if A.dim else 0, True, True, D)
    q = inf.run.final.quotient
    cols = [(i, inf.phi_word(w)) for i, w in enumerate(q.standard)]
    rank = len(Echelon(v for _, v in cols))
    coalg = True
    for w in q.standard:
        lhs = A.delta(inf.phi_word(w))
        rhs: Dict = {}
        for (a, b), x in q.nf_pair(q.base.delta_word(w)).items():
            pa, pb = inf.phi_word(unkey(a)), inf.phi_word(unkey(b))
            for i, y in pa.items():
                for j, z in pb.items():
                    axpy(rhs, x * y * z, {(i, j): 1})
        if lhs != rhs:
            coalg = False
            break
    return ReconstructionReport(A.dim, len(q.standard), rank, q.vanishes_above, coalg, D)
