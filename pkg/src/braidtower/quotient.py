"""Two-sided ideals of T(V,c)_{≤D}, coset normal forms and quotient bialgebras.

An ideal is known only through its filtration pieces I∩F_d, where F_d is the
span of words of length ≤ d.  For homogeneous generators the pieces are exact.
Otherwise products a·g·b are formed up to degree D+s for growing slack s until
the pieces stop changing; failure to settle within the budget is an error.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactla import Echelon, SubspaceBasis, axpy, kernel_of_map
from .tensoralg import (
    TensorElement, TruncatedTensorAlgebra, TruncationError, Word, mixed_image, render, render_word, unkey, wkey,
)

DEFAULT_SLACK_BUDGET = 4


class UnstableTruncation(RuntimeError):
    """Filtered ideal pieces did not stabilize within the slack budget."""


def _key_len(k) -> int:
    return -k[0]


def _top(x: TensorElement) -> int:
    return x.degree()


def _is_homogeneous(x: TensorElement) -> bool:
    return len({len(w) for w, a in x.terms.items() if a}) <= 1


@dataclass
class IdealPresentation:
    """Filtration pieces of a two-sided ideal of T, up to degree D.

    ``generators`` lists the offered generators that were not already implied by
    earlier ones (in order of top degree); ``pieces[d]`` is I∩F_d.
    """

    D: int
    generators: List[TensorElement]
    pieces: List[SubspaceBasis]
    slack: int
    stabilized: bool
    graded: bool
    offered: List[TensorElement] = dc_field(default_factory=list)

    def dims(self) -> List[int]:
        return [p.dim for p in self.pieces]

    def graded_dims(self) -> List[int]:
        """dim of the degree-d quotient I∩F_d / I∩F_{d-1}."""
        ds = self.dims()
        return [ds[0]] + [ds[d] - ds[d - 1] for d in range(1, len(ds))]

    @property
    def top(self) -> SubspaceBasis:
        return self.pieces[self.D]

    def contains(self, x: TensorElement) -> bool:
        if x.degree() > self.D:
            raise TruncationError("membership above the truncation degree")
        return self.top.contains(x.to_vec())

    def same_pieces(self, other: "IdealPresentation") -> bool:
        return self.D == other.D and self.top == other.top

    def is_zero(self) -> bool:
        return self.top.dim == 0


def _pieces_from(ech: Echelon, D: int) -> List[SubspaceBasis]:
    rows = ech.sorted_rows()
    return [SubspaceBasis(None, tuple(dict(r) for p, r in rows if _key_len(p) <= d)) for d in range(D + 1)]


def ideal_span(t: TruncatedTensorAlgebra, gens: Sequence[TensorElement], D: Optional[int] = None,
               slack_budget: int = DEFAULT_SLACK_BUDGET) -> IdealPresentation:
    """Ideal generated by ``gens``, as filtration pieces up to degree D.

    With J_k = span{a·g·b : |a| + top(g) + |b| ≤ k} one has
    J_k = gens_{≤k} + V·J_{k-1} + J_{k-1}·V, which is how the pieces are grown.
    """
    D = t.D if D is None else D
    gens = [g for g in gens if not g.is_zero()]
    for g in gens:
        if g.truncated:
            raise TruncationError("generator carries a truncation flag")
        if g.degree() > D:
            raise TruncationError(f"generator of degree {g.degree()} exceeds truncation {D}")
    order = sorted(range(len(gens)), key=lambda i: _top(gens[i]))
    graded = all(_is_homogeneous(g) for g in gens)
    one = t.field.one
    letters = [(a,) for a in range(t.n)]

    ech = Echelon()
    used: List[TensorElement] = []
    gi = 0
    history: List[List[int]] = []
    level = 0
    max_level = D if graded else D + slack_budget
    stabilized = graded
    slack = 0
    while level <= max_level:
        # V·J_{k-1} + J_{k-1}·V
        if level:
            prev = [dict(r) for _, r in ech.sorted_rows()]
            for r in prev:
                for x in letters:
                    for side in (0, 1):
                        prod = {}
                        for k, a in r.items():
                            w = unkey(k)
                            axpy(prod, a, {wkey(x + w if side == 0 else w + x): one})
                        ech.add(prod)
        while gi < len(order) and _top(gens[order[gi]]) <= level:
            g = gens[order[gi]]
            if ech.add(g.to_vec()):
                used.append(g)
            gi += 1
        if level >= D:
            dims = [sum(1 for p in ech.rows if _key_len(p) <= d) for d in range(D + 1)]
            history.append(dims)
            if graded:
                break
            if len(history) >= 2 and history[-1] == history[-2]:
                stabilized = True
                slack = level - D
                break
        level += 1
    if not stabilized:
        raise UnstableTruncation(
            f"ideal pieces still changing after slack {slack_budget} (dims by slack: {history})")
    return IdealPresentation(D, used, _pieces_from(ech, D), slack, True, graded, list(gens))


def ideal_from_kernel(t: TruncatedTensorAlgebra, evaluate, D: Optional[int] = None) -> IdealPresentation:
    """Ideal given as the kernel of an algebra map T → A restricted to F_D.

    ``evaluate(word)`` returns a sparse vector in A.  Kernels of algebra maps are
    ideals, so the pieces are exact without any slack.
    """
    D = t.D if D is None else D
    cols = ((wkey(w), evaluate(w)) for w in t.words_upto(D))
    ker = kernel_of_map(cols, t.field.one)
    ech = ker.echelon()
    gens = [TensorElement.from_vec(r) for r in ker.rows]
    return IdealPresentation(D, gens, _pieces_from(ech, D), 0, True, False, gens)


# ---------------------------------------------------------------------------
# quotients


class QuotientAlgebra:
    """U = T/I at truncation D, with canonical coset representatives.

    Representatives are spanned by the standard words: words of length ≤ D that
    are not pivots of the reduced echelon form of I∩F_D.
    """

    def __init__(self, base: TruncatedTensorAlgebra, ideal: Optional[IdealPresentation] = None):
        self.base = base
        self.D = base.D
        if ideal is None:
            ideal = ideal_span(base, [])
        if ideal.D != base.D:
            raise ValueError("ideal truncation differs from the algebra truncation")
        self.ideal = ideal
        self.field = base.field
        self._ech = ideal.top.echelon()
        pivots = set(self._ech.rows)
        self.standard: List[Word] = [w for w in base.words_upto(self.D) if wkey(w) not in pivots]
        self._nf: Dict[Word, Dict] = {}
        self.vanishes_above = self.ideal.graded and not any(len(w) == self.D for w in self.standard) and self.D > 0

    @property
    def n(self) -> int:
        return self.base.n

    def graded_dims(self) -> List[int]:
        out = [0] * (self.D + 1)
        for w in self.standard:
            out[len(w)] += 1
        return out

    def filtered_dims(self) -> List[int]:
        g = self.graded_dims()
        return [sum(g[:d + 1]) for d in range(self.D + 1)]

    def standard_words(self, d: Optional[int] = None) -> List[Word]:
        if d is None:
            return list(self.standard)
        return [w for w in self.standard if len(w) == d]

    # -- normal forms

    def nf_word(self, w: Word) -> Dict:
        """Normal form of a word as a vector keyed by wkey."""
        hit = self._nf.get(w)
        if hit is not None:
            return hit
        if len(w) > self.D:
            if self.vanishes_above:
                return {}
            raise TruncationError(f"word {render_word(w)} lies above truncation {self.D}")
        r = self._ech.reduce({wkey(w): self.field.one})
        self._nf[w] = r
        return r

    def nf_vec(self, vec) -> Dict:
        out: Dict = {}
        for k, a in vec.items():
            axpy(out, a, self.nf_word(unkey(k)))
        return out

    def normal_form(self, x: TensorElement) -> TensorElement:
        if x.truncated:
            raise TruncationError("cannot normalize a truncation-flagged element")
        out: Dict = {}
        for w, a in x.terms.items():
            axpy(out, a, self.nf_word(w))
        return TensorElement.from_vec(out)

    def product(self, x: TensorElement, y: TensorElement) -> TensorElement:
        out: Dict = {}
        for u, a in x.terms.items():
            for v, b in y.terms.items():
                axpy(out, a * b, self.nf_word(u + v))
        return TensorElement.from_vec(out)

    def nf_pair(self, pairs) -> Dict:
        """(NF⊗NF) of a map from word pairs to scalars; keys are (wkey, wkey)."""
        out: Dict = {}
        cache: Dict = {}
        for (u, v), a in pairs.items():
            nu = cache.get(u)
            if nu is None:
                nu = cache[u] = self.nf_word(u)
            if not nu:
                continue
            nv = cache.get(v)
            if nv is None:
                nv = cache[v] = self.nf_word(v)
            for p, x in nu.items():
                for q, y in nv.items():
                    axpy(out, a * x * y, {(p, q): 1})
        return out

    def mixed_coproduct(self, w: Word) -> Dict:
        return self.nf_pair(mixed_image(self.base, w))

    def coproduct(self, x: TensorElement) -> Dict:
        out: Dict = {}
        for w, a in x.terms.items():
            axpy(out, a, self.nf_pair(self.base.delta_word(w)))
        return out

    def braid(self, x: TensorElement, y: TensorElement) -> Dict:
        """Induced braiding on U⊗U via the lifted braiding and NF⊗NF."""
        lb = self.base.lifted
        out: Dict = {}
        for u, a in x.terms.items():
            for v, b in y.terms.items():
                axpy(out, a * b, self.nf_pair(lb.apply_pair(u, v)))
        return out

    def is_zero(self, x: TensorElement) -> bool:
        return not self.normal_form(x).terms

    def vec_of(self, x: TensorElement) -> Dict:
        return self.normal_form(x).to_vec()


def normal_form(q: QuotientAlgebra, x: TensorElement) -> TensorElement:
    return q.normal_form(x)


def quotient_primitives(q: QuotientAlgebra, up_to: Optional[int] = None) -> Dict[int, SubspaceBasis]:
    """Primitives of U in each filtration piece F_d, 1 ≤ d ≤ up_to.

    δ_U(π w) = -(π⊗π)(mixed part of Δ_T(w)); the kernel is taken over standard
    words, so the result is keyed by standard words.
    """
    up_to = q.D if up_to is None else up_to
    if up_to > q.D:
        raise TruncationError("primitives requested above the truncation")
    cols = ((wkey(w), q.mixed_coproduct(w)) for w in q.standard if 1 <= len(w) <= up_to)
    ker = kernel_of_map(cols, q.field.one)
    rows = list(ker.rows)
    return {d: SubspaceBasis(None, tuple(r for r in rows if _key_len(min(r)) <= d)) for d in range(1, up_to + 1)}


@dataclass
class IdealCheck:
    passed: bool
    witness: Optional[str] = None


def check_braided_ideal(q: QuotientAlgebra, pair_degree: Optional[int] = None) -> IdealCheck:
    """ε(I)=0, Δ(I) ⊆ I⊗T+T⊗I and c(I⊗T+T⊗I) ⊆ I⊗T+T⊗I on a basis of I∩F_D.

    Braiding pairs r⊗w and w⊗r are taken with top(r)+|w| ≤ pair_degree
    (default D).
    """
    pair_degree = q.D if pair_degree is None else pair_degree
    base = q.base
    for r in q.ideal.top.rows:
        x = TensorElement.from_vec(r)
        if x.terms.get((), 0):
            return IdealCheck(False, f"ε does not vanish on {render(x)}")
        if q.coproduct(x):
            return IdealCheck(False, f"Δ({render(x)}) leaves I⊗T+T⊗I")
        top = x.degree()
        for k in range(pair_degree - top + 1):
            for w in base.words(k):
                y = TensorElement.word(w, q.field.one)
                if q.braid(x, y):
                    return IdealCheck(False, f"c({render(x)}⊗{render_word(w)}) leaves I⊗T+T⊗I")
                if q.braid(y, x):
                    return IdealCheck(False, f"c({render_word(w)}⊗{render(x)}) leaves I⊗T+T⊗I")
    return IdealCheck(True)


def generates_as_algebra(q, s: SubspaceBasis) -> bool:
    """True iff products of elements of ``s`` span the algebra (at truncation).

    Accepts a :class:`QuotientAlgebra` or any object with its own
    ``generates_as_algebra`` method (finite braided bialgebras).
    """
    if not isinstance(q, QuotientAlgebra):
        return q.generates_as_algebra(s)
    one = q.field.one
    span = Echelon([q.nf_word(())])
    frontier = [q.nf_word(())]
    gens = [dict(r) for r in s.rows]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                prod: Dict = {}
                ok = True
                for k1, a in f.items():
                    for k2, b in g.items():
                        w = unkey(k1) + unkey(k2)
                        if len(w) > q.D and not q.vanishes_above:
                            ok = False
                            break
                        axpy(prod, a * b, q.nf_word(w))
                    if not ok:
                        break
                if ok and span.add(prod):
                    nxt.append(prod)
        frontier = nxt
    return len(span) == len(q.standard)
