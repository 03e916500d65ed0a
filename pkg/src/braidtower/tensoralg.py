"""The braided tensor bialgebra T(V,c), truncated at a degree D.

Elements are finitely supported maps from words (tuples of 0-based letter
indices) to scalars.  Subspaces of T are stored as keyed
:class:`~braidtower.exactla.SubspaceBasis` values whose column key for a word
``w`` is ``wkey(w) = (-len(w), w)``: longer words come first, ties broken
lexicographically.  Reduced echelon pivots are therefore the longest,
lexicographically smallest words, which keeps normal forms filtration-aware.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .braiding import BraidedSpace, LiftedBraiding, Word, hexagon_violation, words, yang_baxter_violation
from .exactla import Field, SubspaceBasis, axpy, kernel_of_map

Pair = Tuple[Word, Word]


class TruncationError(ValueError):
    """An operation needed a degree above the truncation."""


def wkey(w: Word):
    return (-len(w), w)


def unkey(k) -> Word:
    return k[1]


def render_word(w: Word) -> str:
    return ".".join(f"x{a + 1}" for a in w) if w else "1"


@dataclass
class TensorElement:
    terms: Dict[Word, object] = dc_field(default_factory=dict)
    truncated: bool = False

    @staticmethod
    def word(w: Sequence[int], coeff=Fraction(1)) -> "TensorElement":
        return TensorElement({tuple(w): coeff})

    @staticmethod
    def from_vec(vec: Mapping) -> "TensorElement":
        return TensorElement({unkey(k): v for k, v in vec.items() if v})

    def to_vec(self) -> Dict:
        return {wkey(w): v for w, v in self.terms.items() if v}

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not any(self.terms.values())

    def homogeneous_part(self, d: int) -> "TensorElement":
        return TensorElement({w: v for w, v in self.terms.items() if len(w) == d})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        t = dict(self.terms)
        axpy(t, 1, other.terms)
        return TensorElement(t, self.truncated or other.truncated)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        t = dict(self.terms)
        axpy(t, -1, other.terms)
        return TensorElement(t, self.truncated or other.truncated)

    def __neg__(self):
        return TensorElement({w: -v for w, v in self.terms.items()}, self.truncated)

    def scaled(self, a) -> "TensorElement":
        if not a:
            return TensorElement({}, self.truncated)
        return TensorElement({w: a * v for w, v in self.terms.items()}, self.truncated)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return {w: v for w, v in self.terms.items() if v} == {w: v for w, v in other.terms.items() if v}

    def __str__(self):
        return render(self)


@dataclass
class TwoSidedElement:
    """Element of T⊗T: a map from word pairs to scalars."""

    terms: Dict[Pair, object] = dc_field(default_factory=dict)
    truncated: bool = False

    def __add__(self, other):
        t = dict(self.terms)
        axpy(t, 1, other.terms)
        return TwoSidedElement(t, self.truncated or other.truncated)

    def __sub__(self, other):
        t = dict(self.terms)
        axpy(t, -1, other.terms)
        return TwoSidedElement(t, self.truncated or other.truncated)

    def __eq__(self, other):
        if not isinstance(other, TwoSidedElement):
            return NotImplemented
        return {k: v for k, v in self.terms.items() if v} == {k: v for k, v in other.terms.items() if v}

    def mixed(self) -> "TwoSidedElement":
        return TwoSidedElement({(u, v): a for (u, v), a in self.terms.items() if u and v}, self.truncated)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (u, v), a in sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0])):
            parts.append(_term(a, f"{render_word(u)}⊗{render_word(v)}", bare=False))
        return _join(parts)


class TruncatedTensorAlgebra:
    """T(V,c) in degrees 0..D with memoized coproducts."""

    def __init__(self, space: BraidedSpace, D: int):
        if D < 0:
            raise ValueError("truncation degree must be non-negative")
        self.space = space
        self.D = D
        self.field: Field = space.field
        self.lifted = LiftedBraiding(space)
        self._delta: Dict[Word, Dict[Pair, object]] = {(): {((), ()): self.field.one}}
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.space.n

    def words(self, d: int):
        return words(self.n, d)

    def words_upto(self, d: int) -> List[Word]:
        return [w for k in range(d + 1) for w in words(self.n, k)]

    def dim_filtered(self, d: int) -> int:
        return sum(self.n ** k for k in range(d + 1))

    def element(self, text: str) -> TensorElement:
        return parse(text, self.field)

    # -- coproduct on words

    def delta_word(self, w: Word) -> Dict[Pair, object]:
        """Δ(w) on a basis word.  Uses Δ(w x) = Δ(w) · (x⊗1 + 1⊗x) in T⊗_c T."""
        hit = self._delta.get(w)
        if hit is not None:
            return hit
        prev = self.delta_word(w[:-1])
        x = w[-1]
        out: Dict[Pair, object] = {}
        for (u, v), a in prev.items():
            # (u⊗v)(x⊗1) = u · c_{|v|,1}(v⊗x)
            for y, b in self.lifted.apply_word(len(v), v + (x,)).items():
                axpy(out, a * b, {(u + y[:1], y[1:]): 1})
            # (u⊗v)(1⊗x) = u ⊗ v x
            axpy(out, a, {(u, v + (x,)): 1})
        with self._lock:
            self._delta.setdefault(w, out)
        return out


# ---------------------------------------------------------------------------
# products

def multiply(x: TensorElement, y: TensorElement, D: Optional[int] = None) -> TensorElement:
    """Concatenation product; terms above D are dropped and flag the result."""
    out: Dict[Word, object] = {}
    trunc = x.truncated or y.truncated
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            w = u + v
            if D is not None and len(w) > D:
                trunc = True
                continue
            axpy(out, a * b, {w: 1})
    return TensorElement(out, trunc)


def multiply_twosided(t: TruncatedTensorAlgebra, a: TwoSidedElement, b: TwoSidedElement) -> TwoSidedElement:
    """(u⊗w)(u'⊗w') = Σ u y ⊗ z w' where c_{|w|,|u'|}(w⊗u') = Σ y⊗z."""
    out: Dict[Pair, object] = {}
    trunc = a.truncated or b.truncated
    for (u, w), s in a.terms.items():
        for (u2, w2), r in b.terms.items():
            m = len(u2)
            for yz, k in t.lifted.apply_word(len(w), w + u2).items():
                left, right = u + yz[:m], yz[m:] + w2
                if len(left) > t.D or len(right) > t.D:
                    trunc = True
                    continue
                axpy(out, s * r * k, {(left, right): 1})
    return TwoSidedElement(out, trunc)


def coproduct(t: TruncatedTensorAlgebra, x: TensorElement) -> TwoSidedElement:
    if x.degree() > t.D:
        raise TruncationError(f"element of degree {x.degree()} exceeds truncation {t.D}")
    out: Dict[Pair, object] = {}
    for w, a in x.terms.items():
        axpy(out, a, t.delta_word(w))
    return TwoSidedElement(out, x.truncated)


def reduced_coproduct(t: TruncatedTensorAlgebra, x: TensorElement) -> TwoSidedElement:
    """δ(x) = x⊗1 + 1⊗x - Δ(x), for x in the augmentation ideal.

    A constant term of ``x`` is ignored (δ is only used on degrees ≥ 1).
    """
    x = TensorElement({w: v for w, v in x.terms.items() if w}, x.truncated)
    out = {}
    for w, a in x.terms.items():
        axpy(out, a, {(w, ()): 1, ((), w): 1})
    axpy(out, -1, coproduct(t, x).terms)
    return TwoSidedElement(out, x.truncated)


def mixed_image(t: TruncatedTensorAlgebra, w: Word) -> Dict[Pair, object]:
    return {(u, v): a for (u, v), a in t.delta_word(w).items() if u and v}


# ---------------------------------------------------------------------------
# primitives

def primitives_of_degree(t: TruncatedTensorAlgebra, d: int) -> SubspaceBasis:
    if not 1 <= d <= t.D:
        raise ValueError(f"degree must lie in 1..{t.D}")
    cols = ((wkey(w), mixed_image(t, w)) for w in t.words(d))
    return kernel_of_map(cols, t.field.one)


def E_space(t: TruncatedTensorAlgebra) -> List[SubspaceBasis]:
    """Homogeneous primitives of degrees 2..D (index 0 is degree 2)."""
    if t.D < 2:
        raise ValueError("needs truncation degree at least 2")
    return [primitives_of_degree(t, d) for d in range(2, t.D + 1)]


def primitive_elements(t: TruncatedTensorAlgebra, d: int) -> List[TensorElement]:
    return [TensorElement.from_vec(r) for r in primitives_of_degree(t, d).rows]


# ---------------------------------------------------------------------------
# axioms

@dataclass
class AxiomResult:
    name: str
    passed: bool
    witness: Optional[str] = None
    checked: int = 0


@dataclass
class AxiomReport:
    results: List[AxiomResult]
    degree: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def first_failure(self) -> Optional[AxiomResult]:
        return next((r for r in self.results if not r.passed), None)

    def as_dict(self):
        return {r.name: {"passed": r.passed, "checked": r.checked, "witness": r.witness} for r in self.results}


def _delta_left(t, pairs: Mapping[Pair, object]):
    """(Δ⊗Id) on a two-sided element; keys are triples."""
    out = {}
    for (u, v), a in pairs.items():
        for (p, q), b in t.delta_word(u).items():
            axpy(out, a * b, {(p, q, v): 1})
    return out


def _delta_right(t, pairs: Mapping[Pair, object]):
    out = {}
    for (u, v), a in pairs.items():
        for (p, q), b in t.delta_word(v).items():
            axpy(out, a * b, {(u, p, q): 1})
    return out


def _braid_pairs(t, pairs: Mapping) -> Dict:
    """Apply c to the first two factors of triples (a, b, rest...)."""
    out = {}
    for key, a in pairs.items():
        u, v, rest = key[0], key[1], key[2:]
        for (y, z), b in t.lifted.apply_pair(u, v).items():
            axpy(out, a * b, {(y, z) + rest: 1})
    return out


def _braid_last(t, triples: Mapping) -> Dict:
    out = {}
    for (p, u, v), a in triples.items():
        for (y, z), b in t.lifted.apply_pair(u, v).items():
            axpy(out, a * b, {(p, y, z): 1})
    return out


def check_bialgebra_axioms(t: TruncatedTensorAlgebra, pair_cap: int = 6) -> AxiomReport:
    """Exhaustively verify the braided bialgebra axioms on words of T(V,c)_{≤D}.

    Unary axioms run over every word of degree ≤ D, binary ones over every pair
    of total degree ≤ min(D, pair_cap).  Each failure carries the first witness.
    """
    D = t.D
    cap = min(D, pair_cap)
    one = t.field.one
    all_words = t.words_upto(D)
    results: List[AxiomResult] = []

    def run(name, cases, test):
        count = 0
        for case in cases:
            count += 1
            bad = test(case)
            if bad:
                results.append(AxiomResult(name, False, bad, count))
                return
        results.append(AxiomResult(name, True, None, count))

    def coassoc(w):
        d = t.delta_word(w)
        if _delta_left(t, d) != _delta_right(t, d):
            return f"(Δ⊗Id)Δ ≠ (Id⊗Δ)Δ on {render_word(w)}"

    def counit(w):
        d = t.delta_word(w)
        left = {v: a for (u, v), a in d.items() if not u}
        right = {u: a for (u, v), a in d.items() if not v}
        if left != {w: one} or right != {w: one}:
            return f"counit law fails on {render_word(w)}"

    def pairs_upto(k):
        for a in range(k + 1):
            for b in range(k + 1 - a):
                for u in t.words(a):
                    for v in t.words(b):
                        yield u, v

    def triples_upto(k):
        for a in range(k + 1):
            for b in range(k + 1 - a):
                for c in range(k + 1 - a - b):
                    for u in t.words(a):
                        for v in t.words(b):
                            for w in t.words(c):
                                yield u, v, w

    def br1(uv):
        u, v = uv
        lhs = TwoSidedElement(dict(t.delta_word(u + v)))
        rhs = multiply_twosided(t, TwoSidedElement(dict(t.delta_word(u))), TwoSidedElement(dict(t.delta_word(v))))
        if lhs != rhs:
            return f"Δ(xy) ≠ Δ(x)Δ(y) for x={render_word(u)}, y={render_word(v)}"

    def br2(uvw):
        # c(m⊗Id) = (Id⊗m)(c⊗Id)(Id⊗c) on u⊗v⊗w
        u, v, w = uvw
        lhs = {(y, z): a for (y, z), a in t.lifted.apply_pair(u + v, w).items()}
        step = _braid_last(t, {(u, v, w): one})          # u ⊗ c(v⊗w)
        step = _braid_pairs(t, step)                      # c(u⊗w') ⊗ v'
        rhs = {}
        for (y, z, r), a in step.items():
            axpy(rhs, a, {(y, z + r): 1})
        if lhs != rhs:
            return f"c∘(m⊗Id) fails on {render_word(u)}⊗{render_word(v)}⊗{render_word(w)}"

    def br3(uvw):
        # c(Id⊗m) = (m⊗Id)(Id⊗c)(c⊗Id)
        u, v, w = uvw
        lhs = dict(t.lifted.apply_pair(u, v + w))
        step = _braid_pairs(t, {(u, v, w): one})
        step = _braid_last(t, step)
        rhs = {}
        for (y, z, r), a in step.items():
            axpy(rhs, a, {(y + z, r): 1})
        if lhs != rhs:
            return f"c∘(Id⊗m) fails on {render_word(u)}⊗{render_word(v)}⊗{render_word(w)}"

    def br4(u):
        # c(1⊗x) = x⊗1 and c(x⊗1) = 1⊗x
        if t.lifted.apply_pair((), u) != {(u, ()): one} or t.lifted.apply_pair(u, ()) != {((), u): one}:
            return f"unit does not commute with c on {render_word(u)}"

    def br5(uv):
        # (Δ⊗Id)c = (Id⊗c)(c⊗Id)(Id⊗Δ)
        u, v = uv
        lhs = _delta_left(t, t.lifted.apply_pair(u, v))
        step = {}
        for (p, q), a in t.delta_word(v).items():
            axpy(step, a, {(u, p, q): 1})
        step = _braid_pairs(t, step)
        rhs = _braid_last(t, step)
        if lhs != rhs:
            return f"(Δ⊗Id)c fails on {render_word(u)}⊗{render_word(v)}"

    def br6(uv):
        # (Id⊗Δ)c = (c⊗Id)(Id⊗c)(Δ⊗Id)
        u, v = uv
        lhs = _delta_right(t, t.lifted.apply_pair(u, v))
        step = {}
        for (p, q), a in t.delta_word(u).items():
            axpy(step, a, {(p, q, v): 1})
        step = _braid_last(t, step)
        rhs = _braid_pairs(t, step)
        if lhs != rhs:
            return f"(Id⊗Δ)c fails on {render_word(u)}⊗{render_word(v)}"

    def br7(uv):
        # (ε⊗Id)c = Id⊗ε and (Id⊗ε)c = ε⊗Id
        u, v = uv
        img = t.lifted.apply_pair(u, v)
        left = {z: a for (y, z), a in img.items() if not y}
        right = {y: a for (y, z), a in img.items() if not z}
        want_left = {u: one} if not v else {}
        want_right = {v: one} if not u else {}
        if left != want_left or right != want_right:
            return f"ε does not commute with c on {render_word(u)}⊗{render_word(v)}"

    yb = yang_baxter_violation(t.space)
    results.append(AxiomResult("Yang-Baxter", yb is None, None if yb is None else f"c1c2c1 ≠ c2c1c2 on x{yb[0]}⊗x{yb[1]}⊗x{yb[2]}", t.n ** 3))
    run("coassociativity", all_words, coassoc)
    run("counit", all_words, counit)
    run("Br1 (Δ multiplicative)", list(pairs_upto(cap)), br1)
    run("Br2 (c vs m on the left)", list(triples_upto(cap)), br2)
    run("Br3 (c vs m on the right)", list(triples_upto(cap)), br3)
    run("Br4 (c vs unit)", all_words, br4)
    run("Br5 (c vs Δ on the left)", list(pairs_upto(cap)), br5)
    run("Br6 (c vs Δ on the right)", list(pairs_upto(cap)), br6)
    run("Br7 (c vs ε)", list(pairs_upto(cap)), br7)
    hv = hexagon_violation(t.lifted, cap)
    results.append(AxiomResult("hexagons", hv is None, None if hv is None else f"{hv[0]} hexagon fails at degrees {hv[1:4]} on {render_word(hv[4])}"))
    return AxiomReport(results, D)


# ---------------------------------------------------------------------------
# text form

def _fmt_scalar(a) -> str:
    return str(a)


def _term(a, mono: str, bare: bool) -> str:
    s = _fmt_scalar(a)
    if mono == "1" and bare:
        return s
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    return f"{s}*{mono}"


def _join(parts: List[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def render(x: TensorElement) -> str:
    items = sorted(((w, a) for w, a in x.terms.items() if a), key=lambda wa: (len(wa[0]), wa[0]))
    if not items:
        return "0"
    return _join([_term(a, render_word(w), bare=True) for w, a in items])


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?((?:x\d+)(?:\s*\.\s*x\d+)*)?\s*")


def parse(text: str, field: Field) -> TensorElement:
    """Inverse of :func:`render`: ``3*x1.x2.x1 - 1/2*x2 + 5``."""
    s = text.strip()
    if not s:
        raise ValueError("empty element")
    if s == "0":
        return TensorElement()
    out: Dict[Word, object] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, coeff, mono = m.group(1), m.group(2), m.group(3)
        if m.end() == pos or (coeff is None and mono is None):
            raise ValueError(f"cannot parse element at column {pos + 1}: {s[pos:pos+10]!r}")
        if sign is None and not first:
            raise ValueError(f"missing operator at column {pos + 1}")
        a = field(coeff) if coeff is not None else field.one
        if sign == "-":
            a = -a
        w: Word = ()
        if mono:
            w = tuple(int(tok.strip()[1:]) - 1 for tok in mono.split("."))
            if any(i < 0 for i in w):
                raise ValueError("letters are numbered from x1")
        axpy(out, a, {w: 1})
        pos = m.end()
        first = False
    return TensorElement(out)
