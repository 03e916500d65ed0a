"""Stages of the universal enveloping tower and stage brackets.

A stage U^[n] is realized as T/I_n.  Its primitives P^[n] are kept as a keyed
reduced echelon basis over standard words, and a stage bracket b^[n] is an
n × dim P^[n] matrix whose column j is the value on the j-th basis row.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..exactla import DenseMatrix, Echelon, SubspaceBasis, axpy
from ..quotient import IdealPresentation, QuotientAlgebra, ideal_span, quotient_primitives
from ..tensoralg import TensorElement, TruncatedTensorAlgebra, render, wkey

DEFAULT_MAX_STAGES = 8


def max_stages() -> int:
    raw = os.environ.get("BRAIDTOWER_MAX_STAGES")
    if raw is None:
        return DEFAULT_MAX_STAGES
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"BRAIDTOWER_MAX_STAGES must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError("BRAIDTOWER_MAX_STAGES must be positive")
    return value


class BracketError(ValueError):
    """A stage bracket violates a compatibility equation."""

    def __init__(self, message: str, equation: str = "", witness=None):
        super().__init__(message)
        self.equation = equation
        self.witness = witness


class TowerCapExceeded(RuntimeError):
    pass


class EnvelopeError(RuntimeError):
    pass


@dataclass
class TowerState:
    stage: int
    quotient: QuotientAlgebra
    primitives: Dict[int, SubspaceBasis]

    def __post_init__(self):
        q = self.quotient
        self.P: SubspaceBasis = self.primitives[q.D] if q.D >= 1 else SubspaceBasis(None, ())
        self._P_ech = self.P.echelon()
        self.section: List[Dict] = [q.nf_word((k,)) for k in range(q.n)]
        self.V_image = SubspaceBasis.span(self.section)
        self.i_injective = self.V_image.dim == q.n
        coords = []
        for v in self.section:
            c = self.P_coordinates(v)
            if c is None:
                raise AssertionError("image of a letter is not primitive")
            coords.append(c)
        self.section_coords = coords  # per letter, coordinates in the P basis

    @property
    def ideal(self) -> IdealPresentation:
        return self.quotient.ideal

    @property
    def base(self) -> TruncatedTensorAlgebra:
        return self.quotient.base

    @property
    def D(self) -> int:
        return self.quotient.D

    @property
    def n(self) -> int:
        return self.quotient.n

    @property
    def dimP(self) -> int:
        return self.P.dim

    def P_coordinates(self, vec) -> Optional[List]:
        c = self._P_ech.coordinates(vec)
        if c is None:
            return None
        return [c.get(min(r), self.quotient.field.zero) for r in self.P.rows]

    def P_elements(self) -> List[TensorElement]:
        return [TensorElement.from_vec(r) for r in self.P.rows]

    def primitive_dims(self) -> List[int]:
        return [self.primitives[d].dim for d in range(1, self.D + 1)]

    def P_equals_V(self) -> bool:
        return self.P == self.V_image

    def summary(self) -> dict:
        q = self.quotient
        return {
            "stage": self.stage,
            "graded_dims": [int(x) for x in q.graded_dims()],
            "filtered_dims": [int(x) for x in q.filtered_dims()],
            "primitive_dims_filtered": self.primitive_dims(),
            "generators": [render(g) for g in self.ideal.generators],
            "letters_injective": self.i_injective,
        }


def make_state(t: TruncatedTensorAlgebra, ideal: Optional[IdealPresentation], stage: int) -> TowerState:
    q = QuotientAlgebra(t, ideal)
    prims = quotient_primitives(q) if t.D >= 1 else {}
    return TowerState(stage, q, prims)


def initial_state(t: TruncatedTensorAlgebra) -> TowerState:
    return make_state(t, None, 0)


# ---------------------------------------------------------------------------
# stage brackets


def bracket_matrix(ts: TowerState, columns: Sequence[Sequence]) -> DenseMatrix:
    """Bracket from a list of V-vectors, one per P basis row."""
    F = ts.quotient.field
    if len(columns) != ts.dimP:
        raise BracketError(f"bracket needs {ts.dimP} columns at stage {ts.stage}, got {len(columns)}")
    return DenseMatrix.from_rows(F, [[F(col[k]) for col in columns] for k in range(ts.n)], cols=ts.dimP)


def trivial_bracket_step(ts: TowerState) -> DenseMatrix:
    """V-component of each primitive: coefficients of the one-letter words."""
    F = ts.quotient.field
    cols = [[r.get(wkey((k,)), F.zero) for k in range(ts.n)] for r in ts.P.rows]
    return bracket_matrix(ts, cols)


def inverse_section_bracket(ts: TowerState) -> DenseMatrix:
    """The only split bracket when P^[n] equals the image of V: the inverse of i."""
    if not (ts.i_injective and ts.P_equals_V()):
        raise EnvelopeError(f"stage {ts.stage}: P^[n] is not the injective image of V")
    F = ts.quotient.field
    n = ts.n
    # section_coords[k] are the coordinates of i(x_k); invert that n×n matrix
    ech = Echelon()
    for j in range(n):
        row = {("a", k): ts.section_coords[k][j] for k in range(n) if ts.section_coords[k][j]}
        row[("b", j)] = F.one
        ech.add(row)
    inv = [[F.zero] * n for _ in range(n)]
    for p, row in ech.rows.items():
        k = p[1]
        for key, v in row.items():
            if key[0] == "b":
                inv[k][key[1]] = v
    return DenseMatrix.from_rows(F, inv, cols=n)


def apply_bracket(ts: TowerState, b: DenseMatrix, vec) -> Optional[List]:
    coords = ts.P_coordinates(vec)
    if coords is None:
        return None
    return [sum((b[k, j] * coords[j] for j in range(ts.dimP)), ts.quotient.field.zero) for k in range(ts.n)]


def _ib(ts: TowerState, vvec: Sequence) -> Dict:
    out: Dict = {}
    for k, a in enumerate(vvec):
        if a:
            axpy(out, a, ts.section[k])
    return out


# ---------------------------------------------------------------------------
# compatibility as linear forms in the bracket entries


class _Categorical(Exception):
    pass


def _regroup(ts: TowerState, img: Dict, side: int) -> Dict:
    """Split a U⊗U vector by the factor opposite to ``side`` and express the
    ``side`` factor in P coordinates: returns {(other key, j): coeff}."""
    slices: Dict = {}
    for (a, b), v in img.items():
        other, mine = (a, b) if side == 1 else (b, a)
        slices.setdefault(other, {})[mine] = v
    out: Dict = {}
    for other, vec in slices.items():
        c = ts.P_coordinates(vec)
        if c is None:
            raise _Categorical(other)
        for j, a in enumerate(c):
            if a:
                out[(other, j)] = a
    return out


def compat_forms(ts: TowerState):
    """Residuals of both compatibility equations as linear forms.

    Yields ``(equation, j, k, form)`` where ``form`` maps an unknown (m, j')
    (bracket entry b[m][j']) to a U⊗U vector; the equation holds iff
    Σ b[m][j'] · form[(m, j')] = 0.
    """
    q = ts.quotient
    n = ts.n
    V = [TensorElement.from_vec(v) for v in ts.section]
    P = ts.P_elements()
    cVV = {(m, k): q.braid(V[m], V[k]) for m in range(n) for k in range(n)}
    for j, p in enumerate(P):
        for k in range(n):
            # bracket1: c(ib(p)⊗v) = (Id⊗ib) c(p⊗v)
            form: Dict = {}
            for m in range(n):
                acc = form.setdefault((m, j), {})
                axpy(acc, 1, cVV[(m, k)])
            try:
                grouped = _regroup(ts, q.braid(p, V[k]), side=1)
            except _Categorical:
                yield ("P^[n]⊗V^[n] is not mapped into V^[n]⊗P^[n]", j, k, None)
                continue
            for (other, jj), a in grouped.items():
                for m in range(n):
                    acc = form.setdefault((m, jj), {})
                    for key, x in ts.section[m].items():
                        axpy(acc, -a * x, {(other, key): 1})
            yield ("c(ib⊗V) = (V⊗ib)c", j, k, form)
            # bracket2: c(v⊗ib(p)) = (ib⊗Id) c(v⊗p)
            form = {}
            for m in range(n):
                acc = form.setdefault((m, j), {})
                axpy(acc, 1, cVV[(k, m)])
            try:
                grouped = _regroup(ts, q.braid(V[k], p), side=0)
            except _Categorical:
                yield ("V^[n]⊗P^[n] is not mapped into P^[n]⊗V^[n]", j, k, None)
                continue
            for (other, jj), a in grouped.items():
                for m in range(n):
                    acc = form.setdefault((m, jj), {})
                    for key, x in ts.section[m].items():
                        axpy(acc, -a * x, {(key, other): 1})
            yield ("c(V⊗ib) = (ib⊗V)c", j, k, form)


@dataclass
class CompatReport:
    passed: bool
    equation: str = ""
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.passed


def compat_report(ts: TowerState, b: DenseMatrix) -> CompatReport:
    if (b.rows, b.cols) != (ts.n, ts.dimP):
        raise BracketError(f"stage {ts.stage} bracket must be {ts.n}x{ts.dimP}, got {b.rows}x{b.cols}")
    for eq, j, k, form in compat_forms(ts):
        if form is None:
            return CompatReport(False, eq, (j, k))
        res: Dict = {}
        for (m, jj), vec in form.items():
            a = b[m, jj]
            if a:
                axpy(res, a, vec)
        if res:
            return CompatReport(False, eq, (j, k))
    return CompatReport(True)


def check_bracket_compat(ts: TowerState, b: DenseMatrix) -> bool:
    return compat_report(ts, b).passed


def check_split(ts: TowerState, b: DenseMatrix) -> bool:
    """b∘i = Id_V."""
    F = ts.quotient.field
    for k in range(ts.n):
        val = [sum((b[m, j] * ts.section_coords[k][j] for j in range(ts.dimP)), F.zero) for m in range(ts.n)]
        if any((val[m] != (F.one if m == k else F.zero)) for m in range(ts.n)):
            return False
    return True


# ---------------------------------------------------------------------------
# one step of the tower


def step_generators(ts: TowerState, b: DenseMatrix) -> List[TensorElement]:
    """(Id - i b)[P^[n]] as representatives in T."""
    out = []
    for j, row in enumerate(ts.P.rows):
        g = dict(row)
        axpy(g, -1, _ib(ts, [b[k, j] for k in range(ts.n)]))
        if g:
            out.append(TensorElement.from_vec(g))
    return out


def kernel_generators(ts: TowerState, b: DenseMatrix) -> List[TensorElement]:
    """Ker b^[n] as representatives in T."""
    from ..exactla import kernel_of_map
    cols = ((j, {k: b[k, j] for k in range(ts.n) if b[k, j]}) for j in range(ts.dimP))
    ker = kernel_of_map(cols, ts.quotient.field.one)
    out = []
    for r in ker.rows:
        v: Dict = {}
        for j, a in r.items():
            axpy(v, a, ts.P.rows[j])
        out.append(TensorElement.from_vec(v))
    return out


def tower_step(ts: TowerState, b: DenseMatrix, check: bool = True) -> TowerState:
    """U^[n+1] = U^[n] / ((Id - i^[n] b^[n])[P^[n]])."""
    if check:
        rep = compat_report(ts, b)
        if not rep.passed:
            raise BracketError(f"stage {ts.stage} bracket violates {rep.equation} at basis pair {rep.witness}",
                               rep.equation, rep.witness)
    gens = step_generators(ts, b)
    if check_split(ts, b):
        kg = kernel_generators(ts, b)
        a = SubspaceBasis.span(g.to_vec() for g in gens)
        k = SubspaceBasis.span(g.to_vec() for g in kg)
        if a != k:
            raise AssertionError("split bracket: (Id - ib)[P] differs from Ker b")
    t = ts.base
    ideal = ideal_span(t, list(ts.ideal.generators) + gens)
    return make_state(t, ideal, ts.stage + 1)


# ---------------------------------------------------------------------------
# running a whole tower


@dataclass
class TowerRun:
    states: List[TowerState]
    brackets: List[DenseMatrix]
    split: List[bool]
    stabilized: bool
    collapsed: bool
    provenance: str
    new_generators: List[List[TensorElement]] = dc_field(default_factory=list)

    @property
    def final(self) -> TowerState:
        return self.states[-1]

    @property
    def D(self) -> int:
        return self.final.D

    @property
    def rank(self) -> int:
        """Index n of the first stage with I_{n+1} = I_n."""
        return len(self.states) - 1

    def report(self) -> dict:
        return {
            "provenance": self.provenance,
            "truncation": self.D,
            "stabilized": self.stabilized,
            "collapsed": self.collapsed,
            "stages": [dict(s.summary(), split=(self.split[i] if i < len(self.split) else None),
                            new_relations=[render(g) for g in (self.new_generators[i] if i < len(self.new_generators) else [])])
                       for i, s in enumerate(self.states)],
        }


BracketProvider = Callable[[TowerState], DenseMatrix]


def run_tower(t: TruncatedTensorAlgebra, provider: BracketProvider, provenance: str = "user-supplied",
              cap: Optional[int] = None) -> TowerRun:
    """Iterate stages until I_{n+1} = I_n, the letters collapse, or the cap is hit."""
    cap = max_stages() if cap is None else cap
    ts = initial_state(t)
    states = [ts]
    brackets: List[DenseMatrix] = []
    split: List[bool] = []
    news: List[List[TensorElement]] = []
    while True:
        if not ts.i_injective:
            return TowerRun(states, brackets, split, False, True, provenance, news)
        if ts.stage >= cap:
            raise TowerCapExceeded(f"tower did not stabilize within {cap} stages (set BRAIDTOWER_MAX_STAGES to raise)")
        b = provider(ts)
        nxt = tower_step(ts, b)
        brackets.append(b)
        split.append(check_split(ts, b))
        old = {tuple(sorted(g.terms.items())) for g in ts.ideal.generators}
        news.append([g for g in nxt.ideal.generators if tuple(sorted(g.terms.items())) not in old])
        if nxt.ideal.same_pieces(ts.ideal):
            return TowerRun(states, brackets, split, True, False, provenance, news)
        ts = nxt
        states.append(ts)


def trivial_tower(t: TruncatedTensorAlgebra, cap: Optional[int] = None) -> TowerRun:
    return run_tower(t, trivial_bracket_step, "trivial", cap)


def check_implicit_jacobi(run: TowerRun) -> bool:
    """V injects into the last stage and every stage bracket split."""
    return (not run.collapsed) and run.final.i_injective and all(run.split)


def detect_trivial_bracket(run, relations: Sequence[TensorElement]) -> bool:
    """True iff every relation maps to zero in the stabilized stage."""
    state = run.final if isinstance(run, TowerRun) else run
    q = state.quotient
    return all(q.is_zero(w) for w in relations)
