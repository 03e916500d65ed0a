"""Trivial-bracket towers, Nichols truncations, one-step envelopes and bracket rigidity."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence

from ..braiding import BraidedSpace
from ..exactla import DenseMatrix, SubspaceBasis, axpy, solve_affine
from ..quotient import QuotientAlgebra, ideal_span
from ..tensoralg import E_space, TensorElement, TruncatedTensorAlgebra, render, render_word, wkey
from .tower import (
    BracketError, EnvelopeError, TowerRun, TowerState, compat_forms, compat_report, detect_trivial_bracket,
    initial_state, make_state, max_stages, step_generators, tower_step, trivial_bracket_step, trivial_tower,
    TowerCapExceeded,
)


@dataclass
class RankReport:
    rank: int
    truncation: int
    graded_dims: List[List[int]]
    relations: List[List[str]]
    run: TowerRun

    def __str__(self):
        return f"combinatorial rank {self.rank} (at truncation {self.truncation})"


def combinatorial_rank(bs: BraidedSpace, D: int) -> RankReport:
    run = trivial_tower(TruncatedTensorAlgebra(bs, D))
    return RankReport(run.rank, D, [s.quotient.graded_dims() for s in run.states],
                      [[render(g) for g in gs] for gs in run.new_generators], run)


@dataclass
class NicholsReport:
    dims: List[int]
    basis: List[str]
    relations: List[TensorElement]
    truncation: int
    run: TowerRun

    @property
    def quotient(self) -> QuotientAlgebra:
        return self.run.final.quotient

    @property
    def total(self) -> int:
        return sum(self.dims)


def nichols_truncation(bs: BraidedSpace, D: int) -> NicholsReport:
    """Stabilized trivial tower: graded dims, standard-word basis and relations."""
    run = trivial_tower(TruncatedTensorAlgebra(bs, D))
    q = run.final.quotient
    return NicholsReport(q.graded_dims(), [render_word(w) for w in q.standard], list(q.ideal.generators), D, run)


# ---------------------------------------------------------------------------
# one-step envelope


def _E_rows(t: TruncatedTensorAlgebra) -> List[Dict]:
    return [dict(r) for piece in E_space(t) for r in piece.rows]


def stage0_bracket_from_beta(ts: TowerState, beta: DenseMatrix) -> DenseMatrix:
    """Bracket on P(T) that is the identity on V and β on E(V,c)."""
    t = ts.base
    F = t.field
    E = SubspaceBasis.span(_E_rows(t))
    if (beta.rows, beta.cols) != (t.n, E.dim):
        raise BracketError(f"β must be {t.n}x{E.dim} (letters × E basis), got {beta.rows}x{beta.cols}")
    cols = []
    for row in ts.P.rows:
        lin = [row.get(wkey((k,)), F.zero) for k in range(t.n)]
        rest = {k: v for k, v in row.items() if -k[0] >= 2}
        ec = E.coordinates(rest)
        if ec is None:
            raise AssertionError("higher part of a primitive is not in E(V,c)")
        val = [lin[m] + sum((beta[m, e] * ec[e] for e in range(E.dim)), F.zero) for m in range(t.n)]
        cols.append(val)
    return DenseMatrix.from_rows(F, [[c[m] for c in cols] for m in range(t.n)], cols=len(cols))


def rank_one_envelope(bs: BraidedSpace, beta: Optional[DenseMatrix], D: int) -> QuotientAlgebra:
    """T(V,c)/((Id-β)[E(V,c)]), built directly and checked against the first tower step."""
    t = TruncatedTensorAlgebra(bs, D)
    E_rows = _E_rows(t)
    F = t.field
    if beta is None:
        beta = DenseMatrix.zeros(F, t.n, len(E_rows))
    ts0 = initial_state(t)
    b0 = stage0_bracket_from_beta(ts0, beta)
    rep = compat_report(ts0, b0)
    if not rep.passed:
        raise BracketError(f"β violates {rep.equation} at basis pair {rep.witness}", rep.equation, rep.witness)
    gens = []
    for e, row in enumerate(E_rows):
        g = dict(row)
        for m in range(t.n):
            if beta[m, e]:
                axpy(g, -beta[m, e], {wkey((m,)): 1})
        gens.append(TensorElement.from_vec(g))
    q = QuotientAlgebra(t, ideal_span(t, gens))
    first = tower_step(ts0, b0)
    if not first.ideal.same_pieces(q.ideal):
        raise AssertionError("one-step envelope differs from the first tower stage")
    return q


# ---------------------------------------------------------------------------
# bracket rigidity


@dataclass
class StageRigidity:
    stage: int
    dimP: int
    unknowns: int
    free_before: int
    free_after: int
    rounds: int
    bracket: Optional[DenseMatrix]
    trivial: Optional[bool]
    forced_zero: List[str] = dc_field(default_factory=list)

    def as_dict(self):
        return {
            "stage": self.stage, "dimP": self.dimP, "unknowns": self.unknowns,
            "free_parameters_from_equations": self.free_before,
            "free_parameters_after_propagation": self.free_after,
            "propagation_rounds": self.rounds, "unique": self.bracket is not None,
            "equals_trivial": self.trivial,
        }


@dataclass
class RigidityReport:
    stages: List[StageRigidity]
    rigid: bool
    all_trivial: bool
    run: Optional[TowerRun]
    trivial_detected: Optional[bool]
    truncation: int

    def bracket(self, stage: int) -> DenseMatrix:
        return self.stages[stage].bracket


def _constraint_system(ts: TowerState):
    n, m = ts.n, ts.dimP
    F = ts.quotient.field
    unknowns = [(k, j) for k in range(n) for j in range(m)]
    eqs = []
    for eq, j, k, form in compat_forms(ts):
        if form is None:
            return unknowns, None
        # one scalar equation per output coordinate
        coords: Dict = {}
        for u, vec in form.items():
            for key, a in vec.items():
                coords.setdefault(key, {})[u] = a
        for coeffs in coords.values():
            eqs.append((coeffs, F.zero))
    # split: b∘i = Id
    for k in range(n):
        for r in range(n):
            coeffs = {(r, j): ts.section_coords[k][j] for j in range(m) if ts.section_coords[k][j]}
            eqs.append((coeffs, F.one if r == k else F.zero))
    return unknowns, eqs


def _always_zero(ts: TowerState, unknowns, particular, directions) -> List[Dict]:
    """P vectors p (as coordinate dicts) with b(p) = 0 for every solution."""
    from ..exactla import kernel_of_map
    m = ts.dimP
    cols = []
    for j in range(m):
        img = {}
        for k in range(ts.n):
            a = particular[(k, j)]
            if a:
                img[("p", k)] = a
            for i, d in enumerate(directions):
                x = d[(k, j)]
                if x:
                    img[("d", i, k)] = x
        cols.append((j, img))
    return [dict(r) for r in kernel_of_map(cols, ts.quotient.field.one).rows]


def stage_rigidity(ts: TowerState) -> StageRigidity:
    """Solve compatibility + split exactly, then propagate forced vanishing.

    If p lies in P^[n] and in the ideal generated by I_n and the primitives on
    which every admissible bracket vanishes, then p - i b(p) and p both die in
    U^[n+1], so i^[n+1](b(p)) = 0; injectivity of i^[n+1] (split at the next
    stage) forces b(p) = 0.  This constraint is added until nothing changes.
    """
    F = ts.quotient.field
    unknowns, eqs = _constraint_system(ts)
    if eqs is None:
        return StageRigidity(ts.stage, ts.dimP, len(unknowns), -1, -1, 0, None, None)
    sol = solve_affine(eqs, unknowns, F)
    if sol is None:
        return StageRigidity(ts.stage, ts.dimP, len(unknowns), -1, -1, 0, None, None)
    free_before = len(sol[1])
    t = ts.base
    rounds = 0
    known_zero_dim = -1
    while True:
        particular, directions = sol
        zero = _always_zero(ts, unknowns, particular, directions)
        if len(zero) == known_zero_dim:
            break
        known_zero_dim = len(zero)
        rounds += 1
        kernel_elems = []
        for z in zero:
            v: Dict = {}
            for j, a in z.items():
                axpy(v, a, ts.P.rows[j])
            kernel_elems.append(TensorElement.from_vec(v))
        J = ideal_span(t, list(ts.ideal.generators) + kernel_elems)
        Jtop = J.top.echelon()
        # P vectors lying in J: rows of P are representatives in T
        from ..exactla import kernel_of_map
        # p = Σ a_j P_j lies in J iff its reduction modulo J vanishes
        cols = [(j, Jtop.reduce(ts.P.rows[j])) for j in range(ts.dimP)]
        inJ = kernel_of_map(cols, F.one)
        extra = []
        for r in inJ.rows:
            for k in range(ts.n):
                coeffs = {(k, j): a for j, a in r.items()}
                extra.append((coeffs, F.zero))
        eqs = eqs + extra
        sol = solve_affine(eqs, unknowns, F)
        if sol is None:
            return StageRigidity(ts.stage, ts.dimP, len(unknowns), free_before, -1, rounds, None, None)
    particular, directions = sol
    forced = []
    for j, row in enumerate(ts.P.rows):
        if all(not d[(k, j)] for d in directions for k in range(ts.n)) and all(not particular[(k, j)] for k in range(ts.n)):
            forced.append(render(TensorElement.from_vec(row)))
    if directions:
        return StageRigidity(ts.stage, ts.dimP, len(unknowns), free_before, len(directions), rounds, None, None, forced)
    b = DenseMatrix.from_rows(F, [[particular[(k, j)] for j in range(ts.dimP)] for k in range(ts.n)], cols=ts.dimP)
    trivial = b == trivial_bracket_step(ts)
    return StageRigidity(ts.stage, ts.dimP, len(unknowns), free_before, 0, rounds, b, trivial, forced)


def bracket_rigidity(bs: BraidedSpace, D: int, relations: Optional[Sequence[TensorElement]] = None) -> RigidityReport:
    """Enumerate the exact constraint system stage by stage.

    At each stage the admissible brackets form an affine space; when it is a
    single point, the tower is continued with that bracket.  The report says
    whether every stage was forced and whether the forced brackets are trivial.
    """
    t = TruncatedTensorAlgebra(bs, D)
    ts = initial_state(t)
    stages: List[StageRigidity] = []
    states = [ts]
    brackets = []
    cap = max_stages()
    while True:
        sr = stage_rigidity(ts)
        stages.append(sr)
        if sr.bracket is None:
            return RigidityReport(stages, False, False, None, None, D)
        nxt = tower_step(ts, sr.bracket)
        brackets.append(sr.bracket)
        if nxt.ideal.same_pieces(ts.ideal):
            break
        if len(states) >= cap:
            raise TowerCapExceeded(f"rigidity analysis exceeded {cap} stages")
        ts = nxt
        states.append(ts)
    run = TowerRun(states, brackets, [True] * len(brackets), True, False, "forced")
    if relations is None:
        relations = nichols_truncation(bs, D).relations
    return RigidityReport(stages, True, all(s.trivial for s in stages), run,
                          detect_trivial_bracket(run, relations), D)
