"""Comparing tower ideals with the chain I_{k+1}/I_k = (P[I/I_k])."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..exactla import SubspaceBasis, intersect
from ..quotient import IdealPresentation, QuotientAlgebra, ideal_from_kernel, ideal_span, quotient_primitives
from ..tensoralg import TensorElement
from .finite import FiniteBraidedBialgebra
from .tower import TowerRun


@dataclass
class ChainStage:
    index: int
    chain_dims: List[int]
    tower_dims: Optional[List[int]]
    equal: Optional[bool]


@dataclass
class IdealTowerReport:
    stages: List[ChainStage]
    truncation: int

    @property
    def agree(self) -> bool:
        return all(s.equal for s in self.stages if s.equal is not None) and any(s.equal is not None for s in self.stages)

    def as_dict(self):
        return {"truncation": self.truncation, "agree": self.agree,
                "stages": [{"n": s.index, "chain_dims": s.chain_dims, "tower_dims": s.tower_dims, "equal": s.equal}
                           for s in self.stages]}


def evaluation_ideal(t, A: FiniteBraidedBialgebra, letter_images: Sequence) -> IdealPresentation:
    """Kernel of the algebra map T(V) → A sending x_k to ``letter_images[k]``."""
    cache = {(): dict(A.unit)}

    def ev(w):
        hit = cache.get(w)
        if hit is None:
            hit = cache[w] = A.mul(ev(w[:-1]), dict(letter_images[w[-1]]))
        return hit

    return ideal_from_kernel(t, ev)


def kharchenko_chain(t, target: IdealPresentation, max_steps: int = 16) -> List[IdealPresentation]:
    """I_0 = 0 and I_{k+1} = I_k + (lifts of P(T/I_k) ∩ I/I_k), until stable."""
    chain = [ideal_span(t, [])]
    for _ in range(max_steps):
        cur = chain[-1]
        q = QuotientAlgebra(t, cur)
        prims = quotient_primitives(q)[t.D]
        image = SubspaceBasis.span(q.nf_vec(r) for r in target.top.rows)
        common = intersect(prims, image)
        nxt = ideal_span(t, list(cur.generators) + [TensorElement.from_vec(r) for r in common.rows])
        if nxt.same_pieces(cur):
            return chain
        chain.append(nxt)
    raise RuntimeError("ideal chain did not stabilize")


def ideal_tower(run: TowerRun, target=None, letter_images=None) -> IdealTowerReport:
    """Check Ker(π₀ⁿ) = I_n for every computed stage, degree by degree.

    ``target`` is the ideal I being filtered: by default the kernel of the
    projection onto the last stage, or an :class:`IdealPresentation`, or a
    finite braided bialgebra together with ``letter_images``.
    """
    t = run.final.base
    if target is None:
        target = run.final.ideal
    elif isinstance(target, FiniteBraidedBialgebra):
        if letter_images is None:
            raise ValueError("a finite target needs the images of the letters")
        target = evaluation_ideal(t, target, letter_images)
    chain = kharchenko_chain(t, target)
    stages = []
    for k in range(max(len(chain), len(run.states))):
        ci = chain[min(k, len(chain) - 1)]
        if k < len(run.states):
            ti = run.states[k].ideal
            stages.append(ChainStage(k, ci.dims(), ti.dims(), ci.same_pieces(ti)))
        else:
            stages.append(ChainStage(k, ci.dims(), None, None))
    return IdealTowerReport(stages, t.D)
