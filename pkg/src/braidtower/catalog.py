"""Named braided spaces and fault-injected fixtures used by tests and examples."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict

from .braiding import BraidedSpace, LiftedBraiding, make_braiding, make_diagonal, make_flip
from .exactla import QQ, Field
from .tensoralg import TruncatedTensorAlgebra


def rank_two_diagonal(field: Field = QQ) -> BraidedSpace:
    """Diagonal braiding with q12 = 1 and every other q equal to -1."""
    return make_diagonal([[-1, 1], [-1, -1]], field)


def sign_braiding(n: int, field: Field = QQ) -> BraidedSpace:
    """c(x⊗y) = -y⊗x; its Nichols algebra is the exterior algebra."""
    return make_diagonal([[-1] * n for _ in range(n)], field)


def scalar_diagonal(q, n: int = 1, field: Field = QQ) -> BraidedSpace:
    return make_diagonal([[q] * n for _ in range(n)], field)


def yang_baxter_breaking(field: Field = QQ) -> BraidedSpace:
    """An invertible c on a 2-dim space that violates the braid relation.

    Built unchecked: c = flip composed with a non-diagonal twist on the first
    factor, so c is invertible but (c⊗1)(1⊗c)(c⊗1) ≠ (1⊗c)(c⊗1)(1⊗c).
    """
    F = field
    # basis order of V⊗V: x1x1, x1x2, x2x1, x2x2; columns are images
    cols = {
        (0, 0): {(0, 0): 1},
        (0, 1): {(1, 0): 1, (0, 0): 1},
        (1, 0): {(0, 1): 1},
        (1, 1): {(1, 1): 1},
    }
    m = [[F.zero] * 4 for _ in range(4)]
    for (i, j), img in cols.items():
        for (k, l), a in img.items():
            m[2 * k + l][2 * i + j] = F(a)
    return make_braiding(2, m, F, check=False)


class CorruptedLift(LiftedBraiding):
    """A lift whose c_{1,2} is scaled by ``factor``, so the hexagons fail."""

    def __init__(self, space: BraidedSpace, factor=2):
        super().__init__(space)
        self.factor = space.field(factor)

    def apply_word(self, a: int, w) -> Dict:
        out = super().apply_word(a, w)
        if a == 1 and len(w) == 3:
            return {k: v * self.factor for k, v in out.items()}
        return out


def corrupted_lift_algebra(space: BraidedSpace, D: int, factor=2) -> TruncatedTensorAlgebra:
    t = TruncatedTensorAlgebra(space, D)
    t.lifted = CorruptedLift(space, factor)
    return t


def sl2_structure_constants():
    from .envelope.classical import sl2_constants
    return sl2_constants()


def abelian_constants(n: int):
    return [[[0] * n for _ in range(n)] for _ in range(n)]


STANDARD_SPACES = {
    "rank-two-diagonal": rank_two_diagonal,
    "flip-2": lambda field=QQ: make_flip(2, field),
    "flip-3": lambda field=QQ: make_flip(3, field),
    "q=-1": lambda field=QQ: scalar_diagonal(-1, 1, field),
    "q=2": lambda field=QQ: scalar_diagonal(2, 1, field),
    "exterior-2": lambda field=QQ: sign_braiding(2, field),
}
