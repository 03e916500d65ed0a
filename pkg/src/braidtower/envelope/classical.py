"""Enveloping towers of ordinary Lie algebras (flip braiding, characteristic 0)."""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from ..braiding import make_flip
from ..exactla import QQ, DenseMatrix, Field, FieldError
from ..tensoralg import TruncatedTensorAlgebra, unkey
from .tower import EnvelopeError, TowerRun, TowerState, bracket_matrix, inverse_section_bracket, run_tower


class StructureConstantError(ValueError):
    pass


def normalize_constants(constants, field: Field = QQ) -> List[List[List]]:
    """Validate an n×n×n table with [x_i, x_j] = Σ_k constants[i][j][k] x_k."""
    n = len(constants)
    out = []
    for i, plane in enumerate(constants):
        if len(plane) != n:
            raise StructureConstantError(f"structure constants: row {i+1} has {len(plane)} entries, expected {n}")
        row = []
        for j, vec in enumerate(plane):
            if len(vec) != n:
                raise StructureConstantError(f"structure constants: [x{i+1},x{j+1}] has {len(vec)} coordinates, expected {n}")
            row.append([field(a) for a in vec])
        out.append(row)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if out[i][j][k] != -out[j][i][k]:
                    raise StructureConstantError(
                        f"structure constants are not antisymmetric at [x{i+1},x{j+1}] coordinate x{k+1}")
    return out


def lie_bracket(constants, u: Sequence, v: Sequence, field: Field) -> List:
    n = len(constants)
    out = [field.zero] * n
    for i, a in enumerate(u):
        if not a:
            continue
        for j, b in enumerate(v):
            if not b:
                continue
            for k in range(n):
                c = constants[i][j][k]
                if c:
                    out[k] += a * b * c
    return out


def jacobi_violation(constants, field: Field = QQ):
    """First basis triple (1-based) with nonzero Jacobiator, with its value."""
    n = len(constants)
    basis = [[field.one if k == i else field.zero for k in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = basis[i], basis[j], basis[k]
                terms = [
                    lie_bracket(constants, lie_bracket(constants, x, y, field), z, field),
                    lie_bracket(constants, lie_bracket(constants, y, z, field), x, field),
                    lie_bracket(constants, lie_bracket(constants, z, x, field), y, field),
                ]
                jac = [sum(col, field.zero) for col in zip(*terms)]
                if any(jac):
                    return (i + 1, j + 1, k + 1), jac
    return None


def evaluate_word(constants, w, field: Field) -> List:
    """Left-normed bracket [[x_{w1}, x_{w2}], ...] evaluated in the Lie algebra."""
    n = len(constants)
    cur = [field.one if k == w[0] else field.zero for k in range(n)]
    for a in w[1:]:
        cur = lie_bracket(constants, cur, [field.one if k == a else field.zero for k in range(n)], field)
    return cur


def evaluate_lie_element(constants, vec, field: Field) -> List:
    """Image of a primitive of T(V, flip) in the Lie algebra.

    Uses the Dynkin-Specht-Wever identity p = (1/d) Σ p_w [w] on each
    homogeneous part of degree d, so needs characteristic 0.
    """
    n = len(constants)
    out = [field.zero] * n
    for key, a in vec.items():
        w = unkey(key)
        if not w:
            raise EnvelopeError("primitive with a constant term")
        val = evaluate_word(constants, w, field)
        scale = a / len(w)
        for k in range(n):
            if val[k]:
                out[k] += scale * val[k]
    return out


def classical_bracket_provider(constants, field: Field):
    def provider(ts: TowerState) -> DenseMatrix:
        if ts.stage == 0:
            cols = [evaluate_lie_element(constants, row, field) for row in ts.P.rows]
            return bracket_matrix(ts, cols)
        if ts.i_injective and ts.P_equals_V():
            return inverse_section_bracket(ts)
        raise EnvelopeError(
            f"stage {ts.stage}: primitives exceed the image of V, so no induced bracket is available")
    return provider


def classical_envelope(structure_constants, D: int, field: Field = QQ) -> TowerRun:
    """Tower for T(V, flip) with the stage-0 bracket given by a Lie bracket on V.

    Stage 1 is T/(xy - yx - [x,y]).  For a genuine Lie algebra the tower
    stabilizes there; failure of the Jacobi identity shows up as the letters
    collapsing in U^[1].
    """
    if field.characteristic != 0:
        raise FieldError("classical envelope requires characteristic 0")
    consts = normalize_constants(structure_constants, field)
    n = len(consts)
    t = TruncatedTensorAlgebra(make_flip(n, field), D)
    run = run_tower(t, classical_bracket_provider(consts, field), "classical")
    run.constants = consts
    return run


def sl2_constants() -> List[List[List[int]]]:
    """Basis (e, f, h): [e,f] = h, [h,e] = 2e, [h,f] = -2f."""
    c = [[[0, 0, 0] for _ in range(3)] for _ in range(3)]
    e, f, h = 0, 1, 2
    c[e][f] = [0, 0, 1]
    c[f][e] = [0, 0, -1]
    c[h][e] = [2, 0, 0]
    c[e][h] = [-2, 0, 0]
    c[h][f] = [0, -2, 0]
    c[f][h] = [0, 2, 0]
    return c


def perturbed_sl2_constants() -> List[List[List[int]]]:
    """sl2 with [h,f] = -3f: antisymmetric but the Jacobiator of (e,f,h) is -h."""
    c = sl2_constants()
    c[2][1] = [0, -3, 0]
    c[1][2] = [0, 3, 0]
    return c
