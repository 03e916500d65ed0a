"""Acceptance criteria, one check per criterion.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` for a
plain PASS/FAIL listing.
"""
from __future__ import annotations

import time

import pytest

from braidtower.braiding import LiftedBraiding, format_polynomial, make_flip, minimal_polynomial
from braidtower.catalog import corrupted_lift_algebra, rank_two_diagonal, scalar_diagonal, yang_baxter_breaking
from braidtower.envelope import (
    bracket_rigidity, char2_example, check_implicit_jacobi, classical_envelope, combinatorial_rank, ideal_tower,
    nichols_truncation, perturbed_sl2_constants, sl2_constants, trivial_tower,
)
from braidtower.exactla import GF, QQ
from braidtower.oracle import OracleRefusal, nichols_dims_via_symmetrizer, pbw_dims
from braidtower.quotient import QuotientAlgebra, ideal_span, quotient_primitives
from braidtower.tensoralg import TruncatedTensorAlgebra, check_bialgebra_axioms, render

EXPECTED_BASIS = ["1", "x1", "x2", "x1.x2", "x2.x1", "x1.x2.x1", "x2.x1.x2", "x2.x1.x2.x1"]
EXPECTED_RELATIONS = ["x1.x1", "x2.x2", "x1.x2.x1.x2 + x2.x1.x2.x1"]


def c01_rank_two_golden():
    start = time.perf_counter()
    bs = rank_two_diagonal()
    rank = combinatorial_rank(bs, 5)
    nic = nichols_truncation(bs, 5)
    elapsed = time.perf_counter() - start
    rels = [render(r) for r in nic.relations]
    ok = (rank.rank == 2 and list(nic.dims[:5]) == [1, 2, 2, 2, 1] and nic.dims[5] == 0 and nic.total == 8
          and nic.basis == EXPECTED_BASIS and rels == EXPECTED_RELATIONS and elapsed < 5)
    return ok, f"rank {rank.rank}, dims {nic.dims}, relations {rels}, {elapsed:.2f}s"


def c02_minimal_polynomial():
    mp = minimal_polynomial(rank_two_diagonal())
    text = format_polynomial(mp)
    return text == "X^3 + X^2 + X + 1", text


def c03_rigidity():
    rep = bracket_rigidity(rank_two_diagonal(), 5)
    return rep.rigid and rep.all_trivial and rep.trivial_detected is True, \
        f"rigid={rep.rigid}, trivial detected={rep.trivial_detected}, stages={len(rep.stages)}"


def c04_classical_sl2():
    start = time.perf_counter()
    run = classical_envelope(sl2_constants(), 4)
    q = run.final.quotient
    dims = list(q.filtered_dims())
    pbw = pbw_dims(sl2_constants(), 4)
    prims = quotient_primitives(q)
    jac = check_implicit_jacobi(run)
    prims_are_v = all(prims[d].dim == 3 and run.final.P_equals_V() for d in range(1, 5))
    elapsed = time.perf_counter() - start
    ok = dims == pbw == [1, 4, 10, 20, 35] and jac and prims_are_v and elapsed < 10
    return ok, f"dims {dims}, pbw {pbw}, Jacobi {jac}, P=V {prims_are_v}, {elapsed:.2f}s"


def c05_perturbed_sl2():
    try:
        pbw_dims(perturbed_sl2_constants(), 4)
        refused, wit = False, None
    except OracleRefusal as e:
        refused, wit = True, e.witness
    jac = check_implicit_jacobi(classical_envelope(perturbed_sl2_constants(), 4))
    return refused and wit is not None and not jac, f"refused with witness {wit}, implicit Jacobi {jac}"


def c06_symmetrizer_oracle():
    spaces = {"rank-two diagonal": rank_two_diagonal(), "flip n=2": make_flip(2), "flip n=3": make_flip(3),
              "q=-1": scalar_diagonal(-1), "q=2": scalar_diagonal(2)}
    bad = []
    for name, bs in spaces.items():
        if nichols_dims_via_symmetrizer(LiftedBraiding(bs), 5) != list(nichols_truncation(bs, 5).dims):
            bad.append(name)
    return not bad, "all agree" if not bad else f"disagree on {bad}"


def c07_axiom_suite():
    good = [rank_two_diagonal(), make_flip(2), make_flip(3), scalar_diagonal(-1), scalar_diagonal(2)]
    good_ok = all(check_bialgebra_axioms(TruncatedTensorAlgebra(bs, 4)).passed for bs in good)
    yb = check_bialgebra_axioms(TruncatedTensorAlgebra(yang_baxter_breaking(), 4))
    lift = check_bialgebra_axioms(corrupted_lift_algebra(make_flip(2), 4))
    f1, f2 = yb.first_failure(), lift.first_failure()
    br1 = next(r for r in lift.results if r.name.startswith("Br1"))
    ok = good_ok and f1 is not None and f1.witness and f2 is not None and not br1.passed and br1.witness
    return bool(ok), f"fixtures pass {good_ok}; braid-breaking c fails {f1.name if f1 else None}; " \
                     f"corrupted lift fails Br1 with '{br1.witness}'"


def c08_ideal_chain():
    r1 = ideal_tower(trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5)))
    r2 = ideal_tower(classical_envelope(sl2_constants(), 5))
    return r1.agree and r2.agree, f"rank-two diagonal {r1.agree}, sl2 {r2.agree}"


def c09_first_stage_larger():
    t = TruncatedTensorAlgebra(rank_two_diagonal(), 5)
    first = trivial_tower(t).states[1].quotient.graded_dims()[4]
    nic = nichols_truncation(rank_two_diagonal(), 5).dims[4]
    return first == 2 and nic == 1, f"first quotient degree 4: {first}, Nichols degree 4: {nic}"


def c10_char2_bialgebra():
    A = char2_example(GF(2))
    P = A.primitives()
    gen = A.generates_as_algebra(P)
    return gen is False, f"dim P = {P.dim}, generates = {gen}"


CRITERIA = [
    ("1 rank-two diagonal golden values", c01_rank_two_golden),
    ("2 minimal polynomial", c02_minimal_polynomial),
    ("3 bracket rigidity", c03_rigidity),
    ("4 classical sl2 envelope", c04_classical_sl2),
    ("5 perturbed sl2 refusal", c05_perturbed_sl2),
    ("6 symmetrizer oracle agreement", c06_symmetrizer_oracle),
    ("7 axiom suite and fault injection", c07_axiom_suite),
    ("8 ideal chain agreement", c08_ideal_chain),
    ("9 first quotient exceeds Nichols in degree 4", c09_first_stage_larger),
    ("10 char-2 bialgebra not primitively generated", c10_char2_bialgebra),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {name}: {detail}"


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for name, check in CRITERIA:
        ok, detail = check()
        failures += not ok
        print(_line(name, ok, detail))
    raise SystemExit(1 if failures else 0)
