"""Command-line front end.

    braidtower --config job.json [--task rank] [--degree 5] [--json] [--verbose]

Exit status: 0 success, 1 failed check or refusal, 2 configuration error,
3 unstable truncation.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

from .braiding import LiftedBraiding, format_polynomial, hecke_mark, minimal_polynomial, yang_baxter_violation
from .config import NEEDS_BRACKET, TASKS, ConfigError, JobConfig, parse_config
from .envelope import (
    BracketError, EnvelopeError, NotPrimitivelyGenerated, TowerCapExceeded, TowerState, bracket_matrix,
    check_implicit_jacobi, classical_envelope, combinatorial_rank, finite_from_quotient, ideal_tower,
    inverse_section_bracket, nichols_truncation, reconstruct, run_tower, trivial_tower,
)
from .exactla import DenseMatrix, FieldError
from .oracle import OracleRefusal, nichols_dims_via_symmetrizer, pbw_dims, SYMMETRIZER_MAX_DEGREE
from .quotient import UnstableTruncation
from .tensoralg import TruncatedTensorAlgebra, check_bialgebra_axioms, primitive_elements, render

log = logging.getLogger("braidtower")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_UNSTABLE = 0, 1, 2, 3


class Report:
    def __init__(self, cfg: JobConfig):
        self.cfg = cfg
        self.tables: Dict = {}
        self.verdicts: Dict[str, bool] = {}
        self.lines: List[str] = []
        self.details: List[str] = []

    def line(self, s: str):
        self.lines.append(s)

    def detail(self, s: str):
        self.details.append(s)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def as_dict(self) -> dict:
        return {"task": self.cfg.task, "config": self.cfg.to_dict(), "truncation": self.cfg.degree,
                "tables": self.tables, "verdicts": self.verdicts, "passed": self.passed}


def _ints(xs):
    return [int(x) for x in xs]


def _provider(cfg: JobConfig):
    if cfg.bracket_kind == "matrices":
        F = cfg.K
        mats = cfg.bracket_data

        def provider(ts: TowerState) -> DenseMatrix:
            if ts.stage < len(mats):
                m = mats[ts.stage]
                cols = [[F(m[k][j]) for k in range(len(m))] for j in range(len(m[0]))]
                return bracket_matrix(ts, cols)
            if ts.i_injective and ts.P_equals_V():
                return inverse_section_bracket(ts)
            raise BracketError(f"no bracket matrix supplied for stage {ts.stage} "
                               f"(P^[{ts.stage}] has dimension {ts.dimP}, basis: "
                               + "; ".join(render(p) for p in ts.P_elements()) + ")")
        return provider
    return None


def _tower(cfg: JobConfig):
    D = cfg.degree
    if cfg.bracket_kind == "classical":
        return classical_envelope(cfg.bracket_data, D, cfg.K)
    t = TruncatedTensorAlgebra(cfg.braided_space(), D)
    if cfg.bracket_kind == "matrices":
        return run_tower(t, _provider(cfg), "user-supplied")
    return trivial_tower(t)


def _stage_tables(run, rep: Report):
    rep.tables["stages"] = run.report()["stages"]
    for s in run.states:
        rep.line(f"  stage {s.stage}: graded dims {_ints(s.quotient.graded_dims())}, "
                 f"filtered dims {_ints(s.quotient.filtered_dims())}, dim P = {s.dimP}")
        for j, p in enumerate(s.P_elements()):
            rep.detail(f"    P^[{s.stage}] basis {j}: {render(p)}")


def task_check(cfg: JobConfig, rep: Report):
    bs = cfg.braided_space()
    D = cfg.degree
    yb = yang_baxter_violation(bs)
    rep.verdicts["yang_baxter"] = yb is None
    mp = minimal_polynomial(bs)
    mark = hecke_mark(bs)
    rep.tables["minimal_polynomial"] = [str(a) for a in mp]
    rep.tables["hecke_mark"] = None if mark is None else str(mark)
    rep.line(f"minimal polynomial of c: {format_polynomial(mp)}")
    rep.line(f"Hecke mark: {'none' if mark is None else mark}")
    axioms = check_bialgebra_axioms(TruncatedTensorAlgebra(bs, D))
    rep.tables["axioms"] = axioms.as_dict()
    for r in axioms.results:
        rep.verdicts[r.name] = r.passed
        rep.line(f"  {'PASS' if r.passed else 'FAIL'} {r.name}" + (f" ({r.witness})" if r.witness else ""))
    rep.line(f"bialgebra axioms at truncation {D}: {'all pass' if axioms.passed else 'FAILED'}")


def task_primitives(cfg: JobConfig, rep: Report):
    t = TruncatedTensorAlgebra(cfg.braided_space(), cfg.degree)
    dims = []
    bases = {}
    for d in range(1, cfg.degree + 1):
        els = primitive_elements(t, d)
        dims.append(len(els))
        bases[d] = [render(e) for e in els]
        rep.line(f"  degree {d}: dim {len(els)}")
        for e in els:
            rep.detail(f"    {render(e)}")
    rep.tables["primitive_dims"] = dims
    rep.tables["primitive_bases"] = bases
    rep.line(f"primitives of T(V,c) at truncation {cfg.degree}: {dims}")


def task_nichols(cfg: JobConfig, rep: Report):
    r = nichols_truncation(cfg.braided_space(), cfg.degree)
    rep.tables.update(graded_dims=_ints(r.dims), total=r.total, basis=r.basis,
                      relations=[render(g) for g in r.relations])
    rep.line(f"Nichols algebra at truncation {cfg.degree}: graded dims {tuple(_ints(r.dims))}, total {r.total}")
    rep.line("basis: " + ", ".join(r.basis))
    rep.line("relations: " + ", ".join(render(g) for g in r.relations))


def task_rank(cfg: JobConfig, rep: Report):
    r = combinatorial_rank(cfg.braided_space(), cfg.degree)
    rep.tables.update(rank=r.rank, graded_dims=[_ints(g) for g in r.graded_dims], relations=r.relations)
    rep.line(str(r))
    _stage_tables(r.run, rep)


def task_envelope(cfg: JobConfig, rep: Report):
    run = _tower(cfg)
    ok = check_implicit_jacobi(run)
    rep.verdicts["implicit_jacobi"] = ok
    rep.tables["stabilized"] = run.stabilized
    rep.tables["collapsed"] = run.collapsed
    rep.line(f"{run.provenance} bracket tower at truncation {cfg.degree}: "
             f"{'stabilized at stage ' + str(run.rank) if run.stabilized else 'letters collapsed at stage ' + str(run.rank)}")
    _stage_tables(run, rep)
    rep.line(f"implicit Jacobi identity (at truncation {cfg.degree}): {'holds' if ok else 'FAILS'}")


def task_reconstruct(cfg: JobConfig, rep: Report):
    run = _tower(cfg)
    q = run.final.quotient
    if not q.vanishes_above:
        raise EnvelopeError(f"envelope is not finite-dimensional at truncation {cfg.degree}; cannot form its tables")
    A = finite_from_quotient(q)
    r = reconstruct(A, cfg.degree)
    rep.tables["reconstruction"] = r.as_dict()
    rep.verdicts["isomorphism"] = r.isomorphism
    rep.line(f"algebra of dimension {A.dim} built from the stabilized tower")
    rep.line(f"envelope of its primitives: dimension {r.dim_envelope}, evaluation rank {r.rank_of_evaluation}")
    rep.line(f"isomorphism at truncation {cfg.degree}: {'yes' if r.isomorphism else 'NO'}")


def task_oracle(cfg: JobConfig, rep: Report):
    bs = cfg.braided_space()
    D = min(cfg.degree, SYMMETRIZER_MAX_DEGREE)
    sym = nichols_dims_via_symmetrizer(LiftedBraiding(bs), D)
    tow = nichols_truncation(bs, D).dims
    rep.tables.update(symmetrizer_dims=_ints(sym), tower_dims=_ints(tow))
    rep.verdicts["nichols_dims_agree"] = list(sym) == list(tow)
    rep.line(f"symmetrizer dims {tuple(_ints(sym))} vs trivial tower dims {tuple(_ints(tow))} "
             f"(degrees ≤ {D}): {'agree' if list(sym) == list(tow) else 'DISAGREE'}")
    if cfg.bracket_kind == "classical":
        pbw = pbw_dims(cfg.bracket_data, cfg.degree, cfg.K)
        env = classical_envelope(cfg.bracket_data, cfg.degree, cfg.K).final.quotient.filtered_dims()
        rep.tables.update(pbw_dims=_ints(pbw), envelope_filtered_dims=_ints(env))
        rep.verdicts["pbw_dims_agree"] = list(pbw) == list(env)
        rep.line(f"PBW dims {tuple(_ints(pbw))} vs envelope filtered dims {tuple(_ints(env))}")


def task_ideal_tower(cfg: JobConfig, rep: Report):
    run = _tower(cfg)
    r = ideal_tower(run)
    rep.tables["ideal_tower"] = r.as_dict()
    rep.verdicts["chains_agree"] = r.agree
    for s in r.stages:
        rep.line(f"  n={s.index}: Ker(π) dims {s.tower_dims}, chain dims {s.chain_dims}: "
                 f"{'equal' if s.equal else ('n/a' if s.equal is None else 'DIFFERENT')}")
    rep.line(f"ideal chain agrees with tower kernels at truncation {cfg.degree}: {'yes' if r.agree else 'NO'}")


DISPATCH: Dict[str, Callable[[JobConfig, Report], None]] = {
    "check": task_check, "primitives": task_primitives, "nichols": task_nichols, "rank": task_rank,
    "envelope": task_envelope, "reconstruct": task_reconstruct, "oracle-compare": task_oracle,
    "ideal-tower": task_ideal_tower,
}


def run(cfg: JobConfig):
    """Execute a job; returns (exit status, report)."""
    if cfg.task in NEEDS_BRACKET and cfg.bracket_kind is None:
        raise ConfigError(f"task {cfg.task!r} requires a 'bracket' entry")
    rep = Report(cfg)
    try:
        DISPATCH[cfg.task](cfg, rep)
    except UnstableTruncation as e:
        rep.verdicts["stable_truncation"] = False
        rep.line(f"unstable truncation: {e}")
        return EXIT_UNSTABLE, rep
    except (BracketError, EnvelopeError, NotPrimitivelyGenerated, OracleRefusal, TowerCapExceeded,
            FieldError, AssertionError) as e:
        rep.verdicts["completed"] = False
        rep.tables["error"] = str(e)
        rep.line(f"refused: {e}")
        return EXIT_FAIL, rep
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep


def main(argv: Optional[List[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="braidtower", description="Braided enveloping towers at bounded degree.")
    ap.add_argument("--config", required=True, help="path to a JSON job configuration")
    ap.add_argument("--task", choices=TASKS, help="override the task in the configuration")
    ap.add_argument("--degree", type=int, help="override the truncation degree")
    ap.add_argument("--json", action="store_true", help="emit one structured JSON report")
    ap.add_argument("--verbose", action="store_true", help="print bases and debug logging")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"braidtower: cannot read config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        changes = {}
        if args.task:
            changes["task"] = args.task
        if args.degree is not None:
            if args.degree < 1:
                raise ConfigError("--degree must be at least 1")
            changes["degree"] = args.degree
        if args.json:
            changes["output"] = "json"
        cfg = dataclasses.replace(cfg, **changes)
        status, rep = run(cfg)
    except ConfigError as e:
        print(f"braidtower: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.output == "json":
        print(json.dumps(dict(rep.as_dict(), exit_status=status), indent=2, default=str))
    else:
        print(f"task {cfg.task} (field {cfg.to_dict()['field']}, at truncation {cfg.degree})")
        for s in rep.lines:
            print(s)
        if args.verbose:
            for s in rep.details:
                print(s)
        if rep.verdicts:
            print("verdict: " + ("PASS" if rep.passed else "FAIL"))
    return status


if __name__ == "__main__":
    sys.exit(main())
