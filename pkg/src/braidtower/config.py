"""JSON job configuration: parsing, validation and canonical rendering.

Scalars are written as strings such as ``"-1"`` or ``"3/2"`` so no precision is
lost.  Example::

    {"field": "Q", "space": {"diagonal": [["-1", "1"], ["-1", "-1"]]},
     "degree": 5, "task": "rank"}
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Tuple

from .braiding import BraidedSpace, InvalidBraiding, make_braiding, make_diagonal, make_flip
from .exactla import Field, FieldError, QQ

TASKS = ("check", "primitives", "nichols", "rank", "envelope", "reconstruct", "oracle-compare", "ideal-tower")
NEEDS_BRACKET = ("envelope", "reconstruct")
TOP_KEYS = {"field", "space", "degree", "task", "bracket", "output"}
DEFAULT_DEGREE = 5


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


Matrix = Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True)
class JobConfig:
    field: int                      # 0 for Q, else a prime
    space_kind: str                 # diagonal | flip | matrix
    space_data: Any                 # Matrix of scalar strings, or n for flip
    degree: int = DEFAULT_DEGREE
    task: str = "check"
    bracket_kind: Optional[str] = None   # trivial | classical | matrices
    bracket_data: Any = None
    output: str = "text"

    @property
    def K(self) -> Field:
        return Field(self.field)

    def braided_space(self) -> BraidedSpace:
        F = self.K
        if self.space_kind == "diagonal":
            return make_diagonal([[F(x) for x in row] for row in self.space_data], F)
        if self.space_kind == "flip":
            return make_flip(self.space_data, F)
        size = len(self.space_data)
        n = int(round(size ** 0.5))
        return make_braiding(n, [[F(x) for x in row] for row in self.space_data], F)

    def to_dict(self) -> dict:
        d: dict = {"field": "Q" if self.field == 0 else f"F_{self.field}"}
        d["space"] = {self.space_kind: _plain(self.space_data)}
        d["degree"] = self.degree
        d["task"] = self.task
        if self.bracket_kind == "trivial":
            d["bracket"] = "trivial"
        elif self.bracket_kind is not None:
            d["bracket"] = {self.bracket_kind: _plain(self.bracket_data)}
        d["output"] = self.output
        return d


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(y) for y in x]
    return x


def render_config(cfg: JobConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# parsing


def _locate(text: str, key: str) -> Tuple[Optional[int], Optional[int]]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _scalar(x, path: str, F: Field) -> str:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ValueError(f"{path}: scalars must be strings like \"3/2\" or integers")
    try:
        v = Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{path}: {x!r} is not an exact scalar")
    try:
        F(v)
    except (FieldError, ZeroDivisionError) as e:
        raise ValueError(f"{path}: {e}")
    return str(v)


def _matrix(x, path: str, F: Field, rows: Optional[int] = None, cols: Optional[int] = None) -> Matrix:
    if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
        raise ValueError(f"{path}: expected a non-empty list of rows")
    if rows is not None and len(x) != rows:
        raise ValueError(f"{path}: expected {rows} rows, got {len(x)}")
    width = len(x[0]) if cols is None else cols
    for i, r in enumerate(x):
        if len(r) != width:
            raise ValueError(f"{path}[{i}]: expected {width} entries, got {len(r)}")
    return tuple(tuple(_scalar(v, f"{path}[{i}][{j}]", F) for j, v in enumerate(r)) for i, r in enumerate(x))


def _field(x) -> int:
    if isinstance(x, int) and not isinstance(x, bool):
        p = x
    elif isinstance(x, str):
        s = x.strip()
        if s in ("Q", "QQ", "rationals"):
            return 0
        m = re.fullmatch(r"(?:F_?|GF\()(\d+)\)?", s)
        if not m:
            raise ValueError(f"field: expected \"Q\" or \"F_p\", got {x!r}")
        p = int(m.group(1))
    else:
        raise ValueError("field: expected \"Q\" or \"F_p\"")
    Field(p)  # validates primality
    return p


def parse_config(text: str) -> JobConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", e.lineno, e.colno)
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object", 1, 1)
    unknown = sorted(set(raw) - TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r}", *_locate(text, unknown[0]))

    def fail(key, msg):
        raise ConfigError(msg, *_locate(text, key))

    try:
        field = _field(raw.get("field", "Q"))
    except (ValueError, FieldError) as e:
        fail("field", str(e))
    F = Field(field)

    if "space" not in raw:
        raise ConfigError("missing required key 'space'")
    space = raw["space"]
    if not isinstance(space, dict) or len(space) != 1:
        fail("space", "space: exactly one of 'diagonal', 'flip', 'matrix' is required")
    kind, data = next(iter(space.items()))
    try:
        if kind == "diagonal":
            data = _matrix(data, "space.diagonal", F)
            if len(data) != len(data[0]):
                raise ValueError("space.diagonal: q-matrix must be square")
            for i, r in enumerate(data):
                for j, v in enumerate(r):
                    if Fraction(v) == 0 or not F(v):
                        raise ValueError(f"invalid braiding: space.diagonal[{i}][{j}] is zero")
        elif kind == "flip":
            if isinstance(data, bool) or not isinstance(data, int) or data < 1:
                raise ValueError("space.flip: dimension must be a positive integer")
        elif kind == "matrix":
            data = _matrix(data, "space.matrix", F)
            n = int(round(len(data) ** 0.5))
            if n * n != len(data) or len(data[0]) != len(data):
                raise ValueError("space.matrix: braiding must be an n²×n² matrix")
        else:
            raise ValueError(f"space: unknown kind {kind!r} (use diagonal, flip or matrix)")
    except ValueError as e:
        fail("space", str(e))

    degree = raw.get("degree", DEFAULT_DEGREE)
    if isinstance(degree, bool) or not isinstance(degree, int) or degree < 1:
        fail("degree", "degree: must be an integer ≥ 1")

    task = raw.get("task", "check")
    if task not in TASKS:
        fail("task", f"task: unknown task {task!r}; expected one of {', '.join(TASKS)}")

    output = raw.get("output", "text")
    if output not in ("text", "json"):
        fail("output", "output: expected 'text' or 'json'")

    bkind, bdata = None, None
    if "bracket" in raw:
        b = raw["bracket"]
        n = _space_dim(kind, data)
        try:
            if b == "trivial":
                bkind = "trivial"
            elif isinstance(b, dict) and len(b) == 1 and "classical" in b:
                bkind, bdata = "classical", _constants(b["classical"], n, F)
                if kind != "flip":
                    raise ValueError("bracket.classical: requires a flip space")
                if field != 0:
                    raise ValueError("bracket.classical: requires field Q (characteristic 0)")
            elif isinstance(b, dict) and len(b) == 1 and "matrices" in b:
                mats = b["matrices"]
                if not isinstance(mats, list) or not mats:
                    raise ValueError("bracket.matrices: expected a non-empty list of stage matrices")
                bkind = "matrices"
                bdata = tuple(_matrix(m, f"bracket.matrices[{s}]", F, rows=n) for s, m in enumerate(mats))
            else:
                raise ValueError("bracket: expected \"trivial\", {\"classical\": ...} or {\"matrices\": [...]}")
        except ValueError as e:
            fail("bracket", str(e))

    cfg = JobConfig(field, kind, data, degree, task, bkind, bdata, output)
    try:
        cfg.braided_space()
    except InvalidBraiding as e:
        fail("space", f"invalid braiding: {e}")
    return cfg


def _space_dim(kind, data) -> int:
    if kind == "flip":
        return data
    if kind == "diagonal":
        return len(data)
    return int(round(len(data) ** 0.5))


def _constants(x, n: int, F: Field):
    if not isinstance(x, list) or len(x) != n:
        raise ValueError(f"bracket.classical: expected {n}×{n}×{n} structure constants")
    out = []
    for i, plane in enumerate(x):
        if not isinstance(plane, list) or len(plane) != n:
            raise ValueError(f"bracket.classical[{i}]: expected {n} vectors")
        row = []
        for j, vec in enumerate(plane):
            if not isinstance(vec, list) or len(vec) != n:
                raise ValueError(f"bracket.classical[{i}][{j}]: expected {n} coordinates")
            row.append(tuple(_scalar(v, f"bracket.classical[{i}][{j}][{k}]", F) for k, v in enumerate(vec)))
        out.append(tuple(row))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if Fraction(out[i][j][k]) != -Fraction(out[j][i][k]):
                    raise ValueError(
                        f"bracket.classical: not antisymmetric at indices ({i+1},{j+1},{k+1}): "
                        f"[x{i+1},x{j+1}] and [x{j+1},x{i+1}] disagree in coordinate x{k+1}")
    return tuple(out)
