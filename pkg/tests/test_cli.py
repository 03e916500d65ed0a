import json

import pytest
from hypothesis import given, strategies as st

from braidtower.cli import main
from braidtower.config import ConfigError, JobConfig, parse_config, render_config

RANK_TWO = '{"field":"Q","space":{"diagonal":[["-1","1"],["-1","-1"]]},"degree":5,"task":"rank"}'
SL2 = {"field": "Q", "space": {"flip": 3}, "degree": 4, "task": "envelope",
       "bracket": {"classical": [[["0", "0", "0"], ["0", "0", "1"], ["-2", "0", "0"]],
                                 [["0", "0", "-1"], ["0", "0", "0"], ["0", "2", "0"]],
                                 [["2", "0", "0"], ["0", "-2", "0"], ["0", "0", "0"]]]}}


def write(tmp_path, text):
    p = tmp_path / "job.json"
    p.write_text(text if isinstance(text, str) else json.dumps(text))
    return str(p)


def test_minimal_flip_config():
    cfg = parse_config('{"space": {"flip": 2}}')
    assert cfg.degree == 5 and cfg.field == 0 and cfg.task == "check"


def test_zero_entry_rejected():
    with pytest.raises(ConfigError, match="invalid braiding"):
        parse_config('{"space": {"diagonal": [["1", "0"], ["1", "1"]]}}')


def test_antisymmetry_error_names_indices():
    bad = json.loads(json.dumps(SL2))
    bad["bracket"]["classical"][0][1][2] = "5"
    with pytest.raises(ConfigError, match=r"\(1,2,3\)"):
        parse_config(json.dumps(bad))


def test_parse_error_location():
    with pytest.raises(ConfigError) as err:
        parse_config('{"space": {"flip": 2},\n "degree": }')
    assert err.value.line == 2


def test_unknown_key_location():
    with pytest.raises(ConfigError) as err:
        parse_config('{"space": {"flip": 2},\n  "colour": 1}')
    assert (err.value.line, err.value.column) == (2, 3)


def test_prime_field_zero_entry():
    with pytest.raises(ConfigError, match="invalid braiding"):
        parse_config('{"field": "F_2", "space": {"diagonal": [["2"]]}}')


scalars = st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(bool).map(str)


@st.composite
def configs(draw):
    n = draw(st.integers(1, 3))
    kind = draw(st.sampled_from(["diagonal", "flip"]))
    space = {"flip": n} if kind == "flip" else {"diagonal": [[draw(scalars) for _ in range(n)] for _ in range(n)]}
    raw = {"field": "Q", "space": space, "degree": draw(st.integers(1, 6)),
           "task": draw(st.sampled_from(["check", "nichols", "rank", "primitives"])),
           "output": draw(st.sampled_from(["text", "json"]))}
    if draw(st.booleans()):
        raw["bracket"] = "trivial"
    return json.dumps(raw)


@given(configs())
def test_config_round_trip(text):
    cfg = parse_config(text)
    assert parse_config(render_config(cfg)) == cfg


def test_cli_rank(tmp_path, capsys):
    assert main(["--config", write(tmp_path, RANK_TWO)]) == 0
    assert "combinatorial rank 2 (at truncation 5)" in capsys.readouterr().out


def test_cli_nichols(tmp_path, capsys):
    assert main(["--config", write(tmp_path, RANK_TWO), "--task", "nichols"]) == 0
    out = capsys.readouterr().out
    assert "(1, 2, 2, 2, 1, 0)" in out
    assert "x1.x1, x2.x2, x1.x2.x1.x2 + x2.x1.x2.x1" in out


def test_cli_check_flip(tmp_path, capsys):
    assert main(["--config", write(tmp_path, '{"space":{"flip":2},"degree":4,"task":"check"}')]) == 0
    assert "all pass" in capsys.readouterr().out


def test_cli_json_schema(tmp_path, capsys):
    for task in ("rank", "nichols", "primitives", "check", "oracle-compare", "ideal-tower"):
        main(["--config", write(tmp_path, RANK_TWO), "--task", task, "--json"])
        rep = json.loads(capsys.readouterr().out)
        assert {"task", "config", "truncation", "tables", "verdicts"} <= set(rep)
        assert rep["truncation"] == 5 and rep["task"] == task


def test_cli_envelope_requires_bracket(tmp_path, capsys):
    assert main(["--config", write(tmp_path, RANK_TWO), "--task", "envelope"]) == 2


def test_cli_config_error_exit(tmp_path):
    assert main(["--config", write(tmp_path, '{"space": 3}')]) == 2


def test_cli_sl2_envelope_and_reconstruct(tmp_path, capsys):
    path = write(tmp_path, SL2)
    assert main(["--config", path]) == 0
    assert "implicit Jacobi identity (at truncation 4): holds" in capsys.readouterr().out
    assert main(["--config", path, "--task", "oracle-compare"]) == 0


def test_cli_reconstruct_trivial_bracket(tmp_path, capsys):
    raw = json.loads(RANK_TWO)
    raw.update(task="reconstruct", bracket="trivial")
    assert main(["--config", write(tmp_path, raw)]) == 0
    assert "isomorphism at truncation 5: yes" in capsys.readouterr().out


def test_cli_perturbed_constants_fail(tmp_path, capsys):
    raw = json.loads(json.dumps(SL2))
    raw["bracket"]["classical"][2][1] = ["0", "-3", "0"]
    raw["bracket"]["classical"][1][2] = ["0", "3", "0"]
    assert main(["--config", write(tmp_path, raw)]) == 1


def test_cli_unstable_exit(tmp_path, monkeypatch):
    from braidtower import cli
    from braidtower.quotient import UnstableTruncation

    def boom(cfg, rep):
        raise UnstableTruncation("no agreement within slack budget")
    monkeypatch.setitem(cli.DISPATCH, "rank", boom)
    assert main(["--config", write(tmp_path, RANK_TWO)]) == 3


def test_cli_matrices_bracket_reproduces_trivial_tower(tmp_path, capsys):
    from braidtower.catalog import rank_two_diagonal
    from braidtower.envelope import trivial_tower
    from braidtower.tensoralg import TruncatedTensorAlgebra
    run = trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 4))
    mats = [[[str(x) for x in row] for row in b.tolist()] for b in run.brackets]
    raw = json.loads(RANK_TWO)
    raw.update(degree=4, task="envelope", bracket={"matrices": mats})
    assert main(["--config", write(tmp_path, raw), "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["tables"]["stages"][-1]["graded_dims"] == [int(x) for x in run.final.quotient.graded_dims()]


def test_cli_zero_bracket_collapses_letters(tmp_path, capsys):
    raw = json.loads(RANK_TWO)
    raw.update(degree=3, task="envelope", bracket={"matrices": [[["0"] * 6, ["0"] * 6]]})
    assert main(["--config", write(tmp_path, raw)]) == 1
    assert "letters collapsed" in capsys.readouterr().out


def test_cli_bracket_shape_refused(tmp_path, capsys):
    raw = json.loads(RANK_TWO)
    raw.update(degree=3, task="envelope", bracket={"matrices": [[["0"] * 5, ["0"] * 5]]})
    assert main(["--config", write(tmp_path, raw)]) == 1
    assert "needs 6 columns" in capsys.readouterr().out
