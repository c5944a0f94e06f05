import json

import pytest

from hermden import enumerate as E
from hermden.cli import SpecError, main, parse_spec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_parse_one_line_spec():
    spec = parse_spec("case=inert p=3 n=2 rank=1 gram: [3]")
    L = spec.lattice()
    assert (spec.case, spec.p, spec.n, spec.rank, L.rank) == ("inert", 3, 2, 1, 1)


def test_parse_block_spec():
    text = "case = inert\np = 3\nn = 3\nrank = 2\nlabel = demo\ngram:\n1, 1/2 + 1/3*d\n1/2 - 1/3*d, 3\n"
    spec = parse_spec(text)
    assert spec.label == "demo" and spec.lattice().rank == 2
    split = parse_spec("case=split p=2 n=2\ngram:\n(2, 2)\n")
    assert split.lattice().rank == 1


def test_non_hermitian_names_entry():
    with pytest.raises(SpecError) as info:
        parse_spec("case=inert p=3 n=2 gram: [[0,1],[0,0]]")
    assert "(2,1)" in str(info.value) and info.value.field_name == "gram(2,1)"


@pytest.mark.parametrize(
    "text, field",
    [
        ("case=ramified p=2 n=2 gram: [2]", "case"),
        ("case=inert p=3 n=2 rank=2 gram: [3]", "rank"),
        ("case=inert p=3 gram: [3/x]", "gram(1,1)"),
        ("case=inert p=3 colour=red gram: [3]", "colour"),
        ("case=inert p=3", "gram"),
    ],
)
def test_spec_errors(text, field):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field_name == field


def test_ramified_scope_message(capsys):
    code, _, err = run(capsys, "den", "--case", "ramified", "--p", "2", "--gram", "[2]")
    assert code == 2 and "out of scope" in err


def test_den_records(capsys):
    code, out, _ = run(capsys, "den", "--case", "inert", "--p", "3", "--gram", "[3]", "--format", "records")
    (rec,) = records(out)
    assert code == 0 and rec["seed"] == 0
    assert rec["outputs"]["Den(q^2X,Lflat)"] == [["0/2", "1/1"], ["2/2", "3/1"]]


def test_dden_split_v_part(capsys):
    code, out, _ = run(capsys, "dden", "--case", "split", "--p", "3", "--gram", "[3]", "--format", "records")
    (rec,) = records(out)
    assert code == 0 and rec["outputs"]["dDen*_V"] == "0/1"


def test_scan_flips_at_threshold(capsys):
    code, out, _ = run(capsys, "scan", "--case", "inert", "--p", "3", "--gram", "[3]", "--vals", "1..6", "--format", "records")
    recs = records(out)
    assert code == 0 and len(recs) == 6
    holds = [r["outputs"]["holds"] for r in recs]
    assert holds == [False] + [True] * 5
    assert [r["outputs"]["above_threshold"] for r in recs] == holds


def test_geom_and_oracle(capsys):
    code, out, _ = run(capsys, "geom", "--case", "inert", "--p", "3", "--gram", "[3]", "--format", "records")
    (rec,) = records(out)
    assert code == 0 and rec["outputs"]["Int"] == "-2/1"
    code, out, _ = run(capsys, "oracle", "--format", "records")
    assert code == 0 and records(out)[0]["outputs"]["status"] == "pass"


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "dden", "--case", "inert", "--p", "3", "--gram", "[81]", "--cap", "1")
    assert code == 3 and "resource cap" in err


def test_cold_and_warm_runs_identical(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HERMDEN_CACHE", str(tmp_path))
    argv = ["verify", "--case", "split", "--p", "3", "--gram", "[9]", "--format", "records", "--seed", "5"]
    E.cache_clear()
    code, cold, _ = run(capsys, *argv)
    E.cache_clear()
    code2, warm, _ = run(capsys, *argv)
    assert code == code2 == 0 and cold == warm
    assert all(r["seed"] == 5 for r in records(cold))
    code, out, _ = run(capsys, "cache", "list", "--format", "records")
    assert records(out)[0]["outputs"]["entries"] > 0
    code, _, _ = run(capsys, "cache", "clear")
    assert code == 0 and not (tmp_path / "overlattices.pkl").exists()
