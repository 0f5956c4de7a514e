import io
import json
from importlib import resources

import pytest

from aitlab.cli import main

jsonschema = pytest.importorskip("jsonschema")

from conftest import FIXTURES  # noqa: E402

CNF = str(FIXTURES / "small_sat.cnf")

CASES = {
    "table": ["table", "--expr", "x1 & x2 | x3"],
    "count": ["count", "--dimacs", CNF],
    "posp": ["posp", "--expr", "x1 | x2", "--threshold", "1/2"],
    "sat": ["sat", "--expr", "x1 & !x1"],
    "sharpsat": ["sharpsat", "--dimacs", CNF, "--via-posp", "--verify"],
    "bd": ["bd", "--expr", "x1 | x2", "--g0", "1/4", "--g1", "3/4", "--check-promise"],
    "entropy": ["entropy", "--gamma", "1/4"],
    "classify": ["classify", "--expr", "x1 & x2 & x3 & x4"],
    "sample": ["sample", "--n", "6", "--count", "50", "--seed", "3"],
    "kexact": ["kexact", "--x", "1"],
    "uprob": ["uprob", "--x", "0", "--mode", "prefix"],
    "kraft": ["kraft", "--max-len", "16"],
    "codinggap": ["codinggap", "--up-to", "3", "--max-len", "14"],
    "census": ["census", "--len", "8"],
    "predict": ["predict", "--prefix", "0000"],
    "sseries": ["sseries", "--measure", "zeros", "--horizon", "10"],
    "statdist": ["statdist", "--p1", "0.1", "--p2", "0.9"],
    "theta": ["theta", "--theta1", "0", "--theta2", "1.5707963267948966"],
    "pack": ["pack", "--p1", "0.1", "--p2", "0.9", "--m", "10000"],
    "mintrials": ["mintrials", "--p2", "0.125"],
    "mc": ["mc", "--p-true", "0", "--p1", "0", "--p2", "0.00390625", "--m", "255",
           "--runs", "2000", "--seed", "7"],
}


def run(argv):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


def schema(name):
    text = resources.files("aitlab").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


@pytest.fixture(autouse=True)
def fixed_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


def test_every_subcommand_has_a_case():
    names = {p.name[:-5] for p in resources.files("aitlab").joinpath("schemas").iterdir()
             if p.name.endswith(".json")}
    assert names == set(CASES)


@pytest.mark.parametrize("name", sorted(CASES))
def test_output_validates_against_schema(name):
    code, text = run(CASES[name])
    assert code == 0, text
    data = json.loads(text)
    jsonschema.validate(data, schema(name))
    manifest = data["manifest"]
    assert manifest["subcommand"] == name
    assert "threads" not in manifest["params"]


@pytest.mark.parametrize("name", ["mc", "sample", "table", "pack", "kraft"])
def test_byte_identical_across_runs_and_threads(name):
    outputs = {run(CASES[name] + ["--threads", str(t)])[1] for t in (1, 1, 4)}
    assert len(outputs) == 1


def test_sat_example():
    code, text = run(["sat", "--expr", "x1 & !x1"])
    assert code == 0 and json.loads(text)["satisfiable"] is False


def test_mintrials_example():
    assert json.loads(run(["mintrials", "--p2", "0.125"])[1])["m"] == 7


def test_unresolved_exit_code():
    code, text = run(["kexact", "--x", "0000", "--max-len", "4"])
    assert code == 3
    data = json.loads(text)
    jsonschema.validate(data, schema("kexact"))


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["sat", "--bogus"],
                                  ["mc", "--p1", "0"]])
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv)[0] == 1
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["sat", "--expr", "x1 &"],
    ["count", "--dimacs", str(FIXTURES / "missing.cnf")],
    ["mintrials", "--p2", "0"],
    ["bd", "--expr", "x1", "--n", "2", "--g0", "1/4", "--g1", "3/4", "--check-promise"],
])
def test_input_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_table_out_file(tmp_path):
    out = tmp_path / "t.bin"
    code, text = run(["table", "--expr", "x1 & x2 | x3", "--out", str(out)])
    assert code == 0
    assert out.read_bytes() == bytes([0b11111000])
    assert json.loads((tmp_path / "t.bin.json").read_text())["k"] == 5


@pytest.mark.parametrize("argv, header", [
    (["kraft", "--max-len", "8", "--csv"], "max_len,num,den,value"),
    (["census", "--len", "8", "--csv"], "k,count,bound"),
    (["sseries", "--horizon", "5", "--csv"], "n,S_n,cumulative"),
    (["pack", "--p1", "0.1", "--p2", "0.9", "--ms", "100", "10000", "--csv"],
     "m,packing_count,count_over_sqrt_m"),
])
def test_csv_output(argv, header):
    code, text = run(argv)
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == header and len(lines) > 1


def test_pack_csv_values():
    text = run(["pack", "--p1", "0.1", "--p2", "0.9", "--ms", "10000", "--csv"])[1]
    assert text.splitlines()[1].startswith("10000,92,")
