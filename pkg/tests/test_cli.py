import io
import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from lmwb.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from lmwb.seq import Seq
from lmwb.words import parse_word_text

GOLDEN = Path(__file__).parent / "golden"


def schema(name):
    return json.loads(resources.files("lmwb").joinpath("schemas", name).read_text())


def lmwb(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue().strip()


def test_eval_example():
    code, text = lmwb("-n", "2", "eval", "y[10]", "1001(0)")
    assert code == EXIT_OK
    assert Seq.parse(text, 2) == Seq.parse("1010(0)", 2)  # printed canonically as 101(0)


def test_eq_example():
    assert lmwb("-n", "3", "eq", "y[00]", "x0 y[0] x0'") == (EXIT_OK, "EQUAL")
    code, text = lmwb("-n", "2", "eq", "y[00]", "x0' y[0] x0")
    assert code == EXIT_FAIL and text.startswith("DIFFERENT")


def test_euler_example():
    assert lmwb("-n", "2", "cluster", "--m", "2", "--type2", "1", "euler") == (EXIT_OK, "1")


def test_flags_after_subcommand():
    assert lmwb("eval", "-n", "2", "x0", "(0)")[0] == EXIT_OK
    code, text = lmwb("-n", "2", "abel", "--map", "yG", "y[0]", "--json")
    assert code == EXIT_OK and json.loads(text)["result"] == [0, 0, 1]


@pytest.mark.parametrize("argv,kind", [
    (["-n", "2", "eval", "y[2]", "(0)"], "ARITY_ERROR"),
    (["-n", "2", "eval", "z[0]", "(0)"], "PARSE_ERROR"),
    (["-n", "11", "eval", "x0", "(0)"], "USAGE_ERROR"),
    (["-n", "2", "cluster", "--m", "2", "--type2", "5", "euler"], "USAGE_ERROR"),
    (["-n", "2", "hnn", "--case", "N5", "conjugate", "y[0]"], "USAGE_ERROR"),
    (["-n", "2", "hgraph", "--list", "/nonexistent", "match"], "USAGE_ERROR"),
])
def test_usage_errors(argv, kind, capsys):
    code, _ = lmwb(*argv)
    assert code == EXIT_USAGE
    assert capsys.readouterr().err.startswith(kind)


def test_argparse_errors_exit_3():
    with pytest.raises(SystemExit) as exc:
        run(["eval", "x0", "(0)"])  # -n is required
    assert exc.value.code == EXIT_USAGE


def test_golden_cluster_json():
    code, text = lmwb("-n", "2", "cluster", "--m", "2", "--type2", "1", "json")
    assert code == EXIT_OK
    assert text + "\n" == (GOLDEN / "cluster_m2_t1.json").read_text()
    data = json.loads(text)
    jsonschema.validate(data, schema("cluster.schema.json"))
    assert sorted(c["dim"] for c in data["cells"]) == [0] * 4 + [1] * 5 + [2] * 2


@pytest.mark.parametrize("argv", [
    ["-n", "2", "eval", "y[10]", "1001(0)"],
    ["-n", "3", "eq", "y[00]", "x0 y[0] x0'"],
    ["-n", "3", "std", "y[0] x0 y[0]'"],
    ["-n", "3", "abel", "x[0;00]"],
    ["-n", "3", "abel", "--map", "yGy", "--verify"],
    ["-n", "2", "rel", "--variant", "yG", "--family", "3", "--samples", "10"],
    ["-n", "2", "hnn", "--case", "N7", "witness"],
    ["-n", "2", "hnn", "--case", "F2", "verify", "--depth", "3"],
    ["-n", "2", "hnn", "--case", "BT", "conjugate", "x1"],
    ["-n", "2", "cluster", "--m", "3", "--type2", "1,2", "cells"],
    ["-n", "2", "special", "y[00]+ y[01]-"],
    ["-n", "2", "support", "x0 x1'"],
    ["-n", "3", "dense", "01"],
])
def test_json_reports_validate(argv):
    code, text = lmwb(*argv, "--json")
    assert code == EXIT_OK, text
    report = json.loads(text)
    jsonschema.validate(report, schema("report.schema.json"))
    assert report["status"] == "ok" and report["command"] == argv[2]


def test_cells_and_dot():
    code, text = lmwb("-n", "2", "cluster", "--m", "2", "--type2", "1", "cells")
    assert text.splitlines() == ["dim 0: 4", "dim 1: 5", "dim 2: 2"]
    code, text = lmwb("-n", "2", "cluster", "--m", "2", "dot")
    assert text.count("--") == 4


def test_special_negative():
    assert lmwb("-n", "2", "special", "y[00]+ y[01]+") == (EXIT_FAIL, "not special")


def test_hgraph(tmp_path):
    f = tmp_path / "list.txt"
    f.write_text("# tau_1, tau_2\ny[00]+ y[01]-\ny[10]+ y[11]-\n", encoding="utf-8")
    code, text = lmwb("-n", "2", "hgraph", "--list", str(f), "match")
    assert code == EXIT_OK and text.endswith("MATCH")
    code, text = lmwb("-n", "2", "hgraph", "--list", str(f), "build")
    assert code == EXIT_OK and text.count("--") == 5
    f.write_text("y[00]+ y[01]-\ny[10]- y[11]+\n", encoding="utf-8")
    assert lmwb("-n", "2", "hgraph", "--list", str(f), "match")[0] == EXIT_USAGE  # not proper


CORPUS = ["x0 y[10]'", "x3", "x[0;011] y[] y[0]' x1'", "e", "y[00]+ y[01]-", "x[1;2] y[21]", "x12'"]


@pytest.mark.parametrize("text", CORPUS)
def test_parse_round_trip(text):
    n = 3
    w = parse_word_text(text, n)
    assert parse_word_text(str(w), n) == w


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lmwb.cli", "-n", "2", "cluster", "--m", "1", "euler"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
