import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ffembed.cli import CSV_HEADER, ExperimentConfig, main, run
from ffembed.count import count_all
from ffembed.errors import BadDensity, MissingParam
from ffembed.graphdef import chain
from ffembed.space import PointSet, Space, pointset_from_text


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_count_full_f3(capsys):
    code, out, _ = invoke(capsys, "count", "--q", "3", "--d", "2", "--graph", "chain:2")
    assert code == 0
    assert out.splitlines()[0] == ",".join(CSV_HEADER)
    (row,) = rows(out)
    assert (row["total"], row["nondeg"], row["degen"], row["size"]) == ("144", "108", "36", "9")
    assert Fraction(row["bound"]) == Fraction(9**3, 9)


def test_audit_trials(capsys):
    code, out, _ = invoke(
        capsys, "audit", "--q", "7", "--gen", "random", "--density", "0.5", "--seed", "1",
        "--theorem", "IR_PAIR_COUNT", "--trials", "20",
    )
    reports = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(reports) == 20
    assert all(r["verdict"] == "HOLDS" for r in reports)
    assert len({r["instance"]["digest"] for r in reports}) > 1


def test_sweep_is_monotone(capsys):
    code, out, _ = invoke(capsys, "sweep", "--q", "5", "--d", "3", "--graph", "simplex:2", "--seed", "3")
    table = rows(out)
    assert code == 0 and len(table) == 10
    totals = [int(r["total"]) for r in table]
    assert totals == sorted(totals)
    assert [r["density"] for r in table] == [str(Fraction(k, 10)) for k in range(1, 11)]
    assert all(int(r["total"]) == int(r["nondeg"]) + int(r["degen"]) for r in table)


def test_gen_examples(capsys):
    _, out, _ = invoke(capsys, "gen", "--q", "13", "--gen", "isotropic")
    assert len(pointset_from_text(out)) == 13
    _, out, _ = invoke(capsys, "gen", "--q", "5", "--gen", "random", "--density", "1", "--seed", "0")
    assert pointset_from_text(out) == PointSet.full(Space.of(5, 2))
    _, out, _ = invoke(capsys, "gen", "--q", "5", "--gen", "sphere", "--t", "0")
    assert len(pointset_from_text(out)) == 9


def test_gen_is_byte_deterministic(capsys):
    args = ["gen", "--q", "7", "--d", "3", "--gen", "random", "--density", "0.3", "--seed", "11"]
    assert invoke(capsys, *args)[1] == invoke(capsys, *args)[1]
    other = invoke(capsys, *args[:-1], "12")[1]
    assert other != invoke(capsys, *args)[1]


def test_file_round_trip(tmp_path, capsys):
    path = tmp_path / "e.txt"
    invoke(capsys, "gen", "--q", "5", "--gen", "product", "--density", "0.6", "--seed", "2", "--out", str(path))
    E = pointset_from_text(path.read_text())
    _, out, _ = invoke(capsys, "count", "--set", str(path), "--graph", "chain:2")
    (row,) = rows(out)
    res = count_all(chain(2), E)
    assert (int(row["total"]), int(row["nondeg"])) == (res.total, res.nondegenerate)


def test_profile_and_shave(capsys):
    _, out, _ = invoke(capsys, "profile", "--q", "3", "--graph", "edge")
    table = rows(out)
    assert len(table) == 9 and all(r["count"] == "4" for r in table)
    _, out, _ = invoke(capsys, "shave", "--q", "5", "--lambda", "8")
    assert "# construction: shave_one_edge" in out
    _, out, _ = invoke(capsys, "shave", "--q", "5", "--mode", "general", "--graph", "edge",
                       "--lambda1", "1/16", "--lambda2", "8")
    assert "# construction: general_shave" in out
    _, out, _ = invoke(capsys, "shave", "--q", "5", "--mode", "cap", "--lambda", "2")
    assert "# construction: degree_cap" in out


def test_corpus_audit(capsys):
    code, out, _ = invoke(capsys, "audit", "--q", "3", "--corpus")
    verdicts = [json.loads(line)["verdict"] for line in out.splitlines()]
    assert code == 0 and "VIOLATED" not in verdicts and "VACUOUS" in verdicts


@pytest.mark.parametrize(
    "argv,error",
    [
        (["count", "--q", "4"], "NotOddPrimePower"),
        (["gen", "--q", "5", "--gen", "random", "--density", "0.5"], "MissingParam"),
        (["gen", "--q", "5", "--gen", "random", "--density", "1.5", "--seed", "1"], "BadDensity"),
        (["gen", "--q", "7", "--gen", "isotropic"], "NoSqrtMinusOne"),
        (["count", "--q", "13", "--graph", "chain:6", "--budget", "100"], "BudgetExceeded"),
        (["count", "--q", "5", "--graph", "nonsense"], "BadParams"),
    ],
)
def test_errors_are_json_on_stderr(capsys, argv, error):
    code, out, err = invoke(capsys, *argv)
    assert code != 0 and out == ""
    record = json.loads(err.strip())
    assert record["error"] == error


def test_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("FFEMBED_BUDGET", "100")
    code, _, err = invoke(capsys, "count", "--q", "13", "--graph", "chain:6")
    assert code == 2 and json.loads(err)["error"] == "BudgetExceeded"


def test_config_validation():
    with pytest.raises(MissingParam):
        ExperimentConfig(task="gen", q=5, generator="random")
    with pytest.raises(BadDensity):
        ExperimentConfig(task="gen", q=5, generator="random", seed=1, density=Fraction(0))
    buf = io.StringIO()
    assert run(ExperimentConfig(task="count", q=3, graph="edge"), stdout=buf) == 0
    assert rows(buf.getvalue())[0]["total"] == "36"


def test_console_entry_point():
    cmd = [sys.executable, "-m", "ffembed.cli", "gen", "--q", "3", "--gen", "random", "--density", "1/2",
           "--seed", "5"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"3 2\n")
