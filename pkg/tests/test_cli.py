import csv
import io
import json
import subprocess
import sys

import pytest

from strategies import E1_TEXT
from varcommittee.cli import main


@pytest.fixture
def e1(tmp_path):
    path = tmp_path / "e1.txt"
    path.write_text(E1_TEXT)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("rule, committee, score", [
    ("av", [0, 1], 2), ("threshold(maj)", [0, 1], 3), ("mrc", [0, 1], 2),
])
def test_compute_worked_examples(capsys, e1, rule, committee, score):
    code, out, _ = run(capsys, "compute", "--input", e1, "--rule", rule)
    doc = json.loads(out)
    assert code == 0
    assert doc["committee"] == committee and doc["size"] == len(committee) and doc["score"] == score
    assert doc["co_winners"] == 1 and doc["truncated"] is False
    assert set(doc) >= {"rule", "objective", "score", "size", "committee", "co_winners", "truncated"}


def test_compute_is_byte_stable(capsys, e1):
    args = ("compute", "--input", e1, "--rule", "qcsa", "--q", "1", "--objective", "all")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    assert json.loads(first)["listed"] == [[0], [1], [0, 1]]


def test_names_only_from_json(capsys, tmp_path, e1):
    path = tmp_path / "e1.json"
    path.write_text('{"m": 3, "voters": [[0], [0, 1], [1]], "names": ["a", "b", "c"]}')
    doc = json.loads(run(capsys, "compute", "--input", str(path), "--rule", "av")[1])
    assert doc["committee_names"] == ["a", "b"]
    assert "committee_names" not in json.loads(run(capsys, "compute", "--input", e1, "--rule", "av")[1])


def test_output_file(capsys, tmp_path, e1):
    out = tmp_path / "r.json"
    assert run(capsys, "compute", "--input", e1, "--rule", "av", "--out", str(out))[1] == ""
    assert json.loads(out.read_text())["committee"] == [0, 1]


def test_exit_codes(capsys, tmp_path, e1):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 1\n7\n")
    assert run(capsys, "compute", "--input", str(bad), "--rule", "av")[0] == 2
    assert run(capsys, "compute", "--input", str(tmp_path / "missing"), "--rule", "av")[0] == 2
    assert run(capsys, "compute", "--input", e1, "--rule", "borda")[0] == 4
    assert run(capsys, "compute", "--input", e1, "--rule", "qcsa")[0] == 4
    assert run(capsys, "compute", "--input", e1, "--rule", "mv(3)")[0] == 4
    wide = tmp_path / "wide.txt"
    wide.write_text("30 1\n0 1\n")
    assert run(capsys, "compute", "--input", str(wide), "--rule", "gnav(x3c-hard)")[0] == 3
    assert run(capsys, "experiment", "--rule", "av", "--p", "2")[0] == 4
    with pytest.raises(SystemExit):
        main(["compute", "--input", e1, "--rule", "av", "--bogus"])


def test_experiment_and_sweep_csv(capsys):
    code, out, _ = run(capsys, "experiment", "--rule", "av", "--trials", "50", "--seed", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1 and rows[0]["rule"] == "av"
    code, out, _ = run(capsys, "sweep", "--rule", "nav", "--var", "p", "--from", "0.05", "--to", "0.95",
                       "--step", "0.05", "--trials", "3")
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == 19
    code, out, _ = run(capsys, "sweep", "--rule", "qncsa", "--q", "0", "--var", "q", "--from", "0",
                       "--to", "1", "--step", "0.5", "--trials", "3")
    assert [r["q"] for r in csv.DictReader(io.StringIO(out))] == ["0", "1/2", "1"]
    assert run(capsys, "sweep", "--rule", "av", "--var", "q", "--from", "0", "--to", "1",
               "--step", "0.5", "--trials", "3")[0] == 4


def test_formats(capsys):
    code, out, _ = run(capsys, "formats")
    assert code == 0 and "plain" in out and "threshold" in out


def test_module_entry_point(e1):
    proc = subprocess.run([sys.executable, "-m", "varcommittee", "compute", "--input", e1, "--rule", "nav"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["committee"] == [0, 1]
