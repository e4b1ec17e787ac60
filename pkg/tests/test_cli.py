import csv
import json
import subprocess
import sys

import pytest

from pointdyn.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main

FAST = ["--horizon", "30"]


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_writes_a_report_and_orbit_csv(tmp_path, capsys):
    out, series = tmp_path / "r.json", tmp_path / "orbit.csv"
    code, _, _ = _run(["analyze", "--fixture", "E3.1:f", "--point", "1/2", "--property", "expansive,sensitive",
                       "--out", str(out), "--csv", str(series), *FAST], capsys)
    assert code == EXIT_OK
    rep = json.loads(out.read_text())
    assert [r["property"] for r in rep["results"]] == ["expansive", "sensitive"]
    assert rep["command"][:2] == ["pointdyn", "analyze"] and len(rep["results_sha256"]) == 64
    rows = list(csv.reader(series.open()))
    assert rows[0] == ["k", "point", "approx"] and rows[1][:2] == ["0", "1/2"] and len(rows) == 32


def test_reports_are_reproducible(tmp_path, capsys):
    argv = ["analyze", "--map", '{"kind": "pl", "breakpoints": [["0", "0"], ["1/2", "1/4"], ["1", "1"]]}',
            "--point", "1/3", "--property", "shadowable+", "--seed", "7", *FAST]
    digests = []
    for i in range(2):
        path = tmp_path / f"{i}.json"
        assert main([*argv, "--out", str(path)]) == EXIT_OK
        digests.append(json.loads(path.read_text())["results_sha256"])
    assert digests[0] == digests[1]


def test_map_file_and_positional_json_errors(tmp_path, capsys):
    good = tmp_path / "id.json"
    good.write_text('{"kind": "pl", "breakpoints": [["0", "0"], ["1", "1"]]}')
    code, out, _ = _run(["analyze", "--map", str(good), "--point", "1/2", "--property", "shadowable+", *FAST],
                        capsys)
    assert code == EXIT_OK and json.loads(out)["results"][0]["status"] == "refuted_at_scale"
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "pl",\n "breakpoints": [}')
    code, _, err = _run(["analyze", "--map", str(bad), "--point", "0", "--property", "expansive"], capsys)
    assert code == EXIT_USAGE and f"{bad}:2:" in err


@pytest.mark.parametrize("argv,needle", [
    (["analyze", "--fixture", "E3.1:f", "--point", "1/0", "--property", "expansive"], "--point"),
    (["analyze", "--fixture", "nope", "--point", "0", "--property", "expansive"], "nope"),
    (["analyze", "--fixture", "E3.1:f", "--point", "0", "--property", "expansive", "--delta-sweep", "1/4,,1/8"],
     "--delta-sweep: entry 2 is empty"),
    (["analyze", "--fixture", "E3.1:f", "--map", "{}", "--point", "0", "--property", "expansive"], "exactly one"),
    (["converge", "--family", '{"family": "E3.3", "params": {"k": 1}}'], "no parameters"),
    (["verify", "E9.9"], "E9.9"),
    (["frobnicate"], ""),
    (["analyze", "--point", "0"], ""),
])
def test_usage_errors_exit_2(argv, needle, capsys):
    code, _, err = _run(argv, capsys)
    assert code == EXIT_USAGE
    assert needle in err


def test_bad_thread_count(monkeypatch, capsys):
    monkeypatch.setenv("POINTDYN_THREADS", "zero")
    code, _, err = _run(["verify", "EN1", "--quiet"], capsys)
    assert code == EXIT_USAGE and "POINTDYN_THREADS" in err


def test_converge_reports_the_hierarchy(tmp_path, capsys):
    series = tmp_path / "sup.csv"
    code, out, _ = _run(["converge", "--family", "E3.13", "--csv", str(series)], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)["results"][0]
    assert rep["hierarchy_ok"] and rep["modes"]["pc"]["status"] == "confirmed_at_scale"
    assert rep["modes"]["uc"]["status"] == "refuted_at_scale"
    rows = list(csv.reader(series.open()))
    assert rows[0] == ["n", "sup_lower", "sup_upper", "approx"] and rows[1][1] == "1/1"


def test_verify_passes_on_a_small_fixture(capsys):
    code, out, err = _run(["verify", "EN1"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["results"][-1] == {"summary": {"pass": 2, "fail": 0, "inconclusive": 0}}
    assert "2 passed, 0 failed" in err


def test_theorem_refusal_and_agreement(capsys):
    code, out, _ = _run(["theorem", "--clause", "shadowable+", "--family", "E3.9", "--point", "1/2", *FAST], capsys)
    assert code == EXIT_OK and json.loads(out)["results"][0]["refused"] == "oc"
    code, out, _ = _run(["theorem", "--clause", "alpha-persistent", "--family", "const:identity", "--point", "1/2",
                         "--harness-horizon", "30", *FAST], capsys)
    assert code == EXIT_OK and json.loads(out)["results"][0]["agree"]
    assert EXIT_MISMATCH == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pointdyn", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "analyze" in proc.stdout
