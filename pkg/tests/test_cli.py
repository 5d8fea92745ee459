import json
import subprocess
import sys

import pytest

from ballistic.cli import main
from ballistic.enumeration import load_tables


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_triple(capsys):
    code, out, _ = run(capsys, "simulate", "--speeds", "0,1,0,-1")
    assert code == 0
    assert out.splitlines() == ["t=1 x=2 {1,2,3}", "xi=0,2,2,2"]


def test_simulate_pair_and_single(capsys):
    assert run(capsys, "simulate", "--speeds", "0,-1")[1].splitlines() == ["t=1 x=0 {0,1}", "xi=2,2"]
    assert run(capsys, "simulate", "--speeds", "0")[1].splitlines() == ["xi=0"]


def test_simulate_half_integer_times(capsys):
    code, out, _ = run(capsys, "simulate", "--speeds", "1,-1")
    assert out.splitlines()[0] == "t=0.5 x=0.5 {0,1}"


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", "--speeds", "0,1,0,-1", "--json")
    doc = json.loads(out)
    assert doc["xi"] == [0, 2, 2, 2]
    assert doc["events"] == [{"time2": 2, "pos2": 4, "participants": [1, 2, 3]}]


def test_simulate_parse_error(capsys):
    code, _, err = run(capsys, "simulate", "--speeds", "0,3")
    assert code == 1 and "error" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--level", "1", "--p", "1.5"])
    assert exc.value.code == 1


def test_threshold_levels_0_and_1(capsys):
    for level, expect in (("0", 0.5), ("1", 1 / 3)):
        code, out, _ = run(capsys, "threshold", "--level", level)
        doc = json.loads(out)
        assert code == 0
        assert set(doc) == {"level", "depth", "p_star", "tol"}
        assert doc["p_star"] == pytest.approx(expect, abs=1e-6)
        assert doc["depth"] is None


def test_heuristic(capsys):
    code, out, _ = run(capsys, "heuristic")
    doc = json.loads(out)
    assert doc["p_star"] == pytest.approx(0.2450, abs=5e-4)
    assert doc["literal_root"] == pytest.approx(0.2117, abs=5e-4)
    code, out, _ = run(capsys, "heuristic", "--mode", "literal")
    assert json.loads(out)["p_star"] == pytest.approx(0.2117, abs=5e-4)


def test_enumerate_depth2_matches_golden(capsys, tmp_path, golden2):
    out_file = tmp_path / "t2.json"
    code, _, err = run(capsys, "enumerate", "--depth", "2", "--threads", "1", "--out", str(out_file))
    assert code == 0 and "nodes" in err
    assert load_tables(out_file).same_counts(golden2)


def test_enumerate_thread_count_does_not_change_payload(capsys, tmp_path):
    files = []
    for t in ("1", "8"):
        f = tmp_path / f"t6_{t}.json"
        assert run(capsys, "enumerate", "--depth", "6", "--threads", t, "--out", str(f))[0] == 0
        doc = json.loads(f.read_text())
        doc.pop("meta")
        files.append(doc)
    assert files[0] == files[1]


def test_enumerate_to_stdout(capsys, monkeypatch):
    monkeypatch.delenv("BALLISTIC_TABLE_DIR", raising=False)
    code, out, _ = run(capsys, "enumerate", "--depth", "3", "--threads", "1")
    assert json.loads(out)["depth"] == 3


def test_bound_sweep_csv(capsys, tmp_path):
    f = tmp_path / "t6.json"
    run(capsys, "enumerate", "--depth", "6", "--threads", "1", "--out", str(f))
    code, out, _ = run(capsys, "bound", "--level", "2", "--sweep", "0.2:0.4:5", "--tables", str(f))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "p,level,depth,value" and len(lines) == 6
    assert all(line.split(",")[2] == "6" for line in lines[1:])


def test_bound_single(capsys, tmp_path):
    code, out, _ = run(capsys, "bound", "--level", "1", "--p", "0.3333333333333333")
    assert json.loads(out)["value"] == pytest.approx(1.0)


def test_bound_needs_p_or_sweep(capsys):
    assert run(capsys, "bound", "--level", "1")[0] == 1
    assert run(capsys, "bound", "--level", "1", "--sweep", "0.1:0.2")[0] == 1


def test_table_dir_env_caches(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BALLISTIC_TABLE_DIR", str(tmp_path))
    code, out, err = run(capsys, "gamma-tail", "--p", "0.3", "--depth", "4")
    assert code == 0 and (tmp_path / "tables_depth4.json").exists()
    first = json.loads(out)
    code, out, err = run(capsys, "gamma-tail", "--p", "0.3", "--depth", "4")
    assert json.loads(out) == first and "computing" not in err


def test_missing_table_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "gamma-tail", "--p", "0.3", "--tables", str(tmp_path / "nope.json"))
    assert code == 2


def test_corrupt_table_file_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    assert run(capsys, "threshold", "--level", "2", "--tables", str(f))[0] == 2


def test_invariant_violation_exit_3(capsys, tmp_path):
    from ballistic.enumeration import CountTables, save_tables

    f = tmp_path / "b.json"
    save_tables(CountTables(2, an={2: {}}, aprime={2: {0: 100}}, gamma_minus={2: {}}), f)
    assert run(capsys, "bound", "--level", "3", "--p", "0.5", "--tables", str(f))[0] == 3


def test_mc_requires_seed():
    with pytest.raises(SystemExit) as exc:
        main(["mc", "survival", "--p", "0.3"])
    assert exc.value.code == 1


def test_mc_commands(capsys):
    code, out, _ = run(capsys, "mc", "check", "--p", "0.3", "--n", "2", "--reps", "2000",
                       "--seed", "1", "--depth", "3")
    assert code == 0 and json.loads(out)["n"] == 2
    code, out, _ = run(capsys, "mc", "survival", "--p", "1", "--window", "20", "--reps", "10",
                       "--seed", "1", "--threads", "1")
    assert json.loads(out)["survival"] == 1.0
    code, out, _ = run(capsys, "mc", "offspring", "--p", "1", "--horizon", "50", "--reps", "10",
                       "--seed", "1", "--threads", "1")
    assert json.loads(out)["mean_lower"] == 2.0


def test_mc_deterministic(capsys):
    args = ("mc", "offspring", "--p", "0.3", "--horizon", "500", "--reps", "200", "--seed", "4",
            "--threads", "1")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ballistic", "simulate", "--speeds", "0,1,-1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines() == ["t=0.5 x=1.5 {1,2}", "xi=0,2,2"]
