import json
import os
import subprocess
import sys

import pytest

from ia3.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_feas_exit_codes(capsys):
    code, out, _ = run(capsys, "feas", "--M", "3", "--N", "5", "--d", "2")
    assert code == 0 and out.startswith("feasible")
    code, out, _ = run(capsys, "feas", "--M", "4", "--N", "8", "--d", "3")
    assert code == 1 and "infeasible (r=1)" in out


def test_feas_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["feas", "--M", "0", "--N", "2", "--d", "1"])
    assert info.value.code == 2


def test_feas_json(capsys):
    code, out, _ = run(capsys, "feas", "--M", "3", "--N", "5", "--d", "2", "--json")
    assert json.loads(out)["binding_r"][:2] == [1, 2]


def test_construct_then_verify(tmp_path, capsys):
    sol = tmp_path / "s.json"
    code, out, _ = run(capsys, "construct", "--M", "3", "--N", "5", "--d", "2", "--seed", "7", "--out", str(sol))
    assert code == 0 and "variant=general-case1 r=1" in out
    assert json.loads(sol.read_text())["seed"] == 7
    code, out, _ = run(capsys, "verify", "--solution", str(sol))
    assert code == 0 and json.loads(out)["pass"] is True


def test_construct_eigen_and_refusal(capsys):
    code, out, _ = run(capsys, "construct", "--M", "2", "--N", "2", "--d", "1", "--seed", "7")
    assert code == 0 and "variant=eigen" in out
    code, out, _ = run(capsys, "construct", "--M", "1", "--N", "2", "--d", "1")
    assert code == 1 and "refused" in out


def test_construct_with_channel_file(tmp_path, capsys):
    chf, sol = tmp_path / "ch.json", tmp_path / "s.json"
    assert run(capsys, "gen", "--M", "5", "--N", "3", "--seed", "4", "--out", str(chf))[0] == 0
    code, out, _ = run(capsys, "construct", "--channels", str(chf), "--d", "2", "--out", str(sol))
    assert code == 0
    code, _, _ = run(capsys, "verify", "--channels", str(chf), "--solution", str(sol))
    assert code == 0
    code, _, err = run(capsys, "construct", "--channels", str(chf), "--M", "4", "--d", "2")
    assert code == 2 and "disagrees" in err


def test_verify_detects_zeroed_column(tmp_path, capsys):
    chf, sol = tmp_path / "ch.json", tmp_path / "s.json"
    run(capsys, "gen", "--M", "3", "--N", "5", "--seed", "1", "--out", str(chf))
    run(capsys, "construct", "--channels", str(chf), "--d", "2", "--out", str(sol))
    doc = json.loads(sol.read_text())
    for row in doc["U"][0]:
        row[0] = [0.0, 0.0]
    sol.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--channels", str(chf), "--solution", str(sol))
    assert code == 1 and json.loads(out)["dims_U"][0] == 1


def test_verify_truncated_json(tmp_path, capsys):
    chf, sol = tmp_path / "ch.json", tmp_path / "s.json"
    run(capsys, "gen", "--M", "3", "--N", "5", "--seed", "1", "--out", str(chf))
    run(capsys, "construct", "--channels", str(chf), "--d", "2", "--out", str(sol))
    sol.write_text(sol.read_text()[:100])
    code, _, err = run(capsys, "verify", "--channels", str(chf), "--solution", str(sol))
    assert code == 2 and "parse error" in err


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--M", "4", "--N", "8", "--d", "3")
    cert = json.loads(out)
    assert code == 1 and cert["r"] == 1 and cert["rank"] == 8
    code, out, _ = run(capsys, "certify", "--M", "3", "--N", "5", "--d", "2")
    assert code == 0 and "no certificate" in out


def test_region_csv(tmp_path, capsys):
    code, out, _ = run(capsys, "region", "--d", "1", "--m-max", "6", "--n-max", "6", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 37
    assert "1,2,1,false,1" in out.splitlines()
    code, out, _ = run(capsys, "region", "--d", "2", "--m-max", "6", "--n-max", "6")
    assert "3,5,2,true,2" in out.splitlines()


def test_region_bytes_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        run(capsys, "region", "--d", "2", "--m-max", "8", "--n-max", "8", "--format", "svg", "--out", str(p))
    assert a.read_bytes() == b.read_bytes() and a.read_text().startswith("<svg")


def test_region_bad_format():
    with pytest.raises(SystemExit) as info:
        main(["region", "--d", "1", "--m-max", "3", "--n-max", "3", "--format", "png"])
    assert info.value.code == 2


def test_construct_bytes_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(capsys, "construct", "--M", "7", "--N", "10", "--d", "4", "--seed", "2", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--m-max", "5", "--n-max", "5", "--r-max", "3")
    assert code == 0 and "skipped 10 pairs with M > N" in out
    code, out, _ = run(capsys, "selftest", "--r-max", "0", "--m-max", "3", "--n-max", "3")
    assert code == 0


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "ia3", "feas", "--M", "2", "--N", "2", "--d", "1"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and "feasible" in res.stdout


def test_numpy_fallback_path():
    code = (
        "from ia3 import _kernels, exact_rank_specialized, is_feasible;"
        "assert not _kernels.HAS_NUMBA;"
        "assert exact_rank_specialized(5, 7, 4);"
        "assert is_feasible(3, 5, 2).feasible and not is_feasible(4, 8, 3).feasible"
    )
    env = dict(os.environ, IA3_DISABLE_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
