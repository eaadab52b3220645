import json
import shutil
import subprocess
import sys

import pytest

from polypreserve.cli import EXIT_FORMAT, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, run


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_usage_errors(capsys):
    assert _run(capsys)[0] == EXIT_USAGE
    assert _run(capsys, "nonsense")[0] == EXIT_USAGE
    assert _run(capsys, "cert", "bernstein")[0] == EXIT_USAGE
    assert _run(capsys, "cgroup", "exp", "--a")[0] == EXIT_USAGE


def test_format_error_exit(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", "{oops")
    code, _, err = _run(capsys, "cert", "sos", "--poly", bad)
    assert code == EXIT_FORMAT and "bad.json:1:2" in err
    wrong = _write(tmp_path, "w.json", {"n": 1, "terms": [{"alpha": [0, 0], "num": "1"}]})
    code, _, err = _run(capsys, "cert", "sos", "--poly", wrong)
    assert code == EXIT_FORMAT and "$.terms[0].alpha" in err


def test_numeric_error_exit(tmp_path, capsys):
    p = _write(tmp_path, "p.json", [0, 1])
    assert _run(capsys, "cert", "lukacs", "--poly", p)[0] == EXIT_NUMERIC
    assert _run(capsys, "cert", "lukacs", "--poly", p, "--interval", "1", "0")[0] == EXIT_NUMERIC


def test_failed_verdict_is_still_success(tmp_path, capsys):
    p = _write(tmp_path, "p.json", [-1, 0, 1])
    code, out, _ = _run(capsys, "cert", "sos", "--poly", p)
    assert code == EXIT_OK and json.loads(out)["refusal"] == "negative"


def test_cert_output_is_deterministic(tmp_path, capsys):
    p = _write(tmp_path, "p.json", [3, 0, -2, 0, 1])
    first = _run(capsys, "cert", "sos", "--poly", p)[1]
    second = _run(capsys, "cert", "sos", "--poly", p)[1]
    assert first == second
    doc = json.loads(first)
    assert doc["kind"] == "R" and doc["residual"] <= 1e-30


def test_out_option(tmp_path, capsys):
    p = _write(tmp_path, "p.json", [0, 1, -1])
    out = tmp_path / "cert.json"
    code, stdout, _ = _run(capsys, "-o", str(out), "cert", "bernstein", "--poly", p)
    assert code == EXIT_OK and stdout == ""
    assert json.loads(out.read_text())["exact"] is True


def test_cgroup_roundtrip(tmp_path, capsys):
    a = _write(tmp_path, "a.json", {"n": 1, "order": 3, "coeffs": [{"alpha": [1], "poly": ["1/2"]}, {"alpha": [2], "poly": [2]}]})
    code, out, _ = _run(capsys, "cgroup", "exp", "--a", a)
    assert code == EXIT_OK
    e = _write(tmp_path, "e.json", out)
    code, out, _ = _run(capsys, "cgroup", "log", "--a", e)
    assert json.loads(out)["order"] == 3
    coeffs = {tuple(c["alpha"]): c["poly"]["terms"][0]["num"] + "/" + c["poly"]["terms"][0]["den"] for c in json.loads(out)["coeffs"]}
    assert coeffs == {(1,): "1/2", (2,): "2/1"}


def test_moments_check_csv(tmp_path, capsys):
    s = _write(tmp_path, "s.json", [1, 0, 1, 0, 3])
    code, out, _ = _run(capsys, "moments", "check", "--seq", s, "--csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "order,min_eigenvalue,verdict" and len(lines) == 4


def test_moments_recover(tmp_path, capsys):
    s = _write(tmp_path, "s.json", ["1", "1/2", "5/2", "7/2"])
    code, out, _ = _run(capsys, "moments", "recover", "--seq", s, "--atoms", "2")
    assert code == EXIT_OK
    assert len(json.loads(out)["atoms"]) == 2


def test_preserve_heat(tmp_path, capsys):
    op = _write(tmp_path, "heat.json", {"n": 1, "order": 2, "coeffs": [{"alpha": [0], "poly": [1]}, {"alpha": [2], "poly": ["-1/10"]}]})
    code, out, _ = _run(capsys, "preserve", "check", "--op", op)
    assert code == EXIT_OK and json.loads(out)["verdict"] == "fail"


def test_semigroup_evolve(tmp_path, capsys):
    op = _write(tmp_path, "d.json", {"n": 1, "order": 1, "coeffs": [{"alpha": [1], "poly": [1]}]})
    p = _write(tmp_path, "p.json", [0, 0, 1])
    code, out, _ = _run(capsys, "semigroup", "evolve", "--op", op, "--poly", p, "-t", "2")
    assert code == EXIT_OK
    terms = {tuple(t["alpha"]): t["num"] for t in json.loads(out)["terms"]}
    assert terms == {(0,): "4", (1,): "4", (2,): "1"}


def test_curve_csv(capsys):
    code, out, _ = _run(capsys, "semigroup", "curve", "--model", "quadratic", "--a", "1", "--t", "0", "5", "--steps", "50")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "t,criterion" and len(lines) == 52
    assert lines[1] == "0,0"


@pytest.mark.parametrize("target", ["prop71", "exm74", "prop73"])
def test_reproduce_targets(target, capsys):
    code, out, _ = _run(capsys, "reproduce", target)
    assert code == EXIT_OK and json.loads(out)["pass"] is True


def test_console_script_runs():
    exe = shutil.which("polypreserve")
    cmd = [exe] if exe else [sys.executable, "-m", "polypreserve.cli"]
    r = subprocess.run(cmd + ["reproduce", "prop73"], capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and json.loads(r.stdout)["pass"] is True
