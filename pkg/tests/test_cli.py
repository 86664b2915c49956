import hashlib
import json
import subprocess
import sys

import pytest

from kzmodp.cli import _canonical, parse_partition, run
from kzmodp.poly import PolyVector

import golden

BASE = ["--p", "5", "--q", "3", "--n", "4"]


def payload(text):
    return json.loads(text)["result"]


def test_config_ok():
    code, text = run(["config"] + BASE)
    assert code == 0
    res = payload(text)
    assert res["rank"] == 2 and res["d"] == 2


@pytest.mark.parametrize(
    "args",
    [
        ["config", "--p", "4", "--q", "3", "--n", "4"],
        ["config", "--p", "5", "--q", "3", "--n", "5"],
        ["solve", "--lambda", "3,1"] + BASE,
        ["iterate", "--b", "1", "--m", "5"] + BASE,
        ["solve", "--kind", "K", "--lambda", "2,1,1"] + BASE,
    ],
)
def test_invalid_parameters_exit_2(args):
    assert run(args)[0] == 2


def test_bad_input_exits_1(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text('{"result": {"solutions": [{"vector": ')
    code, text = run(["verify", "kz", "--input", str(bad)] + BASE)
    assert code == 1
    assert "unreadable" in payload(text)["report"]["error"]


def test_roundtrip_and_corruption(tmp_path):
    out = tmp_path / "sol.json"
    assert run(["solve", "--out", str(out)] + BASE)[0] == 0
    assert run(["verify", "kz", "--input", str(out)] + BASE)[0] == 0
    data = json.loads(out.read_text())
    term = data["result"]["solutions"][0]["vector"][0]["terms"][0]
    term["coef"] = term["coef"] % 5 + 1 if term["coef"] % 5 != 4 else 1
    out.write_text(json.dumps(data))
    assert run(["verify", "kz", "--input", str(out)] + BASE)[0] == 1


def test_solve_K_matches_golden():
    code, text = run(["solve", "--kind", "K"] + BASE)
    sols = payload(text)["solutions"]
    vecs = {s["m"]: PolyVector.from_json(s["vector"]).monomial_vectors() for s in sols}
    assert vecs[1] == golden.K1 and vecs[2] == golden.K2


def test_output_is_deterministic_and_hashed():
    a = run(["hasse-witt", "--curve", "x"] + BASE)[1]
    b = run(["hasse-witt", "--curve", "x", "--threads", "2"] + BASE)[1]
    assert payload(a) == payload(b)
    ha = json.loads(a)["manifest"]["output_hash"]
    assert ha == json.loads(b)["manifest"]["output_hash"]
    assert ha == hashlib.sha256(_canonical(payload(a)).encode()).hexdigest()
    assert run(["hasse-witt", "--curve", "x"] + BASE)[1] == a


def test_threads_env(monkeypatch):
    plain = run(["iterate", "--b", "1", "--m", "1"] + BASE)[1]
    monkeypatch.setenv("KZMODP_THREADS", "3")
    assert run(["iterate", "--b", "1", "--m", "1"] + BASE)[1] == plain


@pytest.mark.parametrize(
    "check, extra",
    [
        ("kz", []),
        ("rank", []),
        ("independence", []),
        ("decomposition", ["--max-degree", "15"]),
        ("lucas", ["--max-degree", "60"]),
        ("regularity", ["--lambda", "2,1,1"]),
    ],
)
def test_verify_checks_pass(check, extra):
    code, text = run(["verify", check] + extra + BASE)
    assert code == 0 and payload(text)["passed"]


def test_fusion_and_compare():
    code, text = run(["fusion", "--partition", "1,2|3|4"] + BASE)
    res = payload(text)
    assert code == 0 and res["lambda"] == [2, 1, 1] and res["rank"] == 1
    code, text = run(["compare", "--max-degree", "4"] + BASE)
    rows = payload(text)["coefficients"]
    assert code == 0 and rows[0]["reduced"] == list(golden.L00_REDUCED)


def test_parse_partition():
    assert parse_partition("1,2|3|4") == [[0, 1], [2], [3]]


def test_module_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "kzmodp", "config"] + BASE, capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["manifest"]["command"] == "config"
    proc = subprocess.run([sys.executable, "-m", "kzmodp", "config", "--p", "4", "--q", "3", "--n", "4"], capture_output=True, text=True)
    assert proc.returncode == 2 and "p not prime" in proc.stderr
