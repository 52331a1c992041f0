import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

ROOT_DIR = Path(__file__).parent.parent
CLI = ROOT_DIR / "oil-cli.py"


def run_cli(*args, env=None):
    """Ejecuta oil-cli.py en un proceso aparte y devuelve el CompletedProcess."""
    full_env = os.environ.copy()
    full_env["PYTHONPATH"] = str(ROOT_DIR) + os.pathsep + full_env.get("PYTHONPATH", "")
    for name in ("OIL_LOG_TO_FILE", "OIL_REPORT_TIMING", "OIL_MAX_DEGREE", "OIL_REPORTS_DIR"):
        full_env.pop(name, None)
    full_env.update(env or {})
    return subprocess.run(
        [sys.executable, str(CLI), *args],
        env=full_env, capture_output=True, text=True, encoding="utf-8", cwd=ROOT_DIR,
    )


@pytest.fixture
def ideal_file(tmp_path):
    path = tmp_path / "ideal.txt"
    path.write_text("F[1,1]\nF[1,2]\n", encoding="utf-8")
    return path


def test_gens_emits_records():
    result = run_cli("gens", "--set", "theorem1", "--n", "3", "--e", "2")
    assert result.returncode == 0
    records = json.loads(result.stdout)
    assert len(records) == 10
    assert records[0]["family"] == "T"


def test_gens_needs_e():
    assert run_cli("gens", "--set", "nonminimal", "--n", "3").returncode == 64


@pytest.mark.parametrize('target,code', [
    ("F[1,1]*F[2,2] + F[1,2]*F[2,1]", 0),
    ("F[2,2]^2", 1),
])
def test_member_exit_codes(tmp_path, ideal_file, target, code):
    poly = tmp_path / "target.txt"
    poly.write_text(target + "\n", encoding="utf-8")
    result = run_cli("member", "--ideal", str(ideal_file), "--poly", str(poly))
    assert result.returncode == code
    data = json.loads(result.stdout)
    assert data["n"] == 2
    assert data["results"][0]["status"] == ("member" if code == 0 else "non-member")


def test_member_missing_file(tmp_path, ideal_file):
    result = run_cli("member", "--ideal", str(ideal_file), "--poly", str(tmp_path / "nope.txt"))
    assert result.returncode == 64


@pytest.mark.parametrize('lam,code', [("3", 1), ("2,1", 0), ("1,1,1", 0)])
def test_orbit_exit_codes(lam, code):
    """Test that theorem1(3,2) vanishes exactly on the closure of O(2,1)."""
    result = run_cli("orbit", "--lambda", lam, "--n", "3", "--e", "2", "--samples", "3")
    assert result.returncode == code


def test_orbit_needs_generators():
    assert run_cli("orbit", "--lambda", "2,1", "--n", "3").returncode == 64


def test_lemma5_output():
    result = run_cli("lemma5", "--n", "3")
    assert result.returncode == 0
    data = json.loads(result.stdout)
    assert data["rank"] == data["target"] == 9
    assert data["m"] == 2


def test_verify_writes_report(tmp_path):
    path = tmp_path / "out" / "report.json"
    result = run_cli("verify", "--claim", "lemma6", "--n", "30", "--report", str(path))
    assert result.returncode == 0
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["status"] == "verified"
    assert data["task"]["claim"] == "lemma6"


def test_verify_refuted_exit_code():
    result = run_cli("verify", "--claim", "vanishing", "--n", "3", "--e", "2", "--partition", "3",
                     "--samples", "2")
    assert result.returncode == 1
    assert json.loads(result.stdout)["status"] == "refuted"


@pytest.mark.parametrize('args', [
    ["verify", "--claim", "lemma6", "--n", "5", "--field", "fp:4"],
    ["verify", "--claim", "lemma7", "--n", "5"],
    ["verify", "--claim", "theorem1", "--n", "3", "--e", "3"],
    ["verify", "--claim", "theorem1", "--e", "2"],
    ["verify", "--claim", "vanishing", "--n", "3", "--e", "2", "--partition", "2,2"],
    [],
])
def test_usage_errors(args):
    assert run_cli(*args).returncode == 64



def test_gens_accepts_alias():
    """Test that the alternative label builds the same set as nonminimal."""
    alias = run_cli("gens", "--set", "weyman_thm5", "--n", "3", "--e", "2")
    canonical = run_cli("gens", "--set", "nonminimal", "--n", "3", "--e", "2")
    assert alias.returncode == canonical.returncode == 0
    assert alias.stdout == canonical.stdout
    assert run_cli("gens", "--set", "weyman_thm5", "--n", "3").returncode == 64


def test_member_infers_n_from_both_files(tmp_path):
    """Test that a target using a larger index than the ideal is still parsed."""
    ideal = tmp_path / "ideal.txt"
    ideal.write_text("F[1,1]\n", encoding="utf-8")
    poly = tmp_path / "target.txt"
    poly.write_text("F[2,2]^2\n", encoding="utf-8")
    result = run_cli("member", "--ideal", str(ideal), "--poly", str(poly))
    assert result.returncode == 1
    data = json.loads(result.stdout)
    assert data["n"] == 2
    assert data["results"][0]["status"] == "non-member"


@pytest.mark.parametrize('ideal_text,target_text', [
    ("F[1,1]\nF[1,2]\n", "F[1,1] + F[1,1]*F[2,2]\n"),
    ("F[1,1] + F[1,2]*F[2,1]\n", "F[2,2]^2\n"),
])
def test_member_non_homogeneous_is_usage_error(tmp_path, ideal_text, target_text):
    ideal = tmp_path / "ideal.txt"
    ideal.write_text(ideal_text, encoding="utf-8")
    poly = tmp_path / "target.txt"
    poly.write_text(target_text, encoding="utf-8")
    result = run_cli("member", "--ideal", str(ideal), "--poly", str(poly), "--n", "2")
    assert result.returncode == 64
    assert "Traceback" not in result.stderr


def test_member_limit_gives_inconclusive(tmp_path, ideal_file):
    poly = tmp_path / "target.txt"
    poly.write_text("F[2,2]^3\n", encoding="utf-8")
    result = run_cli("member", "--ideal", str(ideal_file), "--poly", str(poly), "--max-degree", "2")
    assert result.returncode == 2
    assert json.loads(result.stdout)["results"][0]["status"] == "inconclusive"


def test_verify_limit_gives_inconclusive():
    result = run_cli("verify", "--claim", "theorem1", "--n", "3", "--e", "2", "--max-degree", "2")
    assert result.returncode == 2
    assert json.loads(result.stdout)["status"] == "inconclusive"


def test_verify_bare_report_name_goes_to_reports_dir(tmp_path):
    result = run_cli("verify", "--claim", "lemma6", "--n", "10", "--report", "lemma6.json",
                     env={"OIL_REPORTS_DIR": str(tmp_path)})
    assert result.returncode == 0
    assert json.loads((tmp_path / "lemma6.json").read_text(encoding="utf-8"))["status"] == "verified"


def test_verify_unwritable_report(tmp_path):
    """Test that an I/O failure on the report is reported without a traceback."""
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    result = run_cli("verify", "--claim", "lemma6", "--n", "5", "--report", str(blocker / "r.json"))
    assert result.returncode == 2
    assert "Traceback" not in result.stderr


def test_verify_report_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        result = run_cli("verify", "--claim", "vanishing", "--n", "3", "--e", "2", "--partition", "2,1",
                         "--samples", "3", "--seed", "11", "--report", str(path))
        assert result.returncode == 0
    assert first.read_bytes() == second.read_bytes()


if __name__ == "__main__":
    pytest.main(["-v", __file__])
