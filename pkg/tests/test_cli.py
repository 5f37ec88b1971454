import json
import subprocess
import sys

import pytest

from conftest import FIXTURES
from folid.cli import main

NAT = str(FIXTURES / "nat.folid")
CLAMP = str(FIXTURES / "clamp.model")


def fx(name):
    return str(FIXTURES / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_proof_json_pass(capsys):
    code, out, _ = run(capsys, "check-proof", fx("even_odd.proof"), "--sig", NAT, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "PASS"
    assert data["results"][0]["gtc"]["verdict"] == "PASS"


def test_check_proof_fail_exit_one(capsys):
    code, out, _ = run(capsys, "check-proof", fx("no_progress.proof"), "--sig", NAT)
    assert code == 1
    assert "FAIL" in out


def test_check_proof_several_files(capsys):
    code, out, _ = run(capsys, "check-proof", fx("nat_refl.proof"), fx("cut_lost.proof"), "--sig", NAT, "--json")
    data = json.loads(out)
    assert code == 1
    assert [d["verdict"] for d in data["results"]] == ["PASS", "FAIL"]
    assert data["verdict"] == "FAIL"


def test_check_proof_local_violation(capsys):
    code, out, _ = run(capsys, "check-proof", fx("bad_allr.proof"), "--sig", NAT, "--json")
    assert code == 1
    assert json.loads(out)["results"][0]["local"][0]["violation"] == "FreshnessViolation"


def test_lfp(capsys):
    code, out, _ = run(capsys, "lfp", "--sig", NAT, "--model", CLAMP)
    assert code == 0
    assert "N = {0, 1, 2}" in out
    code, naive, _ = run(capsys, "lfp", "--sig", NAT, "--model", CLAMP, "--method", "naive")
    assert naive == out


def test_standard_check(capsys):
    assert run(capsys, "standard-check", "--sig", NAT, "--model", CLAMP)[0] == 0
    assert run(capsys, "standard-check", "--sig", NAT, "--model", fx("nonstandard.model"))[0] == 1


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--sig", NAT, "--model", fx("split.model"),
                       "--formula", "N(x)", "--assign", "x=2", "--json")
    assert code == 0
    assert json.loads(out)["value"] is False


def test_unfold_zero(capsys):
    code, out, _ = run(capsys, "unfold", "--sig", NAT, "--pred", "N", "--k", "0")
    assert code == 0 and out.strip() == "false"


def test_termmodel(capsys):
    code, out, _ = run(capsys, "termmodel", "--sig", NAT, "--model", CLAMP, "--json")
    data = json.loads(out)
    assert code == 0
    assert [c["representative"] for c in data["classes"]] == ["c_1", "c_2", "c_3"]
    assert data["standard"] is True


def test_code_round_trip(capsys):
    code, out, _ = run(capsys, "code", "--sig", NAT, "--formula", "N(s(0))")
    assert code == 0
    number = out.strip()
    code, out, _ = run(capsys, "code", "--sig", NAT, "--decode", number, "--json")
    data = json.loads(out)
    assert data["decoded"] == "N(s(0))" and data["tag"] == "indatom"


def test_bad_code_is_an_input_error(capsys):
    code, _, err = run(capsys, "code", "--sig", NAT, "--decode", "2")
    assert code == 2 and err


def test_approx_truth(capsys):
    code, out, _ = run(capsys, "approx-truth", "--sig", NAT, "--model", CLAMP, "--formula", "N(s(c_1))",
                       "--json")
    data = json.loads(out)
    assert code == 0
    assert data["f"] == 0
    assert data["witness"] is not None
    assert data["report"]["violations"] == []


def test_translate_pa(capsys):
    code, out, _ = run(capsys, "translate-pa", "--formula", "forall x. x + 0 = x", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["relativized"] == "forall x. N(x) -> x + 0 = x"
    assert "rule" in data["signature"]


def test_translate_rejects_n(capsys):
    assert run(capsys, "translate-pa", "--formula", "N(0)")[0] == 2


def test_explain_trace(capsys):
    code, out, _ = run(capsys, "explain-trace", fx("no_progress.proof"), "--sig", NAT)
    assert code == 1
    assert out == (FIXTURES / "golden" / "no_progress.txt").read_text()
    code, out, _ = run(capsys, "explain-trace", fx("even_odd.proof"), "--sig", NAT)
    assert code == 0 and out.startswith("PASS")


def test_usage_errors(capsys):
    assert run(capsys, "lfp", "--sig", NAT)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "unfold", "--sig", NAT, "--pred", "N", "--k", "-1")[0] == 2
    assert run(capsys, "lfp", "--sig", fx("missing.folid"), "--model", CLAMP)[0] == 2


def test_parse_error_goes_to_stderr(capsys, tmp_path):
    bad = tmp_path / "bad.folid"
    bad.write_text("sig ind N 1; rules rule r: => N(x,y);")
    code, out, err = run(capsys, "unfold", "--sig", str(bad), "--pred", "N")
    assert code == 2 and out == "" and "bad.folid:1:" in err


@pytest.mark.parametrize("argv", [
    ["check-proof", fx("e_implies_n.proof"), "--sig", NAT, "--json"],
    ["lfp", "--sig", NAT, "--model", CLAMP, "--json"],
    ["termmodel", "--sig", NAT, "--model", fx("split.model"), "--json"],
])
def test_deterministic_json(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    json.loads(first)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "folid.cli", "unfold", "--sig", NAT, "--pred", "N", "--k", "1"],
                          capture_output=True, text=True, env={"FOLID_COLOR": "0"})
    assert proc.returncode == 0
    assert proc.stdout.startswith("x = 0")
