import json
import subprocess
import sys

import pytest

from tightgroupoid.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mul_projection(capsys):
    code, out, _ = run(capsys, "mul", "B4(r=0;n=0,0;m=0,0)", "B4(r=0;n=0,0;m=0,0)")
    assert code == 0 and out.strip() == "B4(r=0; n=0,0; m=0,0)"


def test_act_example(capsys):
    code, out, _ = run(capsys, "act", "phi(3,5)", "B4(r=1;n=3,5;m=7,0)")
    assert code == 0 and out.strip() == "phi(7,0)"


def test_isotropy_example(capsys):
    code, out, _ = run(capsys, "isotropy", "phi(inf,2)", "--bound", "2")
    lines = out.strip().splitlines()
    assert code == 0 and [int(l.split("\t")[0]) for l in lines] == [-2, -1, 0, 1, 2]


def test_adjoint_canon_fiber(capsys):
    assert run(capsys, "adjoint", "B2(r=-3; n=4,1; m=7,1)")[1].strip() == "B2(r=3; n=7,1; m=4,1)"
    code, out, _ = run(capsys, "canon", "phi(inf,inf)", "B1(r=-2; n=1,1; m=3,3)")
    assert out.strip() == "[phi(inf,inf), B1(r=-2; n=0,0; m=2,2)]"
    code, out, _ = run(capsys, "fiber", "phi(1,1)", "--bound", "1")
    assert code == 0 and len(out.strip().splitlines()) == 12
    code, out, _ = run(capsys, "fiber", "phi(inf,inf)", "--bound", "2", "--source")
    assert len(out.strip().splitlines()) == 5


def test_exit_codes(capsys):
    code, _, err = run(capsys, "act", "phi(0,4)", "s1")
    assert code == 3 and "not in the domain" in err
    code, _, err = run(capsys, "mul", "B5(r=0;n=0,0;m=0,0)", "s1")
    assert code == 2 and "class digit" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no-such-suite"])
    assert exc.value.code == 2


def test_json_is_deterministic(capsys):
    argv = ["canon", "phi(2,inf)", "B3(r=1; n=2,4; m=0,3)", "--json"]
    a, b = run(capsys, *argv)[1], run(capsys, *argv)[1]
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == 1 and "winding" in doc["conventions"] and "action" in doc["conventions"]
    assert doc["range"] == "phi(2,inf)"


def test_export(capsys):
    code, out, _ = run(capsys, "export", "s4", "--fock", "3", "--winding", "1", "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["entries"]) == 2
    assert all(e[2] == [-1.0, 0.0] for e in doc["entries"])


def test_verify_semigroup(capsys):
    code, out, _ = run(capsys, "verify", "semigroup-axioms", "--bound", "4")
    assert code == 0 and "failures=0" in out


def test_verify_psi(capsys, tmp_path):
    path = tmp_path / "psi.json"
    code, out, _ = run(capsys, "verify", "psi", "--fock", "12", "--winding", "8", "--out", str(path))
    doc = json.loads(path.read_text())
    assert code == 0 and doc["failure_count"] == 0 and doc["schema"] == 1


def test_verify_reps(capsys):
    code, out, _ = run(capsys, "verify", "reps", "--t0", "0.3", "--bound", "6", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["failure_count"] == 0
    assert any(n.startswith("case 3") for n in doc["notes"])


def test_rep_command(capsys):
    code, out, _ = run(capsys, "rep", "--case", "2", "--t0", "0.25", "--bound", "4")
    assert code == 0 and "matched w1" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tightgroupoid", "act", "phi(2,2)", "s1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "phi(1,1)"
