import io
import json
import subprocess
import sys

import pytest

from thetamap.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def gram_file(tmp_path):
    def make(rows, name="g.json"):
        p = tmp_path / name
        p.write_text(json.dumps({"n": len(rows), "gram": [[str(v) for v in r] for r in rows]}))
        return str(p)
    return make


def test_construct_a2():
    code, out, _ = run("construct", "A2")
    assert code == 0
    assert json.loads(out) == {"n": 2, "gram": [["1", "1/2"], ["1/2", "1"]]}


def test_theta_output_format():
    code, out, err = run("theta", "A1^2", "--bound", "5")
    assert code == 0 and err == ""
    assert out == "# bound=5\n0\t1\n1\t4\n2\t4\n4\t4\n5\t8\n"


def test_theta11_both_routes_agree():
    code, out, _ = run("theta11", "A1^2", "--route", "both", "--bound", "10")
    assert code == 0
    assert out == "# route=direct\n# bound=10\n# route=harmonic\n# bound=10\nAGREE\n"


def test_theta11_both_nonzero(gram_file):
    code, out, _ = run("theta11", gram_file([[3, 1], [1, 5]]), "--route", "both", "--bound", "9")
    assert code == 0 and out.endswith("AGREE\n")
    direct, harmonic = out.split("# route=harmonic\n")
    assert direct.replace("# route=direct\n", "") == harmonic.replace("AGREE\n", "")


def test_classify2(gram_file):
    code, out, _ = run("classify2", gram_file([[1, 0], [0, 2]]))
    assert code == 0
    assert out.startswith("rank2: DEGENERATE(i); reduced=[[1,0],[0,2]]; tau=")
    code, _, err = run("classify2", "E8")
    assert code == 1 and "rank-2" in err


def test_dtheta(gram_file, tmp_path):
    d = tmp_path / "b.json"
    d.write_text('{"n": 2, "gram": [["0", "1"], ["1", "0"]]}')
    code, out, _ = run("dtheta", "A1^2", "--direction", str(d), "--bound", "6")
    assert code == 0 and out == "# bound=6\n"
    code, _, err = run("dtheta", "E8", "--direction", str(d), "--bound", "2")
    assert code == 1 and "size" in err


def test_wronskian(gram_file):
    code, out, _ = run("wronskian", gram_file([[3, 1], [1, 5]]), "--bound", "16")
    assert code == 0
    assert "# gram_det=5600\n" in out and "# det2_weight=16\n" in out
    assert out.rstrip().endswith("16\t224")


def test_compare():
    code, out, _ = run("compare", "A1^2", "A2", "--bound", "4")
    assert code == 0 and out == "theta: DIFFER@1\ntheta11: EQUAL\n"
    code, _, err = run("compare", "A2", "E8", "--bound", "4")
    assert code == 1


def test_spectrum():
    code, out, _ = run("spectrum", "A2", "--bound", "4")
    assert code == 0 and out == "1:6\n3:6\n4:6\n"


def test_default_bound_warns():
    code, out, err = run("spectrum", "Z")
    assert code == 0 and "warning" in err and "X=10" in err
    assert out.splitlines()[-1] == "9:2"


@pytest.mark.parametrize("argv", [
    ["frobnicate", "A2"],
    ["theta", "A2", "--bound", "0.5"],
    ["theta", "A2", "--bound", "-1"],
    ["theta", "nosuchlattice", "--bound", "2"],
    ["construct", "Lp9"],
    ["theta11", "A2", "--route", "sideways"],
])
def test_input_errors(argv):
    code, _, err = run(*argv)
    assert code == 1 and err.startswith("error:")


def test_non_pd_file_names_minor(gram_file):
    code, _, err = run("theta", gram_file([[1, 2], [2, 1]]), "--bound", "2")
    assert code == 1 and "minor 2" in err


def test_malformed_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run("theta", str(p), "--bound", "2")
    assert code == 1 and "malformed" in err


def test_internal_error_exit_code(monkeypatch):
    from thetamap import invariants

    def boom(*a, **k):
        raise ZeroDivisionError("bug")
    monkeypatch.setattr(invariants, "theta_series", boom)
    code, _, err = run("theta", "A2", "--bound", "2")
    assert code == 2 and err.startswith("internal error")


def test_deterministic_output():
    assert run("theta11", "D4", "--bound", "6") == run("theta11", "D4", "--bound", "6")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "thetamap", "spectrum", "Z", "--bound", "4"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "1:2\n4:2\n"
