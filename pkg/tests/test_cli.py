import json
import subprocess
import sys

import pytest

from pfcert import cli
from pfcert.forms import VerificationResult


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main(argv + ["--output", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc


def write(tmp_path, text, name="fam.fam"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


GOOD = """# plane cubic
name: hesse
ambient_dim: 2
variables: x, y, z
parameter: t
polynomial: x^3 + y^3 + z^3 - t*x*y*z
"""


def test_load_bundled_families():
    leg = cli.load_family("legendre")
    assert (leg.n, leg.m) == (2, 3)
    q = cli.load_family("mirror_quartic")
    assert (q.n, q.m) == (3, 4)


def test_load_family_from_file(tmp_path):
    fam = cli.load_family(write(tmp_path, GOOD))
    assert fam.name == "hesse" and fam.variables == ("x", "y", "z")


def test_non_homogeneous_family(tmp_path, capsys):
    path = write(tmp_path, GOOD.replace("x^3 + y^3 + z^3 - t*x*y*z", "x + y^2"))
    assert cli.main(["compute", path]) == 2
    err = capsys.readouterr().err
    assert "degrees 1 and 2" in err and ":6:" in err


def test_syntax_error_position(tmp_path, capsys):
    path = write(tmp_path, GOOD.replace("x^3 + y^3", "x^3 + * y^3"))
    assert cli.main(["compute", path]) == 2
    err = capsys.readouterr().err
    assert ":6:19:" in err


def test_unknown_key(tmp_path, capsys):
    path = write(tmp_path, GOOD + "colour: blue\n")
    assert cli.main(["compute", path]) == 2
    assert "unknown key 'colour'" in capsys.readouterr().err


def test_missing_file(capsys):
    assert cli.main(["compute", "/nonexistent/family.fam"]) == 2


def test_bad_flags(capsys):
    assert cli.main(["compute", "legendre", "--terms", "0"]) == 2
    assert cli.main(["compute", "legendre", "--chart", "7"]) == 2


def test_singular_family(tmp_path):
    text = GOOD.replace("x^3 + y^3 + z^3 - t*x*y*z", "x^3 + y^3 - t*x*y^2")
    assert run(["compute", write(tmp_path, text)], tmp_path)[0] == 3


def test_order_bound(tmp_path):
    assert run(["compute", "legendre", "--max-order", "1"], tmp_path)[0] == 4


def test_verification_failure(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "verify_certificate", lambda *a, **k: VerificationResult(False, None))
    code, doc = run(["compute", "legendre"], tmp_path)
    assert code == 5
    assert doc["checks"]["certificate_verified"] is False


def test_compute_legendre(tmp_path):
    code, doc = run(["compute", "legendre"], tmp_path)
    assert code == 0
    assert doc["operator"]["text"] == "(4*t^2 - 4*t)*D^2 + (8*t - 4)*D + 1"
    assert doc["operator"]["basis"] == "d"
    assert doc["checks"]["certificate_verified"] is True
    assert doc["checks"]["series_annihilation"]["status"] == "zero"
    assert doc["checks"]["series_annihilation"]["truncation"] == 30
    assert doc["singular_points"]["factors"] == ["t", "t - 1"]
    assert all({"k", "scalar", "witness"} <= set(c) for c in doc["certificate"])
    assert doc["config"]["command"] == "compute" and doc["config"]["terms"] == 30


def test_compute_quartic_with_comparison(tmp_path):
    code, doc = run(["compute", "mirror_quartic", "--compare-paper-operator", "quartic_printed_operator"], tmp_path)
    assert code == 0
    assert doc["operator"]["order"] == 3
    assert doc["singular_points"]["factors"] == ["t + 4", "t - 4", "t^2 + 16"]
    sa = doc["checks"]["series_annihilation"]
    assert sa["status"] == "zero" and sa["shift"] == "-1"
    cmp = doc["comparison"]
    assert cmp["paper_operator_match"] in ("equal", "proportional", "mismatch")
    assert len(cmp["diff"]) == 4
    assert cmp["paper_operator_match"] == "mismatch"
    assert cmp["printed_series_annihilation"] == "nonzero"


def test_comparison_verdicts(quartic):
    from pfcert.odes import DiffOperator

    D = cli.load_operator("quartic_printed_operator")
    assert cli.compare_operators(D, D)["paper_operator_match"] == "equal"
    assert cli.compare_operators(D, D.scale(7))["paper_operator_match"] == "proportional"
    assert cli.compare_operators(D, D + DiffOperator.mult(1, D.basis))["paper_operator_match"] == "mismatch"


def test_constant_family(tmp_path):
    code, doc = run(["compute", "fermat_cubic_constant"], tmp_path)
    assert code == 0
    assert doc["operator"]["text"] == "D"
    assert doc["certificate"] == []
    assert doc["checks"]["series_annihilation"]["status"] == "unavailable"


def test_deterministic_output(tmp_path):
    _, a = run(["compute", "mirror_quartic"], tmp_path, "a.json")
    _, b = run(["compute", "mirror_quartic"], tmp_path, "a.json")
    a.pop("metadata")
    b.pop("metadata")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_verify_command(tmp_path):
    code, doc = run(["verify", "legendre"], tmp_path)
    assert code == 0
    assert doc["checks"]["per_chart"] == {"0": True, "1": True, "2": True}
    assert doc["checks"]["tampered_certificate_verified"] is False
    code, doc = run(["verify", "mirror_quartic", "--chart", "0"], tmp_path)
    assert code == 0 and doc["checks"]["per_chart"] == {"0": True}


def test_indicial_command(tmp_path):
    code, doc = run(["indicial", "legendre"], tmp_path)
    assert code == 0
    rows = {r["location"]: r for r in doc["indicial"]}
    assert rows["0"]["exponents"] == [{"exponent": "0", "multiplicity": 2}]
    assert rows["1"]["exponents"] == [{"exponent": "0", "multiplicity": 2}]
    assert rows["inf"]["exponents"] == [{"exponent": "1/2", "multiplicity": 2}]
    assert all(r["solution_count"] == 2 for r in rows.values())
    code, doc = run(["indicial", "mirror_quartic", "--at", "4,inf"], tmp_path)
    assert [r["location"] for r in doc["indicial"]] == ["4", "inf"]


def test_series_command(tmp_path):
    code, doc = run(["series", "mirror_quartic", "--terms", "12"], tmp_path)
    assert code == 0
    sa = doc["checks"]["series_annihilation"]
    assert sa["truncation"] == 12 and sa["status"] == "zero"


def test_numeric_empty_and_control(tmp_path):
    code, doc = run(["numeric", "legendre", "--chain", "empty", "--chain", "control"], tmp_path)
    assert code == 0
    assert doc["checks"]["empty"]["ok"] and doc["checks"]["empty"]["value"].startswith("0.0")
    assert doc["checks"]["control"]["fit"]["residual"] > 1e-2
    assert doc["precision"]["digits"] == 30


def test_numeric_half_chain(tmp_path):
    code, doc = run(["numeric", "--chain", "half", "--grid", "0.4,0.55"], tmp_path)
    assert code == 0
    assert doc["checks"]["half"]["max_abs"] < 1e-6


def test_numeric_admissibility(tmp_path):
    assert run(["numeric", "--chain", "closed", "--grid", "0.0,0.5"], tmp_path)[0] == 6


def test_numeric_needs_legendre(tmp_path):
    assert run(["numeric", "mirror_quartic", "--chain", "empty"], tmp_path)[0] == 6


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "pfcert.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "pfcert" in out.stdout
