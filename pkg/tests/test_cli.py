import io
import json
import subprocess
import sys

import pytest

from golden_cases import CASES, golden_path
from kpoly.cli import fixture_path, run, to_plain
from kpoly.subspaces import EXACT, to_matrix


@pytest.mark.parametrize("name,argv,expected", CASES, ids=[c[0] for c in CASES])
def test_golden_report(name, argv, expected):
    code, out, err = run(argv)
    assert (code, err) == (expected, "")
    assert out == golden_path(name, argv).read_text(encoding="utf-8")


def test_reports_are_byte_stable_across_runs():
    argv = ["crosscheck", "--algebra", "heisenberg3", "--k", "2", "--samples", "1"]
    assert run(argv) == run(argv)


def test_exit_zero_for_passing_input(tmp_path):
    code, out, _ = run(["check-polysymplectic", str(fixture_path("polyform_1_1"))])
    report = json.loads(out)
    assert code == 0 and report["status"] == "pass"
    assert report["command"]["input"] == "polyform_1_1.json"


def test_exit_one_with_witness_for_mathematical_failure():
    code, out, _ = run(["check-polysymplectic", "degenerate"])
    report = json.loads(out)
    assert code == 1
    assert report["checks"][0]["witness"] == [0.0, 0.0, 1.0]


def test_exit_two_with_position_for_malformed_json(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text('{"version": "1",\n  "payload": {,}}\n')
    code, out, err = run(["check-polysymplectic", str(bad)])
    assert code == 2 and out == ""
    assert "broken.json: line 2, column" in err


def test_exit_two_with_field_for_schema_violation(tmp_path):
    bad = tmp_path / "schema.json"
    bad.write_text(json.dumps({"version": "1", "payload": {"polyform": {"m": 2, "k": 1}}}))
    code, _, err = run(["check-polysymplectic", str(bad)])
    assert code == 2
    assert "field payload/polyform" in err and "matrices" in err


def test_non_skew_matrix_is_an_input_error(tmp_path):
    doc = {"version": "1", "payload": {"polyform": {"m": 2, "k": 1,
                                                    "matrices": [[[0, 1], [1, 0]]]}}}
    path = tmp_path / "sym.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["from-polysymplectic", str(path)])
    assert code == 2 and "not skew" in err


def test_dirac_rejection_carries_witness(tmp_path):
    doc = json.loads(fixture_path("dirac_r4").read_text())
    doc["payload"]["polyform"]["distribution"] = [[1, 0, 0, 0], [0, 1, 0, 0]]
    path = tmp_path / "lagrangian.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["dirac", str(path)])
    report = json.loads(out)
    assert code == 1
    assert report["checks"][-1]["name"] == "RejectionError"
    assert report["checks"][-1]["witness"] is not None


def test_scalar_precedence_flag_over_document(tmp_path):
    doc = json.loads(fixture_path("polyform_1_1").read_text())
    doc["scalar"] = {"mode": "exact"}
    path = tmp_path / "exact.json"
    path.write_text(json.dumps(doc))
    _, out, _ = run(["check-polysymplectic", str(path)])
    assert json.loads(out)["results"]["flat"] == [[0, -1], [1, 0]]
    _, out, _ = run(["check-polysymplectic", str(path), "--scalar", "float"])
    assert json.loads(out)["results"]["flat"] == [[0.0, -1.0], [1.0, 0.0]]


def test_reads_document_from_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(fixture_path("polyform_1_2").read_text()))
    code, out, _ = run(["check-polysymplectic", "-"])
    assert code == 0 and json.loads(out)["command"]["input"] == "-"


def test_gstar_document_with_inline_algebra(tmp_path):
    algebra = json.loads(fixture_path("so3").read_text())["payload"]["lie_algebra"]
    doc = {"version": "1", "payload": {"gstar": {"algebra_ref": algebra, "k": 2,
                                                 "mu": [[0, 0, 1], ["1/2", 0, 0]]}}}
    path = tmp_path / "gstar.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["gstar", str(path), "--crosscheck", "leaf"])
    assert code == 0
    assert json.loads(out)["results"]["characteristic_distribution"]["dim"] == 3


def test_mu_shape_mismatch_is_an_input_error():
    code, _, err = run(["gstar", "--algebra", "so3", "--k", "2", "--mu", "[[0,0,1]]"])
    assert code == 2 and "--k" in err


def test_crosscheck_reports_observed_signs():
    code, out, _ = run(["crosscheck", "--algebra", "so3", "--k", "1", "--samples", "1"])
    report = json.loads(out)
    assert code == 0
    assert report["results"]["observed_sigma"] == {
        "cotangent_group_vs_gstar": [1],
        "principal_local_vs_whitney": [-1],
        "whitney_algebra_vs_gstar": [-1],
        "whitney_tangent_vs_flat_inverse": [-1],
    }
    assert report["notes"] == ["relative signs differ between comparison families"]


def test_rationals_render_as_strings():
    assert to_plain(to_matrix([["3/4", 2]], EXACT)) == [["3/4", 2]]
    assert to_plain(-0.0) == 0.0


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "kpoly", "integrability", "--algebra", "so3",
                           "--k", "1", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("kpoly integrability: PASS")
