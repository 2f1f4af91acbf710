from __future__ import annotations

import json
from importlib.resources import files
from pathlib import Path

import pytest
from click.testing import CliRunner

from tropscat.cli import main
from tropscat.fixtures import focus_focus
from tropscat.formats import SCHEMAS, schema_errors
from tropscat.scattering import diagram_from_json

from conftest import FIXTURES

FF = str(FIXTURES / "ff.json")
T3 = str(FIXTURES / "triangle3d.json")
KS2 = str(FIXTURES / "ks2.json")


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_validate():
    r = run("validate", FF)
    assert r.exit_code == 0
    assert r.output.strip() == "valid; strongly simple; 1 essential stratum"
    r = run("validate", T3, "--json")
    data = json.loads(r.output)
    assert r.exit_code == 0 and data["essential_strata"] == 7
    assert schema_errors(data, "validation-report") == []


def test_validate_reports_failed_certificate(tmp_path):
    p = tmp_path / "ff2.json"
    p.write_text(json.dumps(focus_focus(2).to_json()))
    r = run("validate", p, "--certify", "simple")
    assert r.exit_code == 2
    assert r.output.splitlines()[0] == "valid; not simple; 1 essential stratum"


def test_monodromy():
    r = run("monodromy", FF, "--certify", "strong")
    assert r.exit_code == 0
    assert r.output.splitlines() == ["kappa(rho, rho) = 1; monodromy at v0: [[1, 1], [0, 1]] (unipotent)",
                                     "positive; strongly simple"]
    data = json.loads(run("monodromy", FF, "--json").output)
    assert data["polytopes"]["rho"]["delta"][0] == {"vertices": [[0], [1]], "rays": []}


def test_singular_locus():
    r = run("singular-locus", T3)
    assert r.exit_code == 0 and r.output.splitlines()[-1] == "7 strata (7 essential)"
    r = run("singular-locus", FF, "--essential", "--format", "json")
    assert [s["cell"] for s in json.loads(r.output)["strata"]] == ["rho"]


def test_gluing_check():
    r = run("gluing-check", FF)
    assert r.exit_code == 0
    assert r.output.splitlines() == ["cocycle: ok", "lifting: ok", "slab functions: ok"]


def test_gluing_check_failure(tmp_path):
    data = focus_focus().to_json()
    for s in data["slabs"]:
        s["terms"] = [{"m": [0], "coeff": 1}]
    p = tmp_path / "ff1.json"
    p.write_text(json.dumps(data))
    r = run("gluing-check", p)
    assert r.exit_code == 2
    assert "  slab functions on rho at v0 and v1 are incompatible over rho" in r.output.splitlines()


def test_scatter_check_act(tmp_path):
    out = tmp_path / "ks2_6.json"
    r = run("scatter", KS2, "--order", 6, "--diagram", out)
    assert r.exit_code == 0
    lines = r.output.splitlines()
    assert lines[0] == "diagram ks2 at order 6: 3 walls, 0 slabs"
    assert lines[3].startswith("  W2 on ray from (0, 0) along (1, 1): q^2 z^(1,1) d_(1,-1)")
    assert lines[-1] == "consistent to order 6"
    data = json.loads(out.read_text())
    assert schema_errors(data, "diagram") == []
    assert diagram_from_json(data).to_json() == data
    r = run("check", out, "--json")
    report = json.loads(r.output)
    assert r.exit_code == 0 and report["consistent"]
    assert schema_errors(report, "consistency-report") == []


def test_check_inconsistent():
    r = run("check", KS2, "--order", 2)
    assert r.exit_code == 2
    assert r.output.splitlines() == ["joint (0, 0) [interior]: defect at order 2: q^2 z^(1,1) d_(1,-1)",
                                     "inconsistent to order 2"]
    report = json.loads(run("check", KS2, "--order", 2, "--json").output)
    assert schema_errors(report, "consistency-report") == []
    assert report["joints"][0]["defect"] == "q^2 z^(1,1) d_(1,-1)"


def test_act():
    r = run("act", KS2, "--path", "C0,C1", "--element", "z^(0,1)", "--order", 3)
    assert r.exit_code == 0 and r.output.strip() == "z^(0,1) + q z^(1,1)"
    r = run("act", FF, "--path", "C5,S0,C4", "--element", "v", "--order", 2)
    assert r.exit_code == 0 and r.output.strip() == "v f"
    r = run("act", KS2, "--path", "C0,C3", "--element", "z^(0,1)")
    assert r.exit_code == 1 and "non-adjacent step C0 -> C3" in r.output
    r = run("act", KS2, "--path", "C0,C1", "--element", "z^(0,1")
    assert r.exit_code == 1 and "--element" in r.output


def test_scatter_manifold():
    r = run("scatter", "--in", FF, "--order", 3)
    assert r.exit_code == 0
    assert r.output.splitlines() == ["diagram focus-focus at order 3: 0 walls, 2 slabs",
                                     "  S0 on rho at v0: f = 1 + z^(1)",
                                     "  S1 on rho at v1: f = z^(-1) + 1",
                                     "consistent to order 3"]


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = run("scatter", KS2, "--order", 5, "--diagram", a)
    r2 = run("scatter", KS2, "--order", 5, "--diagram", b)
    assert r1.output == r2.output
    assert a.read_bytes() == b.read_bytes()


def test_input_errors(tmp_path):
    r = run("validate", tmp_path / "missing.json")
    assert r.exit_code == 1 and r.output.startswith("error: ")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("validate", bad).exit_code == 1
    data = focus_focus().to_json()
    data["cells"][0]["dim"] = "x"
    bad.write_text(json.dumps(data))
    r = run("validate", bad)
    assert r.exit_code == 1
    assert "cells[0].dim: 'x' is not of type 'integer'" in r.output
    r = run("scatter", KS2, "--order", 0)
    assert r.exit_code == 1


@pytest.mark.parametrize("kind", SCHEMAS)
def test_installed_schemas_match_docs(kind):
    docs = Path(__file__).resolve().parent.parent / "docs" / "formats" / f"{kind}.schema.json"
    installed = files("tropscat.formats") / f"{kind}.schema.json"
    assert json.loads(docs.read_text()) == json.loads(installed.read_text())


@pytest.mark.parametrize("name, kind", [("ff.json", "manifold"), ("triangle3d.json", "manifold"),
                                        ("ks2.json", "diagram")])
def test_fixtures_conform(name, kind):
    assert schema_errors(json.loads((FIXTURES / name).read_text()), kind) == []
