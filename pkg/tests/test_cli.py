import json

import pytest
from click.testing import CliRunner

from artifact import formats as fm
from artifact import sgroup as sg
from artifact import sset as ss
from artifact.cli import main


@pytest.fixture
def run(tmp_path):
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return go


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in [("circle", ss.circle(3)), ("c2", sg.constant_group(sg.cyclic(2), 3)),
                      ("nerve", sg.nerve_cyclic_group(2, 3))]:
        p = tmp_path / f"{name}.json"
        fm.write(fm.to_doc(obj), p)
        out[name] = p
    return out


def test_build_wbar_writes_a_tsset(run, files, tmp_path):
    out = tmp_path / "w.json"
    r = run("build", "wbar", "--group", files["c2"], "--trunc", 3, "--out", out)
    assert r.exit_code == 0
    assert "degree 3: 8" in r.output
    X = fm.load(out, "tsset")
    assert X.counts == [1, 2, 4, 8]
    assert run("validate", out).exit_code == 0


def test_h1_from_files(run, files):
    r = run("h1", "--base", files["circle"], "--group", files["c2"])
    assert r.exit_code == 0
    assert "classes: 2" in r.output


def test_h1_builtins(run):
    r = run("h1", "--base", "circle", "--group", "const:C3", "--trunc", 2)
    assert "classes: 3" in r.output


@pytest.mark.parametrize("kind,extra", [
    ("wg", ["--group", "const:C2", "--trunc", 2]),
    ("twist", ["--base", "circle", "--group", "const:C2", "--trunc", 2]),
    ("cosk", ["--base", "simplex:1", "--degree", 0, "--trunc", 2]),
    ("dec0", ["--base", "circle", "--trunc", 2]),
    ("dec", ["--base", "simplex:1", "--trunc", 2]),
    ("ddec", ["--base", "simplex:1", "--trunc", 1]),
    ("path", ["--base", "simplex:1", "--trunc", 1]),
])
def test_build_kinds(run, kind, extra, tmp_path):
    out = tmp_path / f"{kind}.json"
    r = run("build", kind, *extra, "--out", out)
    assert r.exit_code == 0, r.output
    assert run("validate", out).exit_code == 0


def test_torsor_pipeline(run, tmp_path):
    wg = tmp_path / "wg.json"
    assert run("build", "wg", "--group", "nerve:C2", "--trunc", 2, "--out", wg).exit_code == 0
    assert run("verify", "--torsor", wg).exit_code == 0
    r = run("classify", "--torsor", wg, "--format", "json")
    assert r.exit_code == 0 and json.loads(r.output)["report"]["bundle_map"]
    cech = tmp_path / "cech.json"
    assert run("build", "cech", "--torsor", wg, "--trunc", 2, "--out", cech).exit_code == 0
    dec = tmp_path / "dec.json"
    assert run("build", "dec", "--base", "simplex:1", "--trunc", 2, "--out", dec).exit_code == 0
    assert run("build", "total", "--bisset", dec, "--trunc", 2).exit_code == 0


def test_gerbe_pipeline(run, tmp_path):
    g = tmp_path / "g.json"
    t = tmp_path / "t.json"
    L = tmp_path / "L.json"
    assert run("fuzz", "gerbe", "--seed", 3, "--out", g).exit_code == 0
    assert run("gerbe", "extract", g, "--out", t).exit_code == 0
    assert run("gerbe", "build", g, t, "--out", L).exit_code == 0
    r = run("gerbe", "class", g, L)
    assert r.exit_code == 0 and "same class: yes" in r.output


def test_homology_report(run):
    r = run("homology", "--base", "circle", "--trunc", 4)
    assert r.exit_code == 0
    assert "H_1 = Z" in r.output
    r = run("homology", "--base", "circle", "--trunc", 4, "--coeffs", 2)
    assert "H^1 = Z/2" in r.output


def test_homology_refuses_the_edge(run):
    r = run("homology", "--base", "circle", "--trunc", 3, "--max-degree", 2)
    assert r.exit_code == 1
    assert "allow-truncation-edge" in r.output
    assert run("homology", "--base", "circle", "--trunc", 3, "--max-degree", 2,
               "--allow-truncation-edge").exit_code == 0


def test_validation_failure_exit_code(run, tmp_path):
    doc = fm.tsset_doc(ss.standard_simplex(1, 2))
    doc["faces"][1][0] = doc["faces"][1][1]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    r = run("validate", p)
    assert r.exit_code == 1


def test_parse_error_exit_code(run, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"format": "tsset/1",\n  oops\n}')
    r = run("validate", p)
    assert r.exit_code == 3
    assert "broken.json:2" in r.output


def test_version_error_is_distinct(run, tmp_path):
    doc = fm.tsset_doc(ss.point(1))
    doc["format"] = "tsset/2"
    p = tmp_path / "v2.json"
    p.write_text(json.dumps(doc))
    r = run("validate", p)
    assert r.exit_code == 3
    assert "unsupported format" in r.output


def test_budget_exit_code(run):
    r = run("h1", "--base", "circle", "--group", "const:S3", "--trunc", 2, "--budget", 3)
    assert r.exit_code == 2


def test_fuzz_is_deterministic(run):
    a = run("fuzz", "twist", "--seed", 7).output
    b = run("fuzz", "twist", "--seed", 7).output
    assert a == b
    assert fm.loads(a, "twist") is not None


def test_json_reports_are_byte_identical(run):
    a = run("build", "wbar", "--group", "const:C3", "--trunc", 3, "--format", "json").output
    b = run("build", "wbar", "--group", "const:C3", "--trunc", 3, "--format", "json").output
    assert a == b
    assert json.loads(a)["manifest"]["command"] == "build wbar"


def test_selftest_subset(run):
    r = run("selftest", "--only", 1, "--only", 7, "--seed", 42)
    assert r.exit_code == 0
    assert "criterion  1 PASS" in r.output and "overall: PASS" in r.output
