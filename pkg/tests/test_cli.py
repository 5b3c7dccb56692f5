import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from toricbundle.bundlefile import load
from toricbundle.cli import main
from toricbundle.corpus import corpus_text, tp2


@pytest.fixture
def corpus(tmp_path):
    paths = {}
    for name in ("tp2", "p1p1_bignominkowski", "example_big", "surface_k"):
        p = tmp_path / f"{name}.bundle"
        p.write_text(corpus_text(name), encoding="utf-8")
        paths[name] = str(p)
    return paths


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("command", ["check", "parliament", "h0", "curves", "nef", "ample", "gg", "veryample", "cayley"])
def test_commands_exit_zero_and_are_deterministic(corpus, command):
    code, out, _ = run(command, corpus["tp2"])
    assert code == 0
    report = json.loads(out)
    assert report["command"] == command
    assert run(command, corpus["tp2"])[1] == out


def test_verdicts_on_tp2(corpus):
    assert json.loads(run("nef", corpus["tp2"])[1])["nef"] is True
    assert json.loads(run("ample", corpus["tp2"])[1])["ample"] is True
    assert json.loads(run("gg", corpus["tp2"])[1])["gg"] is True
    assert json.loads(run("h0", corpus["tp2"])[1])["h0"] == 8
    assert json.loads(run("h0", corpus["tp2"], "--u", "0,0")[1])["dim"] == 2
    assert json.loads(run("sections", corpus["tp2"], "--sym", "2")[1])["h0"] == 27
    assert json.loads(run("sections", corpus["tp2"], "--twist", "1,0,0")[1])["h0"] == 15


def test_cox_tp2(corpus):
    code, out, _ = run("cox", corpus["tp2"], "--kmax", "3")
    assert code == 0
    rep = json.loads(out)
    assert len(rep["variables"]) == 6
    assert [r["polynomial"] for r in rep["relations"]] == ["T0*S0 - T1*S1 - T2*S2"]
    assert rep["mds"]["definitive"] is True


def test_cox_fast_path_at_degree_one(corpus):
    code, out, _ = run("cox", corpus["tp2"], "--kmax", "1")
    assert code == 0 and json.loads(out)["mds"]["definitive"] is True


def test_cox_unknown_when_not_definitive(corpus):
    code, out, _ = run("cox", corpus["example_big"], "--kmax", "2")
    assert code == 2
    assert json.loads(out)["mds"]["definitive"] is False


def test_big_exit_codes(corpus):
    code, out, _ = run("big", corpus["example_big"], "--kmax", "1")
    assert code == 2 and json.loads(out)["verdict"] == "unknown"
    code, out, _ = run("big", corpus["example_big"], "--kmax", "2")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "big"
    assert rep["witness"]["divisor_class"] == [1, 0, 0]


def test_kmax_from_environment(corpus, monkeypatch):
    code, _, err = run("big", corpus["tp2"])
    assert code == 1 and "kmax" in err
    monkeypatch.setenv("TORICBUNDLE_KMAX", "1")
    assert run("big", corpus["tp2"])[0] == 0
    monkeypatch.setenv("TORICBUNDLE_KMAX", "x")
    assert run("big", corpus["tp2"])[0] == 1


def test_gg_failure_report(corpus):
    sym = corpus["surface_k"] + ".sym2"
    assert run("sympow", corpus["surface_k"], "--param", "k=2", "--k", "2", "--out", sym)[0] == 0
    code, out, _ = run("gg", sym)
    rep = json.loads(out)
    assert code == 0 and rep["gg"] is False
    failing = {tuple(f["cone"]) for f in rep["failing_cones"]}
    assert (1, 2) in failing
    f = next(f for f in rep["failing_cones"] if f["cone"] == [1, 2])
    # u = u1 + (k - 1) u2 with u1 = (2a2 - a3, a3 - a2), u2 = (2b2 - b3, b3 - b2) at k = 2
    assert f["uncovered_characters"] == [[-1, 10]]
    assert f["violated"]


@pytest.mark.parametrize("argv", [
    ["nosuch", "x"],
    ["check"],
    ["h0", "{tp2}", "--u", "1"],
    ["h0", "{tp2}", "--u", "a,b"],
    ["sections", "{tp2}", "--twist", "1,2"],
    ["sections", "{tp2}", "--sym", "0"],
    ["frobenius", "{tp2}", "--k", "0", "--out", "x"],
    ["check", "{tp2}", "--bogus"],
    ["check", "{tp2}", "--param", "k"],
    ["big", "{tp2}", "--kmax", "0"],
    ["check", "/nonexistent/file.bundle"],
])
def test_usage_errors(corpus, argv):
    argv = [a.format(**corpus) for a in argv]
    code, out, err = run(*argv)
    assert code == 1 and out == "" and err


def test_parse_error_exit(tmp_path):
    p = tmp_path / "bad.bundle"
    p.write_text("dim 2\nrank 2\n", encoding="utf-8")
    code, _, err = run("check", str(p))
    assert code == 1 and "E002" in err


def test_sympow_one_round_trip(corpus, tmp_path):
    out = tmp_path / "same.bundle"
    assert run("sympow", corpus["tp2"], "--k", "1", "--out", str(out))[0] == 0
    assert load(out) == tp2()


def test_frobenius_writes_scaled_bundle(corpus, tmp_path):
    out = tmp_path / "f2.bundle"
    assert run("frobenius", corpus["tp2"], "--k", "2", "--out", str(out))[0] == 0
    assert [f.jumps for f in load(out).filtrations] == [(0, 2)] * 3


def test_params_override(corpus):
    one = json.loads(run("curves", corpus["surface_k"])[1])
    two = json.loads(run("curves", corpus["surface_k"], "--param", "k=2")[1])
    assert one != two


def test_svg(corpus, tmp_path):
    svg = tmp_path / "p.svg"
    code, out, _ = run("parliament", corpus["tp2"], "--svg", str(svg))
    assert code == 0 and json.loads(out)["svg"] == str(svg)
    text = svg.read_text(encoding="utf-8")
    root = ET.fromstring(text)
    assert root.get("version") == "1.1"
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}polygon")) == 3
    strokes = {p.get("stroke") for p in root.findall(f"{ns}polygon")}
    assert len(strokes) == 3
    svg2 = tmp_path / "q.svg"
    run("parliament", corpus["tp2"], "--svg", str(svg2))
    assert svg2.read_text(encoding="utf-8") == text


def test_console_script_entry_point(corpus):
    proc = subprocess.run([sys.executable, "-m", "toricbundle.cli", "h0", corpus["tp2"]],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["h0"] == 8
