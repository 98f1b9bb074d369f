import io
import json
import subprocess
import sys

import pytest

from ringline import suites
from ringline.cli import main, split_top_level


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_ring_info_zmod6():
    code, text = run("ring", "info", "zmod(6)")
    assert code == 0
    assert "local: false, radical: {0}" in text
    assert "size: 6" in text and "units (2): {1, 5}" in text


def test_ring_info_local():
    code, text = run("ring", "info", "dual(gf(3))")
    assert code == 0
    assert "local: true, radical: {0, e, 2e}" in text
    assert "nil exponent: 2" in text


def test_graph_dot():
    code, text = run("projline", "graph", "dual(gf(2))", "--format", "dot")
    assert code == 0
    vertices = [l for l in text.splitlines() if l.strip().endswith('";') and "--" not in l]
    edges = [l for l in text.splitlines() if " -- " in l]
    assert len(vertices) == 6 and len(edges) == 12


def test_graph_json():
    code, text = run("projline", "graph", "zmod(4)", "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["ring"] == "zmod(4)" and len(doc["points"]) == 6 and len(doc["edges"]) == 12


def test_enumerate():
    code, text = run("projline", "enumerate", "gf(3)")
    assert code == 0 and text.splitlines()[0] == "4 points"
    code, text = run("projline", "enumerate", "gf(3)", "--format", "json")
    assert json.loads(text)["points"] == ["(0,1)", "(1,0)", "(1,1)", "(1,2)"]


def test_parallelism_listing():
    code, text = run("parallelism", "dual(gf(2))")
    assert code == 0 and text.startswith("6 points, 3 classes of size 2")
    code, text = run("parallelism", "dual(gf(2))", "--json")
    assert json.loads(text)["class_size"] == 2


@pytest.mark.parametrize("desc", ["zmod(6)", "dual(gf(3))", "upper2(gf(3))"])
def test_verify_parallelism(desc):
    code, text = run("verify", "parallelism", desc)
    assert code == 0 and text.startswith("[PASS] parallelism")
    code, text = run("verify", "parallelism", desc, "--json")
    doc = json.loads(text)
    assert doc["schema"] == 1 and doc["ok"] and "elapsed_ms" not in doc
    assert doc["summary"]["class_size"] == doc["summary"]["radical_size"]


def test_verify_witness_on_nonlocal():
    _, text = run("verify", "parallelism", "zmod(6)", "--json")
    doc = json.loads(text)
    assert doc["summary"]["local"] is False and doc["summary"]["witness"]


def test_verify_trafo_and_ring():
    assert run("verify", "trafo", "dual(gf(3))@gf(3)")[0] == 0
    assert run("verify", "ring", "mat2(gf(2))")[0] == 0


def test_verify_model():
    code, text = run("verify", "model", "--example", "dual", "--field", "gf(4)", "--t", "w")
    assert code == 0, text


def test_trafo_apply():
    code, text = run("trafo", "apply", "dual(gf(3))@gf(3)", "--matrix", "1,e,0,1", "--z", "1+e")
    assert code == 0 and text.splitlines()[0] == "1+e -> 1"
    code, text = run("trafo", "apply", "dual(gf(3))@gf(3)", "--matrix", "0,1,1,0", "--z", "e")
    assert code == 0 and "outside the domain" in text


def test_trafo_apply_product_labels():
    code, text = run("trafo", "apply", "product(gf(3),gf(3))", "--matrix", "(1,1),(0,0),(0,1),(1,1)",
                     "--z", "(2,0)")
    assert code == 0 and text.startswith("(2,0) -> (2,1)")


def test_split_top_level():
    assert split_top_level("(0,1),1,{0,2},e") == ["(0,1)", "1", "{0,2}", "e"]


def test_groups():
    code, text = run("groups", "upper2(gf(3))")
    assert code == 0
    assert "|B| = 3" in text and "|T| = 27" in text and "|N| = 9" in text


def test_model_lines():
    code, text = run("model", "lines", "--example", "dual", "--field", "gf(3)", "--t", "1")
    assert code == 0 and text.startswith("12 lines")
    code, text = run("model", "lines", "--example", "ternion", "--field", "gf(3)", "--t", "2", "--json")
    doc = json.loads(text)
    assert doc["counts"] == {"non-regular image": 63, "translate-of-parabola-in-H": 54}


def test_model_figures(tmp_path):
    out = tmp_path / "fig.csv"
    code, text = run("model", "figures", "--example", "dual", "--t", "0.5", "--range", "0:2:1", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines()[0] == "curve_id,param,x,y"
    assert len(out.read_text().splitlines()) == 1 + 3 * 3


@pytest.mark.parametrize("argv", [
    ["ring", "info", "foo(3)"],
    ["ring", "info", "gf(6)"],
    ["ring"],
    ["projline", "graph", "zmod(4)", "--format", "svg"],
    ["trafo", "apply", "dual(gf(3))", "--matrix", "1,0,0", "--z", "0"],
    ["trafo", "apply", "dual(gf(3))", "--matrix", "e,0,0,1", "--z", "0"],
    ["trafo", "apply", "zmod(6)", "--matrix", "1,0,0,1", "--z", "0"],
    ["model", "lines", "--example", "dual", "--field", "gf(2)", "--t", "1"],
    ["model", "figures", "--example", "dual", "--t", "1", "--range", "0:1", "--out", "/tmp/x.csv"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv, io.StringIO()) == 2
    assert capsys.readouterr().err


def test_failed_check_exits_1(monkeypatch):
    def broken(desc):
        rep = suites.VerificationReport("ring", desc)
        rep.add("deliberately false", False)
        return rep
    monkeypatch.setattr(suites, "ring_suite", broken)
    code, text = run("verify", "ring", "zmod(4)")
    assert code == 1 and "FAIL" in text and "no witness recorded" in text


def test_fail_entries_carry_witness():
    rep = suites.VerificationReport("x", "y")
    rep.add("a", False)
    rep.add("b", True)
    assert rep.checks[0].witness and rep.checks[1].witness is None
    assert not rep.ok


def test_output_is_deterministic():
    argv = ["verify", "trafo", "upper2(gf(3))", "--json"]
    assert run(*argv) == run(*argv)
    assert run("projline", "graph", "upper2(gf(2))") == run("projline", "graph", "upper2(gf(2))")


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("RINGLINE_SEED", "7")
    assert suites.sampling_seed() == 7
    rep = suites.trafo_suite("upper2(gf(3))")
    assert any("seed 7" in c.name for c in rep.checks)
    monkeypatch.delenv("RINGLINE_SEED")
    assert suites.sampling_seed() == suites.DEFAULT_SEED


def test_verify_all_small_with_jobs():
    code, text = run("verify", "all", "--max-size", "8", "--jobs", "2", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["ok"] and doc["schema"] == 1
    code2, text2 = run("verify", "all", "--max-size", "8", "--json")
    assert text == text2


def test_catalog_bounds():
    small = suites.catalog(9)
    assert "zmod(9)" in small and "zmod(12)" not in small
    assert all(suites.ring_size(d) <= 9 for d in small)
    assert "upper2(gf(3))" in suites.algebra_catalog(27)


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "ringline", "ring", "info", "zmod(4)"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "radical: {0, 2}" in res.stdout


def test_verify_all_catalog():
    code, text = run("verify", "all", "--max-size", "27")
    assert code == 0
    assert text.splitlines()[-1].endswith("suites passed")
    assert "[FAIL]" not in text
