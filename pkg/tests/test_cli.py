import io
import json
import re

import numpy as np
import pytest

from selfx import LaurentPolynomial
from selfx.cli import main
from selfx.documents import dumps, laurent_document, loads, samples_document

L = LaurentPolynomial.from_dict


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def docs(tmp_path):
    th = 2 * np.pi * np.arange(512) / 512
    items = {
        "triple": laurent_document(L({2: 1, -1: 1})),
        "power": laurent_document(L({4: 1, -2: 1})),
        "cubic": laurent_document(L({3: 1, 1: 0.05})),
        "balanced": laurent_document(L({1: 1, -1: np.exp(0.7j)})),
        "circle": samples_document(th, np.exp(1j * th)),
        "eight": samples_document(th, np.cos(th) + 1j * np.sin(2 * th)),
        "noise": samples_document(th[::8], np.random.default_rng(0).normal(size=64) * (1 + 1j)),
    }
    paths = {}
    for name, doc in items.items():
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(dumps(doc), encoding="utf-8")
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text('{"kind": ', encoding="utf-8")
    return paths


def test_analyze(docs):
    code, out = run("analyze", docs["triple"])
    report = json.loads(out)
    assert code == 0 and report["count"] == 3 and report["bound"] == 3


def test_analyze_exceptional(docs):
    code, out = run("analyze", docs["power"])
    assert code == 2 and json.loads(out)["status"] == "PowerSubstitution(2)"


def test_analyze_with_oracle(docs):
    code, out = run("analyze", docs["cubic"], "--oracle")
    report = json.loads(out)
    assert code == 0 and report["oracle_count"] == report["count"] == 4


def test_analyze_bad_input(docs, capsys):
    assert run("analyze", docs["bad"])[0] == 64
    assert "malformed JSON" in capsys.readouterr().err
    assert run("analyze", docs["circle"])[0] == 64
    assert run("analyze", "/nonexistent.json")[0] == 64


def test_analyze_tolerance_flags(docs):
    code, out = run("analyze", docs["triple"], "--tol-unit", "1e-6", "--tol-image", "1e-5",
                    "--tol-cluster", "1e-5", "--seed", "4")
    assert code == 0 and json.loads(out)["count"] == 3
    assert run("analyze", docs["triple"], "--tol-unit", "-1")[0] == 64


@pytest.mark.parametrize("args, expected", [(("5", "1"), "16"), (("3", "-3"), "10")])
def test_bound(args, expected):
    assert run("bound", *args) == (0, expected + "\n")


def test_bound_invalid():
    assert run("bound", 3, 0)[0] == 64
    assert run("bound", "x", 1)[0] == 64


def test_extremal():
    code, out = run("extremal", 3, -2, 0.001, "--verify")
    result = json.loads(out)
    assert code == 0 and result["count"] == 10 and result["expected"] == 10
    code, out = run("extremal", 2, -1, 0.01, "--verify")
    assert code == 0 and json.loads(out)["count"] == 3
    code, out = run("extremal", 3, 1, 0.05)
    assert code == 0 and LaurentPolynomial.from_json_dict(json.loads(out)["polynomial"]) == L({3: 1, 1: 0.05})
    assert run("extremal", 4, 2, 0.1)[0] == 64
    assert run("extremal", 3, -2, 0)[0] == 64


def test_oracle_and_compare(docs):
    code, out = run("oracle", docs["triple"])
    assert code == 0 and json.loads(out)["oracle_count"] == 3
    code, out = run("oracle", docs["balanced"])
    assert code == 2 and json.loads(out)["status"] == "Saturated"
    code, out = run("compare", docs["cubic"], "--grid", 8192)
    assert code == 0 and json.loads(out)["counts_agree"]
    assert run("compare", docs["power"])[0] == 2
    assert run("oracle", docs["triple"], "--grid", 10)[0] == 64


def test_embed(docs, tmp_path):
    target = tmp_path / "out.json"
    code, out = run("embed", docs["eight"], "--p", 2, "--eps", 0.05, "-o", target)
    result = json.loads(out)
    assert code == 0 and result["simple"] and result["signed_area"] > 0 and result["lp_distance"] < 0.05
    doc = loads(target.read_text(encoding="utf-8"))
    assert doc.kind == "polyline" and doc.metadata["p"] == "2.0"
    code, out = run("embed", docs["circle"], "--eps", 0.01)
    assert code == 0 and json.loads(out)["lp_distance"] < 0.01


def test_embed_laurent_input(docs):
    code, out = run("embed", docs["triple"], "--eps", 0.05)
    assert code == 0 and json.loads(out)["simple"]


def test_embed_errors(docs, tmp_path):
    assert run("embed", docs["circle"], "--eps", 0)[0] == 64
    assert run("embed", docs["circle"], "--p", 0.5)[0] == 64
    assert run("embed", docs["bad"])[0] == 64
    # white noise is far from every trigonometric polynomial the fit may use
    code, out = run("embed", docs["noise"], "--eps", 0.05)
    assert code == 3 and json.loads(out)["status"] == "BudgetExceeded"
    assert run("embed", docs["circle"], "-o", tmp_path / "missing" / "x.json")[0] == 66


def _markers(svg):
    return re.findall(r'<circle class="crossing" cx="([^"]+)" cy="([^"]+)"', svg)


def test_render_marks_triple_point_once(docs, tmp_path):
    target = tmp_path / "t.svg"
    assert run("render", docs["triple"], "-o", target, "--mark-crossings")[0] == 0
    svg = target.read_text()
    assert len(_markers(svg)) == 1
    cx, cy = (float(v) for v in _markers(svg)[0])
    assert abs(cx) < 1e-8 and abs(cy) < 1e-8


def test_render_cubic_has_four_markers(docs, tmp_path):
    target = tmp_path / "c.svg"
    assert run("render", docs["cubic"], "-o", target, "--mark-crossings")[0] == 0
    assert len(_markers(target.read_text())) == 4


def test_render_circle_samples(docs, tmp_path):
    code, svg = run("render", docs["circle"], "--mark-crossings")
    assert code == 0 and "<path" in svg and " Z\"" in svg and not _markers(svg)


def test_render_samples_with_crossing(docs):
    code, svg = run("render", docs["eight"], "--mark-crossings")
    markers = _markers(svg)
    assert code == 0 and len(markers) == 1
    assert all(abs(float(v)) < 1e-9 for v in markers[0])


def test_render_is_deterministic(docs):
    assert run("render", docs["cubic"], "--mark-crossings") == run("render", docs["cubic"], "--mark-crossings")


def test_render_write_failure(docs):
    assert run("render", docs["triple"], "-o", "/nonexistent/dir/x.svg")[0] == 66


def test_usage_errors():
    assert run()[0] == 64
    assert run("frobnicate")[0] == 64
    assert run("analyze")[0] == 64
