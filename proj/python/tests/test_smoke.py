import json
import math

import pytest

import gsobolev as gs


def test_weights():
    w = gs.Weights.standard(4)
    assert len(w) == 4
    assert w[0] == pytest.approx(0.25)
    assert w.values() == pytest.approx([0.25, 0.125, 0.0625, 0.03125])
    with pytest.raises(IndexError):
        w[4]


def test_sharpness_closed_form():
    assert gs.sharpness_closed_form(1, 2.0) == pytest.approx(2.0 / math.pi)
    assert gs.sharpness_closed_form(4, 1.0) / gs.sharpness_closed_form(1, 1.0) == pytest.approx(2.0)


def test_function_eval():
    w = gs.Weights.standard(3)
    f = gs.Function("gaussian_bump:c1=0.1,w=0.3,n=2", w)
    assert f.dim == 3
    x = [0.1, 0.0, 0.5]
    assert f(x) == pytest.approx(1.0)
    assert f.gradient(x) == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)
    with pytest.raises(ValueError):
        f([0.0])


def test_sobolev_norm_deterministic():
    w = gs.Weights.standard(4)
    f = gs.Function("gaussian_bump:c1=0.1,w=0.3,n=2", w)
    a = gs.sobolev_norm(f, 1, 2.0, w, samples=4000, seed=3)
    b = gs.sobolev_norm(f, 1, 2.0, w, samples=4000, seed=3)
    assert a == b
    assert a["total"] > 0.0
    assert len(a["per_order"]) == 2


def test_hs_bound():
    w = gs.Weights.standard(8)
    f = gs.Function("sgn_sum:n=4", w)
    c = gs.hs_bound_check(f, [0.0] * 8, w, samples=50000)
    assert c["pass"]
    assert abs(c["lhs"]["value"] - 2.0 / math.pi) <= 4 * c["lhs"]["stderr"]
    assert set(c["lhs"]) == {"value", "stderr", "n"}


def test_truncation_n1():
    assert gs.truncation_n1(gs.Weights.standard(8), inner=20000) == 2


def test_run_report():
    assert "pipeline" in gs.commands()
    rep = gs.run_report("translate-check", dim=4, samples=2000, seed=5)
    assert rep["command"] == "translate-check"
    assert len(rep["rows"]) == 20
    assert {r["verdict"] for r in rep["rows"]} <= {"PASS", "FAIL", "INCONCLUSIVE"}
    assert sum(rep["summary"].values()) == 20
    csv = gs.run("norm-ratio", {"dim": "4", "samples": "2000"})
    assert csv.splitlines()[0] == "check_id,value,stderr,n,reference,provenance,verdict"


def test_run_errors():
    with pytest.raises(ValueError):
        gs.run("nope", {})
    with pytest.raises(ValueError):
        gs.run("project", {"dim": "-1"})
