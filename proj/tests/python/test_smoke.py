import os
from fractions import Fraction

import pytest

import psadf

MODELS = os.environ.get("PSADF_MODEL_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "models"))


def model(name):
    return psadf.load(os.path.join(MODELS, name))


def test_plain_graph_matrix_and_cycle():
    m = model("example.sdf")
    assert m.kind == "sdf"
    g = m.matrix()
    assert g.labels == ["t1", "t2", "t3", "t4", "t5"]
    assert g.entry(0, 0) == Fraction(29)
    assert g.entry(0, 1) is None
    assert g.entry(4, 2) == Fraction(31)
    assert "t1: [29, -inf, -inf, 29, -inf]" in str(g)

    lam, cycle = psadf.cycle_mean(g)
    assert lam == Fraction(32)
    assert cycle == ["t4", "t5"]
    assert psadf.throughput(g) == Fraction(1, 32)

    gamma1 = psadf.evolve(g, [0, 0, 0, 0, 0], 1)
    assert gamma1 == [Fraction(29), Fraction(33), Fraction(63), Fraction(0), Fraction(64)]


def test_scenario_combination():
    m = model("example.sadf")
    mats = m.scenario_matrices()
    assert set(mats) == {"a", "b"}
    assert mats["b"].entry(4, 0) == Fraction(82)
    combined = m.matrix()
    assert combined.entry(4, 0) == Fraction(82)
    assert combined.entry(0, 0) == Fraction(29)
    assert m.scenario_notes() == []

    report = m.analyze()
    assert report["lambda"] == "41/1"
    assert report["throughput"]["fraction"] == "1/41"


def test_parse_and_validate_roundtrip():
    m = model("example.psadf")
    again = psadf.parse(m.text)
    assert again.text == m.text
    assert m.validate() == []
    assert m.repetition_vector() == {"A": "1", "B": "p", "C": "p*q", "D": "s", "E": "1"}
    assert m.schedule() == "A B^p C^p*q D^s E"

    with pytest.raises(psadf.ParseError):
        psadf.parse("graph x\nfrobnicate\n")


def test_symbolic_regions():
    m = model("example.psadf")
    regions = m.extract()
    assert len(regions) == 2
    assert {r.constraints[0] for r in regions} == {"b+p*q*c >= s*d", "b+p*q*c <= s*d"}
    hi = next(r for r in regions if r.constraints[0] == "b+p*q*c >= s*d")
    assert hi.entry(4, 0) == "a+b+e+p*q*c"
    assert hi.entry(0, 1) is None

    pt = {"p": 20, "q": 12, "s": 200, "ci": 2}
    numeric = m.matrix_at(pt)
    for r in regions:
        if r.contains(pt):
            assert r.evaluate(pt) == numeric


def test_evaluate_point():
    m = model("example.psadf")
    res = m.evaluate({"p": 10, "q": 10, "s": 140, "ci": 1})
    assert res["point"]["a"] == Fraction(30)
    assert res["warnings"] == []
    assert res["regions_containing"] == [0, 1]
    assert res["lambda"] == Fraction(420)
    assert res["critical_cycle"] == ["t2"]
    assert res["throughput"] == Fraction(1, 420)
    assert res["matrix"].entry(1, 0) == Fraction(450)

    with pytest.raises(psadf.ModelError):
        m.evaluate({"p": 10, "q": 10, "s": 140})  # no duration information


def test_check_and_errors():
    m = model("example.psadf")
    assert m.check(samples=3, seed=1) == 3
    assert m.check(samples=2, seed=7, matrices=m.extract()) == 2

    plain = model("example.sdf")
    with pytest.raises(psadf.AnalysisError):
        plain.check(samples=1)
    regions = plain.extract()  # concrete graph: a single region of constants
    assert len(regions) == 1
    assert regions[0].constraints == []
    assert regions[0].evaluate({}) == plain.matrix()


def test_full_analysis_report():
    m = model("example.psadf")
    report = m.analyze()
    assert report["lambda"] == "390000/1"
    assert report["throughput"]["fraction"] == "1/390000"
    assert report["critical_cycle"] == ["t3"]
    assert len(report["regions"]) == 2
    text = psadf.report_text(report)
    assert "lambda = 390000" in text
