import json

import pytest

import quadmap


def test_labels():
    ls = quadmap.labels()
    assert len(ls) == 18
    assert "E1" in ls and "DP5" in ls


def test_classify_normal_forms():
    for label in quadmap.labels():
        res = quadmap.classify(quadmap.normal_form(label))
        assert res["label"] == label
        assert res["residual"] <= 1e-12


def test_classify_conjugate_and_verify():
    nf = quadmap.normal_form("E1")
    h = (0.5, 0.2, -0.1, 1.5, 0.3, -0.7)
    k = (2.0, 0.0, 0.5, 1.0, -1.0, 0.25)
    g = quadmap.compose(k, nf, h)
    res = quadmap.classify(g)
    assert res["label"] == "E1"
    assert quadmap.verify_witness(g, "E1", res["h"], res["k"]) <= 1e-7


def test_preimage_count():
    h3 = quadmap.normal_form("H3")
    c = quadmap.preimage_count(h3, 1.0, 0.0)
    assert not c["infinite"]
    assert c["count"] == 4
    for x, y in c["points"]:
        fx, fy = quadmap.evaluate(h3, x, y)
        assert abs(fx - 1.0) < 1e-8 and abs(fy) < 1e-8

    dh2 = quadmap.normal_form("DH2")
    c = quadmap.preimage_count(dh2, 1.0, 0.0)
    assert c["infinite"] and c["kind"] == "circle"


def test_not_quadratic_raises():
    affine = [0.0] * 12
    affine[3] = 1.0
    affine[10] = 1.0
    with pytest.raises(quadmap.NotQuadraticError):
        quadmap.classify(affine)


def test_quadratic_inverse_henon():
    henon = [0.0] * 12
    henon[0] = -1.4  # a20
    henon[4] = 1.0   # a01
    henon[5] = 1.0   # a00
    henon[9] = 0.3   # b10
    inv = quadmap.quadratic_inverse(henon)
    x, y = 0.4, -0.2
    fx, fy = quadmap.evaluate(henon, x, y)
    rx, ry = quadmap.evaluate(inv, fx, fy)
    assert abs(rx - x) < 1e-10 and abs(ry - y) < 1e-10
    with pytest.raises(quadmap.NotInvertibleError):
        quadmap.quadratic_inverse(quadmap.normal_form("E2"))


def test_collapses():
    assert quadmap.smooth_class_of("DP2") == "DE1"
    assert quadmap.critical_set_class_of("DE1") == quadmap.critical_set_class_of("DH1")
    rep = quadmap.distinguishing_invariant("DE1", "DH1")
    assert rep["invariant"] == "range convexity"


def test_report_json():
    spec = json.dumps({"a20": 1, "a02": "-1", "a10": 1, "b11": 1})
    rep = json.loads(quadmap.report_json(spec))
    assert rep["label"] == "E1"
    assert rep["profile_matches_class"] is True
