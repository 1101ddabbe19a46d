import json

import pytest

skeinlab = pytest.importorskip("skeinlab")


def test_skein_mul_at_minus_i():
    prod = skeinlab.skein_mul({"p": 1, "q": 0}, {"p": 0, "q": 1})
    terms = {(t["curve"]["p"], t["curve"]["q"]): t["coeff"] for t in prod}
    assert terms == {(1, 1): {"re": "0", "im": "1"}, (1, -1): {"re": "0", "im": "-1"}}
    assert len(prod) == 2


def test_formal_product_has_laurent_coefficients():
    prod = skeinlab.skein_mul({"p": 1, "q": 0}, {"p": 0, "q": 1}, spec="formal")
    assert all("laurent" in t["coeff"] for t in prod)


def test_phi_map_and_heisenberg():
    img = skeinlab.phi_map({"p": 1, "q": 0})
    assert img == [{"curve": {"d": 1, "p": 1, "q": 0}, "class": [1, 0], "coeff": {"re": "-1", "im": "0"}}]
    e1 = {"genus": 1, "terms": [{"class": [1, 0], "coeff": {"re": "1", "im": "0"}}]}
    assert skeinlab.heis_mul(e1, e1) == {"genus": 1, "terms": [{"class": [0, 0], "coeff": {"re": "1", "im": "0"}}]}


def test_iso_sweep():
    r = skeinlab.iso_sweep(2, 2)
    assert r["failures"] == []
    assert r["pairs"] == r["basis_size"] ** 2
    assert skeinlab.iso_sweep(1, 1, labeling="literal")["failures"]


def test_ribbon():
    moebius = {"vertices": [["a", "b"]], "edges": [{"pair": ["a", "b"], "type": "moebius"}]}
    r = skeinlab.ribbon_check(moebius)
    assert r["holds"] and r["n"] == 1 and r["m_values"] == [1, 1]
    for seed in range(50):
        assert skeinlab.ribbon_check(skeinlab.random_ribbon_graph(seed))["holds"]


def test_tqft():
    assert skeinlab.count_colorings("circle", 4) == 1
    assert skeinlab.trace_sum("circle", [2], "-39/80") == pytest.approx(76.0, abs=1e-9)
    assert skeinlab.trace_sum("theta", [1, 1, 1], "-7/16", contracted=True) == pytest.approx(
        skeinlab.trace_sum("theta", [1, 1, 1], "-7/16"), abs=1e-9)
    assert skeinlab.normalized_trace("circle", [2], 20) == pytest.approx(1.9, abs=1e-12)
    value, err = skeinlab.tracei("circle", [4])
    assert value == pytest.approx(6.0, abs=1e-9)
    est, se = skeinlab.limit_trace("theta", [1, 1, 1], samples=50000)
    ref, ref_err = skeinlab.tracei("theta", [1, 1, 1])
    assert abs(est - ref) <= 4 * (se ** 2 + ref_err ** 2) ** 0.5
    assert skeinlab.class_vanishes("theta", [1, 1, 1])
    assert not skeinlab.class_vanishes("theta", [1, 1, 0])


def test_pillowcase():
    assert skeinlab.operator_trace(1, 0, 2) == pytest.approx(2.0, abs=1e-9)
    assert skeinlab.operator_trace(1, 1, 4) == pytest.approx(6.0, abs=1e-9)
    assert skeinlab.psi_commutator_error(0.5) < 1e-9


def test_errors():
    with pytest.raises(skeinlab.ParseError):
        skeinlab.skein_mul({"p": 2, "q": 4})
    with pytest.raises(skeinlab.SkeinError):
        skeinlab.count_colorings("theta", 7)
    with pytest.raises(ValueError):
        skeinlab.trace_sum("theta", [1, 1], "1/8")


def test_run_cli(tmp_path):
    code, out, _ = skeinlab.run_cli("--no-cache", "ribbon-check", "annulus")
    assert code == 0
    assert json.loads(out)["values"]["graphs"][0]["n"] == 2
    code, _, _ = skeinlab.run_cli("--no-cache", "iso-sweep", "--max-copies", "1", "--max-coord", "1",
                                   "--corrupt", '{"p": 1, "q": 0}')
    assert code == 1
    code, _, _ = skeinlab.run_cli("bogus")
    assert code == 2
