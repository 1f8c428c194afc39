import json
import os

import pytest

from poisson_dme.dme import (DMEConfig, candidate_fingerprint, dme_report, local_closedness_probe,
                             primitivity_probe, rational_points, rationality_report)
from poisson_dme.exactpoly import RingSpec
from poisson_dme.groebner import Ideal, ideal_eq
from poisson_dme.poisson import NotPoissonError, generator_hamiltonians
from poisson_dme.schema import load_spec
from conftest import FIXTURES
from corpus import HEIS, SL2, SOLV

R = SOLV.ring
HAM = generator_hamiltonians(SOLV)


def spec(name):
    return load_spec(os.path.join(FIXTURES, f"{name}.json"))


def test_rationality_examples():
    assert rationality_report(SOLV, Ideal(R), 4)["status"] == "rational_up_to_bound(4)"
    r = rationality_report(HEIS, Ideal(HEIS.ring), 2)
    assert r["status"] == "nonconstant_center_element_found" and r["witness"] == "z"
    r = rationality_report(SL2, Ideal(SL2.ring), 2)
    assert SL2.ring.parse(r["witness"]) == SL2.ring.parse("h^2 + 4*e*f")
    with pytest.raises(NotPoissonError):
        rationality_report(SOLV, Ideal(R, ["x"]), 2)


def test_primitivity_examples():
    res = primitivity_probe(HAM, Ideal(R, ["y", "x"]))
    assert res["status"] == "certified" and res["core_result"]["iterations"] == 0
    res = primitivity_probe(HAM, Ideal(R), box=(1,), cap=2)
    assert res["status"] == "inconclusive(cap=2,points=1)"
    assert res["point"] == {"x": 1, "y": 1} and res["core_result"]["status"] == "upper_bound"
    with pytest.raises(ValueError):
        primitivity_probe(HAM, Ideal(R, ["1"]))


def test_primitivity_never_refutes():
    res = primitivity_probe(HAM, Ideal(R, ["y", "x - 7"]))
    assert res["status"].startswith("inconclusive") and res["points_examined"] == 0


def test_point_search_respects_invertibles():
    L = RingSpec.of("x", "y", invertible=["y"])
    pts = rational_points(Ideal(L, ["x"]))
    assert pts and all(p["y"] != 0 and p["x"] == 0 for p in pts)
    assert len(pts) == 4


def test_local_closedness_examples():
    cands = [Ideal(R, g) for g in (["y"], ["y", "x"], ["y", "x - 1"])]
    res = local_closedness_probe(HAM, Ideal(R), cands)
    assert res["status"].startswith("witnessed_relative_to_candidates[")
    assert res["witness"] == "y"
    S = SL2.ring
    sl_ham = generator_hamiltonians(SL2)
    res = local_closedness_probe(sl_ham, Ideal(S), [Ideal(S, ["h^2 + 4*e*f"]), Ideal(S, ["h^2 + 4*e*f - 1"])])
    c = S.parse("h^2 + 4*e*f")
    w = S.parse(res["witness"])
    assert res["caveat"] and ideal_eq(Ideal(S, [w]), Ideal(S, [c * (c - 1)]))
    res = local_closedness_probe(HAM, Ideal(R), [])
    assert res["status"].startswith("not_witnessed[")


def test_local_closedness_seeds_and_validation():
    res = local_closedness_probe(HAM, Ideal(R), [], seeds=[R.parse("x")])
    assert res["candidates_used"] == ["(x, y)"]
    with pytest.raises(ValueError):
        local_closedness_probe(HAM, Ideal(R), [Ideal(R, ["x"])])
    with pytest.raises(ValueError):
        local_closedness_probe(HAM, Ideal(R, ["y"]), [Ideal(R, ["y"])])


def test_fingerprint_is_order_free():
    a, b = Ideal(R, ["y"]), Ideal(R, ["x", "y"])
    assert candidate_fingerprint([a, b]) == candidate_fingerprint([b, a])
    assert candidate_fingerprint([a]) != candidate_fingerprint([b])


SMALL = DMEConfig(core_cap=3, max_points=6)


def test_report_solvable():
    r = dme_report(spec("solvable2"), "zero", SMALL)
    assert r["poisson_stable"]
    assert r["rationality"]["status"] == "rational_up_to_bound(4)"
    assert r["local_closedness"]["witness"] == "y"
    assert r["primitivity"]["status"] in ("certified", "inconclusive(cap=3,points=6)")
    assert all(c["ok"] for c in r["consistency"])


def test_report_sl2():
    r = dme_report(spec("sl2"), "zero", SMALL)
    assert r["rationality"]["status"] == "nonconstant_center_element_found"
    assert r["primitivity"]["status"] != "certified"
    check = {c["name"]: c for c in r["consistency"]}["no_certificate_with_center_element"]
    assert check["ok"]


def test_report_laurent_poisson_ideal():
    r = dme_report(spec("laurent_xy"), "x", SMALL)
    assert r["poisson_stable"] and r["span_certificate"] == ["1", "y^-1"]
    assert r["rationality"]["status"] == "nonconstant_center_element_found"


def test_report_for_non_poisson_ideal():
    s = spec("solvable2")
    s.ideals["bad"] = type(s.ideals["y"])(Ideal(R, ["x"]), True)
    r = dme_report(s, "bad", SMALL)
    assert r["poisson_stable"] is False and r["primitivity"] is None


CORPUS = [("solvable2", "zero"), ("solvable2", "y"), ("sl2", "zero"), ("sl2", "casimir"),
          ("laurent_xy", "zero"), ("laurent_xy", "x"), ("heisenberg", "zero"), ("abelian", "zero")]


@pytest.mark.parametrize("fixture,ideal", CORPUS)
def test_center_witness_excludes_certificates(fixture, ideal):
    r = dme_report(spec(fixture), ideal, SMALL)
    assert not (r["primitivity"]["status"] == "certified"
                and r["rationality"]["status"] == "nonconstant_center_element_found")


@pytest.mark.parametrize("fixture,ideal", [c for c in CORPUS if spec(c[0]).hopf is not None])
def test_families_agree(fixture, ideal):
    s = spec(fixture)
    a = dme_report(s, ideal, DMEConfig(core_cap=2, max_points=3, family="hamiltonian"))
    b = dme_report(s, ideal, DMEConfig(core_cap=2, max_points=3, family="prop_key"))
    assert a["poisson_stable"] == b["poisson_stable"]
    assert a["rationality"]["status"] == b["rationality"]["status"]


@pytest.mark.parametrize("fixture,ideal", CORPUS[:4])
def test_report_is_deterministic(fixture, ideal):
    one = json.dumps(dme_report(spec(fixture), ideal, SMALL), sort_keys=True)
    two = json.dumps(dme_report(spec(fixture), ideal, SMALL), sort_keys=True)
    assert one == two


@pytest.mark.parametrize("fixture,ideal", CORPUS)
def test_statuses_carry_their_bounds(fixture, ideal):
    r = dme_report(spec(fixture), ideal, SMALL)
    rat = r["rationality"]["status"]
    assert rat == "nonconstant_center_element_found" or rat.endswith("(4)")
    prim = r["primitivity"]["status"]
    assert prim == "certified" or "cap=3" in prim
    assert r["local_closedness"]["fingerprint"] in r["local_closedness"]["status"]
