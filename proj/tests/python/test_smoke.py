import os
import pathlib

import pytest

import qtopos

ROOT = pathlib.Path(os.environ.get("QTOPOS_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
SCENARIOS = sorted((ROOT / "scenarios").glob("*.json"))


def test_lattice_operations():
    up = qtopos.Subspace(2, [[1, 0]])
    plus = qtopos.Subspace(2, [["1", "1"]])
    assert (up & plus) == qtopos.Subspace.zero(2)
    assert (up | plus) == qtopos.Subspace.whole(2)
    assert ~up == qtopos.Subspace(2, [[0, 1]])
    assert up <= up | plus
    assert qtopos.project(plus, up) == up
    assert qtopos.Subspace(2, [["1/2", "1/2"]]) == plus
    assert plus.basis == [["1", "1"]]


def test_floats_are_rejected():
    with pytest.raises(qtopos.ParseError):
        qtopos.Subspace(2, [[0.5, 1]])


@pytest.mark.parametrize("path", SCENARIOS, ids=lambda p: p.stem)
def test_bundled_scenarios_are_green(path):
    sc = qtopos.Scenario.load(str(path))
    report = sc.check()
    assert report["summary"]["fail"] == 0
    assert report["summary"]["rows"] == len(report["rows"])
    assert sc.check() == report


def test_qubit_valuation():
    sc = qtopos.Scenario.load(str(ROOT / "scenarios" / "qubit.json"))
    v = sc.valuate("plus-up")
    by_name = {p["name"]: p for p in v["propositions"]}
    assert by_name["down"]["is_annihilator"]
    assert by_name["down"]["bub"] == 0
    assert by_name["identity"]["is_top"]
    assert len(by_name["plus"]["sieve"]) == 2
    assert len(sc.determinate("plus-up")) == 4


def test_non_projective_fixture_fails_with_witness():
    sc = qtopos.Scenario.load(str(ROOT / "tests" / "fixtures" / "non_projective.json"))
    report = sc.check()
    failed = [r for r in report["rows"] if r["status"] == "fail"]
    assert [r["tag"] for r in failed] == ["projectivity"]
    assert "witness" in failed[0]["detail"]


def test_errors_map_to_exceptions():
    with pytest.raises(qtopos.ParseError):
        qtopos.Scenario.parse("{")
    with pytest.raises(qtopos.CommutantViolation):
        qtopos.Scenario.load(str(ROOT / "tests" / "fixtures" / "bad_commutant.json"))
    with pytest.raises(qtopos.CapExceeded):
        qtopos.Scenario.load(str(ROOT / "scenarios" / "qubit.json"), caps="monoid=2")
    sc = qtopos.Scenario.load(str(ROOT / "scenarios" / "qubit.json"))
    with pytest.raises(qtopos.UnknownObject):
        sc.valuate("missing")
