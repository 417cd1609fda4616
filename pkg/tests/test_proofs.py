import json
import math

import pytest

from spinorbit.hset import HSet
from spinorbit.integrator import Settings
from spinorbit.model import ModelParams
from spinorbit.proofs import (
    THEOREMS,
    ProofReport,
    RelationSpec,
    TheoremSpec,
    load_theorem,
    prove_fixed_points,
    run_theorem,
    verify_theorem,
)

P = ModelParams()
S = Settings()


def test_all_tables_load():
    for name in THEOREMS:
        spec = load_theorem(name)
        assert spec.relations
        assert spec.claims
        for rel in spec.relations:
            assert rel.source in spec.sets
            assert rel.target in spec.sets


def test_table_values_match_printed_rows():
    spec = load_theorem("p1p2")
    n0 = spec.sets["N0"]
    assert n0.theta_half_pi
    assert n0.bx[0].contains(-0.0008) and n0.bx[1].contains(0.0008)
    assert n0.by[0].contains(-0.18) and n0.by[1].contains(0.08)
    n1 = spec.sets["N1"]
    assert n1.bx[0].contains(-0.01) and n1.bx[1].contains(0.005)
    spec33 = load_theorem("p3p3")
    n3 = spec33.sets["N3"]
    assert n3.frame[0, 0].contains(0.866025)
    assert n3.frame[0, 1].contains(-0.5)
    assert n3.p[0].contains(1.82077)


def test_fixed_points_bundle():
    proofs, report = prove_fixed_points(P, S)
    assert report.verdict
    assert set(proofs) == {"P1", "P2", "P3"}
    rows = {r["point"]: r for r in report.anchors}
    for name in ("P1", "P2", "P3"):
        assert rows[name]["within_target"]
        assert rows[name]["hyperbolic"]
        assert rows[name]["eigenvectors_meet_reference"]


def test_walk_search_mixed_powers():
    from spinorbit.proofs import _walk_exists

    edges = [("A", "A", 1), ("A", "B", 1), ("B", "B", 2), ("B", "A", 2)]
    assert _walk_exists(edges, "A", "A", 2) == ["A", "A", "A"]
    assert _walk_exists(edges, "A", "B", 2) == ["A", "A", "B"]
    assert _walk_exists(edges, "B", "B", 2) is not None
    assert _walk_exists(edges, "B", "A", 2) is not None
    assert _walk_exists(edges, "B", "A", 1) is None


def test_report_json_shape_and_determinism():
    rep = ProofReport(
        theorem="toy",
        verdict=True,
        params={"e": ["0.1", "0.1"]},
        settings={"order": 20},
        sets=[],
        certificates=[],
        claims=[],
        anchors=[],
        counters={},
        wall_time=1.234,
    )
    doc = json.loads(rep.to_json())
    assert doc["result"]["verdict"] == "proved"
    assert "wall_time_s" in doc["meta"]
    rep2 = ProofReport(
        theorem="toy",
        verdict=True,
        params={"e": ["0.1", "0.1"]},
        settings={"order": 20},
        sets=[],
        certificates=[],
        claims=[],
        anchors=[],
        counters={},
        wall_time=9.876,
    )
    assert json.loads(rep.to_json())["result"] == json.loads(rep2.to_json())["result"]


@pytest.mark.slow
def test_theorem_p1p2_proved_and_symmetry_free():
    rep = run_theorem("p1p2", P, S)
    assert rep.verdict
    assert rep.counters["integration_steps_for_derivation"] == 0
    assert all(c["verified"] for c in rep.certificates)
    claims = rep.claims[0]
    assert claims["holds"] and claims["power"] == 1
    anchors = {a["set"]: a for a in rep.anchors}
    assert anchors["N0"]["point"] == "P1" and anchors["N0"]["inside"]
    assert anchors["N1"]["point"] == "P2" and anchors["N1"]["inside"]


@pytest.mark.slow
def test_theorem_p1p3_symmetry_closure():
    rep = run_theorem("p1p3", P, S)
    assert rep.verdict
    derived = [c for c in rep.certificates if c["direction"] == "symmetry-derived"]
    assert len(derived) == 4
    assert all(c["integrations"] == 0 for c in derived)
    assert rep.counters["integration_steps_for_derivation"] == 0
    # endpoints canonicalized back onto the declared sets
    assert any(c["source"] == "N4" for c in derived)
    assert any(c["target"] == "N0" for c in derived)
    claim = rep.claims[0]
    assert claim["holds"]
    assert claim["endpoint_symmetry"] == {"N0": True, "N4": True}


@pytest.mark.slow
def test_negative_control_wrong_eccentricity():
    bad = ModelParams(e=0.3, omega2=0.79)
    rep = run_theorem("p1p2", bad, Settings(max_subdiv_depth=6))
    assert not rep.verdict
    failing = [c for c in rep.certificates if not c["verified"]]
    assert failing
    assert any(c.get("failure") for c in failing)


@pytest.mark.slow
def test_negative_control_rotated_frame():
    spec = load_theorem("p1p2")
    c, s = math.cos(math.pi / 6), math.sin(math.pi / 6)
    rot = [[c, -s], [s, c]]
    from spinorbit.linalg import IntervalMatrix, matmul

    n0 = spec.sets["N0"]
    twisted = HSet(
        id="N0",
        p=n0.p,
        frame=matmul(IntervalMatrix.from_floats(rot), n0.frame),
        bx=n0.bx,
        by=n0.by,
        theta_half_pi=n0.theta_half_pi,
    )
    spec2 = TheoremSpec(
        name="p1p2-rotated",
        sets={"N0": twisted, "N1": spec.sets["N1"]},
        relations=[RelationSpec("N0", "N0", 1)],
        claims=[],
        anchors=[],
    )
    rep = verify_theorem(spec2, P, Settings(max_subdiv_depth=6))
    assert not rep.verdict
    assert rep.certificates[0]["failure"]


@pytest.mark.slow
def test_negative_control_shrunk_target():
    spec = load_theorem("p1p2")
    n1 = spec.sets["N1"]
    shrunk = HSet(
        id="N1",
        p=n1.p,
        frame=n1.frame,
        bx=(n1.bx[0] * 0.1, n1.bx[1] * 0.1),
        by=(n1.by[0] * 0.1, n1.by[1] * 0.1),
        theta_half_pi=n1.theta_half_pi,
    )
    spec2 = TheoremSpec(
        name="p1p2-shrunk",
        sets={"N0": spec.sets["N0"], "N1": shrunk},
        relations=[RelationSpec("N0", "N1", 1)],
        claims=[],
        anchors=[],
    )
    rep = verify_theorem(spec2, P, Settings(max_subdiv_depth=6))
    assert not rep.verdict
    assert "entry" in rep.certificates[0]["failure"] or "exit" in rep.certificates[0]["failure"]


@pytest.mark.slow
def test_broken_symmetry_refuses_closure():
    # shifting N0 off the symmetry axis must break the endpoint symmetry
    spec = load_theorem("p1p3")
    n0 = spec.sets["N0"]
    from spinorbit.linalg import IntervalVector

    shifted = HSet(
        id="N0",
        p=IntervalVector([n0.p[0] + 1e-3, n0.p[1]]),
        frame=n0.frame,
        bx=n0.bx,
        by=n0.by,
        theta_half_pi=False,
    )
    sets = dict(spec.sets)
    sets["N0"] = shifted
    spec2 = TheoremSpec(
        name="p1p3-shifted",
        sets=sets,
        relations=spec.relations,
        claims=spec.claims,
        anchors=[],
    )
    rep = verify_theorem(spec2, P, S)
    claim = rep.claims[0]
    assert not claim["endpoint_symmetry"]["N0"]
    # the mirrored chain no longer reconnects to N0, so the claim fails
    assert not claim["holds"]
    assert not rep.verdict
