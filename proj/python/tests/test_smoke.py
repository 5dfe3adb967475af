import math

import pytest

import geonet
from geonet import theory


def test_graph_roundtrip_and_components():
    region = geonet.Region(10.0, 10.0)
    g = geonet.build_graph(region, 1.0, 4, n=300)
    assert len(g) == 300
    assert sum(g.degrees()) == 2 * g.edge_count
    for v in range(len(g)):
        for w in g.neighbors(v):
            (x1, y1), (x2, y2) = g.points[v], g.points[w]
            assert math.hypot(x1 - x2, y1 - y2) <= 1.0
    comps = g.components()
    assert sum(comps["sizes"]) == 300
    again = geonet.Graph.from_json(g.to_json())
    assert again.points == g.points
    assert again.edge_count == g.edge_count


def test_explicit_points_and_crossing():
    region = geonet.Region(10.0, 4.0)
    chain = [(0.5 + 0.9 * i, 2.0) for i in range(11)]
    g = geonet.Graph(chain, region, 1.0)
    assert g.crosses()
    alive = [True] * 11
    alive[5] = False
    assert not g.crosses(alive)
    with pytest.raises(ValueError):
        geonet.Graph([(11.0, 1.0)], region, 1.0)


def test_failures_and_rules():
    g = geonet.build_graph(geonet.Region(25, 25), 1.0, 7, n=1600)
    alive = geonet.apply_failures(g, geonet.FailureRule("attack:4"), 0)
    degrees = g.degrees()
    assert all(a == (d <= 4) for a, d in zip(alive, degrees))
    assert geonet.FailureRule.independent(0.3).probability(9) == 0.3
    margin = geonet.FailureRule.margin(g)
    assert margin.probability(0) == 0.0
    with pytest.raises(ValueError):
        geonet.FailureRule("indep:2")


def test_cascade():
    g = geonet.Graph([(1, 1), (1.8, 1), (2.6, 1)], geonet.Region(10, 10), 1.0)
    state = geonet.run_cascade(g, [0.9, 0.4, 0.4], 0)
    assert state["rounds"] == [[0], [1], [2]]
    dist = geonet.ThresholdDistribution("pieces:0,0.1,15/2;0.1,1,5/18")
    assert dist.cdf(0.1) == pytest.approx(0.75)
    assert dist.vulnerable_probability(10) == pytest.approx(0.75)
    labels = geonet.classify(g, [0.9, 0.4, 0.4])
    assert labels["vulnerable"] == [True, True, True]
    assert labels["reliable"] == [True, False, True]


def test_theory():
    assert theory.critical_q(2.87) == pytest.approx(0.5)
    assert theory.critical_q(1.0) is None
    assert theory.critical_phi(10.0) == 0
    assert theory.enumerate_circuits(2) == 1
    assert theory.circuit_bound(3) == 216
    assert theory.nondecreasing_lhs(3.0, lambda k: 1.0) == pytest.approx(1.0)
    assert theory.nonincreasing_lhs(3.0, lambda k: 0.0) == pytest.approx(1 - math.exp(-1.5))
    fig12 = geonet.ThresholdDistribution("pieces:0,0.999,1/999;0.999,1,999")
    assert theory.thm2_no_cascade(1600 / 225, fig12)["holds"]
    assert theory.k0(1.0, 6.0) == pytest.approx(110.0)


def test_sweep_is_reproducible():
    config = {
        "kind": "percolation-sweep",
        "region": {"width": 50, "height": 50, "boundary": "open-box"},
        "lambdas": [0.5, 3.0],
        "trials": 10,
        "base_seed": 3,
    }
    a = geonet.run_sweep(config)
    assert a == geonet.run_sweep(config)
    assert [p["estimate"] for p in a["points"]] == [0.0, 1.0]
    with pytest.raises(ValueError):
        geonet.run_sweep({**config, "trails": 3})
