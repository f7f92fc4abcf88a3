import itertools
import json
import math

import numpy as np
import pytest

from rbmatch.combinatorics import normal_cdf
from rbmatch.exact1d import optimal_match_1d
from rbmatch.network import (
    NetworkInstance,
    build_regular_network,
    d2_probabilities,
    exact_network_match,
    heuristic_network_match,
    network_estimate,
    point_distance,
    sample_instance,
)
from rbmatch.types import Instance1D


@pytest.fixture(scope="module")
def square_torus():
    return build_regular_network(4, 36, 1.0)


def test_build_node_counts():
    assert build_regular_network(4, 36, 1.0).node_count == 18
    assert build_regular_network(3, 36, 1.0).node_count == 24
    assert build_regular_network(6, 36, 1.0).node_count == 12


def test_build_handshake_regularity_connectivity():
    for degree in (3, 4, 6):
        net = build_regular_network(degree, 36, 1.0)
        assert 2 * net.edge_count == degree * net.node_count
        deg = np.zeros(net.node_count, dtype=int)
        for a, b in net.edges:
            deg[a] += 1
            deg[b] += 1
        assert (deg == degree).all()
        assert np.isfinite(net.node_distance).all()
        assert (net.node_distance == net.node_distance.T).all()
        assert (np.diag(net.node_distance) == 0).all()


def test_build_rejects_infeasible_pairs():
    with pytest.raises(ValueError):
        build_regular_network(5, 36, 1.0)  # unsupported degree
    with pytest.raises(ValueError):
        build_regular_network(4, 15, 1.0)  # odd node count
    with pytest.raises(ValueError):
        build_regular_network(4, 14, 1.0)  # 7 nodes: no torus factorization
    with pytest.raises(ValueError):
        build_regular_network(3, 4, 1.0)  # 2*4/3 not integral


def test_network_json_export():
    net = build_regular_network(4, 36, 2.0)
    obj = json.loads(net.to_json())
    assert obj["degree"] == 4
    assert obj["nodes"] == 18
    assert len(obj["edges"]) == 36
    assert all(e[2] == 2.0 for e in obj["edges"])


def test_point_distance_same_edge(square_torus):
    assert point_distance(square_torus, (0, 0.2), (0, 0.7)) == pytest.approx(0.5)


def test_point_distance_adjacent_edges(square_torus):
    net = square_torus
    shared = net.edges[0][1]
    other = next(
        e for e, (a, b) in enumerate(net.edges) if e != 0 and shared in (a, b)
    )
    offset = 0.2 if net.edges[other][0] == shared else 0.8
    assert point_distance(net, (0, 0.9), (other, offset)) == pytest.approx(0.3)


def test_point_distance_metric_properties(square_torus):
    rng = np.random.default_rng(40)
    pts = [(int(rng.integers(36)), float(rng.uniform(0, 1))) for _ in range(30)]
    for a, b in itertools.combinations(pts, 2):
        assert point_distance(square_torus, a, b) == pytest.approx(
            point_distance(square_torus, b, a), abs=1e-12
        )
    for a, b, c in itertools.combinations(pts[:12], 3):
        dab = point_distance(square_torus, a, b)
        dbc = point_distance(square_torus, b, c)
        dac = point_distance(square_torus, a, c)
        assert dac <= dab + dbc + 1e-9


def test_sampling_determinism_and_counts(square_torus):
    a = sample_instance(square_torus, 5.0, 7.0, 123)
    b = sample_instance(square_torus, 5.0, 7.0, 123)
    for x, y in zip(a.per_edge_demand, b.per_edge_demand):
        assert (x == y).all()
    for x, y in zip(a.per_edge_supply, b.per_edge_supply):
        assert (x == y).all()
    assert all((np.diff(x) >= 0).all() for x in a.per_edge_supply)


def test_sampling_law_of_large_numbers(square_torus):
    mu = 5.0
    rng = np.random.default_rng(41)
    draws = []
    for _ in range(2000):
        inst = sample_instance(square_torus, mu, mu, rng)
        draws.extend(len(x) for x in inst.per_edge_demand)
    draws = np.asarray(draws, dtype=float)  # 72_000 Poisson(5) draws
    tolerance = 3.0 * math.sqrt(mu) / math.sqrt(draws.size)
    assert abs(draws.mean() - mu) <= tolerance


def test_sampling_rejects_bad_densities(square_torus):
    with pytest.raises(ValueError):
        sample_instance(square_torus, 0.0, 1.0, 1)


def test_exact_match_single_pair(square_torus):
    inst = _manual_instance(square_torus, {0: [0.2]}, {0: [0.9]})
    res = exact_network_match(square_torus, inst)
    assert res.total_distance == pytest.approx(0.7)


def _manual_instance(net, demand_by_edge, supply_by_edge) -> NetworkInstance:
    demand = [np.sort(np.asarray(demand_by_edge.get(e, []), float)) for e in range(net.edge_count)]
    supply = [np.sort(np.asarray(supply_by_edge.get(e, []), float)) for e in range(net.edge_count)]
    return NetworkInstance(per_edge_demand=tuple(demand), per_edge_supply=tuple(supply))


def test_exact_match_single_edge_matches_segment_dp(square_torus):
    # points kept in the middle third never route around the ends
    rng = np.random.default_rng(42)
    for _ in range(30):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(m, 8))
        dem = rng.uniform(1 / 3, 2 / 3, m)
        sup = rng.uniform(1 / 3, 2 / 3, n)
        inst = _manual_instance(square_torus, {3: dem}, {3: sup})
        res = exact_network_match(square_torus, inst)
        seg = optimal_match_1d(Instance1D(dem, sup, 1.0))
        assert res.total_distance == pytest.approx(seg.total_distance, abs=1e-9)


def test_exact_match_brute_force(square_torus):
    rng = np.random.default_rng(43)
    for _ in range(25):
        while True:
            inst = sample_instance(square_torus, 0.04, 0.06, rng)
            if 0 < inst.total_demand <= 4 and inst.total_demand <= inst.total_supply <= 6:
                break
        res = exact_network_match(square_torus, inst)
        de, do = inst.demand_points()
        se, so = inst.supply_points()
        costs = np.array(
            [
                [
                    point_distance(square_torus, (int(de[i]), float(do[i])), (int(se[j]), float(so[j])))
                    for j in range(len(so))
                ]
                for i in range(len(do))
            ]
        )
        best = min(
            costs[np.arange(len(do)), list(perm)].sum()
            for perm in itertools.permutations(range(len(so)), len(do))
        )
        assert res.total_distance == pytest.approx(float(best), abs=1e-9)


def test_exact_match_rejects_excess_demand(square_torus):
    inst = _manual_instance(square_torus, {0: [0.1, 0.2]}, {1: [0.5]})
    with pytest.raises(ValueError):
        exact_network_match(square_torus, inst)
    with pytest.raises(ValueError):
        heuristic_network_match(square_torus, inst)


def test_heuristic_all_local_when_every_edge_balanced(square_torus):
    rng = np.random.default_rng(44)
    demand = {}
    supply = {}
    expected = 0.0
    for e in range(square_torus.edge_count):
        k = int(rng.integers(0, 4))
        dem = rng.uniform(0, 1, k)
        sup = rng.uniform(0, 1, k)
        demand[e] = dem
        supply[e] = sup
        if k:
            expected += optimal_match_1d(Instance1D(dem, sup, 1.0)).total_distance
    inst = _manual_instance(square_torus, demand, supply)
    res = heuristic_network_match(square_torus, inst)
    assert res.total_distance == pytest.approx(expected, abs=1e-9)


def test_heuristic_keeps_central_demand_local(square_torus):
    # surplus demand: the two points nearest the edge middle match locally,
    # the two near the ends go looking across edges
    inst = _manual_instance(
        square_torus,
        {0: [0.05, 0.45, 0.55, 0.95]},
        {0: [0.4, 0.6], 5: [0.5], 9: [0.5]},
    )
    res = heuristic_network_match(square_torus, inst)
    local = {(i, j) for i, j in res.pairs if j in (0, 1)}
    assert local == {(1, 0), (2, 1)}
    assert len(res.pairs) == 4


def test_heuristic_never_beats_exact(square_torus):
    rng = np.random.default_rng(45)
    for _ in range(40):
        while True:
            inst = sample_instance(square_torus, 1.0, 1.2, rng)
            if 0 < inst.total_demand <= inst.total_supply:
                break
        h = heuristic_network_match(square_torus, inst)
        ex = exact_network_match(square_torus, inst)
        assert h.total_distance >= ex.total_distance - 1e-9
        assert len(h.pairs) == inst.total_demand


def test_global_fraction_tracks_alpha(square_torus):
    # fraction of demand matched across edges stays within three per-instance
    # standard deviations of the alpha approximation
    mu = lam = 5.0
    parts = network_estimate(4, mu, lam, 1.0)
    rng = np.random.default_rng(46)
    fractions = []
    for _ in range(100):
        while True:
            inst = sample_instance(square_torus, mu, lam, rng)
            if 0 < inst.total_demand <= inst.total_supply:
                break
        local_pairs = 0
        d_edge, _ = inst.demand_points()
        s_edge, _ = inst.supply_points()
        res = heuristic_network_match(square_torus, inst)
        for i, j in res.pairs:
            if d_edge[i] == s_edge[j]:
                local_pairs += 1
        fractions.append(1.0 - local_pairs / inst.total_demand)
    fractions = np.asarray(fractions)
    assert abs(fractions.mean() - parts.alpha) <= 3.0 * fractions.std(ddof=1)


def test_estimate_parts_identity_and_probability():
    parts = network_estimate(4, 5.0, 5.0, 1.0)
    assert parts.total == pytest.approx(
        (1 - parts.alpha) * parts.local + parts.alpha * (parts.d1 + parts.d2 + parts.d3),
        abs=1e-15,
    )
    assert 0.0 <= parts.alpha <= 1.0
    # the normal approximation of the per-edge surplus probability
    assert normal_cdf(-0.5 / math.sqrt(10.0)) == pytest.approx(0.4372, abs=1e-4)


def test_estimate_alpha_vanishes_for_heavy_surplus():
    parts = network_estimate(4, 5.0, 500.0, 1.0)
    assert parts.alpha == pytest.approx(0.0, abs=1e-12)
    assert parts.total == pytest.approx(parts.local)


def test_estimate_monotone_in_supply_density():
    for degree in (3, 4, 6):
        totals = [network_estimate(degree, 5.0, float(lam), 1.0).total for lam in range(5, 26)]
        assert all(b <= a + 1e-12 for a, b in zip(totals, totals[1:]))


def test_search_layer_distribution_tail():
    for degree in (3, 4, 6):
        for lam in (5.0, 10.0, 15.0, 20.0, 25.0):
            q = normal_cdf((-0.5 + (lam - 5.0)) / math.sqrt(lam + 5.0))
            probs = d2_probabilities(degree, q, 10)
            total = probs.sum()
            assert total <= 1.0 + 1e-12
            assert 1.0 - total < 1e-6  # truncation at ten layers loses almost nothing


def test_estimate_rejects_bad_parameters():
    with pytest.raises(ValueError):
        network_estimate(5, 1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        network_estimate(4, 3.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        network_estimate(4, 1.0, 2.0, 1.0, kappa=0)
