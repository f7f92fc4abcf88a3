"""Matching Poisson points on a regular network.

Builds the three supported topologies, solves sampled instances exactly, and
decomposes the network estimate into its local and cross-edge parts.
"""

import numpy as np

from rbmatch import (
    build_regular_network,
    exact_network_match,
    heuristic_network_match,
    network_estimate,
    sample_instance,
)

mu = 5.0
rng = np.random.default_rng(99)

for degree in (3, 4, 6):
    net = build_regular_network(degree, 36, 1.0)
    print(f"degree {degree}: {net.node_count} nodes, {net.edge_count} unit edges")

print()
net = build_regular_network(4, 36, 1.0)

# One realization: exact optimum vs the local-first heuristic.
while True:
    inst = sample_instance(net, mu, mu, rng)
    if 0 < inst.total_demand <= inst.total_supply:
        break
exact = exact_network_match(net, inst)
greedy = heuristic_network_match(net, inst)
print(f"one realization ({inst.total_demand} demand, {inst.total_supply} supply):")
print(f"  exact mean distance:     {exact.mean_distance:.4f}")
print(f"  heuristic mean distance: {greedy.mean_distance:.4f}")
print()

# Sweep the supply density and compare the estimator with simulation.
print(f"{'lam':>5} {'simulated':>11} {'estimate':>10} {'alpha':>7} {'local':>8} {'cross':>8}")
for lam in (5.0, 10.0, 15.0, 20.0, 25.0):
    means = []
    for _ in range(40):
        while True:
            inst = sample_instance(net, mu, lam, rng)
            if 0 < inst.total_demand <= inst.total_supply:
                break
        means.append(exact_network_match(net, inst).mean_distance)
    sim = float(np.mean(means))
    parts = network_estimate(4, mu, lam, 1.0)
    cross = parts.d1 + parts.d2 + parts.d3
    print(
        f"{lam:>5g} {sim:>11.4f} {parts.total:>10.4f} {parts.alpha:>7.3f} "
        f"{parts.local:>8.4f} {cross:>8.4f}"
    )

print()
print("As lam grows, alpha collapses to zero: nearly every point finds a")
print("match on its own edge and the estimate reduces to the local term.")
