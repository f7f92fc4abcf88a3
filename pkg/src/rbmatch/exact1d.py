"""Exact ground truth on segments: the balanced area identity, optimal
non-crossing matching, the optimal point-removal dynamic program, and the
scan-based feasible removal with local swaps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import Instance1D, MatchResult, build_supply_curve

__all__ = [
    "RemovalSet",
    "balanced_area",
    "optimal_match_1d",
    "optimal_removal",
    "feasible_removal",
]


@dataclass(frozen=True)
class RemovalSet:
    """The n-m supply points left unmatched, as sorted indices into the supply
    list, together with the absolute area of the induced post-removal curve."""

    removed_supply_indices: tuple[int, ...]
    post_removal_area: float


def balanced_area(inst: Instance1D) -> float:
    """Absolute area under the net supply curve of a balanced instance.

    Equals the optimal total matching distance when n = m.
    """
    if inst.n != inst.m:
        raise ValueError("balanced_area requires n = m")
    return build_supply_curve(inst).total_area


def optimal_match_1d(inst: Instance1D) -> MatchResult:
    """Minimum-total-distance assignment of every demand point to a distinct supply point.

    Dynamic program over the sorted coordinates with match-or-skip-supply
    transitions; optimal 1D matchings can always be taken non-crossing, so the
    band of admissible supplies for demand i is i..i+(n-m). Supply-index ties
    resolve to the lowest index. O(m * (n-m+1)).
    """
    xu, xv = inst.demand, inst.supply
    m, n = inst.m, inst.n
    if m == 0:
        return MatchResult(pairs=(), total_distance=0.0, mean_distance=0.0)
    width = n - m + 1

    # cost_rows[i][d]: |xu[i] - xv[i+d]| plus best continuation; suffix minima
    # give the optimal cost when demand i may use supplies at offset >= d.
    cost_rows: list[np.ndarray] = []
    suffix_rows: list[np.ndarray] = []
    best_next = np.zeros(width)
    for i in range(m - 1, -1, -1):
        row = np.abs(xu[i] - xv[i : i + width]) + best_next
        suffix = np.minimum.accumulate(row[::-1])[::-1]
        cost_rows.append(row)
        suffix_rows.append(suffix)
        best_next = suffix
    cost_rows.reverse()
    suffix_rows.reverse()

    pairs = []
    offset = 0
    for i in range(m):
        row = cost_rows[i]
        # first offset achieving the suffix minimum = lowest supply index
        target = suffix_rows[i][offset]
        offset += int(np.flatnonzero(row[offset:] == target)[0])
        pairs.append((i, i + offset))
    cols = np.array([j for _, j in pairs], dtype=np.int64)
    return MatchResult.from_pairs(pairs, np.abs(xu - xv[cols]))


def optimal_removal(inst: Instance1D) -> RemovalSet:
    """Remove the n-m supply points that minimize the post-removal curve area.

    Exact dynamic program over (event index, removals used); the area term of
    each event is gap * |prefix - removals so far|. Among equal-area optima the
    lexicographically smallest supply-index set is returned.
    """
    m, n = inst.m, inst.n
    if n <= m:
        raise ValueError("optimal_removal requires n > m")
    curve = build_supply_curve(inst)
    excess = n - m
    count = len(curve)
    is_supply = curve.values == 1
    gaps = np.append(curve.gaps, 0.0)  # the last event has no gap cost
    prefix = curve.prefix
    removals = np.arange(excess + 1)

    # cost_to_go[i, r]: optimal remaining area from event i with r removals used
    cost_to_go = np.full((count + 1, excess + 1), np.inf)
    cost_to_go[count, excess] = 0.0
    for i in range(count - 1, -1, -1):
        keep = gaps[i] * np.abs(prefix[i] - removals) + cost_to_go[i + 1]
        cost_to_go[i] = keep
        if is_supply[i]:
            take = gaps[i] * np.abs(prefix[i] - (removals[:-1] + 1))
            take += cost_to_go[i + 1, 1:]
            cost_to_go[i, :-1] = np.minimum(keep[:-1], take)

    # forward pass, removing as early as optimality allows
    removed_events = []
    used = 0
    for i in range(count):
        if is_supply[i] and used < excess:
            take = gaps[i] * abs(prefix[i] - (used + 1)) + cost_to_go[i + 1, used + 1]
            keep = gaps[i] * abs(prefix[i] - used) + cost_to_go[i + 1, used]
            if take <= keep:
                removed_events.append(i)
                used += 1
    supply_rank = np.cumsum(is_supply) - 1
    indices = tuple(int(supply_rank[e]) for e in removed_events)
    return RemovalSet(
        removed_supply_indices=indices,
        post_removal_area=_induced_area(inst, indices),
    )


def _induced_area(inst: Instance1D, removed_supply_indices) -> float:
    keep = np.ones(inst.n, dtype=bool)
    keep[list(removed_supply_indices)] = False
    reduced = Instance1D(inst.demand, inst.supply[keep], inst.length)
    return build_supply_curve(reduced).total_area


def feasible_removal(inst: Instance1D, do_swaps: bool = True) -> RemovalSet:
    """Left-to-right scan choosing n-m supply points to leave unmatched.

    The k-th selected point is the first supply event whose running net supply
    equals k with every later event at net supply >= k, which keeps the curve
    nonnegative to its right. With ``do_swaps``, each interior selection k may
    be refined once: when the point immediately after selection k is a supply
    point lying before selection k+1, it replaces selection k+1, trading the
    segment's positive strip down by one level.
    """
    m, n = inst.m, inst.n
    if n <= m:
        raise ValueError("feasible_removal requires n > m")
    curve = build_supply_curve(inst)
    excess = n - m
    count = len(curve)
    is_supply = curve.values == 1
    prefix = curve.prefix
    suffix_min = np.minimum.accumulate(prefix[::-1])[::-1]

    removed_events = []
    i = 0
    for k in range(1, excess + 1):
        while True:
            if (
                is_supply[i]
                and prefix[i] == k
                and (i + 1 >= count or suffix_min[i + 1] >= k)
            ):
                removed_events.append(i)
                i += 1
                break
            i += 1

    if do_swaps:
        for k in range(1, excess):  # interior segments only
            neighbor = removed_events[k - 1] + 1
            if neighbor < removed_events[k] and is_supply[neighbor]:
                removed_events[k] = neighbor

    supply_rank = np.cumsum(is_supply) - 1
    indices = tuple(int(supply_rank[e]) for e in removed_events)
    return RemovalSet(
        removed_supply_indices=indices,
        post_removal_area=_induced_area(inst, indices),
    )
