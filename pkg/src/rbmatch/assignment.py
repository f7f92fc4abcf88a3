"""Dense rectangular min-cost bipartite assignment via shortest augmenting
paths with dual potentials (Jonker-Volgenant style)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import MatchResult

__all__ = [
    "CostMatrix",
    "AssignmentSolution",
    "solve_dense",
    "solve_assignment",
]


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Dense m x n matrix of nonnegative finite costs, m <= n."""

    costs: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=np.float64)
        if costs.ndim != 2:
            raise ValueError("costs must be a 2D array")
        if costs.shape[0] > costs.shape[1]:
            raise ValueError("need rows <= cols")
        if costs.size and (not np.isfinite(costs).all() or costs.min() < 0.0):
            raise ValueError("costs must be finite and nonnegative")
        costs = costs.copy()
        costs.flags.writeable = False
        object.__setattr__(self, "costs", costs)

    @property
    def rows(self) -> int:
        return self.costs.shape[0]

    @property
    def cols(self) -> int:
        return self.costs.shape[1]


@dataclass(frozen=True, eq=False)
class AssignmentSolution:
    """Optimal assignment with the final dual potentials.

    The potentials certify optimality: costs - u[:, None] - v[None, :] is
    nonnegative everywhere and zero on matched edges.
    """

    col_of_row: np.ndarray
    row_potentials: np.ndarray
    col_potentials: np.ndarray
    total_cost: float


def solve_dense(costs: np.ndarray) -> AssignmentSolution:
    """Shortest-augmenting-path assignment over a dense cost matrix.

    One Dijkstra-with-potentials pass per row; column ties during path scans
    resolve to the lowest index, making the solution deterministic.
    """
    costs = np.asarray(costs, dtype=np.float64)
    m, n = costs.shape
    u = np.zeros(m)
    v = np.zeros(n)
    row_of_col = np.full(n, -1, dtype=np.int64)
    for i in range(m):
        min_reduced = np.full(n, np.inf)
        predecessor = np.full(n, -2, dtype=np.int64)  # -1 marks the tree root
        used = np.zeros(n, dtype=bool)
        current_row = i
        previous_col = -1
        while True:
            reduced = costs[current_row] - u[current_row] - v
            better = ~used & (reduced < min_reduced)
            min_reduced[better] = reduced[better]
            predecessor[better] = previous_col
            available = np.where(used, np.inf, min_reduced)
            next_col = int(np.argmin(available))
            delta = float(available[next_col])
            # shift potentials so every tree edge becomes tight
            u[i] += delta
            used_cols = np.flatnonzero(used)
            if used_cols.size:
                u[row_of_col[used_cols]] += delta
                v[used_cols] -= delta
            min_reduced[~used] -= delta
            used[next_col] = True
            previous_col = next_col
            if row_of_col[next_col] == -1:
                break
            current_row = row_of_col[next_col]
        # augment: pull each column's row from its predecessor on the path
        col = previous_col
        while True:
            prev = int(predecessor[col])
            if prev == -1:
                row_of_col[col] = i
                break
            row_of_col[col] = row_of_col[prev]
            col = prev

    col_of_row = np.full(m, -1, dtype=np.int64)
    matched = np.flatnonzero(row_of_col >= 0)
    col_of_row[row_of_col[matched]] = matched
    total = float(costs[np.arange(m), col_of_row].sum()) if m else 0.0
    return AssignmentSolution(
        col_of_row=col_of_row,
        row_potentials=u,
        col_potentials=v,
        total_cost=total,
    )


def solve_assignment(c: CostMatrix) -> MatchResult:
    """Minimum-total-cost assignment of every row to a distinct column."""
    if c.rows == 0:
        return MatchResult(pairs=(), total_distance=0.0, mean_distance=0.0)
    sol = solve_dense(c.costs)
    pairs = [(i, int(j)) for i, j in enumerate(sol.col_of_row)]
    dists = c.costs[np.arange(c.rows), sol.col_of_row]
    return MatchResult.from_pairs(pairs, dists)
