"""Distributed graph coverage on grid worlds with obstacles.

Agents sit on the nodes of a connected, undirected graph built from a
rectangular character map ('#' marks an obstacle, digits 1-9 mark a node
of that weight; cells are 4-neighbor adjacent).  Each agent covers the
nodes within hop distance one of its position, may move to an adjacent
node (or stay) each round, and earns the total weight of the nodes only
it covers.  The game's potential is the total weight of all covered
nodes, and two agents are coupled whenever they are within four hops:
agents five or more hops apart cannot make their covered sets intersect
in a single step no matter how they move.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._packed import PackedCoverage
from .games import GameDefinition, Profile

#: agents within this many hops of each other may interfere next round
COUPLING_RADIUS = 4


class MapFormatError(ValueError):
    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)
        self.row = row
        self.col = col


class DisconnectedMapError(ValueError):
    def __init__(self, components: list[list[tuple[int, int]]]):
        super().__init__(
            f"free space splits into {len(components)} components: "
            + "; ".join(str(c[:4]) + ("..." if len(c) > 4 else "") for c in components)
        )
        self.components = components


@dataclass(frozen=True, eq=False)
class GridWorld:
    """Weighted 4-neighbor grid graph with precomputed hop distances."""

    rows: int
    cols: int
    coords: tuple[tuple[int, int], ...]  # node id -> (row, col)
    weights: np.ndarray  # float64 (V,)
    neighbors: tuple[tuple[int, ...], ...]  # sorted adjacency lists
    balls: tuple[tuple[int, ...], ...]  # sorted closed radius-1 neighborhoods
    dist: np.ndarray  # int32 (V, V) hop distances

    @property
    def node_count(self) -> int:
        return len(self.coords)

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def node_at(self, row: int, col: int) -> int | None:
        try:
            return self.coords.index((row, col))
        except ValueError:
            return None


def parse_map(text: str) -> GridWorld:
    """Build a grid world from its character-map document."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MapFormatError("empty map")
    width = len(lines[0])
    grid: list[list[float | None]] = []
    for r, line in enumerate(lines):
        if len(line) != width:
            raise MapFormatError(
                f"ragged map: row has length {len(line)}, expected {width}", row=r
            )
        row: list[float | None] = []
        for c, ch in enumerate(line):
            if ch == "#":
                row.append(None)
            elif ch.isdigit() and ch != "0":
                row.append(float(ch))
            else:
                raise MapFormatError(f"unknown map character {ch!r}", row=r, col=c)
        grid.append(row)

    coords: list[tuple[int, int]] = []
    ids: dict[tuple[int, int], int] = {}
    weights: list[float] = []
    for r in range(len(grid)):
        for c in range(width):
            if grid[r][c] is not None:
                ids[(r, c)] = len(coords)
                coords.append((r, c))
                weights.append(grid[r][c])
    if not coords:
        raise MapFormatError("map has no free cells")

    n_nodes = len(coords)
    neighbors: list[tuple[int, ...]] = []
    for v, (r, c) in enumerate(coords):
        nb = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            w = ids.get((r + dr, c + dc))
            if w is not None:
                nb.append(w)
        neighbors.append(tuple(sorted(nb)))

    dist = np.full((n_nodes, n_nodes), -1, dtype=np.int32)
    for src in range(n_nodes):
        dist[src, src] = 0
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for w in neighbors[v]:
                if dist[src, w] < 0:
                    dist[src, w] = dist[src, v] + 1
                    queue.append(w)

    if (dist[0] < 0).any():
        seen = [False] * n_nodes
        components = []
        for start in range(n_nodes):
            if seen[start]:
                continue
            comp = []
            queue = deque([start])
            seen[start] = True
            while queue:
                v = queue.popleft()
                comp.append(coords[v])
                for w in neighbors[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            components.append(comp)
        raise DisconnectedMapError(components)

    balls = tuple(tuple(sorted((v,) + nb)) for v, nb in enumerate(neighbors))
    return GridWorld(
        rows=len(grid),
        cols=width,
        coords=tuple(coords),
        weights=np.asarray(weights, dtype=np.float64),
        neighbors=tuple(neighbors),
        balls=balls,
        dist=dist,
    )


def load_map(path: str) -> GridWorld:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_map(fh.read())


def _check_positions(world: GridWorld, positions: Sequence[int]) -> None:
    for p in positions:
        if not 0 <= p < world.node_count:
            raise ValueError(f"position {p} is not a node id")


def covered_nodes(world: GridWorld, positions: Sequence[int], i: int) -> frozenset[int]:
    """Nodes within hop distance one of agent ``i``'s position."""
    _check_positions(world, positions)
    return frozenset(world.balls[positions[i]])


def coverage_value(world: GridWorld, positions: Sequence[int]) -> float:
    """Total weight of nodes covered by at least one agent (the potential)."""
    _check_positions(world, positions)
    dist = world.dist
    total = 0.0
    for v in range(world.node_count):
        for p in positions:
            if dist[v, p] <= 1:
                total += world.weights[v]
                break
    return total


def agent_utility(world: GridWorld, positions: Sequence[int], i: int) -> float:
    """Total weight of nodes covered by agent ``i`` and nobody else."""
    _check_positions(world, positions)
    dist = world.dist
    total = 0.0
    for v in world.balls[positions[i]]:
        if all(dist[v, positions[j]] > 1 for j in range(len(positions)) if j != i):
            total += world.weights[v]
    return total


def constrained_actions(world: GridWorld, positions: Sequence[int], i: int) -> tuple[int, ...]:
    """Stay or move to an adjacent node: the radius-1 ball of the position."""
    _check_positions(world, positions)
    return world.balls[positions[i]]


def coupling(world: GridWorld, positions: Sequence[int], i: int) -> frozenset[int]:
    """Agents within ``COUPLING_RADIUS`` hops of agent ``i`` (including ``i``)."""
    _check_positions(world, positions)
    dist = world.dist
    me = positions[i]
    return frozenset(
        j for j in range(len(positions)) if dist[me, positions[j]] <= COUPLING_RADIUS
    )


def pack_coverage(world: GridWorld, n: int) -> PackedCoverage:
    ball_ptr = np.zeros(world.node_count + 1, dtype=np.int64)
    flat: list[int] = []
    for v, ball in enumerate(world.balls):
        flat.extend(ball)
        ball_ptr[v + 1] = len(flat)
    return PackedCoverage(
        n=n,
        n_nodes=world.node_count,
        ball_ptr=ball_ptr,
        ball_nodes=np.asarray(flat, dtype=np.int32),
        weights=world.weights,
        dist=world.dist,
        coupling_radius=COUPLING_RADIUS,
    )


def as_game(world: GridWorld, n: int) -> GameDefinition:
    """The n-agent coverage game on this world as a constrained game.

    Utilities are the covered-only-by-me weights, constraints the radius-1
    balls, couplings the 4-hop neighborhoods, and the potential the total
    covered weight.
    """
    if n < 1:
        raise ValueError("need at least one agent")

    def utility(i: int, a: Profile) -> float:
        return agent_utility(world, a, i)

    def constraint(i: int, a: Profile) -> tuple[int, ...]:
        return world.balls[a[i]]

    def coupling_fn(i: int, a: Profile) -> frozenset[int]:
        return coupling(world, a, i)

    def potential(a: Profile) -> float:
        return coverage_value(world, a)

    return GameDefinition(
        agent_count=n,
        action_sizes=(world.node_count,) * n,
        utility=utility,
        constraint=constraint,
        coupling=coupling_fn,
        potential=potential,
        packed=pack_coverage(world, n),
    )


def optimal_coverage(world: GridWorld, n: int) -> tuple[float, tuple[int, ...]]:
    """Exact maximum of the coverage potential over n-agent deployments.

    Branch-and-bound over distinct position sets (stacking agents never
    beats spreading them), seeded with the greedy deployment and pruned
    with the static bound "current weight + top-k remaining ball weights".
    Intended for bundled desk-scale maps, not arbitrary inputs.
    """
    V = world.node_count
    if n >= V:
        return float(world.weights.sum()), tuple(range(min(n, V)))

    ball_mask = []
    for v in range(V):
        m = 0
        for w in world.balls[v]:
            m |= 1 << w
        ball_mask.append(m)
    weights = [float(w) for w in world.weights]

    def union_weight_add(covered: int, v: int) -> float:
        added = ball_mask[v] & ~covered
        s = 0.0
        while added:
            b = added & -added
            s += weights[b.bit_length() - 1]
            added ^= b
        return s

    # greedy lower bound
    covered = 0
    greedy_val = 0.0
    greedy_pos = []
    for _ in range(n):
        best_v, best_gain = -1, -1.0
        for v in range(V):
            if v in greedy_pos:
                continue
            gain = union_weight_add(covered, v)
            if gain > best_gain:
                best_v, best_gain = v, gain
        greedy_pos.append(best_v)
        covered |= ball_mask[best_v]
        greedy_val += best_gain

    ball_weight = [sum(weights[w] for w in world.balls[v]) for v in range(V)]
    order = sorted(range(V), key=lambda v: -ball_weight[v])
    sorted_bw = [ball_weight[v] for v in order]
    # suffix_top[idx][k]: sum of the k largest ball weights at positions >= idx
    best_val = greedy_val
    best_pos = list(greedy_pos)

    def search(idx: int, chosen: list[int], covered: int, value: float):
        nonlocal best_val, best_pos
        k_left = n - len(chosen)
        if k_left == 0:
            if value > best_val:
                best_val = value
                best_pos = list(chosen)
            return
        if idx + k_left > V:
            return
        bound = value + sum(sorted_bw[idx : idx + k_left])
        if bound <= best_val:
            return
        v = order[idx]
        gain = union_weight_add(covered, v)
        if gain > 0:
            chosen.append(v)
            search(idx + 1, chosen, covered | ball_mask[v], value + gain)
            chosen.pop()
        search(idx + 1, chosen, covered, value)

    search(0, [], 0, 0.0)
    return best_val, tuple(sorted(best_pos))
