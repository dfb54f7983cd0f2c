"""Array-packed game representations consumed by the trajectory kernels.

Two shapes are supported: fully tabulated games (utilities, feasible sets
and coupling masks enumerated over the whole joint action space) and graph
coverage games (positions on a weighted graph, where tabulation would be
astronomically large but utilities reduce to local node-count queries).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .games import CapacityError, GameDefinition, decode_profile, profile_strides

#: largest joint action space the tabulator will enumerate
DEFAULT_STATE_CAP = 20_000

#: coupling masks are stored as uint64 bitsets
MAX_PACKED_AGENTS = 63


@dataclass(frozen=True, eq=False)
class PackedTableGame:
    """Dense tables over the enumerated joint action space.

    ``cons_ptr``/``cons_act`` store the feasible sets in CSR layout keyed
    by ``i * n_states + state``; ``coup_mask[i, state]`` has bit ``j`` set
    iff ``j`` belongs to agent ``i``'s coupling set at that state.
    """

    n: int
    sizes: np.ndarray  # int64 (n,)
    strides: np.ndarray  # int64 (n,)
    n_states: int
    utility: np.ndarray  # float64 (n, n_states)
    cons_ptr: np.ndarray  # int64 (n * n_states + 1,)
    cons_act: np.ndarray  # int32
    coup_mask: np.ndarray  # uint64 (n, n_states)
    potential: np.ndarray | None  # float64 (n_states,)

    def decode(self, state: int) -> tuple[int, ...]:
        return decode_profile(state, [int(s) for s in self.sizes])

    def decode_many(self, states: np.ndarray) -> np.ndarray:
        """Decode an array of state indices to an (len, n) action array."""
        return (states[:, None] // self.strides[None, :]) % self.sizes[None, :]

    def encode(self, a) -> int:
        return int(np.dot(np.asarray(a, dtype=np.int64), self.strides))


@dataclass(frozen=True, eq=False)
class PackedCoverage:
    """Graph data for coverage games: radius-1 balls, weights, distances."""

    n: int
    n_nodes: int
    ball_ptr: np.ndarray  # int64 (n_nodes + 1,)
    ball_nodes: np.ndarray  # int32, sorted within each ball, includes the node
    weights: np.ndarray  # float64 (n_nodes,)
    dist: np.ndarray  # int32 (n_nodes, n_nodes)
    coupling_radius: int


def pack_table_game(game: GameDefinition, cap: int = DEFAULT_STATE_CAP) -> PackedTableGame:
    """Tabulate a game's oracles over its joint action space."""
    from .games import feasible_actions

    n = game.agent_count
    if n > MAX_PACKED_AGENTS:
        raise CapacityError("too many agents for packed coupling masks", n, MAX_PACKED_AGENTS)
    n_states = game.num_profiles
    if n_states > cap:
        raise CapacityError("joint action space too large to tabulate", n_states, cap)

    sizes = np.asarray(game.action_sizes, dtype=np.int64)
    strides = np.asarray(profile_strides(game.action_sizes), dtype=np.int64)

    utility = np.empty((n, n_states), dtype=np.float64)
    coup_mask = np.zeros((n, n_states), dtype=np.uint64)
    cons_lists: list[tuple[int, ...]] = []
    cons_ptr = np.zeros(n * n_states + 1, dtype=np.int64)

    potential = None
    if game.potential is not None:
        potential = np.empty(n_states, dtype=np.float64)

    for k, a in enumerate(game.profiles()):
        if potential is not None:
            potential[k] = game.potential(a)
        for i in range(n):
            utility[i, k] = game.utility(i, a)
            mask = 0
            for j in game.coupling(i, a):
                mask |= 1 << int(j)
            coup_mask[i, k] = mask

    pos = 0
    for i in range(n):
        for k in range(n_states):
            acts = feasible_actions(game, decode_profile(k, game.action_sizes), i)
            cons_lists.append(acts)
            pos += len(acts)
            cons_ptr[i * n_states + k + 1] = pos
    cons_act = np.fromiter(
        (x for acts in cons_lists for x in acts), dtype=np.int32, count=pos
    )

    return PackedTableGame(
        n=n,
        sizes=sizes,
        strides=strides,
        n_states=n_states,
        utility=utility,
        cons_ptr=cons_ptr,
        cons_act=cons_act,
        coup_mask=coup_mask,
        potential=potential,
    )
