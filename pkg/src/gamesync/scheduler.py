"""Learning dynamics: asynchronous baseline and priority-synchronized rounds.

Asynchronous rounds pick one agent uniformly at random and let it resample
its action from the update policy.  Synchronized rounds let every agent
draw an intended action independently, assign a positive priority to each
agent that intends to change and survives inertia, and then allow exactly
those candidates that strictly out-prioritize every other agent in their
coupling set to move simultaneously.

Random-stream discipline (the basis of reproducibility and of the
compiled/pure backend equivalence): a synchronous round consumes one
C-ordered ``(n, 4)`` block of uniforms -- per agent, in id order, the
tuple (inertia draw, trial index, acceptance, priority), with the
priority variate consumed even when unused; an asynchronous round
consumes a ``(3,)`` block (agent pick, trial index, acceptance).
Priorities are mapped through ``beta = 1 - v`` so a candidate's priority
is strictly positive and ``beta = 0`` unambiguously means "not a
candidate".
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from ._kernels import impl
from ._packed import PackedCoverage, PackedTableGame
from .games import GameDefinition, Profile
from .policy import BINARY_LOG_LINEAR, PolicyParams, sample_from_uniforms

ASYNC = "async"
SYNC = "sync"

#: rounds per pre-drawn uniform block handed to the kernels
CHUNK_ROUNDS = 16384


@dataclass(frozen=True)
class SyncParams:
    """Inertia parameter of the synchronized scheduler."""

    kappa: float

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in the open interval (0, 1)")


@dataclass(frozen=True, eq=False)
class StepOutcome:
    """Full bookkeeping of one synchronized round."""

    previous: Profile
    intended: Profile
    inertia_draws: np.ndarray
    priorities: np.ndarray
    movers: frozenset[int]
    next: Profile

    @property
    def mover_count(self) -> int:
        return len(self.movers)


def _format_number(x: float) -> str:
    # shortest round-trip decimal; deterministic across runs
    return repr(float(x))


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Profiles, objective values and mover counts over a whole run.

    ``profiles`` has one row per round 0..T; ``objective`` is the
    potential evaluated along the run (None when the game has no
    potential oracle); ``mover_counts`` has one entry per transition.
    """

    mode: str
    profiles: np.ndarray  # int64 (T+1, n)
    objective: np.ndarray | None  # float64 (T+1,)
    mover_counts: np.ndarray  # int32 (T,)
    seed: int | None = None

    @property
    def horizon(self) -> int:
        return len(self.mover_counts)

    def profile(self, t: int) -> Profile:
        return tuple(int(x) for x in self.profiles[t])

    def to_csv(self, target: str | IO[str]) -> None:
        """Write rows ``round,objective,movers,action_0..action_{n-1}``.

        Round 0 carries the initial profile with a mover count of 0; the
        objective column is empty when no potential oracle exists.
        """
        own = isinstance(target, str)
        fh = open(target, "w", newline="", encoding="utf-8") if own else target
        try:
            n = self.profiles.shape[1]
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["round", "objective", "movers"] + [f"action_{i}" for i in range(n)]
            )
            for t in range(self.horizon + 1):
                obj = "" if self.objective is None else _format_number(self.objective[t])
                movers = 0 if t == 0 else int(self.mover_counts[t - 1])
                writer.writerow(
                    [t, obj, movers] + [int(x) for x in self.profiles[t]]
                )
        finally:
            if own:
                fh.close()


def _sync_step_from_uniforms(
    game: GameDefinition,
    a: Profile,
    params: PolicyParams,
    sync: SyncParams,
    u: np.ndarray,
) -> StepOutcome:
    n = game.agent_count
    intended = list(a)
    beta = np.zeros(n)
    for i in range(n):
        intended[i] = sample_from_uniforms(
            game, a, i, params, float(u[i, 1]), float(u[i, 2])
        )
        if intended[i] != a[i] and u[i, 0] > sync.kappa:
            beta[i] = 1.0 - u[i, 3]
    nxt = list(a)
    movers = []
    for i in range(n):
        if beta[i] <= 0.0:
            continue
        blocked = any(
            j != i and beta[j] >= beta[i] for j in game.coupling(i, a)
        )
        if not blocked:
            nxt[i] = intended[i]
            movers.append(i)
    return StepOutcome(
        previous=a,
        intended=tuple(intended),
        inertia_draws=u[:, 0].copy(),
        priorities=beta,
        movers=frozenset(movers),
        next=tuple(nxt),
    )


def sync_step(
    game: GameDefinition,
    a: Sequence[int],
    params: PolicyParams,
    sync: SyncParams,
    rng: np.random.Generator,
) -> StepOutcome:
    """One synchronized round; consumes one ``(n, 4)`` uniform block."""
    a = game.validate_profile(a)
    u = rng.random((game.agent_count, 4))
    return _sync_step_from_uniforms(game, a, params, sync, u)


def async_step(
    game: GameDefinition,
    a: Sequence[int],
    params: PolicyParams,
    rng: np.random.Generator,
) -> Profile:
    """One asynchronous round; consumes one ``(3,)`` uniform block."""
    a = game.validate_profile(a)
    u = rng.random(3)
    n = game.agent_count
    i = min(int(u[0] * n), n - 1)
    x = sample_from_uniforms(game, a, i, params, float(u[1]), float(u[2]))
    return a[:i] + (x,) + a[i + 1 :]


def _kernel_eligible(game: GameDefinition, params: PolicyParams) -> bool:
    return (
        game.packed is not None
        and params.kind == BINARY_LOG_LINEAR
        and not params.trial_includes_current
    )


def run_trajectory(
    game: GameDefinition,
    a0: Sequence[int],
    mode: str,
    params: PolicyParams,
    sync: SyncParams | None = None,
    horizon: int = 0,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> TrajectoryRecord:
    """Apply the chosen stepper ``horizon`` times, recording every round.

    Deterministic given the generator state: identical seeds give
    bit-identical records, independently of the selected kernel backend.
    Packed games run through the compiled/pure kernels; any other game
    (or a non-BLLL policy) runs through the generic oracle path, which
    consumes the identical uniform stream.
    """
    a0 = game.validate_profile(a0)
    if mode not in (ASYNC, SYNC):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == SYNC and sync is None:
        raise ValueError("sync mode requires SyncParams")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if rng is None:
        rng = np.random.default_rng(seed)

    if horizon > 0 and _kernel_eligible(game, params):
        if isinstance(game.packed, PackedTableGame):
            return _run_table_kernel(game, a0, mode, params, sync, horizon, rng, seed)
        if isinstance(game.packed, PackedCoverage):
            return _run_coverage_kernel(game, a0, mode, params, sync, horizon, rng, seed)

    return _run_generic(game, a0, mode, params, sync, horizon, rng, seed)


def _run_generic(game, a0, mode, params, sync, horizon, rng, seed):
    n = game.agent_count
    profiles = np.empty((horizon + 1, n), dtype=np.int64)
    movers = np.empty(horizon, dtype=np.int32)
    profiles[0] = a0
    a = a0
    if mode == SYNC:
        for t in range(horizon):
            out = _sync_step_from_uniforms(game, a, params, sync, rng.random((n, 4)))
            a = out.next
            profiles[t + 1] = a
            movers[t] = out.mover_count
    else:
        for t in range(horizon):
            b = async_step(game, a, params, rng)
            movers[t] = 1 if b != a else 0
            a = b
            profiles[t + 1] = a
    objective = None
    if game.potential is not None:
        objective = np.array(
            [game.potential(tuple(int(x) for x in row)) for row in profiles],
            dtype=np.float64,
        )
    return TrajectoryRecord(mode, profiles, objective, movers, seed)


def _run_table_kernel(game, a0, mode, params, sync, horizon, rng, seed):
    pk: PackedTableGame = game.packed
    states = np.empty(horizon, dtype=np.int64)
    movers = np.empty(horizon, dtype=np.int32)
    s = pk.encode(a0)
    done = 0
    while done < horizon:
        m = min(CHUNK_ROUNDS, horizon - done)
        if mode == SYNC:
            u = rng.random((m, pk.n, 4))
            s = impl.table_sync_rounds(
                pk.n, pk.sizes, pk.strides, pk.utility, pk.cons_ptr, pk.cons_act,
                pk.coup_mask, s, u, params.epsilon, sync.kappa,
                states[done : done + m], movers[done : done + m],
            )
        else:
            u = rng.random((m, 3))
            s = impl.table_async_rounds(
                pk.n, pk.sizes, pk.strides, pk.utility, pk.cons_ptr, pk.cons_act,
                s, u, params.epsilon,
                states[done : done + m], movers[done : done + m],
            )
        done += m
    all_states = np.concatenate(([pk.encode(a0)], states))
    profiles = pk.decode_many(all_states)
    objective = pk.potential[all_states].copy() if pk.potential is not None else None
    return TrajectoryRecord(mode, profiles, objective, movers, seed)


def coverage_counts(pk: PackedCoverage, positions: np.ndarray) -> tuple[np.ndarray, float]:
    """Per-node cover counts and total covered weight for a deployment."""
    counts = (pk.dist[positions] <= 1).sum(axis=0).astype(np.int64)
    covered = float(pk.weights[counts > 0].sum())
    return counts, covered


def _run_coverage_kernel(game, a0, mode, params, sync, horizon, rng, seed):
    pk: PackedCoverage = game.packed
    n = pk.n
    pos = np.asarray(a0, dtype=np.int64).copy()
    cover_count, covered = coverage_counts(pk, pos)
    phi = np.empty(horizon + 1, dtype=np.float64)
    phi[0] = covered
    movers = np.empty(horizon, dtype=np.int32)
    out_pos = np.empty((horizon, n), dtype=np.int64)
    done = 0
    while done < horizon:
        m = min(CHUNK_ROUNDS, horizon - done)
        if mode == SYNC:
            u = rng.random((m, n, 4))
            covered = impl.cov_sync_rounds(
                n, pk.ball_ptr, pk.ball_nodes, pk.weights, pk.dist,
                pk.coupling_radius, params.epsilon, sync.kappa,
                pos, cover_count, covered, u,
                phi[done + 1 : done + 1 + m], movers[done : done + m],
                out_pos[done : done + m],
            )
        else:
            u = rng.random((m, 3))
            covered = impl.cov_async_rounds(
                n, pk.ball_ptr, pk.ball_nodes, pk.weights, pk.dist, params.epsilon,
                pos, cover_count, covered, u,
                phi[done + 1 : done + 1 + m], movers[done : done + m],
                out_pos[done : done + m],
            )
        done += m
    profiles = np.vstack((np.asarray(a0, dtype=np.int64)[None, :], out_pos))
    return TrajectoryRecord(mode, profiles, phi, movers, seed)
