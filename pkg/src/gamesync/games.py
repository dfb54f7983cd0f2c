"""Constrained games with profile-dependent coupling sets.

A game has ``n`` agents, each with a finite action set represented as the
index range ``0..size_i-1``.  Behaviour is supplied through oracles: a
utility ``U_i(a)``, a feasible-action constraint ``C_i(a)`` (which must
always contain the agent's current action), a coupling set ``I_i(a)`` of
agents that may interfere with ``i`` at profile ``a``, and an optional
potential ``phi(a)``.  Oracles must be pure functions of their arguments.

This module also provides the brute-force validators the synchronized
dynamics rest on:

* ``is_uncoupled`` -- exhaustive check that joint deviations by a set of
  agents cannot change another agent's utility landscape or feasible set;
* ``validate_coupling`` -- reflexivity, symmetry, and the uncoupledness of
  each agent from the complement of its coupling set;
* ``check_potential`` -- the unilateral-deviation identity
  ``U_i(a_i', a_-i) - U_i(a) = phi(a_i', a_-i) - phi(a)``.

These validators enumerate, so they are desk-scale oracles guarded by
explicit capacity limits, not production paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

Profile = tuple[int, ...]

#: default ceiling on brute-force enumeration sizes
DEFAULT_ENUMERATION_CAP = 1_000_000

#: absolute tolerance for real-valued utility/potential identities
IDENTITY_TOL = 1e-9


class CapacityError(RuntimeError):
    """An enumeration or state-space limit would be exceeded.

    Carries the size the operation would have required so callers can
    decide whether raising the cap is sensible.
    """

    def __init__(self, message: str, required: int, limit: int):
        super().__init__(f"{message}: requires {required}, cap is {limit}")
        self.required = required
        self.limit = limit


def profile_strides(sizes: Sequence[int]) -> tuple[int, ...]:
    """Mixed-radix strides with agent 0 least significant."""
    strides = []
    acc = 1
    for s in sizes:
        strides.append(acc)
        acc *= s
    return tuple(strides)


def encode_profile(a: Sequence[int], strides: Sequence[int]) -> int:
    return sum(ai * st for ai, st in zip(a, strides))


def decode_profile(index: int, sizes: Sequence[int]) -> Profile:
    out = []
    for s in sizes:
        index, r = divmod(index, s)
        out.append(r)
    return tuple(out)


def iter_profiles(sizes: Sequence[int]) -> Iterator[Profile]:
    """All joint profiles in index order (agent 0 fastest-varying)."""
    total = math.prod(sizes)
    for k in range(total):
        yield decode_profile(k, sizes)


@dataclass(frozen=True, eq=False)
class GameDefinition:
    """A constrained game given by oracles over joint action profiles.

    Invariants expected of the oracles (spot-checked by the validators):
    ``a_i in constraint(i, a)`` and ``i in coupling(i, a)`` for every
    agent and profile, and coupling symmetry ``j in coupling(i, a)`` iff
    ``i in coupling(j, a)``.
    """

    agent_count: int
    action_sizes: tuple[int, ...]
    utility: Callable[[int, Profile], float]
    constraint: Callable[[int, Profile], Sequence[int]]
    coupling: Callable[[int, Profile], Iterable[int]]
    potential: Callable[[Profile], float] | None = None
    #: optional array-packed form consumed by the fast trajectory kernels
    packed: object | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.agent_count < 1:
            raise ValueError("agent_count must be positive")
        if len(self.action_sizes) != self.agent_count:
            raise ValueError("action_sizes length must equal agent_count")
        if any(s < 1 for s in self.action_sizes):
            raise ValueError("every action set must be nonempty")

    @property
    def agents(self) -> range:
        return range(self.agent_count)

    @property
    def num_profiles(self) -> int:
        return math.prod(self.action_sizes)

    def profiles(self) -> Iterator[Profile]:
        return iter_profiles(self.action_sizes)

    def validate_profile(self, a: Sequence[int]) -> Profile:
        if len(a) != self.agent_count:
            raise ValueError(
                f"profile has length {len(a)}, expected {self.agent_count}"
            )
        for i, ai in enumerate(a):
            if not 0 <= ai < self.action_sizes[i]:
                raise ValueError(f"action {ai} of agent {i} out of range")
        return tuple(int(ai) for ai in a)

    def with_coupling(
        self, coupling: Callable[[int, Profile], Iterable[int]]
    ) -> "GameDefinition":
        """Same game with a replacement coupling oracle.

        The packed form is dropped: its coupling masks would no longer
        reflect the oracle, so callers fall back to the generic paths.
        """
        return GameDefinition(
            agent_count=self.agent_count,
            action_sizes=self.action_sizes,
            utility=self.utility,
            constraint=self.constraint,
            coupling=coupling,
            potential=self.potential,
            packed=None,
        )


def maximal_coupling(n: int) -> Callable[[int, Profile], frozenset[int]]:
    """Coupling oracle that couples everyone: always a valid choice."""
    everyone = frozenset(range(n))
    return lambda i, a: everyone


def self_coupling(i: int, a: Profile) -> frozenset[int]:
    """Degenerate coupling ``{i}``; valid only for fully decoupled games.

    Used by the mutation switch that deliberately ignores interference
    when arbitrating simultaneous moves.
    """
    return frozenset((i,))


def break_coupling(game: GameDefinition) -> GameDefinition:
    """Mutated game whose agents never block each other's moves."""
    return game.with_coupling(self_coupling)


def feasible_actions(game: GameDefinition, a: Sequence[int], i: int) -> tuple[int, ...]:
    """Sorted feasible actions ``C_i(a)``; always contains ``a_i``."""
    a = game.validate_profile(a)
    if not 0 <= i < game.agent_count:
        raise ValueError(f"agent id {i} out of range")
    acts = tuple(sorted(int(x) for x in game.constraint(i, a)))
    if not acts:
        raise ValueError(f"constraint oracle returned empty set for agent {i} at {a}")
    for x in acts:
        if not 0 <= x < game.action_sizes[i]:
            raise ValueError(f"constraint oracle returned out-of-range action {x}")
    if a[i] not in acts:
        raise ValueError(
            f"constraint oracle violates a_i in C_i(a) for agent {i} at {a}"
        )
    return acts


def diff_set(a: Sequence[int], b: Sequence[int]) -> frozenset[int]:
    """Agents whose actions differ between the two profiles."""
    if len(a) != len(b):
        raise ValueError(f"profile lengths differ: {len(a)} vs {len(b)}")
    return frozenset(i for i, (x, y) in enumerate(zip(a, b)) if x != y)


def _replace(a: Profile, updates: Mapping[int, int]) -> Profile:
    out = list(a)
    for i, x in updates.items():
        out[i] = x
    return tuple(out)


def is_uncoupled(
    game: GameDefinition,
    a: Sequence[int],
    i: int,
    others: Iterable[int],
    cap: int = DEFAULT_ENUMERATION_CAP,
    tol: float = IDENTITY_TOL,
) -> bool:
    """Whether agent ``i`` is uncoupled from ``others`` at profile ``a``.

    Exhaustively enumerates every own deviation ``a_i' in C_i(a)`` and
    every joint deviation of ``others`` within their feasible sets, and
    requires that neither ``U_i`` nor ``C_i`` changes relative to the
    profile where ``others`` keep their current actions.
    """
    a = game.validate_profile(a)
    others = sorted(set(int(j) for j in others))
    if i in others:
        raise ValueError("agent must not belong to the set it is checked against")

    own = feasible_actions(game, a, i)
    other_sets = [feasible_actions(game, a, j) for j in others]
    required = len(own) * math.prod(len(s) for s in other_sets)
    if required > cap:
        raise CapacityError("uncoupledness enumeration too large", required, cap)

    for ai in own:
        base = _replace(a, {i: ai})
        base_u = game.utility(i, base)
        base_c = set(feasible_actions(game, base, i))
        for joint in _product(other_sets):
            dev = _replace(base, dict(zip(others, joint)))
            if abs(game.utility(i, dev) - base_u) > tol:
                return False
            if set(feasible_actions(game, dev, i)) != base_c:
                return False
    return True


def _product(sets: Sequence[Sequence[int]]) -> Iterator[tuple[int, ...]]:
    if not sets:
        yield ()
        return
    import itertools

    yield from itertools.product(*sets)


@dataclass(frozen=True)
class CouplingViolation:
    profile: Profile
    agent: int
    condition: str  # "self-membership" | "symmetry" | "uncoupled-complement"
    detail: str


@dataclass
class CouplingReport:
    profiles_checked: int
    violations: list[CouplingViolation]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_coupling(
    game: GameDefinition,
    profiles: Iterable[Sequence[int]] | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> CouplingReport:
    """Check the three coupling-validity conditions on a profile set.

    Condition 3 (each agent uncoupled from the complement of its coupling
    set) is decided by exhaustive enumeration via :func:`is_uncoupled`,
    so capacity errors propagate.  ``profiles=None`` tests the full joint
    action space.
    """
    if profiles is None:
        profiles = game.profiles()
    violations: list[CouplingViolation] = []
    checked = 0
    everyone = set(game.agents)
    for raw in profiles:
        a = game.validate_profile(raw)
        checked += 1
        sets = {i: set(game.coupling(i, a)) for i in game.agents}
        for i in game.agents:
            if i not in sets[i]:
                violations.append(
                    CouplingViolation(a, i, "self-membership", f"{i} not in I_{i}({a})")
                )
        for i in game.agents:
            for j in sets[i]:
                if i not in sets[j]:
                    violations.append(
                        CouplingViolation(
                            a, i, "symmetry", f"{j} in I_{i}({a}) but {i} not in I_{j}({a})"
                        )
                    )
        for i in game.agents:
            complement = everyone - sets[i]
            if not complement:
                continue
            if not is_uncoupled(game, a, i, complement, cap=cap):
                violations.append(
                    CouplingViolation(
                        a,
                        i,
                        "uncoupled-complement",
                        f"agent {i} is coupled to some j outside I_{i}({a})={sorted(sets[i])}",
                    )
                )
    if checked == 0:
        raise ValueError("profile set must be nonempty")
    return CouplingReport(profiles_checked=checked, violations=violations)


@dataclass
class PotentialReport:
    max_deviation: float
    worst_case: tuple[Profile, int, int] | None  # (profile, agent, deviation action)
    checked: int
    exhaustive: bool
    tol: float = IDENTITY_TOL

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tol


def check_potential(
    game: GameDefinition,
    tol: float = IDENTITY_TOL,
    exhaustive_limit: int = 2_000_000,
    samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> PotentialReport:
    """Verify the unilateral-deviation identity against the potential oracle.

    Exhausts all ``(a, i, a_i' in C_i(a))`` triples when their count fits
    under ``exhaustive_limit``; otherwise checks ``samples`` random triples
    from ``rng`` (seeded internally when omitted, so reruns agree).
    """
    if game.potential is None:
        raise ValueError("game provides no potential oracle")
    phi = game.potential

    total_triples = game.num_profiles * game.agent_count * max(game.action_sizes)
    exhaustive = total_triples <= exhaustive_limit

    max_dev = 0.0
    worst: tuple[Profile, int, int] | None = None
    checked = 0

    def probe(a: Profile, i: int, ai: int):
        nonlocal max_dev, worst, checked
        checked += 1
        dev_profile = _replace(a, {i: ai})
        lhs = game.utility(i, dev_profile) - game.utility(i, a)
        rhs = phi(dev_profile) - phi(a)
        d = abs(lhs - rhs)
        if d > max_dev:
            max_dev = d
            worst = (a, i, ai)

    if exhaustive:
        for a in game.profiles():
            for i in game.agents:
                for ai in feasible_actions(game, a, i):
                    probe(a, i, ai)
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        sizes = game.action_sizes
        for _ in range(samples):
            a = tuple(int(rng.integers(s)) for s in sizes)
            i = int(rng.integers(game.agent_count))
            acts = feasible_actions(game, a, i)
            probe(a, i, int(acts[int(rng.integers(len(acts)))]))

    report = PotentialReport(max_dev, worst, checked, exhaustive)
    report.tol = tol
    return report


# ---------------------------------------------------------------------------
# table-game text format
#
# Line-oriented `key: values` file.  Keys: `agents`, `actions`, one
# `utility I` line per agent, optional `constraint I` / `coupling I`
# lines, optional `potential`.  Every table line carries one entry per
# joint profile in index order (agent 0 fastest-varying).  Constraint
# and coupling entries are comma-separated integer lists.  Missing
# constraints default to the full action set, missing couplings to the
# maximal (everyone) coupling.  `#` starts a comment.
# ---------------------------------------------------------------------------


def load_table_game(source: str) -> GameDefinition:
    """Load a small explicit-table game from text or a file path."""
    if "\n" not in source and source.endswith(".game"):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'key: values'")
        key, val = line.split(":", 1)
        key = " ".join(key.split())
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = val.strip()

    def take(key: str) -> str:
        if key not in entries:
            raise ValueError(f"missing required key {key!r}")
        return entries.pop(key)

    n = int(take("agents"))
    sizes = tuple(int(x) for x in take("actions").split())
    if len(sizes) != n:
        raise ValueError(f"'actions' lists {len(sizes)} sizes for {n} agents")
    n_states = math.prod(sizes)

    def parse_reals(key: str, val: str) -> np.ndarray:
        vals = [float(x) for x in val.split()]
        if len(vals) != n_states:
            raise ValueError(f"{key!r} has {len(vals)} entries, expected {n_states}")
        return np.asarray(vals, dtype=float)

    def parse_int_lists(key: str, val: str) -> list[tuple[int, ...]]:
        items = val.split()
        if len(items) != n_states:
            raise ValueError(f"{key!r} has {len(items)} entries, expected {n_states}")
        return [tuple(int(x) for x in item.split(",")) for item in items]

    utilities = np.empty((n, n_states), dtype=float)
    for i in range(n):
        utilities[i] = parse_reals(f"utility {i}", take(f"utility {i}"))

    constraints: list[list[tuple[int, ...]]] = []
    for i in range(n):
        key = f"constraint {i}"
        if key in entries:
            tables = parse_int_lists(key, entries.pop(key))
        else:
            tables = [tuple(range(sizes[i]))] * n_states
        constraints.append(tables)

    couplings: list[list[tuple[int, ...]]] = []
    for i in range(n):
        key = f"coupling {i}"
        if key in entries:
            tables = parse_int_lists(key, entries.pop(key))
        else:
            tables = [tuple(range(n))] * n_states
        couplings.append(tables)

    potential_tbl = None
    if "potential" in entries:
        potential_tbl = parse_reals("potential", entries.pop("potential"))

    if entries:
        raise ValueError(f"unrecognized keys: {sorted(entries)}")

    strides = profile_strides(sizes)
    for k in range(n_states):
        a = decode_profile(k, sizes)
        for i in range(n):
            cons = constraints[i][k]
            if a[i] not in cons:
                raise ValueError(
                    f"constraint table of agent {i} omits current action at profile {a}"
                )
            if any(not 0 <= x < sizes[i] for x in cons):
                raise ValueError(f"constraint table of agent {i} out of range at {a}")
            coup = couplings[i][k]
            if i not in coup:
                raise ValueError(
                    f"coupling table of agent {i} omits agent {i} at profile {a}"
                )
            if any(not 0 <= j < n for j in coup):
                raise ValueError(f"coupling table of agent {i} out of range at {a}")

    def utility(i: int, a: Profile) -> float:
        return float(utilities[i, encode_profile(a, strides)])

    def constraint(i: int, a: Profile) -> tuple[int, ...]:
        return constraints[i][encode_profile(a, strides)]

    def coupling(i: int, a: Profile) -> frozenset[int]:
        return frozenset(couplings[i][encode_profile(a, strides)])

    potential = None
    if potential_tbl is not None:
        tbl = potential_tbl

        def potential(a: Profile) -> float:
            return float(tbl[encode_profile(a, strides)])

    game = GameDefinition(
        agent_count=n,
        action_sizes=sizes,
        utility=utility,
        constraint=constraint,
        coupling=coupling,
        potential=potential,
    )
    from ._packed import pack_table_game

    object.__setattr__(game, "packed", pack_table_game(game))
    return game
