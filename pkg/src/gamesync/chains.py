"""Exact Markov chains induced by the learning dynamics on small games.

For a desk-scale game the asynchronous and synchronized dynamics induce
row-stochastic matrices over the enumerated joint action space.  This
module builds both exactly, computes stationary distributions, recurrent
classes, and numeric transition resistances, and bundles the machinery
into a three-verdict comparison: feasibility inclusion with per-edge
resistance agreement, recurrent-class equality of the unperturbed
chains, and equality of the stochastically stable sets under a noise
sweep.

Resistances are decay exponents in the perturbation scale
``eta = e^{-1/eps}``: the acceptance probabilities of binary log-linear
learning vanish exponentially in ``1/eps``, so a transition of
resistance ``r`` has probability proportional to ``eta^r`` as the noise
vanishes.  Numeric estimates regress ``log P_eps`` on ``log eta`` over a
decreasing noise grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import IO, Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp

from .games import CapacityError, GameDefinition, Profile, profile_strides
from .policy import (
    BEST_RESPONSE,
    BINARY_LOG_LINEAR,
    PolicyParams,
    intended_distribution,
    switch_resistance,
)
from .scheduler import ASYNC, SYNC, SyncParams

#: largest joint action space an exact chain is built over
DEFAULT_STATE_CAP = 20_000

#: largest per-state product of intended-action supports
DEFAULT_SUPPORT_CAP = 1_000_000

#: largest move-candidate set for the factorial ordering enumeration
DEFAULT_CANDIDATE_CAP = 12

#: noise grids: stationary sweep and resistance regression
SWEEP_EPSILONS = (0.5, 0.2, 0.1, 0.05, 0.02)
RESISTANCE_EPSILONS = (0.2, 0.1, 0.05, 0.02)

#: stationary mass threshold declaring a state stochastically stable
STABILITY_DELTA = 1e-3


class ReducibleChainError(RuntimeError):
    """The chain is not irreducible; carries its closed classes."""

    def __init__(self, closed_classes: Sequence[frozenset[int]]):
        super().__init__(
            f"chain is reducible with {len(closed_classes)} closed classes: "
            + ", ".join(str(sorted(c)) for c in closed_classes)
        )
        self.closed_classes = tuple(closed_classes)


class InfeasibleEdgeError(ValueError):
    """A transition probability needed for a resistance fit is zero."""


@dataclass(frozen=True)
class StateIndex:
    """Bijection between joint profiles and 0..|A|-1 (agent 0 least significant)."""

    sizes: tuple[int, ...]
    strides: tuple[int, ...]
    n_states: int

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "StateIndex":
        sizes = tuple(int(s) for s in sizes)
        return cls(sizes, profile_strides(sizes), math.prod(sizes))

    @classmethod
    def from_game(cls, game: GameDefinition) -> "StateIndex":
        return cls.from_sizes(game.action_sizes)

    def encode(self, a: Sequence[int]) -> int:
        return sum(int(ai) * st for ai, st in zip(a, self.strides))

    def decode(self, k: int) -> Profile:
        out = []
        for s in self.sizes:
            k, r = divmod(k, s)
            out.append(r)
        return tuple(out)

    def profiles(self) -> Iterator[Profile]:
        for k in range(self.n_states):
            yield self.decode(k)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Dense row-stochastic matrix over a StateIndex, plus provenance."""

    P: np.ndarray
    index: StateIndex
    mode: str  # "async" | "sync"
    epsilon: float
    kappa: float | None = None

    @property
    def n_states(self) -> int:
        return self.index.n_states

    def row_sum_error(self) -> float:
        return float(np.abs(self.P.sum(axis=1) - 1.0).max())

    def support(self) -> np.ndarray:
        return self.P > 0.0

    def is_irreducible(self) -> bool:
        n_comp, _ = connected_components(
            csr_matrix(self.support()), directed=True, connection="strong"
        )
        return n_comp == 1

    def to_csv(self, target: str | IO[str]) -> None:
        """Serialize nonzero entries as ``from,to,prob`` triplets."""
        own = isinstance(target, str)
        fh = open(target, "w", newline="", encoding="utf-8") if own else target
        try:
            fh.write("from,to,prob\n")
            rows, cols = np.nonzero(self.P)
            for r, c in zip(rows, cols):
                fh.write(f"{r},{c},{self.P[r, c]!r}\n")
        finally:
            if own:
                fh.close()


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    probabilities: np.ndarray
    residual: float  # ||mu P - mu||_1


@dataclass(frozen=True)
class ResistanceEstimate:
    exponent: float
    fit_residual: float
    epsilons_used: tuple[float, ...]
    flagged: bool


def build_async_chain(
    game: GameDefinition,
    params: PolicyParams,
    state_cap: int = DEFAULT_STATE_CAP,
) -> TransitionMatrix:
    """Exact one-round chain of the asynchronous dynamics.

    ``P(a, a') = (1/n) * P(policy of the single differing agent picks a')``
    for single-coordinate changes, with all keep mass on the diagonal.
    """
    index = StateIndex.from_game(game)
    if index.n_states > state_cap:
        raise CapacityError("joint action space too large", index.n_states, state_cap)
    n = game.agent_count
    P = np.zeros((index.n_states, index.n_states))
    for k, a in enumerate(index.profiles()):
        for i in range(n):
            dist = intended_distribution(game, a, i, params)
            for x, p in dist.support:
                P[k, k + (x - a[i]) * index.strides[i]] += p / n
    return TransitionMatrix(P, index, ASYNC, params.epsilon, None)


def _ordering_count(
    members: tuple[int, ...],
    coupled: tuple[tuple[int, ...], ...],
    target: frozenset[int],
) -> int:
    """Strict priority orderings of ``members`` whose mover set equals target.

    Position in the permutation is the priority rank (later = higher); a
    member moves iff it outranks every other member of its coupled set.
    """
    count = 0
    for perm in itertools.permutations(members):
        rank = {agent: r for r, agent in enumerate(perm)}
        movers = set()
        for i, coup in zip(members, coupled):
            ri = rank[i]
            if all(rank[j] < ri for j in coup if j != i and j in rank):
                movers.add(i)
        if movers == target:
            count += 1
    return count


@lru_cache(maxsize=None)
def _mover_set_probability_cached(
    sig: tuple[tuple[int, ...], ...],
    members: tuple[int, ...],
    target: frozenset[int],
    kappa: float,
) -> float:
    kq = Fraction(kappa)
    active = 1 - kq
    total = Fraction(0)
    m = len(members)
    idx_of = {agent: i for i, agent in enumerate(members)}
    for bits in range(1 << m):
        chosen = tuple(members[i] for i in range(m) if bits >> i & 1)
        if not target <= set(chosen):
            continue
        coup = tuple(sig[idx_of[i]] for i in chosen)
        cnt = _ordering_count(chosen, coup, target)
        if cnt == 0:
            continue
        weight = kq ** (m - len(chosen)) * active ** len(chosen)
        total += weight * Fraction(cnt, math.factorial(len(chosen)))
    return float(total)


def mover_set_probability(
    coupling_at_a: Mapping[int, Iterable[int]],
    candidates: Iterable[int],
    kappa: float,
    target: Iterable[int],
    max_candidates: int = DEFAULT_CANDIDATE_CAP,
) -> float:
    """P(mover set = target | the candidate set intends to change).

    Sums over inertia outcomes ``B`` of the candidate set (weight
    ``kappa^{|M\\B|} (1-kappa)^{|B|}``) the fraction of strict priority
    orderings of ``B`` under which exactly the target set moves, where a
    member moves iff it outranks every other member of its coupled set.
    The combinatorial fraction is evaluated in exact rational arithmetic
    and converted to float once.
    """
    members = tuple(sorted(set(int(i) for i in candidates)))
    target_set = frozenset(int(i) for i in target)
    if not target_set <= set(members):
        raise ValueError("target must be a subset of the candidate set")
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    if len(members) > max_candidates:
        raise CapacityError(
            "candidate set too large for factorial enumeration",
            len(members),
            max_candidates,
        )
    member_set = set(members)
    sig = tuple(
        tuple(sorted(set(coupling_at_a[i]) & member_set)) for i in members
    )
    return _mover_set_probability_cached(sig, members, target_set, kappa)


def build_sync_chain(
    game: GameDefinition,
    params: PolicyParams,
    sync: SyncParams,
    state_cap: int = DEFAULT_STATE_CAP,
    support_cap: int = DEFAULT_SUPPORT_CAP,
) -> TransitionMatrix:
    """Exact one-round chain of the priority-synchronized dynamics.

    For each state the intended profile ranges over the product of the
    per-agent policy supports; each intended profile contributes its
    probability times the mover-set law to every reachable successor.
    The diagonal is set last to make each row exactly stochastic.
    """
    index = StateIndex.from_game(game)
    if index.n_states > state_cap:
        raise CapacityError("joint action space too large", index.n_states, state_cap)
    n = game.agent_count
    P = np.zeros((index.n_states, index.n_states))
    for k, a in enumerate(index.profiles()):
        supports = [intended_distribution(game, a, i, params).support for i in range(n)]
        prod_size = math.prod(len(s) for s in supports)
        if prod_size > support_cap:
            raise CapacityError(
                f"intended-profile support product too large at state {a}",
                prod_size,
                support_cap,
            )
        coupling_at_a = {i: frozenset(game.coupling(i, a)) for i in range(n)}
        for combo in itertools.product(*supports):
            pr = 1.0
            for _, p in combo:
                pr *= p
            if pr == 0.0:
                continue
            candidates = tuple(i for i in range(n) if combo[i][0] != a[i])
            for bits in range(1, 1 << len(candidates)):
                movers = tuple(
                    candidates[j] for j in range(len(candidates)) if bits >> j & 1
                )
                pk = mover_set_probability(
                    coupling_at_a, candidates, sync.kappa, movers
                )
                if pk == 0.0:
                    continue
                k2 = k + sum(
                    (combo[i][0] - a[i]) * index.strides[i] for i in movers
                )
                P[k, k2] += pr * pk
        off = P[k].sum() - P[k, k]
        P[k, k] = max(0.0, 1.0 - off)
    return TransitionMatrix(P, index, SYNC, params.epsilon, sync.kappa)


def _closed_classes(P: np.ndarray) -> tuple[tuple[frozenset[int], ...], np.ndarray]:
    support = P > 0.0
    n_comp, labels = connected_components(
        csr_matrix(support), directed=True, connection="strong"
    )
    closed = []
    for c in range(n_comp):
        members = np.flatnonzero(labels == c)
        outside = support[members][:, ~np.isin(np.arange(P.shape[0]), members)]
        if not outside.any():
            closed.append(frozenset(int(m) for m in members))
    closed.sort(key=min)
    return tuple(closed), labels


def recurrent_classes(tm: TransitionMatrix) -> tuple[frozenset[int], ...]:
    """Closed communicating classes of the support digraph.

    Meant for unperturbed (zero-noise) chains, where these are exactly
    the recurrent classes; sorted by smallest member for comparability.
    """
    closed, _ = _closed_classes(tm.P)
    return closed


def _gth_stationary(P: np.ndarray) -> np.ndarray:
    # Grassmann-Taksar-Heyman elimination on the column-stochastic copy:
    # subtraction-free, so tiny stationary masses keep relative accuracy.
    T = np.array(P.T, dtype=np.float64, copy=True)
    S = T.shape[0]
    for k in range(S - 1, 0, -1):
        scale = T[:k, k].sum()
        T[k, :k] /= scale
        T[:k, :k] += np.outer(T[:k, k], T[k, :k])
    pi = np.zeros(S)
    pi[0] = 1.0
    for k in range(1, S):
        pi[k] = T[k, 0] + pi[1:k] @ T[k, 1:k]
    return pi / pi.sum()


def stationary_distribution(
    tm: TransitionMatrix, tol: float = 1e-10, max_power_iters: int = 100_000
) -> StationaryDistribution:
    """Stationary law of an irreducible aperiodic chain.

    Solved by GTH elimination; if the L1 balance residual somehow exceeds
    ``tol``, power iteration refines the solution until the residual
    passes or stops improving, and failure to converge raises.
    """
    P = tm.P
    closed, _ = _closed_classes(P)
    if len(closed) != 1 or len(closed[0]) != P.shape[0]:
        raise ReducibleChainError(closed)
    if not _is_aperiodic(P):
        raise ValueError("chain is periodic; stationary limit undefined")
    mu = _gth_stationary(P)
    residual = float(np.abs(mu @ P - mu).sum())
    iters = 0
    while residual > tol and iters < max_power_iters:
        nxt = mu @ P
        nxt /= nxt.sum()
        new_residual = float(np.abs(nxt @ P - nxt).sum())
        if new_residual >= residual:
            break
        mu, residual = nxt, new_residual
        iters += 1
    if residual > tol:
        raise RuntimeError(f"stationary solve residual {residual} exceeds {tol}")
    return StationaryDistribution(mu, residual)


def _is_aperiodic(P: np.ndarray) -> bool:
    # an irreducible chain with any self-loop is aperiodic; otherwise
    # compute the period as the gcd of cycle-length differences on a BFS
    if (np.diagonal(P) > 0).any():
        return True
    S = P.shape[0]
    level = np.full(S, -1)
    level[0] = 0
    queue = [0]
    g = 0
    support = P > 0
    while queue:
        v = queue.pop()
        for w in np.flatnonzero(support[v]):
            if level[w] < 0:
                level[w] = level[v] + 1
                queue.append(int(w))
            else:
                g = math.gcd(g, level[v] + 1 - level[w])
    return g == 1


def _fit_log_slope(log_probs: np.ndarray, epsilons: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log p against log eta = -1/eps."""
    x = -1.0 / np.asarray(epsilons, dtype=float)
    y = np.asarray(log_probs, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.abs(slope * x + intercept - y).max())
    return float(slope), residual


def estimate_resistance(
    chains: Sequence[TransitionMatrix],
    frm: int,
    to: int,
    flag_threshold: float = 0.1,
) -> ResistanceEstimate:
    """Numeric resistance of one transition from a family of chains.

    Regresses the log transition probability on ``log eta``; raises when
    the edge is infeasible at any supplied noise level.
    """
    epsilons = tuple(c.epsilon for c in chains)
    probs = np.array([c.P[frm, to] for c in chains])
    if (probs <= 0.0).any():
        bad = [e for e, p in zip(epsilons, probs) if p <= 0.0]
        raise InfeasibleEdgeError(
            f"transition {frm}->{to} has zero probability at eps={bad}"
        )
    slope, residual = _fit_log_slope(np.log(probs), epsilons)
    return ResistanceEstimate(
        exponent=max(slope, 0.0),
        fit_residual=residual,
        epsilons_used=epsilons,
        flagged=residual > flag_threshold,
    )


@dataclass(frozen=True)
class CalculusCheck:
    """Regression-recovered exponents of a product and a sum of powers."""

    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]
    product_exponent: float
    product_expected: float
    sum_exponent: float
    sum_expected: float

    @property
    def product_error(self) -> float:
        return abs(self.product_exponent - self.product_expected)

    @property
    def sum_error(self) -> float:
        return abs(self.sum_exponent - self.sum_expected)

    def ok(self, tol: float = 1e-3) -> bool:
        return self.product_error <= tol and self.sum_error <= tol


#: noise grid for the synthetic calculus check; small enough that the
#: slowest-decaying term dominates the sum by eps = max of grid
CALCULUS_EPSILONS = (0.02, 0.01, 0.005, 0.002)


def verify_resistance_calculus(
    specs: Sequence[tuple[float, float]],
    epsilons: Sequence[float] = CALCULUS_EPSILONS,
) -> CalculusCheck:
    """Check the product/sum resistance rules on synthetic power functions.

    Given functions ``p_i = c_i eta^{r_i}`` (coefficients positive,
    exponents nonnegative), the product must regress to exponent
    ``sum r_i`` and the sum to ``min r_i``.  All values are handled in
    log space, so huge exponent sums cannot underflow.
    """
    if not specs:
        raise ValueError("need at least one (coefficient, exponent) pair")
    coeffs = np.array([c for c, _ in specs], dtype=float)
    exps = np.array([r for _, r in specs], dtype=float)
    if (coeffs <= 0).any():
        raise ValueError("coefficients must be positive")
    if (exps < 0).any():
        raise ValueError("exponents must be nonnegative")
    log_eta = -1.0 / np.asarray(epsilons, dtype=float)
    log_p = np.log(coeffs)[:, None] + exps[:, None] * log_eta[None, :]
    prod_slope, _ = _fit_log_slope(log_p.sum(axis=0), epsilons)
    sum_slope, _ = _fit_log_slope(logsumexp(log_p, axis=0), epsilons)
    return CalculusCheck(
        exponents=tuple(float(r) for r in exps),
        coefficients=tuple(float(c) for c in coeffs),
        product_exponent=float(prod_slope),
        product_expected=float(exps.sum()),
        sum_exponent=float(sum_slope),
        sum_expected=float(exps.min()),
    )


@dataclass(frozen=True, eq=False)
class StabilityResult:
    """Stochastically stable set from a stationary sweep, with evidence."""

    states: frozenset[int]
    epsilons: tuple[float, ...]
    mu_table: np.ndarray  # (len(epsilons), n_states)
    delta: float
    non_monotone: tuple[int, ...]  # stable states whose mass dips along the sweep
    index: StateIndex


def stochastically_stable_states(
    game: GameDefinition,
    mode: str,
    epsilons: Sequence[float] = SWEEP_EPSILONS,
    sync: SyncParams | None = None,
    delta: float = STABILITY_DELTA,
    params: PolicyParams | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> StabilityResult:
    """States keeping stationary mass >= delta at the smallest noise level.

    Builds the exact chain for each noise level of the strictly
    decreasing sweep, solves each stationary law, thresholds the smallest
    level, and flags stable states whose mass is not monotone along the
    sweep (a hint that the sweep has not converged).
    """
    eps = tuple(float(e) for e in epsilons)
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    if mode == SYNC and sync is None:
        raise ValueError("sync mode requires SyncParams")
    index = StateIndex.from_game(game)
    mu_table = np.empty((len(eps), index.n_states))
    for row, e in enumerate(eps):
        p = replace(params, epsilon=e) if params else PolicyParams(e)
        if mode == ASYNC:
            tm = build_async_chain(game, p, state_cap)
        else:
            tm = build_sync_chain(game, p, sync, state_cap)
        mu_table[row] = stationary_distribution(tm).probabilities
    stable = frozenset(int(s) for s in np.flatnonzero(mu_table[-1] >= delta))
    non_monotone = tuple(
        s for s in sorted(stable) if (np.diff(mu_table[:, s]) < -1e-9).any()
    )
    return StabilityResult(stable, eps, mu_table, delta, non_monotone, index)


@dataclass(frozen=True)
class EdgeComparison:
    frm: int
    to: int
    agent: int
    analytic: float
    async_exponent: float
    sync_exponent: float


@dataclass(frozen=True, eq=False)
class TheoremReport:
    """Three verdicts comparing the async and synchronized chains."""

    feasibility_ok: bool
    missing_edges: tuple[tuple[int, int], ...]
    resistance_ok: bool
    max_mode_gap: float  # max |R_sync - R_async| over shared edges
    max_analytic_gap: float  # max |R_async - analytic|
    edges: tuple[EdgeComparison, ...]
    recurrent_ok: bool
    async_classes: tuple[frozenset[int], ...]
    sync_classes: tuple[frozenset[int], ...]
    stability_ok: bool
    async_stable: frozenset[int]
    sync_stable: frozenset[int]
    sweep_epsilons: tuple[float, ...]
    resistance_epsilons: tuple[float, ...]
    delta: float
    resistance_tol: float
    analytic_tol: float

    @property
    def all_pass(self) -> bool:
        return (
            self.feasibility_ok
            and self.resistance_ok
            and self.recurrent_ok
            and self.stability_ok
        )

    def render_text(self) -> str:
        def mark(ok: bool) -> str:
            return "PASS" if ok else "FAIL"

        lines = [
            f"[{mark(self.feasibility_ok)}] feasibility: every async-feasible "
            f"transition is sync-feasible ({len(self.missing_edges)} missing)",
            f"[{mark(self.resistance_ok)}] resistance agreement: "
            f"max |R_sync - R_async| = {self.max_mode_gap:.4f} (tol {self.resistance_tol}), "
            f"max |R_async - analytic| = {self.max_analytic_gap:.4f} (tol {self.analytic_tol}) "
            f"over {len(self.edges)} edges",
            f"[{mark(self.recurrent_ok)}] recurrent classes at zero noise: "
            f"async {sorted(sorted(c) for c in self.async_classes)} vs "
            f"sync {sorted(sorted(c) for c in self.sync_classes)}",
            f"[{mark(self.stability_ok)}] stochastically stable states "
            f"(delta={self.delta}, eps sweep {list(self.sweep_epsilons)}): "
            f"async {sorted(self.async_stable)} vs sync {sorted(self.sync_stable)}",
            f"overall: {mark(self.all_pass)}",
        ]
        if self.missing_edges:
            lines.insert(1, f"    missing sync edges: {list(self.missing_edges)[:20]}")
        return "\n".join(lines)


def compare_chains(
    game: GameDefinition,
    params: PolicyParams,
    sync: SyncParams,
    sweep_epsilons: Sequence[float] = SWEEP_EPSILONS,
    resistance_epsilons: Sequence[float] = RESISTANCE_EPSILONS,
    delta: float = STABILITY_DELTA,
    resistance_tol: float = 0.05,
    analytic_tol: float = 0.02,
    state_cap: int = DEFAULT_STATE_CAP,
) -> TheoremReport:
    """Machine-check the synchronization-invariance claims on one game.

    Verdict 1: every off-diagonal async-feasible transition is feasible in
    the synchronized chain, and regression resistances agree between the
    chains (and with the analytic acceptance exponent) on every edge.
    Verdict 2: the zero-noise chains have identical recurrent classes.
    Verdict 3: the stochastically stable sets from the stationary sweep
    coincide.
    """
    if params.kind != BINARY_LOG_LINEAR:
        raise ValueError("chain comparison expects the noisy (BLLL) policy family")

    async_chains = []
    sync_chains = []
    for e in resistance_epsilons:
        p = replace(params, epsilon=e)
        async_chains.append(build_async_chain(game, p, state_cap))
        sync_chains.append(build_sync_chain(game, p, sync, state_cap))

    index = async_chains[0].index
    ref = async_chains[0].P
    missing: list[tuple[int, int]] = []
    edges: list[EdgeComparison] = []
    max_mode_gap = 0.0
    max_analytic_gap = 0.0
    rows, cols = np.nonzero(ref)
    for frm, to in zip(rows, cols):
        frm, to = int(frm), int(to)
        if frm == to:
            continue
        if any(c.P[frm, to] <= 0.0 for c in sync_chains):
            missing.append((frm, to))
            continue
        a = index.decode(frm)
        b = index.decode(to)
        agent = next(i for i in range(len(a)) if a[i] != b[i])
        analytic = switch_resistance(game.utility(agent, a), game.utility(agent, b))
        r_async = estimate_resistance(async_chains, frm, to).exponent
        r_sync = estimate_resistance(sync_chains, frm, to).exponent
        max_mode_gap = max(max_mode_gap, abs(r_sync - r_async))
        max_analytic_gap = max(max_analytic_gap, abs(r_async - analytic))
        edges.append(EdgeComparison(frm, to, agent, analytic, r_async, r_sync))

    feasibility_ok = not missing
    resistance_ok = (
        feasibility_ok
        and max_mode_gap <= resistance_tol
        and max_analytic_gap <= analytic_tol
    )

    br = PolicyParams(0.0, BEST_RESPONSE)
    p0 = build_async_chain(game, br, state_cap)
    p0_sync = build_sync_chain(game, br, sync, state_cap)
    async_classes = recurrent_classes(p0)
    sync_classes = recurrent_classes(p0_sync)
    recurrent_ok = async_classes == sync_classes

    ss_async = stochastically_stable_states(
        game, ASYNC, sweep_epsilons, None, delta, params, state_cap
    )
    ss_sync = stochastically_stable_states(
        game, SYNC, sweep_epsilons, sync, delta, params, state_cap
    )
    stability_ok = ss_async.states == ss_sync.states

    return TheoremReport(
        feasibility_ok=feasibility_ok,
        missing_edges=tuple(missing),
        resistance_ok=resistance_ok,
        max_mode_gap=max_mode_gap,
        max_analytic_gap=max_analytic_gap,
        edges=tuple(edges),
        recurrent_ok=recurrent_ok,
        async_classes=async_classes,
        sync_classes=sync_classes,
        stability_ok=stability_ok,
        async_stable=ss_async.states,
        sync_stable=ss_sync.states,
        sweep_epsilons=tuple(float(e) for e in sweep_epsilons),
        resistance_epsilons=tuple(float(e) for e in resistance_epsilons),
        delta=delta,
        resistance_tol=resistance_tol,
        analytic_tol=analytic_tol,
    )
