"""Noisy best-response update policies.

The concrete noisy policy is binary log-linear learning (BLLL): the
updating agent draws one trial action uniformly from its feasible set
minus the current action and accepts it with the two-point Boltzmann
probability

    P(accept) = e^{U'/eps} / (e^{U/eps} + e^{U'/eps}),

where ``U`` and ``U'`` are the utilities of keeping and switching and
``eps > 0`` is the noise parameter.  The zero-noise member of the family
is the best-response policy: a uniform draw over the feasible actions of
maximal utility.

Every policy is exposed both as an exact distribution (for chain
construction) and as a sampler.  The sampler consumes exactly two uniform
variates per call -- a trial index and an acceptance variate, drawn even
when degenerately unused -- which keeps random streams aligned across
runs and across the compiled/pure backends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .games import GameDefinition, Profile, feasible_actions

BINARY_LOG_LINEAR = "binary-log-linear"
BEST_RESPONSE = "best-response"

#: utilities closer than this are tied for best-response purposes
TIE_TOL = 1e-12


@dataclass(frozen=True)
class PolicyParams:
    """Noise parameter and policy kind.

    ``best-response`` is the zero-noise policy, so it demands
    ``epsilon == 0``; BLLL demands ``epsilon > 0``.
    """

    epsilon: float
    kind: str = BINARY_LOG_LINEAR
    #: include the current action among the uniform trial draws
    trial_includes_current: bool = False

    def __post_init__(self):
        if self.kind not in (BINARY_LOG_LINEAR, BEST_RESPONSE):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.kind == BINARY_LOG_LINEAR and self.epsilon == 0:
            raise ValueError(
                "binary-log-linear requires epsilon > 0; use the best-response kind"
            )
        if self.kind == BEST_RESPONSE and self.epsilon != 0:
            raise ValueError("best-response forces epsilon = 0")


@dataclass(frozen=True, eq=False)
class IntendedDistribution:
    """Exact law of one agent's intended action at a profile."""

    actions: tuple[int, ...]
    probs: np.ndarray
    current: int

    def __post_init__(self):
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-12:
            raise AssertionError(f"probabilities sum to {total}, not 1")
        if (self.probs < 0).any():
            raise AssertionError("negative probability")

    def prob(self, action: int) -> float:
        for x, p in zip(self.actions, self.probs):
            if x == action:
                return float(p)
        return 0.0

    @property
    def support(self) -> tuple[tuple[int, float], ...]:
        """(action, probability) pairs with nonzero probability."""
        return tuple(
            (int(x), float(p)) for x, p in zip(self.actions, self.probs) if p > 0.0
        )


def acceptance_probability(u_current: float, u_trial: float, epsilon: float) -> float:
    """Two-point Boltzmann acceptance, computed with max-subtraction.

    Algebraically e^{U'/eps} / (e^{U/eps} + e^{U'/eps}); subtracting the
    max keeps both exponentials in [0, 1] so nothing overflows.
    """
    m = u_current if u_current > u_trial else u_trial
    keep = math.exp((u_current - m) / epsilon)
    switch = math.exp((u_trial - m) / epsilon)
    return switch / (keep + switch)


def switch_resistance(u_current: float, u_trial: float) -> float:
    """Decay exponent of the acceptance probability in eta = e^{-1/eps}.

    Equals max(u_current, u_trial) - u_trial: zero for weakly improving
    switches, the utility drop otherwise.
    """
    return max(u_current, u_trial) - u_trial


def _trial_set(game: GameDefinition, a: Profile, i: int, params: PolicyParams):
    acts = feasible_actions(game, a, i)
    if params.trial_includes_current:
        return acts, acts
    return acts, tuple(x for x in acts if x != a[i])


def intended_distribution(
    game: GameDefinition, a: Profile, i: int, params: PolicyParams
) -> IntendedDistribution:
    """Exact intended-action distribution of agent ``i`` at profile ``a``."""
    a = game.validate_profile(a)
    current = a[i]

    if params.kind == BEST_RESPONSE:
        acts, _ = _trial_set(game, a, i, params)
        utils = [game.utility(i, a[:i] + (x,) + a[i + 1 :]) for x in acts]
        best = max(utils)
        ties = [x for x, u in zip(acts, utils) if u >= best - TIE_TOL]
        probs = np.zeros(len(acts))
        for k, x in enumerate(acts):
            if x in ties:
                probs[k] = 1.0 / len(ties)
        return IntendedDistribution(tuple(acts), probs, current)

    _, trials = _trial_set(game, a, i, params)
    if not trials:
        return IntendedDistribution((current,), np.ones(1), current)

    u_cur = game.utility(i, a)
    actions = (current,) + tuple(t for t in trials if t != current)
    probs = np.zeros(len(actions))
    for t in trials:
        if t == current:
            continue
        u_t = game.utility(i, a[:i] + (t,) + a[i + 1 :])
        probs[actions.index(t)] = acceptance_probability(u_cur, u_t, params.epsilon) / len(
            trials
        )
    probs[0] = 1.0 - probs.sum()
    return IntendedDistribution(actions, probs, current)


def sample_from_uniforms(
    game: GameDefinition,
    a: Profile,
    i: int,
    params: PolicyParams,
    u_trial: float,
    u_accept: float,
) -> int:
    """Intended action from two uniform variates in [0, 1).

    This is the single sampling routine behind the sampler, the generic
    schedulers and (re-implemented verbatim) the compiled kernels; all of
    them must map identical variates to identical actions.
    """
    if params.kind == BEST_RESPONSE:
        acts, _ = _trial_set(game, a, i, params)
        utils = [game.utility(i, a[:i] + (x,) + a[i + 1 :]) for x in acts]
        best = max(utils)
        ties = [x for x, u in zip(acts, utils) if u >= best - TIE_TOL]
        return ties[min(int(u_trial * len(ties)), len(ties) - 1)]

    _, trials = _trial_set(game, a, i, params)
    if not trials:
        return a[i]
    t = trials[min(int(u_trial * len(trials)), len(trials) - 1)]
    if t == a[i]:
        return a[i]
    u_cur = game.utility(i, a)
    u_t = game.utility(i, a[:i] + (t,) + a[i + 1 :])
    if u_accept < acceptance_probability(u_cur, u_t, params.epsilon):
        return t
    return a[i]


def sample_intended(
    game: GameDefinition,
    a: Profile,
    i: int,
    params: PolicyParams,
    rng: np.random.Generator,
) -> int:
    """Draw one intended action; consumes exactly two uniforms from ``rng``."""
    a = game.validate_profile(a)
    u = rng.random(2)
    return sample_from_uniforms(game, a, i, params, float(u[0]), float(u[1]))
