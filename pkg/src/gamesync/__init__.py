"""Priority-synchronized learning in constrained potential games.

Library layout:

* :mod:`gamesync.games` -- constrained games, coupling/potential validators
* :mod:`gamesync.policy` -- binary log-linear / best-response policies
* :mod:`gamesync.scheduler` -- asynchronous and synchronized dynamics
* :mod:`gamesync.chains` -- exact chains, stationary laws, resistances
* :mod:`gamesync.coverage` -- graph coverage game on grid worlds
* :mod:`gamesync.experiment` -- batch runs, aggregates, verification
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .chains import (
    StateIndex,
    TransitionMatrix,
    build_async_chain,
    build_sync_chain,
    compare_chains,
    estimate_resistance,
    mover_set_probability,
    recurrent_classes,
    stationary_distribution,
    stochastically_stable_states,
    verify_resistance_calculus,
)
from .coverage import GridWorld, as_game, load_map, parse_map
from .games import (
    GameDefinition,
    check_potential,
    diff_set,
    feasible_actions,
    is_uncoupled,
    load_table_game,
    validate_coupling,
)
from .policy import (
    BEST_RESPONSE,
    BINARY_LOG_LINEAR,
    IntendedDistribution,
    PolicyParams,
    intended_distribution,
    sample_intended,
    switch_resistance,
)
from .scheduler import (
    ASYNC,
    SYNC,
    StepOutcome,
    SyncParams,
    TrajectoryRecord,
    async_step,
    run_trajectory,
    sync_step,
)

__version__ = "0.1.0"

__all__ = [
    "ASYNC",
    "BEST_RESPONSE",
    "BINARY_LOG_LINEAR",
    "GameDefinition",
    "GridWorld",
    "IntendedDistribution",
    "KERNEL_BACKEND",
    "PolicyParams",
    "StateIndex",
    "StepOutcome",
    "SYNC",
    "SyncParams",
    "TrajectoryRecord",
    "TransitionMatrix",
    "as_game",
    "async_step",
    "build_async_chain",
    "build_sync_chain",
    "check_potential",
    "compare_chains",
    "diff_set",
    "estimate_resistance",
    "feasible_actions",
    "intended_distribution",
    "is_uncoupled",
    "load_map",
    "load_table_game",
    "mover_set_probability",
    "parse_map",
    "recurrent_classes",
    "run_trajectory",
    "sample_intended",
    "stationary_distribution",
    "stochastically_stable_states",
    "switch_resistance",
    "sync_step",
    "validate_coupling",
    "verify_resistance_calculus",
]
