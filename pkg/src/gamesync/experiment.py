"""Batch experiment driver: paired async/sync runs, aggregates, verification.

Runs are paired by construction: run index ``r`` of every mode starts
from the same initial deployment, drawn from the stream seeded by
``(base_seed, r)``, while the dynamics of mode ``m`` consume the
independent stream seeded by ``(base_seed, r, mode_code(m))``.  All
outputs are deterministic functions of the configuration, byte for byte.

Output layout under the configured directory:

* ``run_<idx>_<mode>.csv`` -- per-round trajectory (see TrajectoryRecord.to_csv)
* ``aggregate.csv``        -- ``round,mode,mean,min,max`` of the objective
* ``summary.txt``          -- threshold hitting rounds and speedup ratios
"""

from __future__ import annotations

import concurrent.futures
import csv
import os
import re
from dataclasses import dataclass, field
from typing import IO, Mapping, Sequence

import numpy as np

from .chains import TheoremReport, compare_chains
from .coverage import as_game, load_map
from .games import GameDefinition, break_coupling
from .policy import PolicyParams
from .scheduler import ASYNC, SYNC, SyncParams, TrajectoryRecord, run_trajectory

_MODE_CODES = {ASYNC: 1, SYNC: 2}

_RUN_FILE_RE = re.compile(r"run_(\d+)_(async|sync)\.csv$")


def _format_number(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one batch experiment."""

    map_path: str
    agents: int
    epsilon: float = 0.4
    kappa: float = 0.01
    rounds: int = 4000
    runs: int = 50
    seed: int = 0
    out_dir: str = "out"
    modes: tuple[str, ...] = (ASYNC, SYNC)
    thresholds: tuple[float, ...] = ()

    def __post_init__(self):
        if self.agents < 1:
            raise ValueError("agents must be >= 1")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")
        if not self.modes:
            raise ValueError("at least one mode required")
        for m in self.modes:
            if m not in (ASYNC, SYNC):
                raise ValueError(f"unknown mode {m!r}")
        if list(self.thresholds) != sorted(self.thresholds):
            raise ValueError("thresholds must be sorted ascending")

    @classmethod
    def from_sources(
        cls,
        file_values: Mapping[str, str] | None = None,
        overrides: Mapping[str, object] | None = None,
    ) -> "ExperimentConfig":
        """Merge config-file values with (stronger) command-line overrides."""
        values: dict[str, object] = {}
        if file_values:
            values.update(file_values)
        if overrides:
            for key, val in overrides.items():
                if val is not None:
                    values[key] = val
        for key in ("map", "agents"):
            if key not in values:
                raise ValueError(f"missing required config key {key!r}")

        def pick(key, cast, default):
            if key not in values:
                return default
            v = values.pop(key)
            return cast(v) if isinstance(v, str) else v

        def parse_modes(raw):
            if isinstance(raw, str):
                return tuple(m.strip() for m in raw.split(",") if m.strip())
            return tuple(raw)

        def parse_thresholds(raw):
            if isinstance(raw, str):
                return tuple(float(x) for x in raw.split(",") if x.strip())
            return tuple(float(x) for x in raw)

        cfg = cls(
            map_path=str(values.pop("map")),
            agents=pick("agents", int, 0),
            epsilon=pick("epsilon", float, 0.4),
            kappa=pick("kappa", float, 0.01),
            rounds=pick("rounds", int, 4000),
            runs=pick("runs", int, 50),
            seed=pick("seed", int, 0),
            out_dir=str(values.pop("out", "out")),
            modes=parse_modes(values.pop("modes", (ASYNC, SYNC))),
            thresholds=parse_thresholds(values.pop("thresholds", ())),
        )
        if values:
            raise ValueError(f"unrecognized config keys: {sorted(values)}")
        return cfg


def parse_config_file(path: str) -> dict[str, str]:
    """Flat ``key=value`` format; '#' starts a comment, blank lines ignored."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            key = key.strip()
            if key in out:
                raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = val.strip()
    return out


@dataclass(frozen=True)
class HittingStat:
    threshold: float
    mean_round: float | None  # None when some run never reached the threshold
    reached: int
    total: int


@dataclass(frozen=True, eq=False)
class AggregateReport:
    """Per-round objective statistics and threshold hitting times."""

    modes: tuple[str, ...]
    rounds: int
    stats: dict[str, dict[str, np.ndarray]]  # mode -> {"mean","min","max"}
    hitting: dict[str, tuple[HittingStat, ...]]
    speedups: dict[float, float | None] = field(default_factory=dict)

    def write_csv(self, target: str | IO[str]) -> None:
        own = isinstance(target, str)
        fh = open(target, "w", newline="", encoding="utf-8") if own else target
        try:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["round", "mode", "mean", "min", "max"])
            for mode in self.modes:
                s = self.stats[mode]
                for t in range(self.rounds + 1):
                    writer.writerow(
                        [
                            t,
                            mode,
                            _format_number(s["mean"][t]),
                            _format_number(s["min"][t]),
                            _format_number(s["max"][t]),
                        ]
                    )
        finally:
            if own:
                fh.close()

    def summary_text(self) -> str:
        lines = ["threshold hitting rounds (mean over runs; 'not-reached' if any run missed)"]
        for mode in self.modes:
            for h in self.hitting[mode]:
                val = (
                    _format_number(h.mean_round)
                    if h.mean_round is not None
                    else f"not-reached({h.reached}/{h.total})"
                )
                lines.append(f"{mode} phi>={_format_number(h.threshold)}: {val}")
        for thr, ratio in self.speedups.items():
            val = _format_number(ratio) if ratio is not None else "n/a"
            lines.append(f"speedup async/sync at phi>={_format_number(thr)}: {val}")
        return "\n".join(lines) + "\n"


def _aggregate(
    modes: Sequence[str],
    objectives: Mapping[str, np.ndarray],  # mode -> (runs, rounds+1)
    thresholds: Sequence[float],
) -> AggregateReport:
    stats = {}
    hitting = {}
    for mode in modes:
        obj = objectives[mode]
        stats[mode] = {
            "mean": obj.mean(axis=0),
            "min": obj.min(axis=0),
            "max": obj.max(axis=0),
        }
        per_thr = []
        for thr in thresholds:
            hit_rounds = []
            reached = 0
            for row in obj:
                idx = np.flatnonzero(row >= thr)
                if idx.size:
                    hit_rounds.append(int(idx[0]))
                    reached += 1
            mean_round = (
                float(np.mean(hit_rounds)) if reached == len(obj) else None
            )
            per_thr.append(HittingStat(thr, mean_round, reached, len(obj)))
        hitting[mode] = tuple(per_thr)
    speedups: dict[float, float | None] = {}
    if ASYNC in modes and SYNC in modes:
        for k, thr in enumerate(thresholds):
            a = hitting[ASYNC][k].mean_round
            s = hitting[SYNC][k].mean_round
            speedups[thr] = (a / s) if (a and s) else None
    rounds = next(iter(objectives.values())).shape[1] - 1
    return AggregateReport(tuple(modes), rounds, stats, hitting, speedups)


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    config: ExperimentConfig
    aggregate: AggregateReport
    run_files: tuple[str, ...]
    records: dict[str, list[TrajectoryRecord]]


def initial_deployment(config: ExperimentConfig, run: int, n_nodes: int) -> np.ndarray:
    """Uniform i.i.d. positions over free nodes, shared by all modes of a run."""
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, run]))
    return rng.integers(0, n_nodes, size=config.agents)


def _dynamics_rng(config: ExperimentConfig, run: int, mode: str) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([config.seed, run, _MODE_CODES[mode]])
    )


def _execute_run(config: ExperimentConfig, run: int) -> dict[str, TrajectoryRecord]:
    world = _world_cache(config.map_path)
    game = as_game(world, config.agents)
    a0 = tuple(int(x) for x in initial_deployment(config, run, world.node_count))
    params = PolicyParams(config.epsilon)
    sync = SyncParams(config.kappa)
    out = {}
    for mode in config.modes:
        out[mode] = run_trajectory(
            game,
            a0,
            mode,
            params,
            sync,
            config.rounds,
            _dynamics_rng(config, run, mode),
            seed=config.seed,
        )
    return out


_WORLDS: dict[str, object] = {}


def _world_cache(path: str):
    if path not in _WORLDS:
        _WORLDS[path] = load_map(path)
    return _WORLDS[path]


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Execute all paired runs, write per-run CSVs, aggregates and summary.

    ``workers`` > 1 distributes runs over a process pool; results are
    identical to serial execution because every run owns its derived
    random streams and aggregation is an ordered post-pass.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    per_run: list[dict[str, TrajectoryRecord]] = [None] * config.runs  # type: ignore
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_execute_run, config, r): r for r in range(config.runs)
            }
            for fut in concurrent.futures.as_completed(futures):
                per_run[futures[fut]] = fut.result()
    else:
        for r in range(config.runs):
            per_run[r] = _execute_run(config, r)

    run_files = []
    records: dict[str, list[TrajectoryRecord]] = {m: [] for m in config.modes}
    for r, by_mode in enumerate(per_run):
        for mode in config.modes:
            path = os.path.join(config.out_dir, f"run_{r}_{mode}.csv")
            by_mode[mode].to_csv(path)
            run_files.append(path)
            records[mode].append(by_mode[mode])

    objectives = {
        m: np.vstack([rec.objective for rec in records[m]]) for m in config.modes
    }
    aggregate = _aggregate(config.modes, objectives, config.thresholds)
    aggregate.write_csv(os.path.join(config.out_dir, "aggregate.csv"))
    with open(os.path.join(config.out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(aggregate.summary_text())
    return ExperimentResult(config, aggregate, tuple(run_files), records)


def read_trajectory_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Objective and mover columns of one per-run CSV."""
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["round", "objective", "movers"]:
            raise ValueError(f"{path}: unexpected header {header[:3]}")
        objective = []
        movers = []
        for row in reader:
            objective.append(float(row[1]) if row[1] else np.nan)
            movers.append(int(row[2]))
    return np.asarray(objective), np.asarray(movers)


def summarize(
    out_dir: str,
    thresholds: Sequence[float] = (),
    write: bool = True,
) -> AggregateReport:
    """Recompute aggregates from the per-run CSVs in a directory.

    Produces byte-identical ``aggregate.csv``/``summary.txt`` to the
    originating run when given the same thresholds.
    """
    found: dict[str, dict[int, str]] = {}
    for name in os.listdir(out_dir):
        m = _RUN_FILE_RE.match(name)
        if m:
            found.setdefault(m.group(2), {})[int(m.group(1))] = os.path.join(
                out_dir, name
            )
    if not found:
        raise ValueError(f"no run_<idx>_<mode>.csv files under {out_dir}")
    modes = [m for m in (ASYNC, SYNC) if m in found]
    objectives = {}
    horizon = None
    for mode in modes:
        rows = []
        for idx in sorted(found[mode]):
            obj, _ = read_trajectory_csv(found[mode][idx])
            if horizon is None:
                horizon = len(obj)
            elif len(obj) != horizon:
                raise ValueError(
                    f"{found[mode][idx]}: horizon {len(obj) - 1} differs from others"
                )
            rows.append(obj)
        objectives[mode] = np.vstack(rows)
    aggregate = _aggregate(modes, objectives, tuple(thresholds))
    if write:
        aggregate.write_csv(os.path.join(out_dir, "aggregate.csv"))
        with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
            fh.write(aggregate.summary_text())
    return aggregate


def verify_theorems(
    game: GameDefinition | str,
    broken_coupling: bool = False,
    epsilon: float = 0.4,
    kappa: float = 0.01,
    **compare_kwargs,
) -> tuple[int, TheoremReport]:
    """Run the three-verdict chain comparison on a fixture or game.

    Returns ``(exit_status, report)`` with status 0 iff every verdict
    passes.  ``broken_coupling`` swaps in the mutated arbitration that
    ignores coupling sets -- the suite is expected to catch it.
    """
    if isinstance(game, str):
        from . import fixtures

        game = fixtures.load_fixture(game)
    if broken_coupling:
        game = break_coupling(game)
    report = compare_chains(
        game, PolicyParams(epsilon), SyncParams(kappa), **compare_kwargs
    )
    return (0 if report.all_pass else 1), report
