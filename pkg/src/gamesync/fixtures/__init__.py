"""Bundled desk-scale games and maps used by the verification suites.

Table fixtures are regenerated byte-identically by tools/gen_fixtures.py,
the 80-node benchmark map by tools/gen_map80.py; its exact 5-agent
optimum below was computed by branch-and-bound (coverage.optimal_coverage)
and cross-checked by brute force at smaller agent counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..coverage import GridWorld, as_game, parse_map
from ..games import GameDefinition, load_table_game

#: exact optimum of the 5-agent coverage game on the bundled 80-node map
MAP80_BEST_KNOWN = 123.0
MAP80_OPTIMAL_POSITIONS: tuple[int, ...] = (17, 19, 22, 64, 71)
MAP80_AGENTS = 5

MAP80 = "map80.map"
MICRO3 = "micro3.map"
MICRO12 = "micro12.map"


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    kind: str  # "table" | "coverage"
    source: str
    description: str
    agents: int | None = None  # coverage fixtures only
    interacting: bool = True


FIXTURES: dict[str, FixtureSpec] = {
    spec.name: spec
    for spec in (
        FixtureSpec(
            "identical_2x2",
            "table",
            "identical_2x2.game",
            "2-agent identical-interest coordination game",
        ),
        FixtureSpec(
            "asym_2x3",
            "table",
            "asym_2x3.game",
            "2-agent potential game with utilities distinct from the potential",
        ),
        FixtureSpec(
            "three_agent_line",
            "table",
            "three_agent_line.game",
            "3 agents with a split coupling: {0,1} interact, 2 is independent",
        ),
        FixtureSpec(
            "constrained_path_3x3",
            "table",
            "constrained_path_3x3.game",
            "2-agent identical-interest game with path-move constraints",
        ),
        FixtureSpec(
            "interacting_trap",
            "table",
            "interacting_trap.game",
            "directed-cycle game whose stable set shifts under broken coupling",
        ),
        FixtureSpec(
            "micro3_coverage",
            "coverage",
            MICRO3,
            "2-agent coverage game on the 3-node path map",
            agents=2,
        ),
    )
}


def _read(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def fixture_path(name: str) -> str:
    return str(resources.files(__package__).joinpath(name))


def load_map_fixture(name: str) -> GridWorld:
    return parse_map(_read(name if name.endswith(".map") else f"{name}.map"))


def load_fixture(name: str) -> GameDefinition:
    """Load a bundled fixture by name, or a .game/.map path from disk."""
    if name in FIXTURES:
        spec = FIXTURES[name]
        if spec.kind == "table":
            return load_table_game(_read(spec.source))
        return as_game(load_map_fixture(spec.source), spec.agents)
    if name.endswith(".game"):
        return load_table_game(name)
    if name.endswith(".map"):
        with open(name, "r", encoding="utf-8") as fh:
            return as_game(parse_map(fh.read()), 2)
    raise ValueError(f"unknown fixture {name!r} (known: {sorted(FIXTURES)})")


def small_game_names() -> tuple[str, ...]:
    """Bundled games small enough for exact chain comparison."""
    return tuple(FIXTURES)
