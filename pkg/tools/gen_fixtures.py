#!/usr/bin/env python3
"""Deterministic generator of the bundled table-game fixtures.

Four fixtures are written from fixed closed-form tables.  The fifth
(`interacting_trap`) is found by a seeded randomized search over
identical-interest games with directed-cycle movement constraints: it
must pass all three chain-comparison verdicts with its valid (maximal)
coupling, yet fail at least one verdict when move arbitration ignores
couplings.  Rerunning reproduces every .game file byte for byte.
"""

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gamesync.chains import (  # noqa: E402
    SWEEP_EPSILONS,
    build_async_chain,
    build_sync_chain,
    recurrent_classes,
    stationary_distribution,
    stochastically_stable_states,
)
from gamesync.games import break_coupling, load_table_game  # noqa: E402
from gamesync.policy import BEST_RESPONSE, PolicyParams  # noqa: E402
from gamesync.scheduler import ASYNC, SYNC, SyncParams  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "src" / "gamesync" / "fixtures"

SEARCH_SEED = 20240601
KAPPA = 0.01


def fmt(x: float) -> str:
    return f"{x:g}"


def table_text(header: str, n: int, sizes, utilities, constraints=None, potential=None) -> str:
    lines = [f"# {line}" for line in header.splitlines()]
    lines.append(f"agents: {n}")
    lines.append("actions: " + " ".join(str(s) for s in sizes))
    for i in range(n):
        lines.append(f"utility {i}: " + " ".join(fmt(v) for v in utilities[i]))
    if constraints is not None:
        for i in range(n):
            lines.append(
                f"constraint {i}: "
                + " ".join(",".join(str(x) for x in c) for c in constraints[i])
            )
    if potential is not None:
        lines.append("potential: " + " ".join(fmt(v) for v in potential))
    return "\n".join(lines) + "\n"


def profiles(sizes):
    total = math.prod(sizes)
    for k in range(total):
        out = []
        kk = k
        for s in sizes:
            kk, r = divmod(kk, s)
            out.append(r)
        yield tuple(out)


def write(name: str, text: str) -> None:
    (OUT / f"{name}.game").write_text(text, encoding="utf-8")
    game = load_table_game(text)  # round-trip validation
    print(f"{name}: {game.agent_count} agents, {game.num_profiles} states")


def gen_identical_2x2():
    phi = {(0, 0): 1.0, (1, 0): 0.0, (0, 1): 0.0, (1, 1): 2.0}
    tbl = [phi[a] for a in profiles((2, 2))]
    write(
        "identical_2x2",
        table_text(
            "2-agent identical-interest coordination game, unconstrained,\n"
            "maximal coupling; unique objective maximizer at (1,1).",
            2, (2, 2), [tbl, tbl], potential=tbl,
        ),
    )


def gen_asym_2x3():
    phi = {
        (0, 0): 1.0, (1, 0): 0.0,
        (0, 1): 0.0, (1, 1): 2.0,
        (0, 2): 0.5, (1, 2): 0.25,
    }
    g1 = [0.0, 0.5, -0.25]  # additive shift of agent 0's utility by a_1
    h0 = [0.25, 0.0]  # additive shift of agent 1's utility by a_0
    u0 = [phi[a] + g1[a[1]] for a in profiles((2, 3))]
    u1 = [phi[a] + h0[a[0]] for a in profiles((2, 3))]
    tbl = [phi[a] for a in profiles((2, 3))]
    write(
        "asym_2x3",
        table_text(
            "2-agent potential game with utilities != potential (each agent's\n"
            "utility adds an opponent-dependent offset); unconstrained, maximal\n"
            "coupling; unique objective maximizer at (1,1).",
            2, (2, 3), [u0, u1], potential=tbl,
        ),
    )


def gen_three_agent_line():
    phi01 = {(0, 0): 2.0, (1, 0): 0.0, (0, 1): 0.0, (1, 1): 3.0}
    phi2 = [0.0, 1.0]
    sizes = (2, 2, 2)
    u0 = [phi01[(a[0], a[1])] for a in profiles(sizes)]
    u1 = [phi01[(a[0], a[1])] for a in profiles(sizes)]
    u2 = [phi2[a[2]] for a in profiles(sizes)]
    pot = [phi01[(a[0], a[1])] + phi2[a[2]] for a in profiles(sizes)]
    coup01 = [(0, 1)] * len(pot)
    coup2 = [(2,)] * len(pot)
    text = table_text(
        "3 agents: 0 and 1 interact, 2 is independent, so the valid coupling\n"
        "splits into {0,1} and {2} and agent 2 can move in parallel.",
        3, sizes, [u0, u1, u2], potential=pot,
    )
    text += "coupling 0: " + " ".join(",".join(map(str, c)) for c in coup01) + "\n"
    text += "coupling 1: " + " ".join(",".join(map(str, c)) for c in coup01) + "\n"
    text += "coupling 2: " + " ".join(",".join(map(str, c)) for c in coup2) + "\n"
    write("three_agent_line", text)


def gen_constrained_path_3x3():
    phi = {
        (0, 0): 0.0, (1, 0): 1.0, (2, 0): 0.0,
        (0, 1): 1.0, (1, 1): 0.0, (2, 1): 1.0,
        (0, 2): 0.0, (1, 2): 1.0, (2, 2): 3.0,
    }
    sizes = (3, 3)
    tbl = [phi[a] for a in profiles(sizes)]
    cons = []
    for i in range(2):
        per_state = []
        for a in profiles(sizes):
            x = a[i]
            per_state.append(tuple(v for v in (x - 1, x, x + 1) if 0 <= v < 3))
        cons.append(per_state)
    write(
        "constrained_path_3x3",
        table_text(
            "2-agent identical-interest game where each agent may only move to\n"
            "an adjacent action on the path 0-1-2; maximal coupling; unique\n"
            "objective maximizer at (2,2).",
            2, sizes, [tbl, tbl], constraints=cons, potential=tbl,
        ),
    )


# --- interacting_trap search -------------------------------------------------


def _cycle_constraints(sizes):
    cons = []
    for i in range(2):
        per_state = []
        for a in profiles(sizes):
            per_state.append(tuple(sorted((a[i], (a[i] + 1) % 3))))
        cons.append(per_state)
    return cons


def _stable_margin(game, mode, sync):
    """(stable set, margin) where margin is the worst distance to delta."""
    res = stochastically_stable_states(game, mode, SWEEP_EPSILONS, sync)
    mu = res.mu_table[-1]
    inside = mu[list(res.states)].min() if res.states else 0.0
    outside = mu[[s for s in range(len(mu)) if s not in res.states]]
    out_max = outside.max() if outside.size else 0.0
    return res.states, min(inside / res.delta, res.delta / max(out_max, 1e-300))


def _trap_candidate_ok(text: str) -> bool:
    game = load_table_game(text)
    sync = SyncParams(KAPPA)
    br = PolicyParams(0.0, BEST_RESPONSE)
    try:
        ss_async, m1 = _stable_margin(game, ASYNC, None)
        ss_sync, m2 = _stable_margin(game, SYNC, sync)
        classes_async = recurrent_classes(build_async_chain(game, br))
        classes_sync = recurrent_classes(build_sync_chain(game, br, sync))
        if ss_async != ss_sync or classes_async != classes_sync:
            return False  # valid coupling must preserve everything
        if min(m1, m2) < 5.0:
            return False  # demand clean stationary-mass margins
        broken = break_coupling(game)
        ss_broken, m3 = _stable_margin(broken, SYNC, sync)
        classes_broken = recurrent_classes(build_sync_chain(broken, br, sync))
        ss_differs = ss_broken != ss_async and m3 >= 5.0
        classes_differ = classes_broken != classes_async
        return ss_differs or classes_differ
    except Exception:
        return False


def gen_interacting_trap():
    sizes = (3, 3)
    cons = _cycle_constraints(sizes)
    rng = np.random.default_rng(SEARCH_SEED)
    tried = 0
    while True:
        tried += 1
        vals = rng.integers(-6, 7, size=9).astype(float)
        tbl = list(vals)
        text = table_text(
            "2-agent identical-interest game on directed-cycle action moves\n"
            "(from x an agent may keep x or step to (x+1) mod 3).  Interacting\n"
            "utilities force the maximal coupling; arbitrating simultaneous\n"
            "moves without it provably changes the limiting behaviour.\n"
            f"Found by seeded search (tools/gen_fixtures.py, seed {SEARCH_SEED}).",
            2, sizes, [tbl, tbl], constraints=cons, potential=tbl,
        )
        if _trap_candidate_ok(text):
            print(f"interacting_trap: accepted candidate #{tried}")
            write("interacting_trap", text)
            return


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    gen_identical_2x2()
    gen_asym_2x3()
    gen_three_agent_line()
    gen_constrained_path_3x3()
    gen_interacting_trap()


if __name__ == "__main__":
    main()
