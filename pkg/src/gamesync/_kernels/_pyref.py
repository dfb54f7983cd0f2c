"""Pure-Python reference kernels for the hot trajectory loops.

These are the semantics of record: the compiled module `_speedups`
mirrors them statement by statement and must produce bit-identical
results for the same uniform-variate blocks.  Keep the two in sync.

Uniform-variate layout (one row per round, C-ordered):

* synchronous rounds consume ``u[r, i, :] = (kappa_i, trial, accept, beta)``
  for agents ``i = 0..n-1`` in order; the beta variate is consumed even
  when the agent is not a move candidate;
* asynchronous rounds consume ``u[r, :] = (agent pick, trial, accept)``.

Trial indices map a uniform ``v`` to ``min(int(v * count), count - 1)``;
the clamp guards the rounding-up corner of ``v`` just below 1.  Priorities
are ``beta = 1 - v`` so that a candidate's priority is never exactly 0.
"""

from __future__ import annotations

from math import exp


def _accept(u_cur: float, u_trial: float, eps: float) -> float:
    # two-point Boltzmann acceptance with max-subtraction
    m = u_cur if u_cur > u_trial else u_trial
    keep = exp((u_cur - m) / eps)
    switch = exp((u_trial - m) / eps)
    return switch / (keep + switch)


# ---------------------------------------------------------------------------
# tabulated games
# ---------------------------------------------------------------------------


def _table_intended(i, s, cur, n_states, utility, cons_ptr, cons_act, strides, eps, u1, u2):
    base = i * n_states + s
    lo = cons_ptr[base]
    hi = cons_ptr[base + 1]
    cnt = hi - lo - 1  # trials exclude the current action
    if cnt <= 0:
        return cur
    idx = int(u1 * cnt)
    if idx >= cnt:
        idx = cnt - 1
    t = cur
    k = 0
    for p in range(lo, hi):
        x = cons_act[p]
        if x == cur:
            continue
        if k == idx:
            t = x
            break
        k += 1
    u_c = utility[i][s]
    u_t = utility[i][s + (t - cur) * strides[i]]
    if u2 < _accept(u_c, u_t, eps):
        return t
    return cur


def table_sync_rounds(
    n, sizes, strides, utility, cons_ptr, cons_act, coup_mask, state, u, eps, kappa,
    out_state, out_movers,
):
    """Run ``len(u)`` synchronous rounds from ``state``; returns the final state."""
    n_states = (len(cons_ptr) - 1) // n
    strides = strides.tolist()
    utility = utility.tolist()
    cons_ptr = cons_ptr.tolist()
    cons_act = cons_act.tolist()
    coup_mask = coup_mask.tolist()
    u = u.tolist()
    cur = [(state // strides[i]) % sizes[i] for i in range(n)]
    intended = [0] * n
    beta = [0.0] * n
    s = state
    for r in range(len(u)):
        ur = u[r]
        for i in range(n):
            a = _table_intended(
                i, s, cur[i], n_states, utility, cons_ptr, cons_act, strides, eps,
                ur[i][1], ur[i][2],
            )
            intended[i] = a
            if a == cur[i] or ur[i][0] <= kappa:
                beta[i] = 0.0
            else:
                beta[i] = 1.0 - ur[i][3]
        moved = 0
        s_next = s
        for i in range(n):
            bi = beta[i]
            if bi <= 0.0:
                continue
            mask = coup_mask[i][s]
            blocked = False
            for j in range(n):
                if j != i and (mask >> j) & 1 and beta[j] >= bi:
                    blocked = True
                    break
            if not blocked:
                s_next += (intended[i] - cur[i]) * strides[i]
                cur[i] = intended[i]
                moved += 1
        s = s_next
        out_state[r] = s
        out_movers[r] = moved
    return s


def table_async_rounds(
    n, sizes, strides, utility, cons_ptr, cons_act, state, u, eps, out_state, out_movers
):
    """Run ``len(u)`` asynchronous rounds from ``state``; returns the final state."""
    n_states = (len(cons_ptr) - 1) // n
    strides = strides.tolist()
    utility = utility.tolist()
    cons_ptr = cons_ptr.tolist()
    cons_act = cons_act.tolist()
    u = u.tolist()
    cur = [(state // strides[i]) % sizes[i] for i in range(n)]
    s = state
    for r in range(len(u)):
        ur = u[r]
        i = int(ur[0] * n)
        if i >= n:
            i = n - 1
        a = _table_intended(
            i, s, cur[i], n_states, utility, cons_ptr, cons_act, strides, eps,
            ur[1], ur[2],
        )
        if a != cur[i]:
            s += (a - cur[i]) * strides[i]
            cur[i] = a
            out_movers[r] = 1
        else:
            out_movers[r] = 0
        out_state[r] = s
    return s


def table_sync_step_counts(
    n, sizes, strides, utility, cons_ptr, cons_act, coup_mask, state, u, eps, kappa, counts
):
    """Tally next states of ``len(u)`` independent synchronous steps from ``state``."""
    n_states = (len(cons_ptr) - 1) // n
    strides_l = strides.tolist()
    utility = utility.tolist()
    cons_ptr = cons_ptr.tolist()
    cons_act = cons_act.tolist()
    masks = [coup_mask[i][state] for i in range(n)]
    u = u.tolist()
    cur = [(state // strides_l[i]) % sizes[i] for i in range(n)]
    intended = [0] * n
    beta = [0.0] * n
    for r in range(len(u)):
        ur = u[r]
        for i in range(n):
            a = _table_intended(
                i, state, cur[i], n_states, utility, cons_ptr, cons_act, strides_l, eps,
                ur[i][1], ur[i][2],
            )
            intended[i] = a
            if a == cur[i] or ur[i][0] <= kappa:
                beta[i] = 0.0
            else:
                beta[i] = 1.0 - ur[i][3]
        s_next = state
        for i in range(n):
            bi = beta[i]
            if bi <= 0.0:
                continue
            mask = masks[i]
            blocked = False
            for j in range(n):
                if j != i and (mask >> j) & 1 and beta[j] >= bi:
                    blocked = True
                    break
            if not blocked:
                s_next += (intended[i] - cur[i]) * strides_l[i]
        counts[s_next] += 1


def table_async_step_counts(
    n, sizes, strides, utility, cons_ptr, cons_act, state, u, eps, counts
):
    """Tally next states of ``len(u)`` independent asynchronous steps."""
    n_states = (len(cons_ptr) - 1) // n
    strides_l = strides.tolist()
    utility = utility.tolist()
    cons_ptr = cons_ptr.tolist()
    cons_act = cons_act.tolist()
    u = u.tolist()
    cur = [(state // strides_l[i]) % sizes[i] for i in range(n)]
    for r in range(len(u)):
        ur = u[r]
        i = int(ur[0] * n)
        if i >= n:
            i = n - 1
        a = _table_intended(
            i, state, cur[i], n_states, utility, cons_ptr, cons_act, strides_l, eps,
            ur[1], ur[2],
        )
        counts[state + (a - cur[i]) * strides_l[i]] += 1


# ---------------------------------------------------------------------------
# coverage games
# ---------------------------------------------------------------------------


def _cov_intended(i, pos, ball_ptr, ball_nodes, weights, dist, cover_count, eps, u1, u2):
    p = pos[i]
    lo = ball_ptr[p]
    hi = ball_ptr[p + 1]
    cnt = hi - lo - 1
    if cnt <= 0:
        return p
    idx = int(u1 * cnt)
    if idx >= cnt:
        idx = cnt - 1
    t = p
    k = 0
    for q in range(lo, hi):
        x = ball_nodes[q]
        if x == p:
            continue
        if k == idx:
            t = x
            break
        k += 1
    # utility of staying: weight covered by i alone
    u_c = 0.0
    for q in range(lo, hi):
        v = ball_nodes[q]
        if cover_count[v] == 1:
            u_c += weights[v]
    # utility of the trial position with everyone else fixed
    u_t = 0.0
    drow = dist[p]
    for q in range(ball_ptr[t], ball_ptr[t + 1]):
        v = ball_nodes[q]
        c = cover_count[v]
        if drow[v] <= 1:
            c -= 1
        if c == 0:
            u_t += weights[v]
    if u2 < _accept(u_c, u_t, eps):
        return t
    return p


def _cov_apply_move(i, t, pos, ball_ptr, ball_nodes, weights, cover_count, covered):
    old = pos[i]
    for q in range(ball_ptr[old], ball_ptr[old + 1]):
        v = ball_nodes[q]
        cover_count[v] -= 1
        if cover_count[v] == 0:
            covered -= weights[v]
    for q in range(ball_ptr[t], ball_ptr[t + 1]):
        v = ball_nodes[q]
        cover_count[v] += 1
        if cover_count[v] == 1:
            covered += weights[v]
    pos[i] = t
    return covered


def cov_sync_rounds(
    n, ball_ptr, ball_nodes, weights, dist, radius, eps, kappa,
    pos, cover_count, covered, u, out_phi, out_movers, out_pos,
):
    """Synchronous coverage rounds; mutates ``pos``/``cover_count`` in place.

    ``covered`` is the running total weight of covered nodes; the updated
    value is returned and logged per round in ``out_phi``.
    """
    ball_ptr_l = ball_ptr.tolist()
    ball_nodes_l = ball_nodes.tolist()
    weights_l = weights.tolist()
    dist_l = dist.tolist()
    u_l = u.tolist()
    cover_l = cover_count.tolist()
    pos_l = pos.tolist()
    n_agents = n
    intended = [0] * n_agents
    beta = [0.0] * n_agents
    for r in range(len(u_l)):
        ur = u_l[r]
        for i in range(n_agents):
            t = _cov_intended(
                i, pos_l, ball_ptr_l, ball_nodes_l, weights_l, dist_l, cover_l, eps,
                ur[i][1], ur[i][2],
            )
            intended[i] = t
            if t == pos_l[i] or ur[i][0] <= kappa:
                beta[i] = 0.0
            else:
                beta[i] = 1.0 - ur[i][3]
        moved = 0
        movers = []
        for i in range(n_agents):
            bi = beta[i]
            if bi <= 0.0:
                continue
            drow = dist_l[pos_l[i]]
            blocked = False
            for j in range(n_agents):
                if j != i and drow[pos_l[j]] <= radius and beta[j] >= bi:
                    blocked = True
                    break
            if not blocked:
                movers.append(i)
        for i in movers:
            covered = _cov_apply_move(
                i, intended[i], pos_l, ball_ptr_l, ball_nodes_l, weights_l, cover_l, covered
            )
            moved += 1
        out_phi[r] = covered
        out_movers[r] = moved
        out_pos[r] = pos_l
    pos[:] = pos_l
    cover_count[:] = cover_l
    return covered


def cov_async_rounds(
    n, ball_ptr, ball_nodes, weights, dist, eps,
    pos, cover_count, covered, u, out_phi, out_movers, out_pos,
):
    """Asynchronous coverage rounds; one uniformly picked updater per round."""
    ball_ptr_l = ball_ptr.tolist()
    ball_nodes_l = ball_nodes.tolist()
    weights_l = weights.tolist()
    dist_l = dist.tolist()
    u_l = u.tolist()
    cover_l = cover_count.tolist()
    pos_l = pos.tolist()
    for r in range(len(u_l)):
        ur = u_l[r]
        i = int(ur[0] * n)
        if i >= n:
            i = n - 1
        t = _cov_intended(
            i, pos_l, ball_ptr_l, ball_nodes_l, weights_l, dist_l, cover_l, eps,
            ur[1], ur[2],
        )
        if t != pos_l[i]:
            covered = _cov_apply_move(
                i, t, pos_l, ball_ptr_l, ball_nodes_l, weights_l, cover_l, covered
            )
            out_movers[r] = 1
        else:
            out_movers[r] = 0
        out_phi[r] = covered
        out_pos[r] = pos_l
    pos[:] = pos_l
    cover_count[:] = cover_l
    return covered
