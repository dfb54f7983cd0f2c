# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the reference kernels in `_pyref`.

Statement-for-statement ports: same uniform-variate layout, same trial
indexing and clamping, same acceptance arithmetic (libm ``exp``), so the
two backends produce bit-identical trajectories.  Any semantic change
must be made in both modules.
"""

from libc.math cimport exp

import numpy as np


cdef inline double _accept(double u_cur, double u_trial, double eps) nogil:
    cdef double m = u_cur if u_cur > u_trial else u_trial
    cdef double keep = exp((u_cur - m) / eps)
    cdef double switch = exp((u_trial - m) / eps)
    return switch / (keep + switch)


cdef inline long _table_intended(
    long i, long s, long cur, long n_states,
    double[:, ::1] utility, long[::1] cons_ptr, int[::1] cons_act,
    long[::1] strides, double eps, double u1, double u2,
) nogil:
    cdef long base = i * n_states + s
    cdef long lo = cons_ptr[base]
    cdef long hi = cons_ptr[base + 1]
    cdef long cnt = hi - lo - 1
    if cnt <= 0:
        return cur
    cdef long idx = <long>(u1 * cnt)
    if idx >= cnt:
        idx = cnt - 1
    cdef long t = cur
    cdef long k = 0
    cdef long p
    cdef long x
    for p in range(lo, hi):
        x = cons_act[p]
        if x == cur:
            continue
        if k == idx:
            t = x
            break
        k += 1
    cdef double u_c = utility[i, s]
    cdef double u_t = utility[i, s + (t - cur) * strides[i]]
    if u2 < _accept(u_c, u_t, eps):
        return t
    return cur


def table_sync_rounds(
    long n, sizes, long[::1] strides, double[:, ::1] utility,
    long[::1] cons_ptr, int[::1] cons_act, unsigned long long[:, ::1] coup_mask,
    long state, double[:, :, ::1] u, double eps, double kappa,
    long[::1] out_state, int[::1] out_movers,
):
    cdef long n_states = (cons_ptr.shape[0] - 1) // n
    cdef long[::1] sizes_v = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef long[::1] cur = np.empty(n, dtype=np.int64)
    cdef long[::1] intended = np.empty(n, dtype=np.int64)
    cdef double[::1] beta = np.empty(n, dtype=np.float64)
    cdef long s = state
    cdef long rounds = u.shape[0]
    cdef long r, i, j, moved, s_next
    cdef long a
    cdef double bi
    cdef unsigned long long mask
    cdef bint blocked
    for i in range(n):
        cur[i] = (s // strides[i]) % sizes_v[i]
    with nogil:
        for r in range(rounds):
            for i in range(n):
                a = _table_intended(
                    i, s, cur[i], n_states, utility, cons_ptr, cons_act, strides,
                    eps, u[r, i, 1], u[r, i, 2],
                )
                intended[i] = a
                if a == cur[i] or u[r, i, 0] <= kappa:
                    beta[i] = 0.0
                else:
                    beta[i] = 1.0 - u[r, i, 3]
            moved = 0
            s_next = s
            for i in range(n):
                bi = beta[i]
                if bi <= 0.0:
                    continue
                mask = coup_mask[i, s]
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
    long n, sizes, long[::1] strides, double[:, ::1] utility,
    long[::1] cons_ptr, int[::1] cons_act,
    long state, double[:, ::1] u, double eps,
    long[::1] out_state, int[::1] out_movers,
):
    cdef long n_states = (cons_ptr.shape[0] - 1) // n
    cdef long[::1] sizes_v = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef long[::1] cur = np.empty(n, dtype=np.int64)
    cdef long s = state
    cdef long rounds = u.shape[0]
    cdef long r, i, a
    for i in range(n):
        cur[i] = (s // strides[i]) % sizes_v[i]
    with nogil:
        for r in range(rounds):
            i = <long>(u[r, 0] * n)
            if i >= n:
                i = n - 1
            a = _table_intended(
                i, s, cur[i], n_states, utility, cons_ptr, cons_act, strides,
                eps, u[r, 1], u[r, 2],
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
    long n, sizes, long[::1] strides, double[:, ::1] utility,
    long[::1] cons_ptr, int[::1] cons_act, unsigned long long[:, ::1] coup_mask,
    long state, double[:, :, ::1] u, double eps, double kappa,
    long[::1] counts,
):
    cdef long n_states = (cons_ptr.shape[0] - 1) // n
    cdef long[::1] sizes_v = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef long[::1] cur = np.empty(n, dtype=np.int64)
    cdef long[::1] intended = np.empty(n, dtype=np.int64)
    cdef double[::1] beta = np.empty(n, dtype=np.float64)
    cdef unsigned long long[::1] masks = np.empty(n, dtype=np.uint64)
    cdef long rounds = u.shape[0]
    cdef long r, i, j, s_next, a
    cdef double bi
    cdef bint blocked
    for i in range(n):
        cur[i] = (state // strides[i]) % sizes_v[i]
        masks[i] = coup_mask[i, state]
    with nogil:
        for r in range(rounds):
            for i in range(n):
                a = _table_intended(
                    i, state, cur[i], n_states, utility, cons_ptr, cons_act, strides,
                    eps, u[r, i, 1], u[r, i, 2],
                )
                intended[i] = a
                if a == cur[i] or u[r, i, 0] <= kappa:
                    beta[i] = 0.0
                else:
                    beta[i] = 1.0 - u[r, i, 3]
            s_next = state
            for i in range(n):
                bi = beta[i]
                if bi <= 0.0:
                    continue
                blocked = False
                for j in range(n):
                    if j != i and (masks[i] >> j) & 1 and beta[j] >= bi:
                        blocked = True
                        break
                if not blocked:
                    s_next += (intended[i] - cur[i]) * strides[i]
            counts[s_next] += 1


def table_async_step_counts(
    long n, sizes, long[::1] strides, double[:, ::1] utility,
    long[::1] cons_ptr, int[::1] cons_act,
    long state, double[:, ::1] u, double eps,
    long[::1] counts,
):
    cdef long n_states = (cons_ptr.shape[0] - 1) // n
    cdef long[::1] sizes_v = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef long[::1] cur = np.empty(n, dtype=np.int64)
    cdef long rounds = u.shape[0]
    cdef long r, i, a
    for i in range(n):
        cur[i] = (state // strides[i]) % sizes_v[i]
    with nogil:
        for r in range(rounds):
            i = <long>(u[r, 0] * n)
            if i >= n:
                i = n - 1
            a = _table_intended(
                i, state, cur[i], n_states, utility, cons_ptr, cons_act, strides,
                eps, u[r, 1], u[r, 2],
            )
            counts[state + (a - cur[i]) * strides[i]] += 1


# ---------------------------------------------------------------------------
# coverage games
# ---------------------------------------------------------------------------


cdef inline long _cov_intended(
    long i, long[::1] pos, long[::1] ball_ptr, int[::1] ball_nodes,
    double[::1] weights, int[:, ::1] dist, long[::1] cover_count,
    double eps, double u1, double u2,
) nogil:
    cdef long p = pos[i]
    cdef long lo = ball_ptr[p]
    cdef long hi = ball_ptr[p + 1]
    cdef long cnt = hi - lo - 1
    if cnt <= 0:
        return p
    cdef long idx = <long>(u1 * cnt)
    if idx >= cnt:
        idx = cnt - 1
    cdef long t = p
    cdef long k = 0
    cdef long q, x, v, c
    for q in range(lo, hi):
        x = ball_nodes[q]
        if x == p:
            continue
        if k == idx:
            t = x
            break
        k += 1
    cdef double u_c = 0.0
    for q in range(lo, hi):
        v = ball_nodes[q]
        if cover_count[v] == 1:
            u_c += weights[v]
    cdef double u_t = 0.0
    for q in range(ball_ptr[t], ball_ptr[t + 1]):
        v = ball_nodes[q]
        c = cover_count[v]
        if dist[p, v] <= 1:
            c -= 1
        if c == 0:
            u_t += weights[v]
    if u2 < _accept(u_c, u_t, eps):
        return t
    return p


cdef inline double _cov_apply_move(
    long i, long t, long[::1] pos, long[::1] ball_ptr, int[::1] ball_nodes,
    double[::1] weights, long[::1] cover_count, double covered,
) nogil:
    cdef long old = pos[i]
    cdef long q, v
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
    long n, long[::1] ball_ptr, int[::1] ball_nodes, double[::1] weights,
    int[:, ::1] dist, long radius, double eps, double kappa,
    long[::1] pos, long[::1] cover_count, double covered,
    double[:, :, ::1] u, double[::1] out_phi, int[::1] out_movers,
    long[:, ::1] out_pos,
):
    cdef long[::1] intended = np.empty(n, dtype=np.int64)
    cdef double[::1] beta = np.empty(n, dtype=np.float64)
    cdef long[::1] movers = np.empty(n, dtype=np.int64)
    cdef long rounds = u.shape[0]
    cdef long r, i, j, t, moved, n_movers
    cdef double bi
    cdef bint blocked
    with nogil:
        for r in range(rounds):
            for i in range(n):
                t = _cov_intended(
                    i, pos, ball_ptr, ball_nodes, weights, dist, cover_count,
                    eps, u[r, i, 1], u[r, i, 2],
                )
                intended[i] = t
                if t == pos[i] or u[r, i, 0] <= kappa:
                    beta[i] = 0.0
                else:
                    beta[i] = 1.0 - u[r, i, 3]
            n_movers = 0
            for i in range(n):
                bi = beta[i]
                if bi <= 0.0:
                    continue
                blocked = False
                for j in range(n):
                    if j != i and dist[pos[i], pos[j]] <= radius and beta[j] >= bi:
                        blocked = True
                        break
                if not blocked:
                    movers[n_movers] = i
                    n_movers += 1
            moved = 0
            for j in range(n_movers):
                i = movers[j]
                covered = _cov_apply_move(
                    i, intended[i], pos, ball_ptr, ball_nodes, weights, cover_count,
                    covered,
                )
                moved += 1
            out_phi[r] = covered
            out_movers[r] = moved
            for i in range(n):
                out_pos[r, i] = pos[i]
    return covered


def cov_async_rounds(
    long n, long[::1] ball_ptr, int[::1] ball_nodes, double[::1] weights,
    int[:, ::1] dist, double eps,
    long[::1] pos, long[::1] cover_count, double covered,
    double[:, ::1] u, double[::1] out_phi, int[::1] out_movers,
    long[:, ::1] out_pos,
):
    cdef long rounds = u.shape[0]
    cdef long r, i, j, t
    with nogil:
        for r in range(rounds):
            i = <long>(u[r, 0] * n)
            if i >= n:
                i = n - 1
            t = _cov_intended(
                i, pos, ball_ptr, ball_nodes, weights, dist, cover_count,
                eps, u[r, 1], u[r, 2],
            )
            if t != pos[i]:
                covered = _cov_apply_move(
                    i, t, pos, ball_ptr, ball_nodes, weights, cover_count, covered
                )
                out_movers[r] = 1
            else:
                out_movers[r] = 0
            out_phi[r] = covered
            for j in range(n):
                out_pos[r, j] = pos[j]
    return covered
