"""Pure-Python/numpy reference kernels.

These define the exact semantics (event order, RNG consumption, outputs) that
the compiled lane must reproduce bit-for-bit.  The proposal loop is a plain
Python loop; the brute-force stability scan is numpy-vectorized over the
permutation pool.
"""
from __future__ import annotations

from collections import deque

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

POLICY_LIFO = 0
POLICY_FIFO = 1
POLICY_RANDOM = 2


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def run_proposals_kernel(
    lists0: np.ndarray,
    rank0: np.ndarray,
    order0: np.ndarray,
    policy: int,
    policy_seed: int,
    record_trace: bool,
):
    """Run the sequential proposal loop.

    Returns (succ0, proposals, pariah0, trace) where succ0 is the 0-based
    successor array (pariah maps to itself), pariah0 is -1 when absent, and
    trace is None or four parallel arrays (proposer0, proposee0, accepted,
    displaced0 with -1 for plain acceptances).

    State per agent: cursor[u] = index into u's list of the proposal in
    force (if attached) or the next one to make.  holds[v] = proposer whose
    offer v currently holds, -1 if none.  The unattached pool is consumed
    LIFO (order0[0] first, rejected agents retry immediately), FIFO, or by a
    splitmix64-driven uniform pick.
    """
    n = lists0.shape[0]
    lists = lists0.tolist()
    rank = rank0.tolist()
    cursor = [0] * n
    holds = [-1] * n
    pariah = -1

    if policy == POLICY_FIFO:
        pool = deque(order0.tolist())
        pop = pool.popleft
        push = pool.append
    elif policy == POLICY_RANDOM:
        pool = list(order0.tolist())
        push = pool.append
        state = policy_seed & _MASK64

        def pop():
            nonlocal state
            state = (state + _GOLDEN) & _MASK64
            idx = _mix64(state) % len(pool)
            pool[idx], pool[-1] = pool[-1], pool[idx]
            return pool.pop()
    else:
        pool = list(order0.tolist())[::-1]
        pop = pool.pop
        push = pool.append

    t_proposer: list[int] = []
    t_proposee: list[int] = []
    t_accepted: list[int] = []
    t_displaced: list[int] = []
    proposals = 0

    while pool:
        u = pop()
        v = lists[u][cursor[u]]
        proposals += 1
        w = holds[v]
        if w < 0 or rank[v][u] < rank[v][w]:
            holds[v] = u
            if w >= 0:
                cursor[w] += 1
                if cursor[w] < n - 1:
                    push(w)
                else:
                    pariah = w
            if record_trace:
                t_proposer.append(u)
                t_proposee.append(v)
                t_accepted.append(1)
                t_displaced.append(w)
        else:
            cursor[u] += 1
            if cursor[u] < n - 1:
                push(u)
            else:
                pariah = u
            if record_trace:
                t_proposer.append(u)
                t_proposee.append(v)
                t_accepted.append(0)
                t_displaced.append(-1)

    succ0 = np.arange(n, dtype=np.int32)
    for v in range(n):
        w = holds[v]
        if w >= 0:
            succ0[w] = v
    trace = None
    if record_trace:
        trace = (
            np.asarray(t_proposer, dtype=np.int32),
            np.asarray(t_proposee, dtype=np.int32),
            np.asarray(t_accepted, dtype=np.uint8),
            np.asarray(t_displaced, dtype=np.int32),
        )
    return succ0, proposals, pariah, trace


def stable_mask_kernel(rank0: np.ndarray, perms0: np.ndarray) -> np.ndarray:
    """Mark which successor arrays in perms0 (m, n) are stable under rank0.

    A permutation is unstable iff some ordered pair (i, j), i not in
    {j, p(j)}, has rank(i, p(j)) < rank(i, p(i)) and rank(p(j), i) <
    rank(p(j), j).
    """
    n = rank0.shape[0]
    m = perms0.shape[0]
    flat = np.ascontiguousarray(rank0, dtype=np.int32).ravel()
    perms = np.ascontiguousarray(perms0, dtype=np.int64)
    rows = np.arange(m)
    # rank of own successor / of own predecessor-held agent, per column
    rs = np.empty((m, n), dtype=np.int32)
    rp = np.empty((m, n), dtype=np.int32)
    for j in range(n):
        pj = perms[:, j]
        rs[:, j] = flat[j * n + pj]
        rp[:, j] = flat[pj * n + j]
    ok = np.ones(m, dtype=bool)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            pj = perms[:, j]
            blk = (flat[i * n + pj] < rs[:, i]) & (flat[pj * n + i] < rp[:, j])
            blk &= pj != i
            ok &= ~blk
            if not ok.any():
                return ok.astype(np.uint8)
    return ok.astype(np.uint8)
