# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels, bit-identical to the reference lane.

The proposal loop keeps the pool in a single int32 buffer used as a stack
(LIFO), a ring (FIFO), or a swap-remove bag driven by the same splitmix64
stream as the reference implementation.  The stability scan checks ordered
pairs per permutation with early exit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

POLICY_LIFO = 0
POLICY_FIFO = 1
POLICY_RANDOM = 2

ctypedef unsigned long long u64

cdef u64 _GOLDEN = <u64>0x9E3779B97F4A7C15


cdef inline u64 _mix64(u64 z) noexcept nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


def run_proposals_kernel(lists0, rank0, order0, int policy, policy_seed,
                         bint record_trace):
    cdef const cnp.int32_t[:, ::1] lists = np.ascontiguousarray(
        lists0, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] rank = np.ascontiguousarray(
        rank0, dtype=np.int32)
    cdef const cnp.int32_t[::1] order = np.ascontiguousarray(
        order0, dtype=np.int32)
    cdef Py_ssize_t n = lists.shape[0]
    cdef cnp.int32_t[::1] cursor = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[::1] holds = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] pool = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t count = n, head = 0, k, idx
    cdef u64 state = <u64>(policy_seed & 0xFFFFFFFFFFFFFFFF)
    cdef long long proposals = 0
    cdef int pariah = -1
    cdef int u, v, w, tmp

    if policy == POLICY_LIFO:
        for k in range(n):
            pool[k] = order[n - 1 - k]
    else:
        for k in range(n):
            pool[k] = order[k]

    t_proposer = [] if record_trace else None
    t_proposee = [] if record_trace else None
    t_accepted = [] if record_trace else None
    t_displaced = [] if record_trace else None

    while count > 0:
        if policy == POLICY_FIFO:
            u = pool[head]
            head += 1
            if head == n:
                head = 0
            count -= 1
        elif policy == POLICY_RANDOM:
            state = state + _GOLDEN
            idx = <Py_ssize_t>(_mix64(state) % <u64>count)
            tmp = pool[idx]
            pool[idx] = pool[count - 1]
            pool[count - 1] = tmp
            count -= 1
            u = pool[count]
        else:
            count -= 1
            u = pool[count]

        v = lists[u, cursor[u]]
        proposals += 1
        w = holds[v]
        if w < 0 or rank[v, u] < rank[v, w]:
            holds[v] = u
            if w >= 0:
                cursor[w] += 1
                if cursor[w] < n - 1:
                    if policy == POLICY_FIFO:
                        pool[(head + count) % n] = w
                    else:
                        pool[count] = w
                    count += 1
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
                if policy == POLICY_FIFO:
                    pool[(head + count) % n] = u
                else:
                    pool[count] = u
                count += 1
            else:
                pariah = u
            if record_trace:
                t_proposer.append(u)
                t_proposee.append(v)
                t_accepted.append(0)
                t_displaced.append(-1)

    succ0 = np.arange(n, dtype=np.int32)
    cdef cnp.int32_t[::1] sv = succ0
    for k in range(n):
        w = holds[k]
        if w >= 0:
            sv[w] = <cnp.int32_t>k
    trace = None
    if record_trace:
        trace = (
            np.asarray(t_proposer, dtype=np.int32),
            np.asarray(t_proposee, dtype=np.int32),
            np.asarray(t_accepted, dtype=np.uint8),
            np.asarray(t_displaced, dtype=np.int32),
        )
    return succ0, proposals, pariah, trace


def stable_mask_kernel(rank0, perms0):
    cdef const cnp.int32_t[:, ::1] rank = np.ascontiguousarray(
        rank0, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] perms = np.ascontiguousarray(
        perms0, dtype=np.int32)
    cdef Py_ssize_t n = rank.shape[0]
    cdef Py_ssize_t m = perms.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef cnp.int32_t[::1] rs = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] rp = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t t, i, j
    cdef int pj
    cdef bint stable
    with nogil:
        for t in range(m):
            for i in range(n):
                pj = perms[t, i]
                rs[i] = rank[i, pj]
                rp[i] = rank[pj, i]
            stable = True
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    pj = perms[t, j]
                    if pj == i:
                        continue
                    if rank[i, pj] < rs[i] and rank[pj, i] < rp[j]:
                        stable = False
                        break
                if not stable:
                    break
            ov[t] = 1 if stable else 0
    return out
