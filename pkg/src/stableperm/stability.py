"""Stability predicates, rank sums, and cycle orientation classification."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import AgentId, Permutation, PreferenceSystem


class Orientation(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    MIXED = "mixed"


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    witness: tuple[AgentId, AgentId] | None


@dataclass(frozen=True)
class RankPair:
    """Total successor rank r_s and predecessor rank r_p of a permutation.

    A fixed point contributes the no-partner rank n to both sums;
    includes_fixed_point flags that case.
    """

    r_s: int
    r_p: int
    includes_fixed_point: bool


@dataclass(frozen=True)
class CycleOrientation:
    cycle: tuple[AgentId, ...]
    orientation: Orientation
    witness: AgentId | None


def _check_same_n(prefs: PreferenceSystem, p: Permutation) -> None:
    if prefs.n != p.n:
        raise ValueError(f"permutation on {p.n} agents vs instance with {prefs.n}")


def _blocking_matrix(prefs: PreferenceSystem, p: Permutation) -> np.ndarray:
    """blocked[i, j] (0-based) iff the ordered pair (i+1, j+1) blocks p."""
    R = prefs._rank0
    s = p._succ0
    n = prefs.n
    ar = np.arange(n)
    rank_succ = R[ar, s]
    prefers_pj = R[:, s] < rank_succ[:, None]          # [i, j]: i prefers p(j) to p(i)
    rank_pred = R[s, ar]                               # rank(p(j), j)
    wanted_back = (R[s, :] < rank_pred[:, None]).T     # [i, j]: p(j) prefers i to j
    blocked = prefers_pj & wanted_back
    blocked[ar, ar] = False
    blocked[s, ar] = False                             # exclude i == p(j)
    return blocked


def is_stable(prefs: PreferenceSystem, p: Permutation) -> StabilityReport:
    """Check stability; the witness is the lexicographically first blocking
    ordered pair (i, j) with i not in {j, p(j)}, if any."""
    _check_same_n(prefs, p)
    blocked = _blocking_matrix(prefs, p)
    flat = blocked.ravel()
    first = int(flat.argmax())
    if not flat[first]:
        return StabilityReport(True, None)
    i, j = divmod(first, p.n)
    return StabilityReport(False, (i + 1, j + 1))


def is_tan_stable(prefs: PreferenceSystem, p: Permutation) -> bool:
    """Two-sided stability in the sense of mutual-pair blocking.

    Condition (a): no pair i != j where each prefers the other to their own
    predecessor.  Condition (b): every agent weakly prefers its successor to
    its predecessor.  The no-partner rank convention rank(i, i) = n applies
    uniformly, so a fixed point enters (a) with threshold n and satisfies (b)
    vacuously.
    """
    _check_same_n(prefs, p)
    R = prefs._rank0
    n = p.n
    ar = np.arange(n)
    s = p._succ0
    inv = np.empty_like(s)
    inv[s] = ar
    rank_pred = R[ar, inv]
    if (R[ar, s] > rank_pred).any():
        return False
    better_than_pred = R < rank_pred[:, None]
    return not (better_than_pred & better_than_pred.T).any()


def ranks(prefs: PreferenceSystem, p: Permutation) -> RankPair:
    _check_same_n(prefs, p)
    R = prefs._rank0
    s = p._succ0
    n = p.n
    ar = np.arange(n)
    inv = np.empty_like(s)
    inv[s] = ar
    return RankPair(
        r_s=int(R[ar, s].sum()),
        r_p=int(R[ar, inv].sum()),
        includes_fixed_point=bool((s == ar).any()),
    )


def classify_pi0_like(prefs: PreferenceSystem, p: Permutation) -> bool:
    """True iff p is stable, fixed-point-free, and every agent on a cycle of
    length >= 3 strictly prefers its successor to its predecessor."""
    _check_same_n(prefs, p)
    if not p.is_fixed_point_free():
        return False
    if not is_stable(prefs, p).stable:
        return False
    for cyc in p.cycles():
        if len(cyc) < 3:
            continue
        for idx, a in enumerate(cyc):
            succ = cyc[(idx + 1) % len(cyc)]
            pred = cyc[(idx - 1) % len(cyc)]
            if prefs.rank(a, succ) >= prefs.rank(a, pred):
                return False
    return True


def cycle_orientation(prefs: PreferenceSystem, p: Permutation) -> tuple[CycleOrientation, ...]:
    """Per-cycle orientation verdict for every cycle of length >= 3.

    An agent is forward-oriented when it strictly prefers its successor to
    its predecessor.  A cycle is FORWARD/BACKWARD when all members agree,
    MIXED otherwise; the witness is the first member (in cycle order from
    the leader) whose orientation differs from the leader's.
    """
    _check_same_n(prefs, p)
    out = []
    for cyc in p.cycles():
        k = len(cyc)
        if k < 3:
            continue
        fwd = [
            prefs.rank(a, cyc[(idx + 1) % k]) < prefs.rank(a, cyc[(idx - 1) % k])
            for idx, a in enumerate(cyc)
        ]
        if all(fwd):
            out.append(CycleOrientation(cyc, Orientation.FORWARD, None))
        elif not any(fwd):
            out.append(CycleOrientation(cyc, Orientation.BACKWARD, None))
        else:
            witness = next(a for idx, a in enumerate(cyc) if fwd[idx] != fwd[0])
            out.append(CycleOrientation(cyc, Orientation.MIXED, witness))
    return tuple(out)
