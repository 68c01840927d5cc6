"""Brute-force oracles: exhaustive stable-permutation enumeration and exact
probabilities over the uniform preference-profile distribution.

Everything here is deliberately independent of the proposal algorithm and of
the Monte Carlo analytics, so it can validate both.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from . import _kernels
from .core import AgentId, CapExceededError, Permutation, PreferenceSystem
from .proposal import run_proposals
from .stability import classify_pi0_like, is_stable, ranks

ENUMERATION_MAX_N = 9
PROFILE_MAX_N = 4

ProfileTarget = Union[Permutation, Callable[[PreferenceSystem], bool]]


@dataclass(frozen=True)
class StableSet:
    """All stable permutations of one instance, in lexicographic successor-
    array order, with the pi0-like subset and the universally fixed pairs."""

    all_stable: tuple[Permutation, ...]
    pi0_like: tuple[Permutation, ...]
    fixed_pairs: frozenset[tuple[AgentId, AgentId]]


@dataclass(frozen=True)
class ClauseResult:
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class StructureReport:
    pi0: Permutation
    stable_count: int
    successor_optimal: ClauseResult
    predecessor_pessimal: ClauseResult
    fixed_pairs_universal: ClauseResult
    fixed_point_shared: ClauseResult

    @property
    def all_passed(self) -> bool:
        return (
            self.successor_optimal.passed
            and self.predecessor_pessimal.passed
            and self.fixed_pairs_universal.passed
            and self.fixed_point_shared.passed
        )


@dataclass(frozen=True)
class ExactProbability:
    """Exact rational probability over all ((n-1)!)^n preference profiles.

    Stored unreduced: denominator is always ((n-1)!)^n.
    """

    numerator: int
    denominator: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@lru_cache(maxsize=None)
def _perm_pool(n: int) -> np.ndarray:
    pool = np.array(list(itertools.permutations(range(n))), dtype=np.int32)
    pool.setflags(write=False)
    return pool


def _check_cap(n: int) -> None:
    if n > ENUMERATION_MAX_N:
        raise CapExceededError(
            f"brute-force enumeration capped at n <= {ENUMERATION_MAX_N}, got {n}"
        )


def stable_permutations(prefs: PreferenceSystem) -> tuple[Permutation, ...]:
    """All stable permutations, lexicographic by successor array (n <= 9)."""
    _check_cap(prefs.n)
    pool = _perm_pool(prefs.n)
    mask = _kernels.stable_mask_kernel(prefs._rank0, pool)
    return tuple(
        Permutation._from_succ0(pool[t].copy()) for t in np.flatnonzero(mask)
    )


def enumerate_stable(prefs: PreferenceSystem) -> StableSet:
    """Brute-force the full stable set of an instance (n <= 9)."""
    all_stable = stable_permutations(prefs)
    pi0_like = tuple(p for p in all_stable if classify_pi0_like(prefs, p))
    fixed: set[tuple[AgentId, AgentId]] | None = None
    for p in all_stable:
        pairs = {
            (c[0], c[1]) for c in p.cycles() if len(c) == 2
        }
        fixed = pairs if fixed is None else fixed & pairs
    return StableSet(
        all_stable=all_stable,
        pi0_like=pi0_like,
        fixed_pairs=frozenset(fixed or ()),
    )


def verify_structure(prefs: PreferenceSystem) -> StructureReport:
    """Check the canonical permutation's structural guarantees against the
    brute-forced stable set (n <= 9).

    Clauses: (a) pi0 gives every agent its best stable successor; (b) pi0
    gives every agent its worst stable predecessor; (c) every 2-cycle of pi0
    appears in every stable permutation; (d) all stable permutations share
    the same fixed points, at most one, and pi0's fixed point is that one.
    """
    pi0 = run_proposals(prefs).pi0
    stable = stable_permutations(prefs)
    n = prefs.n

    a_witness = b_witness = None
    for p in stable:
        for i in range(1, n + 1):
            if prefs.rank(i, pi0.succ(i)) > prefs.rank(i, p.succ(i)):
                a_witness = f"agent {i}: {p.cycle_notation()} gives a better successor"
                break
        if a_witness:
            break
    pi0_inv = pi0.inverse()
    for p in stable:
        inv = p.inverse()
        for i in range(1, n + 1):
            if prefs.rank(i, pi0_inv.succ(i)) < prefs.rank(i, inv.succ(i)):
                b_witness = f"agent {i}: {p.cycle_notation()} gives a worse predecessor"
                break
        if b_witness:
            break

    c_witness = None
    pi0_pairs = {c for c in pi0.cycles() if len(c) == 2}
    for p in stable:
        pairs = {c for c in p.cycles() if len(c) == 2}
        missing = pi0_pairs - pairs
        if missing:
            c_witness = f"pair {sorted(missing)[0]} absent from {p.cycle_notation()}"
            break

    d_witness = None
    fp_sets = {p.fixed_points() for p in stable}
    if len(fp_sets) > 1:
        d_witness = f"fixed-point sets differ: {sorted(fp_sets)}"
    else:
        common = next(iter(fp_sets)) if fp_sets else ()
        if len(common) > 1:
            d_witness = f"multiple fixed points {common}"
        elif pi0.fixed_points() != common:
            d_witness = (
                f"pi0 fixed points {pi0.fixed_points()} != common {common}"
            )

    return StructureReport(
        pi0=pi0,
        stable_count=len(stable),
        successor_optimal=ClauseResult(a_witness is None, a_witness),
        predecessor_pessimal=ClauseResult(b_witness is None, b_witness),
        fixed_pairs_universal=ClauseResult(c_witness is None, c_witness),
        fixed_point_shared=ClauseResult(d_witness is None, d_witness),
    )


def _iter_profiles(n: int):
    others = [
        list(itertools.permutations([j for j in range(n) if j != i]))
        for i in range(n)
    ]
    for combo in itertools.product(*others):
        yield PreferenceSystem._from_lists0(np.array(combo, dtype=np.int32))


def _profile_count(n: int) -> int:
    return math.factorial(n - 1) ** n


def enumerate_profiles(n: int, target: ProfileTarget) -> ExactProbability:
    """Exact probability of an event under uniform preference profiles.

    ``target`` is either a Permutation (event: that permutation is stable)
    or a predicate over preference systems.  All ((n-1)!)^n profiles are
    enumerated; n is capped at 4.
    """
    if n > PROFILE_MAX_N:
        raise CapExceededError(
            f"profile enumeration capped at n <= {PROFILE_MAX_N}, got {n}"
        )
    if isinstance(target, Permutation):
        if target.n != n:
            raise ValueError(f"target permutation has n={target.n}, expected {n}")
        perm = target
        predicate = lambda prefs: is_stable(prefs, perm).stable  # noqa: E731
    else:
        predicate = target
    hits = sum(1 for prefs in _iter_profiles(n) if predicate(prefs))
    return ExactProbability(hits, _profile_count(n))


def exact_rank_distribution(
    n: int, target: Permutation
) -> dict[tuple[int, int], Fraction]:
    """Joint distribution of (r_s, r_p) restricted to profiles where the
    fixed-point-free target permutation is stable; exact rationals."""
    if n > PROFILE_MAX_N:
        raise CapExceededError(
            f"profile enumeration capped at n <= {PROFILE_MAX_N}, got {n}"
        )
    if target.n != n:
        raise ValueError(f"target permutation has n={target.n}, expected {n}")
    if not target.is_fixed_point_free():
        raise ValueError("rank distribution target must be fixed-point-free")
    counts: dict[tuple[int, int], int] = {}
    for prefs in _iter_profiles(n):
        if not is_stable(prefs, target).stable:
            continue
        rp = ranks(prefs, target)
        key = (rp.r_s, rp.r_p)
        counts[key] = counts.get(key, 0) + 1
    total = _profile_count(n)
    return {k: Fraction(v, total) for k, v in sorted(counts.items())}
