"""Sequential proposal algorithm computing the canonical stable permutation.

Unattached agents propose down their lists; a proposal is held until a
preferred one displaces it.  The terminal holding relation is the canonical
permutation pi0, independent of the order in which unattached agents are
scheduled.  An agent rejected by everyone (the pariah) stays unmatched and
appears as the unique fixed point of pi0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .core import AgentId, InstanceError, Permutation, PreferenceSystem

_POLICY_CODES = {
    "lifo": _kernels.POLICY_LIFO,
    "fifo": _kernels.POLICY_FIFO,
    "random": _kernels.POLICY_RANDOM,
}


@dataclass(frozen=True)
class OrderPolicy:
    """Scheduling discipline for the unattached pool.

    kind: "lifo" (default; a rejected agent retries immediately), "fifo",
    or "random" (uniform pick per step, driven by a splitmix64 stream from
    ``seed``).  ``initial_order`` overrides the default 1..n first-proposal
    order.
    """

    kind: str = "lifo"
    seed: int | None = None
    initial_order: tuple[AgentId, ...] | None = None

    def __post_init__(self):
        if self.kind not in _POLICY_CODES:
            raise ValueError(f"unknown order policy kind {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random order policy requires a seed")

    @classmethod
    def LIFO(cls, initial_order: tuple[AgentId, ...] | None = None) -> "OrderPolicy":
        return cls("lifo", initial_order=initial_order)

    @classmethod
    def FIFO(cls, initial_order: tuple[AgentId, ...] | None = None) -> "OrderPolicy":
        return cls("fifo", initial_order=initial_order)

    @classmethod
    def RANDOM(cls, seed: int,
               initial_order: tuple[AgentId, ...] | None = None) -> "OrderPolicy":
        return cls("random", seed=seed, initial_order=initial_order)


class ProposalEvent(NamedTuple):
    proposer: AgentId
    proposee: AgentId
    accepted: bool
    displaced: AgentId | None


@dataclass(frozen=True)
class ProposalOutcome:
    pi0: Permutation
    proposals: int
    pariah: AgentId | None
    trace: tuple[ProposalEvent, ...] | None

    def has_fixed_point(self) -> bool:
        return self.pariah is not None


def run_proposals(
    prefs: PreferenceSystem,
    policy: OrderPolicy | None = None,
    record_trace: bool = False,
) -> ProposalOutcome:
    """Run the proposal loop to termination and return its outcome.

    The resulting permutation is the same for every order policy; the trace
    and (in the pariah case only as a measured quantity) the proposal count
    depend on scheduling.  proposals equals len(trace) when tracing.
    """
    if policy is None:
        policy = OrderPolicy.LIFO()
    n = prefs.n
    if policy.initial_order is not None:
        order = np.asarray(policy.initial_order, dtype=np.int32) - 1
        if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
            raise InstanceError("initial_order must be a permutation of 1..n")
    else:
        order = np.arange(n, dtype=np.int32)
    succ0, proposals, pariah0, raw_trace = _kernels.run_proposals_kernel(
        prefs._lists0,
        prefs._rank0,
        order,
        _POLICY_CODES[policy.kind],
        0 if policy.seed is None else policy.seed,
        record_trace,
    )
    trace = None
    if raw_trace is not None:
        proposer, proposee, accepted, displaced = raw_trace
        trace = tuple(
            ProposalEvent(
                int(a) + 1,
                int(b) + 1,
                bool(acc),
                None if d < 0 else int(d) + 1,
            )
            for a, b, acc, d in zip(proposer, proposee, accepted, displaced)
        )
    return ProposalOutcome(
        pi0=Permutation._from_succ0(succ0),
        proposals=int(proposals),
        pariah=None if pariah0 < 0 else int(pariah0) + 1,
        trace=trace,
    )


def verify_terminal_sets(outcome: ProposalOutcome) -> bool:
    """Replay the trace and check the terminal holding structure.

    Returns True iff the set of agents holding a proposal equals the set of
    agents whose proposal is held, and its size is n or n-1.  Requires the
    outcome to carry a trace.
    """
    if outcome.trace is None:
        raise ValueError("verify_terminal_sets requires an outcome with a trace")
    holds: dict[AgentId, AgentId] = {}
    for ev in outcome.trace:
        if ev.accepted:
            holds[ev.proposee] = ev.proposer
    holders = set(holds)
    held = set(holds.values())
    n = outcome.pi0.n
    return holders == held and len(holders) in (n - 1, n)
