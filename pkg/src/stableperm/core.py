"""Core types: preference systems, permutations, and deterministic RNG streams.

Agents are identified by 1-based ids everywhere in the public API; the
internal numpy arrays are 0-based and never leak into files, CLI output, or
return values.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

AgentId = int

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class InstanceError(ValueError):
    """Invalid preference-system input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapExceededError(ValueError):
    """A brute-force or enumeration size cap was exceeded."""


def mix64(z: int) -> int:
    """splitmix64 finalizer: a fixed 64-bit bijection with full avalanche."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Rng:
    """A node in a deterministic seed tree.

    ``stream(*keys)`` derives an independent child seed by absorbing each key
    through the splitmix64 finalizer; equal (seed, keys) always yield the same
    child, so experiments are reproducible trial-by-trial regardless of
    execution order.  ``generator()`` returns a numpy PCG64 generator seeded
    with this node's seed.
    """

    __slots__ = ("seed",)

    def __init__(self, seed: int):
        self.seed = seed & _MASK64

    def stream(self, *keys: int) -> "Rng":
        h = self.seed
        for k in keys:
            h = mix64(((h + _GOLDEN) & _MASK64) ^ (k & _MASK64))
        return Rng(h)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))

    def __repr__(self) -> str:
        return f"Rng({self.seed:#x})"


class PreferenceSystem:
    """Complete strict preference lists for n agents over the other n-1.

    The rank table uses the convention rank(i, i) = n: staying unmatched is
    one notch below an agent's least preferred partner.
    """

    __slots__ = ("n", "_lists0", "_rank0")

    def __init__(self, lists: Mapping[int, Sequence[int]] | Sequence[Sequence[int]]):
        if isinstance(lists, Mapping):
            n = len(lists)
            if sorted(lists) != list(range(1, n + 1)):
                raise InstanceError(f"agent ids must be exactly 1..{n}")
            rows = [lists[i] for i in range(1, n + 1)]
        else:
            rows = [list(r) for r in lists]
            n = len(rows)
        if n < 2:
            raise InstanceError("a preference system needs at least 2 agents")
        arr = np.empty((n, n - 1), dtype=np.int32)
        for i, row in enumerate(rows, start=1):
            if len(row) != n - 1:
                raise InstanceError(
                    f"agent {i}: expected {n - 1} entries, got {len(row)}"
                )
            seen = set()
            for j in row:
                if not 1 <= j <= n:
                    raise InstanceError(f"agent {i}: id {j} out of range 1..{n}")
                if j == i:
                    raise InstanceError(f"agent {i}: own id in preference list")
                if j in seen:
                    raise InstanceError(f"agent {i}: duplicate id {j}")
                seen.add(j)
            arr[i - 1] = np.asarray(row, dtype=np.int32) - 1
        self._init_from_lists0(arr)

    @classmethod
    def _from_lists0(cls, lists0: np.ndarray) -> "PreferenceSystem":
        """Trusted constructor from a validated 0-based (n, n-1) array."""
        self = object.__new__(cls)
        self._init_from_lists0(np.ascontiguousarray(lists0, dtype=np.int32))
        return self

    def _init_from_lists0(self, lists0: np.ndarray) -> None:
        n = lists0.shape[0]
        rank0 = np.empty((n, n), dtype=np.int32)
        rows = np.arange(n)[:, None]
        rank0[rows, lists0] = np.arange(1, n, dtype=np.int32)[None, :]
        diag = np.arange(n)
        rank0[diag, diag] = n
        lists0.setflags(write=False)
        rank0.setflags(write=False)
        self.n = n
        self._lists0 = lists0
        self._rank0 = rank0

    def list_of(self, i: AgentId) -> tuple[AgentId, ...]:
        """Agent i's preference list, most preferred first (1-based ids)."""
        self._check_agent(i)
        return tuple(int(v) + 1 for v in self._lists0[i - 1])

    def rank(self, i: AgentId, j: AgentId) -> int:
        """Position of j in i's list (1 = most preferred); rank(i, i) = n."""
        self._check_agent(i)
        self._check_agent(j)
        return int(self._rank0[i - 1, j - 1])

    def _check_agent(self, i: AgentId) -> None:
        if not 1 <= i <= self.n:
            raise InstanceError(f"agent id {i} out of range 1..{self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreferenceSystem):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._lists0, other._lists0))

    def __hash__(self) -> int:
        return hash((self.n, self._lists0.tobytes()))

    def __repr__(self) -> str:
        return f"PreferenceSystem(n={self.n})"


class Permutation:
    """A permutation of agents 1..n stored as a successor array."""

    __slots__ = ("_succ0", "_cycles")

    def __init__(self, succ: Sequence[AgentId] | Iterable[AgentId]):
        arr = np.asarray(list(succ), dtype=np.int32) - 1
        n = arr.shape[0]
        if n < 1:
            raise InstanceError("empty permutation")
        counts = np.zeros(n, dtype=np.int32)
        if arr.min(initial=0) < 0 or arr.max(initial=-1) >= n:
            raise InstanceError(f"successor ids must lie in 1..{n}")
        np.add.at(counts, arr, 1)
        if (counts != 1).any():
            raise InstanceError("successor array is not a bijection")
        self._finish(arr)

    @classmethod
    def _from_succ0(cls, succ0: np.ndarray) -> "Permutation":
        """Trusted constructor from a 0-based successor array."""
        self = object.__new__(cls)
        self._finish(np.ascontiguousarray(succ0, dtype=np.int32))
        return self

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Permutation":
        """Parse cycle notation like "(1 2)(3 4 5)"; unlisted ids are fixed.

        Ids may be separated by whitespace or commas inside each cycle.
        """
        succ0 = np.arange(n, dtype=np.int32)
        seen: set[int] = set()
        rest = text.strip()
        if not rest:
            raise InstanceError("empty cycle specification")
        while rest:
            if not rest.startswith("("):
                raise InstanceError(f"expected '(' at: {rest!r}")
            end = rest.find(")")
            if end < 0:
                raise InstanceError("unbalanced '(' in cycle specification")
            body = rest[1:end].replace(",", " ")
            rest = rest[end + 1:].lstrip()
            try:
                members = [int(tok) for tok in body.split()]
            except ValueError:
                raise InstanceError(f"non-integer id in cycle ({body})") from None
            if not members:
                raise InstanceError("empty cycle '()'")
            for a in members:
                if not 1 <= a <= n:
                    raise InstanceError(f"id {a} out of range 1..{n}")
                if a in seen:
                    raise InstanceError(f"id {a} appears twice")
                seen.add(a)
            for a, b in zip(members, members[1:] + members[:1]):
                succ0[a - 1] = b - 1
        return cls._from_succ0(succ0)

    def _finish(self, succ0: np.ndarray) -> None:
        succ0.setflags(write=False)
        self._succ0 = succ0
        self._cycles = None

    @property
    def n(self) -> int:
        return self._succ0.shape[0]

    def succ(self, i: AgentId) -> AgentId:
        return int(self._succ0[i - 1]) + 1

    def pred(self, i: AgentId) -> AgentId:
        hits = np.nonzero(self._succ0 == i - 1)[0]
        return int(hits[0]) + 1

    def to_tuple(self) -> tuple[AgentId, ...]:
        """Successor array as a 1-based tuple."""
        return tuple(int(v) + 1 for v in self._succ0)

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._succ0)
        inv[self._succ0] = np.arange(self.n, dtype=np.int32)
        return Permutation._from_succ0(inv)

    def cycles(self) -> tuple[tuple[AgentId, ...], ...]:
        """Cycles in canonical form: each led by its smallest member, in
        successor order; cycles listed by increasing leader."""
        if self._cycles is None:
            succ = self._succ0
            n = self.n
            seen = np.zeros(n, dtype=bool)
            out = []
            for s in range(n):
                if seen[s]:
                    continue
                cyc = []
                cur = s
                while not seen[cur]:
                    seen[cur] = True
                    cyc.append(cur + 1)
                    cur = int(succ[cur])
                out.append(tuple(cyc))
            self._cycles = tuple(out)
        return self._cycles

    def fixed_points(self) -> tuple[AgentId, ...]:
        return tuple(int(i) + 1 for i in np.nonzero(self._succ0 == np.arange(self.n))[0])

    def two_cycle_agents(self) -> frozenset[AgentId]:
        """Agents matched on 2-cycles (the set C2)."""
        return frozenset(a for c in self.cycles() if len(c) == 2 for a in c)

    def long_cycle_agents(self) -> frozenset[AgentId]:
        """Agents on cycles of length >= 3 (the set C3)."""
        return frozenset(a for c in self.cycles() if len(c) >= 3 for a in c)

    def is_fixed_point_free(self) -> bool:
        return not (self._succ0 == np.arange(self.n)).any()

    def cycle_notation(self) -> str:
        return "".join("(" + " ".join(str(a) for a in c) + ")" for c in self.cycles())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return bool(np.array_equal(self._succ0, other._succ0))

    def __hash__(self) -> int:
        return hash(self._succ0.tobytes())

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_notation()})"


def rank_of(prefs: PreferenceSystem, i: AgentId, j: AgentId) -> int:
    """Rank of j in i's preference list; rank_of(prefs, i, i) = n."""
    return prefs.rank(i, j)


def cycle_decomposition(p: Permutation) -> tuple[tuple[AgentId, ...], ...]:
    return p.cycles()


def invert(p: Permutation) -> Permutation:
    return p.inverse()


def parse_instance(text: str) -> PreferenceSystem:
    """Parse the instance file format.

    First significant line: n.  Next n significant lines: agent i's n-1
    preferred partners, most preferred first, 1-based, whitespace-separated.
    Anything after '#' on a line is a comment; blank lines are skipped.
    """
    significant: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            significant.append((lineno, body))
    if not significant:
        raise InstanceError("no header line with n", line=1)
    head_line, head = significant[0]
    try:
        n = int(head)
    except ValueError:
        raise InstanceError(f"header must be a single integer, got {head!r}",
                            line=head_line) from None
    if n < 2:
        raise InstanceError(f"n must be >= 2, got {n}", line=head_line)
    body_lines = significant[1:]
    if len(body_lines) < n:
        raise InstanceError(
            f"expected {n} preference lines, found {len(body_lines)}",
            line=significant[-1][0],
        )
    if len(body_lines) > n:
        raise InstanceError("unexpected extra line after preference lists",
                            line=body_lines[n][0])
    arr = np.empty((n, n - 1), dtype=np.int32)
    for i, (lineno, body) in enumerate(body_lines, start=1):
        try:
            row = [int(tok) for tok in body.split()]
        except ValueError:
            raise InstanceError(f"agent {i}: non-integer entry", line=lineno) from None
        if len(row) != n - 1:
            raise InstanceError(
                f"agent {i}: expected {n - 1} entries, got {len(row)}", line=lineno
            )
        seen = set()
        for j in row:
            if not 1 <= j <= n:
                raise InstanceError(f"agent {i}: id {j} out of range 1..{n}",
                                    line=lineno)
            if j == i:
                raise InstanceError(f"agent {i}: own id in preference list",
                                    line=lineno)
            if j in seen:
                raise InstanceError(f"agent {i}: duplicate id {j}", line=lineno)
            seen.add(j)
        arr[i - 1] = np.asarray(row, dtype=np.int32) - 1
    return PreferenceSystem._from_lists0(arr)


def format_instance(prefs: PreferenceSystem) -> str:
    """Serialize a preference system in the instance file format."""
    lines = [str(prefs.n)]
    lines += [" ".join(str(v) for v in prefs.list_of(i))
              for i in range(1, prefs.n + 1)]
    return "\n".join(lines) + "\n"


def generate_instance(n: int, rng: Rng) -> PreferenceSystem:
    """Draw a uniform random preference system on n agents.

    Each agent's list is an independent uniform permutation of the others
    (exact Fisher-Yates via numpy Generator.permuted), reproducible from the
    Rng seed.
    """
    if n < 2:
        raise InstanceError(f"n must be >= 2, got {n}")
    gen = rng.generator()
    cols = np.arange(n - 1, dtype=np.int32)[None, :]
    rows = np.arange(n, dtype=np.int32)[:, None]
    base = cols + (cols >= rows)
    lists0 = gen.permuted(base, axis=1)
    return PreferenceSystem._from_lists0(lists0)
