"""Monte Carlo evaluation of stability probabilities and joint rank
distributions for a fixed permutation shape under uniform random preferences.

Model: each agent i scores every other agent j with an i.i.d. uniform value
X[i, j] and prefers smaller values.  Conditioning on x_i = X[i, p(i)] (every
agent's value of its successor) and, for agents on cycles of length >= 3,
y_j = X[p(j), j] (each such agent's value of its predecessor), the stability
probability factors exactly:

* Pairs (i, j) with i = p(p(j)) are fully determined by (x, y); their
  conjunction says precisely that every cycle of length >= 3 is uniformly
  oriented (each member prefers its successor, or each its predecessor).
  They form the admissibility indicator.
* Every remaining pair shares its two free values with exactly one partner
  pair (p(j), p^-1(i)).  Each such orbit contributes one joint factor
  1 - x_i z_j - x_i' z_j' + min(x_i, z_j') min(z_j, x_i'), with z_j = y_j on
  long cycles and z_j = x_{p(j)} on 2-cycles.  For orbits entirely on
  2-cycles the factor reduces to the familiar 1 - x_i z_j.

The joint (r_s, r_p) generating polynomial applies the same decomposition:
an oriented cycle contributes a deterministic monomial (xi^|C| when backward,
eta^|C| when forward) and each orbit a small exact polynomial over its nine
admissible mark/color configurations.  Monte Carlo means of these integrands
converge to the exact profile-enumeration probabilities, which is how the
oracle module validates this one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import AgentId, CapExceededError, Permutation, Rng

MAX_POLYNOMIAL_PAIRS = 64
_CHUNK = 1 << 15


@dataclass(frozen=True)
class PairSets:
    """The dedup'd 2-cycle pair set E1* and the long-cycle pair set E2."""

    e1_star: tuple[tuple[AgentId, AgentId], ...]
    e2: tuple[tuple[AgentId, AgentId], ...]

    @property
    def e1_size(self) -> int:
        return 2 * len(self.e1_star)

    @property
    def product_size(self) -> int:
        return len(self.e1_star) + len(self.e2)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int


@dataclass(frozen=True)
class RankPolynomial:
    """Coefficients of xi^a eta^b; (a, b) offset the rank sums from n."""

    coeffs: np.ndarray

    def coefficient(self, a: int, b: int) -> float:
        return float(self.coeffs[a, b])

    def total(self) -> float:
        return float(self.coeffs.sum())


@dataclass(frozen=True)
class RankDistributionEstimate:
    n: int
    means: np.ndarray
    std_errors: np.ndarray
    samples: int

    def cell(self, k: int, l: int) -> McEstimate:
        a, b = k - self.n, l - self.n
        top = self.means.shape[0] - 1
        if not (0 <= a <= top and 0 <= b <= top):
            raise ValueError(f"rank pair ({k}, {l}) outside supported range")
        return McEstimate(
            float(self.means[a, b]), float(self.std_errors[a, b]), self.samples
        )


def pair_sets(p: Permutation) -> PairSets:
    """Ordered blocking-relevant pairs of a fixed-point-free permutation,
    split into E1* (both agents on 2-cycles, dedup'd by i < p(j)) and E2
    (at least one agent on a cycle of length >= 3); lexicographic order."""
    if not p.is_fixed_point_free():
        raise ValueError("pair sets are defined for fixed-point-free permutations")
    n = p.n
    succ = p.to_tuple()
    c2 = p.two_cycle_agents()
    e1_star = []
    e2 = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or i == succ[j - 1]:
                continue
            if i in c2 and j in c2:
                if i < succ[j - 1]:
                    e1_star.append((i, j))
            else:
                e2.append((i, j))
    return PairSets(tuple(e1_star), tuple(e2))


class _Structure:
    """Precomputed integrand structure for one fixed-point-free permutation."""

    def __init__(self, p: Permutation):
        if not p.is_fixed_point_free():
            raise ValueError("analytics integrands require a fixed-point-free "
                             "permutation")
        n = p.n
        succ0 = p._succ0
        pred0 = np.empty_like(succ0)
        pred0[succ0] = np.arange(n, dtype=np.int32)
        cycles = p.cycles()
        long_cycles = [np.asarray(c, dtype=np.int32) - 1 for c in cycles if len(c) >= 3]
        c3_sorted = sorted(int(a) for c in long_cycles for a in c)
        ypos = {a: k for k, a in enumerate(c3_sorted)}

        # Admissibility data: per long cycle, y columns and successor x columns.
        self.cycle_y = [np.array([ypos[int(a)] for a in c]) for c in long_cycles]
        self.cycle_x = [succ0[c] for c in long_cycles]
        self.cycle_len = [len(c) for c in long_cycles]

        # Partner orbits over the non-deterministic pairs.
        xi_idx, xi2_idx = [], []
        zj_sel, zj2_sel = [], []

        def z_sel(j: int) -> tuple[bool, int]:
            if j in ypos:
                return True, ypos[j]
            return False, int(succ0[j])

        seen = set()
        for i in range(n):
            for j in range(n):
                if i == j or i == succ0[j] or i == succ0[succ0[j]]:
                    continue
                if (i, j) in seen:
                    continue
                i2, j2 = int(succ0[j]), int(pred0[i])
                seen.add((i, j))
                seen.add((i2, j2))
                xi_idx.append(i)
                xi2_idx.append(i2)
                zj_sel.append(z_sel(j))
                zj2_sel.append(z_sel(j2))

        self.n = n
        self.n_y = len(c3_sorted)
        self.xi_idx = np.asarray(xi_idx, dtype=np.intp)
        self.xi2_idx = np.asarray(xi2_idx, dtype=np.intp)
        self.zj_from_y = np.asarray([s[0] for s in zj_sel], dtype=bool)
        self.zj_idx = np.asarray([s[1] for s in zj_sel], dtype=np.intp)
        self.zj2_from_y = np.asarray([s[0] for s in zj2_sel], dtype=bool)
        self.zj2_idx = np.asarray([s[1] for s in zj2_sel], dtype=np.intp)
        # Per-axis degree an orbit can add: when both comparison thresholds
        # come from x (both agents on 2-cycles) the single-mark and
        # double-shift coefficients vanish identically and only the
        # both-axes mark survives, so the orbit adds at most 1 per axis;
        # otherwise 2.  The increments plus the oriented-cycle base sum to
        # exactly the pair-set size.
        self.orbit_inc = np.where(self.zj_from_y | self.zj2_from_y, 2, 1)
        ps = pair_sets(p)
        self.degree_cap = ps.product_size
        assert sum(self.cycle_len) + int(self.orbit_inc.sum()) == self.degree_cap

    def _gather_z(self, X, Y, from_y, idx):
        out = np.empty((X.shape[0], idx.shape[0]))
        ycols = np.flatnonzero(from_y)
        xcols = np.flatnonzero(~from_y)
        if ycols.size:
            out[:, ycols] = Y[:, idx[ycols]]
        if xcols.size:
            out[:, xcols] = X[:, idx[xcols]]
        return out

    def orientation(self, X, Y):
        """(admissible, forward_flags): forward_flags is per long cycle an
        (m,) bool array; admissible requires every long cycle uniformly
        oriented with no ties."""
        m = X.shape[0]
        adm = np.ones(m, dtype=bool)
        fwd_flags = []
        for ycols, xcols in zip(self.cycle_y, self.cycle_x):
            d = Y[:, ycols] - X[:, xcols]
            fwd = (d > 0).all(axis=1)
            bwd = (d < 0).all(axis=1)
            adm &= fwd | bwd
            fwd_flags.append(fwd)
        return adm, fwd_flags

    def orbit_factors(self, X, Y):
        """Per-sample per-orbit joint stability factors, shape (m, K)."""
        xi = X[:, self.xi_idx]
        xi2 = X[:, self.xi2_idx]
        zj = self._gather_z(X, Y, self.zj_from_y, self.zj_idx)
        zj2 = self._gather_z(X, Y, self.zj2_from_y, self.zj2_idx)
        return (
            1.0
            - xi * zj
            - xi2 * zj2
            + np.minimum(xi, zj2) * np.minimum(zj, xi2)
        )

    def stable_values(self, X, Y, orientation: str):
        adm, fwd_flags = self.orientation(X, Y)
        if orientation == "forward":
            for fwd in fwd_flags:
                adm = adm & fwd
        vals = np.where(adm, 1.0, 0.0)
        if self.xi_idx.size:
            vals = vals * self.orbit_factors(X, Y).prod(axis=1)
        return vals

    def rank_polynomials(self, X, Y):
        """Per-sample coefficient arrays, shape (m, P+1, P+1)."""
        m = X.shape[0]
        P = self.degree_cap
        out = np.zeros((m, P + 1, P + 1))
        adm, fwd_flags = self.orientation(X, Y)
        rows = np.flatnonzero(adm)
        if rows.size == 0:
            return out
        Xa, Ya = X[rows], Y[rows]
        ma = rows.size
        a0 = np.zeros(ma, dtype=np.intp)
        b0 = np.zeros(ma, dtype=np.intp)
        for fwd, clen in zip(fwd_flags, self.cycle_len):
            f = fwd[rows]
            a0 += np.where(f, 0, clen)
            b0 += np.where(f, clen, 0)
        base_deg = sum(self.cycle_len)
        cur = np.zeros((ma, base_deg + 1, base_deg + 1))
        cur[np.arange(ma), a0, b0] = 1.0

        xi = Xa[:, self.xi_idx]
        xi2 = Xa[:, self.xi2_idx]
        zj = self._gather_z(Xa, Ya, self.zj_from_y, self.zj_idx)
        zj2 = self._gather_z(Xa, Ya, self.zj2_from_y, self.zj2_idx)
        p11 = np.minimum(xi, zj2)
        p10 = xi - p11
        p01 = zj2 - p11
        p00 = 1.0 - xi - zj2 + p11
        q11 = np.minimum(xi2, zj)
        q10 = xi2 - q11
        q01 = zj - q11
        q00 = 1.0 - xi2 - zj + q11

        d = base_deg
        for t in range(self.xi_idx.size):
            g00 = (p00[:, t] * q00[:, t])[:, None, None]
            g11 = (p11[:, t] * q00[:, t] + p00[:, t] * q11[:, t])[:, None, None]
            w = d + 1
            d += int(self.orbit_inc[t])
            new = np.zeros((ma, d + 1, d + 1))
            new[:, :w, :w] = cur * g00
            new[:, 1:w + 1, 1:w + 1] += cur * g11
            if self.orbit_inc[t] == 2:
                g10 = (p10[:, t] * q00[:, t]
                       + p00[:, t] * q10[:, t])[:, None, None]
                g01 = (p01[:, t] * q00[:, t]
                       + p00[:, t] * q01[:, t])[:, None, None]
                g20 = (p10[:, t] * q10[:, t])[:, None, None]
                g02 = (p01[:, t] * q01[:, t])[:, None, None]
                new[:, 1:w + 1, :w] += cur * g10
                new[:, :w, 1:w + 1] += cur * g01
                new[:, 2:w + 2, :w] += cur * g20
                new[:, :w, 2:w + 2] += cur * g02
            cur = new
        out[rows, :d + 1, :d + 1] = cur
        return out


def _validate_xy(struct: _Structure, x: Sequence[float], y: Sequence[float]):
    X = np.asarray(x, dtype=float)
    Y = np.asarray(y, dtype=float)
    if X.shape != (struct.n,):
        raise ValueError(f"x must have length {struct.n}")
    if Y.shape != (struct.n_y,):
        raise ValueError(
            f"y must have length {struct.n_y} (agents on cycles of length >= 3, "
            "ascending id order)"
        )
    for arr, name in ((X, "x"), (Y, "y")):
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError(f"{name} values must lie in [0, 1]")
    return X[None, :], Y[None, :]


def conditional_stable_probability(
    p: Permutation,
    x: Sequence[float],
    y: Sequence[float],
    orientation: str = "both",
) -> float:
    """Stability probability of p conditioned on the successor values x and
    the long-cycle predecessor values y (ascending agent id order).

    Returns 0.0 when any cycle of length >= 3 mixes orientations or ties;
    orientation="forward" additionally zeroes backward-oriented draws,
    restricting to the canonical-like orientation.
    """
    if orientation not in ("both", "forward"):
        raise ValueError("orientation must be 'both' or 'forward'")
    struct = _Structure(p)
    X, Y = _validate_xy(struct, x, y)
    return float(struct.stable_values(X, Y, orientation)[0])


def mc_stable_probability(
    p: Permutation,
    samples: int,
    rng: Rng,
    orientation: str = "both",
) -> McEstimate:
    """Monte Carlo estimate of P(p stable) under uniform random preferences.

    Draws (x, y) uniformly in chunks (x block then y block per chunk) and
    averages the conditional probability; converges to the exact profile
    probability.  std_error is the sample standard deviation over sqrt(N).
    """
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    if orientation not in ("both", "forward"):
        raise ValueError("orientation must be 'both' or 'forward'")
    struct = _Structure(p)
    gen = rng.generator()
    sums: list[float] = []
    sumsqs: list[float] = []
    left = samples
    while left:
        m = min(_CHUNK, left)
        left -= m
        X = gen.random((m, struct.n))
        Y = gen.random((m, struct.n_y))
        vals = struct.stable_values(X, Y, orientation)
        sums.append(float(vals.sum()))
        sumsqs.append(float((vals * vals).sum()))
    total = math.fsum(sums)
    total_sq = math.fsum(sumsqs)
    mean = total / samples
    var = max(0.0, (total_sq - samples * mean * mean) / (samples - 1))
    return McEstimate(mean, math.sqrt(var / samples), samples)


def joint_rank_polynomial(
    p: Permutation, x: Sequence[float], y: Sequence[float]
) -> RankPolynomial:
    """Joint generating polynomial of the rank overshoots (r_s - n, r_p - n)
    restricted to stable outcomes, conditioned on (x, y).

    coeffs[a][b] is the probability that p is stable with r_s = n + a and
    r_p = n + b given (x, y); the coefficient sum equals
    conditional_stable_probability(p, x, y).
    """
    struct = _Structure(p)
    if struct.degree_cap > MAX_POLYNOMIAL_PAIRS:
        raise CapExceededError(
            f"polynomial size capped at {MAX_POLYNOMIAL_PAIRS} pairs, "
            f"got {struct.degree_cap}"
        )
    X, Y = _validate_xy(struct, x, y)
    coeffs = struct.rank_polynomials(X, Y)[0]
    coeffs.setflags(write=False)
    return RankPolynomial(coeffs)


def mc_rank_distribution(
    p: Permutation, samples: int, rng: Rng
) -> RankDistributionEstimate:
    """Monte Carlo estimate of the joint distribution of (r_s, r_p) on the
    event that p is stable: entry (a, b) estimates P(stable, r_s = n + a,
    r_p = n + b)."""
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    struct = _Structure(p)
    P = struct.degree_cap
    if P > MAX_POLYNOMIAL_PAIRS:
        raise CapExceededError(
            f"polynomial size capped at {MAX_POLYNOMIAL_PAIRS} pairs, got {P}"
        )
    chunk = min(_CHUNK, max(256, (1 << 23) // ((P + 1) * (P + 1))))
    gen = rng.generator()
    total = np.zeros((P + 1, P + 1))
    total_sq = np.zeros((P + 1, P + 1))
    left = samples
    while left:
        m = min(chunk, left)
        left -= m
        X = gen.random((m, struct.n))
        Y = gen.random((m, struct.n_y))
        C = struct.rank_polynomials(X, Y)
        total += C.sum(axis=0)
        total_sq += (C * C).sum(axis=0)
    means = total / samples
    var = np.maximum(
        0.0, (total_sq - samples * means * means) / (samples - 1)
    )
    se = np.sqrt(var / samples)
    means.setflags(write=False)
    se.setflags(write=False)
    return RankDistributionEstimate(p.n, means, se, samples)
