"""Experiment orchestration: deterministic (optionally parallel) trial
execution over random preference instances, per-trial statistics of the
canonical stable permutation, and CSV/JSONL persistence with a JSON summary.

Determinism contract: every trial's randomness derives from
Rng(master_seed).stream(n, trial_index), so results are bit-identical across
runs, across worker-thread counts, and regardless of which other (n, trial)
combinations run alongside.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .core import CapExceededError, PreferenceSystem, Rng, generate_instance
from .oracle import ENUMERATION_MAX_N, enumerate_stable
from .proposal import OrderPolicy, run_proposals
from .stability import ranks

OUTPUT_NAMES = frozenset(
    {"proposals", "fixed_point", "unmatched", "ranks", "stable_count",
     "cycle_spectrum"}
)
CSV_COLUMNS = (
    "n", "trial", "seed", "proposals", "fixed_point", "unmatched",
    "r_s", "r_p", "cycle_spectrum", "stable_count", "pi0_like_count",
)


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple[int, ...]
    trials_per_n: int
    master_seed: int
    policy: OrderPolicy = field(default_factory=OrderPolicy.LIFO)
    outputs: frozenset[str] = frozenset({"proposals", "fixed_point", "unmatched"})
    out: Path | None = None
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if any(n < 2 for n in self.n_values):
            raise ValueError("every n must be at least 2")
        if self.trials_per_n < 1:
            raise ValueError("trials_per_n must be positive")
        bad = self.outputs - OUTPUT_NAMES
        if bad:
            raise ValueError(f"unknown outputs: {sorted(bad)}")
        if self.format not in ("csv", "jsonl"):
            raise ValueError("format must be 'csv' or 'jsonl'")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if "stable_count" in self.outputs:
            over = [n for n in self.n_values if n > ENUMERATION_MAX_N]
            if over:
                raise CapExceededError(
                    f"stable_count requires n <= {ENUMERATION_MAX_N}, got {over}"
                )


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial_index: int
    seed: int
    proposals: int | None = None
    has_fixed_point: bool | None = None
    unmatched: int | None = None
    r_s: int | None = None
    r_p: int | None = None
    cycle_spectrum: tuple[int, ...] | None = None
    stable_count: int | None = None
    pi0_like_count: int | None = None


@dataclass(frozen=True)
class StatLine:
    mean: float
    variance: float
    min: float
    max: float
    ci95: float


@dataclass(frozen=True)
class SummaryStats:
    per_n: dict[int, dict[str, StatLine]]
    ratios: dict[int, float | None]

    def to_json_dict(self) -> dict:
        out: dict[str, dict] = {}
        for n, stats in self.per_n.items():
            block = {
                name: {
                    "mean": s.mean, "variance": s.variance,
                    "min": s.min, "max": s.max, "ci95": s.ci95,
                }
                for name, s in stats.items()
            }
            if self.ratios.get(n) is not None:
                block["proposals_ratio"] = self.ratios[n]
            out[str(n)] = block
        return out


def format_cycle_spectrum(spectrum: Sequence[int]) -> str:
    """Multiset of cycle lengths sorted descending (fixed points trail as
    1s), rendered like "[3 2 1]"."""
    return "[" + " ".join(str(v) for v in sorted(spectrum, reverse=True)) + "]"


def _parse_cycle_spectrum(text: str) -> tuple[int, ...]:
    inner = text.strip()
    if not (inner.startswith("[") and inner.endswith("]")):
        raise ValueError(f"malformed cycle spectrum: {text!r}")
    body = inner[1:-1].strip()
    return tuple(int(v) for v in body.split()) if body else ()


def _effective_policy(config: ExperimentConfig, n: int, trial: int) -> OrderPolicy:
    policy = config.policy
    if policy.kind == "random":
        sub = Rng(policy.seed).stream(n, trial)
        return replace(policy, seed=sub.seed)
    return policy


def run_trial(config: ExperimentConfig, n: int, trial: int) -> TrialRecord:
    sub = Rng(config.master_seed).stream(n, trial)
    prefs = generate_instance(n, sub)
    outcome = run_proposals(prefs, _effective_policy(config, n, trial))
    pi0 = outcome.pi0
    want = config.outputs

    proposals = outcome.proposals if "proposals" in want else None
    has_fp = (outcome.pariah is not None) if "fixed_point" in want else None
    unmatched = (n - len(pi0.two_cycle_agents())) if "unmatched" in want else None
    r_s = r_p = None
    if "ranks" in want:
        pair = ranks(prefs, pi0)
        r_s, r_p = pair.r_s, pair.r_p
    spectrum = None
    if "cycle_spectrum" in want:
        spectrum = tuple(sorted((len(c) for c in pi0.cycles()), reverse=True))
    stable_count = pi0_like_count = None
    if "stable_count" in want:
        sset = enumerate_stable(prefs)
        stable_count = len(sset.all_stable)
        pi0_like_count = len(sset.pi0_like)
    return TrialRecord(
        n=n, trial_index=trial, seed=sub.seed, proposals=proposals,
        has_fixed_point=has_fp, unmatched=unmatched, r_s=r_s, r_p=r_p,
        cycle_spectrum=spectrum, stable_count=stable_count,
        pi0_like_count=pi0_like_count,
    )


def run_experiment(config: ExperimentConfig) -> list[TrialRecord]:
    """Execute all (n, trial) combinations; records are returned in
    (n_values order, trial_index) order regardless of thread count."""
    tasks = [(n, t) for n in config.n_values for t in range(config.trials_per_n)]
    if config.threads == 1:
        return [run_trial(config, n, t) for n, t in tasks]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(lambda nt: run_trial(config, *nt), tasks))


class _Welford:
    __slots__ = ("count", "mean", "m2", "min", "max")

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.min = math.inf
        self.max = -math.inf

    def update(self, x: float):
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        self.min = min(self.min, x)
        self.max = max(self.max, x)

    def stat_line(self) -> StatLine:
        var = self.m2 / (self.count - 1) if self.count > 1 else 0.0
        ci = 1.96 * math.sqrt(var / self.count)
        return StatLine(self.mean, var, self.min, self.max, ci)


_NUMERIC_FIELDS = (
    ("proposals", lambda r: r.proposals),
    ("fixed_point", lambda r: None if r.has_fixed_point is None
     else float(r.has_fixed_point)),
    ("unmatched", lambda r: r.unmatched),
    ("r_s", lambda r: r.r_s),
    ("r_p", lambda r: r.r_p),
    ("stable_count", lambda r: r.stable_count),
    ("pi0_like_count", lambda r: r.pi0_like_count),
)


def summarize(records: Sequence[TrialRecord]) -> SummaryStats:
    """Per-n mean, sample variance, min, max, and 95% normal-approximation
    CI (half-width 1.96*sqrt(variance/trials)) for every numeric output
    present, plus the ratio mean(proposals) / (0.5 * n^1.5)."""
    if not records:
        raise ValueError("summarize requires at least one record")
    accs: dict[int, dict[str, _Welford]] = {}
    order: list[int] = []
    for rec in records:
        if rec.n not in accs:
            accs[rec.n] = {}
            order.append(rec.n)
        block = accs[rec.n]
        for name, get in _NUMERIC_FIELDS:
            val = get(rec)
            if val is None:
                continue
            block.setdefault(name, _Welford()).update(float(val))
    per_n: dict[int, dict[str, StatLine]] = {}
    ratios: dict[int, float | None] = {}
    for n in order:
        per_n[n] = {name: acc.stat_line() for name, acc in accs[n].items()}
        props = accs[n].get("proposals")
        ratios[n] = props.mean / (0.5 * n ** 1.5) if props else None
    return SummaryStats(per_n, ratios)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return format_cycle_spectrum(value)
    return str(value)


def summary_path(out: Path) -> Path:
    return out.with_suffix(".summary.json")


def write_output(
    records: Sequence[TrialRecord], summary: SummaryStats | None,
    out: Path, format: str = "csv",
) -> None:
    """Write records to `out` (CSV with the fixed column set, or JSONL with
    the same field names) and, when given, the summary to the sibling
    `<stem>.summary.json`.  Identical inputs produce byte-identical files."""
    out = Path(out)
    if format == "csv":
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow([
                    r.n, r.trial_index, r.seed, _csv_cell(r.proposals),
                    _csv_cell(r.has_fixed_point), _csv_cell(r.unmatched),
                    _csv_cell(r.r_s), _csv_cell(r.r_p),
                    _csv_cell(r.cycle_spectrum), _csv_cell(r.stable_count),
                    _csv_cell(r.pi0_like_count),
                ])
    elif format == "jsonl":
        with open(out, "w") as fh:
            for r in records:
                fh.write(json.dumps({
                    "n": r.n, "trial": r.trial_index, "seed": r.seed,
                    "proposals": r.proposals, "fixed_point": r.has_fixed_point,
                    "unmatched": r.unmatched, "r_s": r.r_s, "r_p": r.r_p,
                    "cycle_spectrum": (None if r.cycle_spectrum is None
                                       else list(r.cycle_spectrum)),
                    "stable_count": r.stable_count,
                    "pi0_like_count": r.pi0_like_count,
                }, sort_keys=True))
                fh.write("\n")
    else:
        raise ValueError("format must be 'csv' or 'jsonl'")
    if summary is not None:
        with open(summary_path(out), "w") as fh:
            json.dump(summary.to_json_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def _opt_int(cell: str) -> int | None:
    return int(cell) if cell != "" else None


def read_records(path: Path, format: str = "csv") -> list[TrialRecord]:
    """Parse a file previously written by write_output back into records."""
    path = Path(path)
    records: list[TrialRecord] = []
    if format == "csv":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != CSV_COLUMNS:
                raise ValueError(f"{path}: unexpected CSV header {header!r}")
            for row in reader:
                (n, trial, seed, proposals, fixed_point, unmatched, r_s, r_p,
                 spectrum, stable_count, pi0_like_count) = row
                records.append(TrialRecord(
                    n=int(n), trial_index=int(trial), seed=int(seed),
                    proposals=_opt_int(proposals),
                    has_fixed_point=(None if fixed_point == ""
                                     else fixed_point == "true"),
                    unmatched=_opt_int(unmatched),
                    r_s=_opt_int(r_s), r_p=_opt_int(r_p),
                    cycle_spectrum=(None if spectrum == ""
                                    else _parse_cycle_spectrum(spectrum)),
                    stable_count=_opt_int(stable_count),
                    pi0_like_count=_opt_int(pi0_like_count),
                ))
    elif format == "jsonl":
        with open(path) as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                records.append(TrialRecord(
                    n=obj["n"], trial_index=obj["trial"], seed=obj["seed"],
                    proposals=obj["proposals"],
                    has_fixed_point=obj["fixed_point"],
                    unmatched=obj["unmatched"],
                    r_s=obj["r_s"], r_p=obj["r_p"],
                    cycle_spectrum=(None if obj["cycle_spectrum"] is None
                                    else tuple(obj["cycle_spectrum"])),
                    stable_count=obj["stable_count"],
                    pi0_like_count=obj["pi0_like_count"],
                ))
    else:
        raise ValueError("format must be 'csv' or 'jsonl'")
    return records
