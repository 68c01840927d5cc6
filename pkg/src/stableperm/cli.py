"""Command-line interface.

Subcommands: solve (run the proposal algorithm on an instance file),
enumerate (brute-force all stable permutations), simulate (randomized
experiment grid with CSV/JSONL output), exact (profile-enumeration
rationals), integrate (Monte Carlo stability probability / rank
distribution for a permutation shape).

Exit codes: 0 success, 1 validation error, 2 cap exceeded, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analytics import mc_rank_distribution, mc_stable_probability
from .core import (
    CapExceededError,
    InstanceError,
    Permutation,
    Rng,
    parse_instance,
)
from .harness import (
    ExperimentConfig,
    run_experiment,
    summarize,
    summary_path,
    write_output,
)
from .oracle import enumerate_profiles, enumerate_stable, exact_rank_distribution
from .proposal import OrderPolicy, run_proposals
from .stability import is_tan_stable


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _make_policy(order: str, order_seed: int | None) -> OrderPolicy:
    if order == "lifo":
        return OrderPolicy.LIFO()
    if order == "fifo":
        return OrderPolicy.FIFO()
    if order_seed is None:
        raise ValueError("--order random requires --order-seed")
    return OrderPolicy.RANDOM(order_seed)


def _read_instance(path: str):
    return parse_instance(Path(path).read_text())


def _cmd_solve(args) -> int:
    prefs = _read_instance(args.instance)
    policy = _make_policy(args.order, args.order_seed)
    outcome = run_proposals(prefs, policy, record_trace=args.trace)
    if args.trace:
        for ev in outcome.trace:
            line = (f"{ev.proposer} -> {ev.proposee} "
                    f"{'accepted' if ev.accepted else 'rejected'}")
            if ev.displaced is not None:
                line += f" (displaced {ev.displaced})"
            print(line)
    print(f"pi0 = {outcome.pi0.cycle_notation()}")
    print(f"proposals = {outcome.proposals}")
    print(f"pariah = {outcome.pariah if outcome.pariah is not None else 'none'}")
    return 0


def _cmd_enumerate(args) -> int:
    prefs = _read_instance(args.instance)
    if prefs.n > args.max_n:
        raise CapExceededError(
            f"instance has n={prefs.n}, enumeration capped at {args.max_n}"
        )
    sset = enumerate_stable(prefs)
    pi0 = run_proposals(prefs).pi0
    pi0_like = set(sset.pi0_like)
    print(f"stable permutations: {len(sset.all_stable)}")
    for p in sset.all_stable:
        flags = []
        if p == pi0:
            flags.append("pi0")
        if p in pi0_like:
            flags.append("pi0-like")
        if args.tan:
            flags.append("tan" if is_tan_stable(prefs, p) else "not-tan")
        suffix = ("  " + " ".join(flags)) if flags else ""
        print(f"{p.cycle_notation()}{suffix}")
    pairs = sorted(sset.fixed_pairs)
    print("fixed pairs: "
          + (" ".join(f"({a},{b})" for a, b in pairs) if pairs else "none"))
    return 0


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}")


def _cmd_simulate(args) -> int:
    outputs = frozenset(tok.strip() for tok in args.outputs.split(",") if tok.strip())
    config = ExperimentConfig(
        n_values=_parse_int_list(args.n),
        trials_per_n=args.trials,
        master_seed=args.seed,
        policy=_make_policy(args.order, args.order_seed),
        outputs=outputs,
        out=Path(args.out),
        format=args.format,
        threads=args.threads,
    )
    records = run_experiment(config)
    summary = summarize(records)
    write_output(records, summary, config.out, config.format)
    print(f"wrote {len(records)} records to {config.out}")
    print(f"summary: {summary_path(config.out)}")
    return 0


def _cmd_exact(args) -> int:
    if args.stat == "fixed_point_prob":
        prob = enumerate_profiles(
            args.n, lambda prefs: run_proposals(prefs).pariah is not None
        )
        print(prob)
        return 0
    if args.pi is None:
        raise ValueError(f"--stat {args.stat} requires --pi")
    pi = Permutation.from_cycles(args.pi, args.n)
    if args.stat == "stable_prob":
        print(enumerate_profiles(args.n, pi))
        return 0
    dist = exact_rank_distribution(args.n, pi)
    for (k, l), frac in dist.items():
        print(f"r_s={k} r_p={l} {frac.numerator}/{frac.denominator}")
    return 0


def _cmd_integrate(args) -> int:
    pi = Permutation.from_cycles(args.pi, args.n)
    est = mc_stable_probability(
        pi, args.samples, Rng(args.seed), orientation=args.orientation
    )
    print(f"p_stable = {est.mean:.6g} +/- {est.std_error:.3g} "
          f"(samples={est.samples})")
    if args.joint_ranks:
        dist = mc_rank_distribution(pi, args.samples, Rng(args.seed))
        top = dist.means.shape[0]
        print("joint rank distribution on stability "
              "(row a = r_s - n, column b = r_p - n):")
        for a in range(top):
            print(" ".join(f"{dist.means[a, b]:.6g}" for b in range(top)))
        print("std errors:")
        for a in range(top):
            print(" ".join(f"{dist.std_errors[a, b]:.3g}" for b in range(top)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stableperm",
                     description="Stable permutations of one-sided preference "
                                 "systems: solver, oracles, and experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the proposal algorithm on an instance")
    p.add_argument("--instance", required=True, help="instance file path")
    p.add_argument("--order", choices=("lifo", "fifo", "random"), default="lifo")
    p.add_argument("--order-seed", type=int, default=None)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("enumerate", help="brute-force all stable permutations")
    p.add_argument("--instance", required=True)
    p.add_argument("--tan", action="store_true",
                   help="also report Tan stability per permutation")
    p.add_argument("--max-n", type=int, default=9)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("simulate", help="randomized experiment grid")
    p.add_argument("--n", required=True, help="comma-separated sizes")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--outputs", default="proposals,fixed_point,unmatched")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--order", choices=("lifo", "fifo", "random"), default="lifo")
    p.add_argument("--order-seed", type=int, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("exact", help="profile-enumeration exact rationals")
    p.add_argument("--n", type=int, choices=(2, 3, 4), required=True)
    p.add_argument("--pi", default=None,
                   help="cycle notation, e.g. \"(1 2)(3 4)\"")
    p.add_argument("--stat", required=True,
                   choices=("stable_prob", "fixed_point_prob", "rank_dist"))
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("integrate", help="Monte Carlo stability probability")
    p.add_argument("--pi", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--joint-ranks", action="store_true")
    p.add_argument("--orientation", choices=("both", "forward"), default="both")
    p.set_defaults(func=_cmd_integrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InstanceError, _UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
