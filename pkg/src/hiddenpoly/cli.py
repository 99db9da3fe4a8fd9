"""Command-line interface.

Subcommands:

* recover:        run one recovery experiment against a seeded oracle
* verify-bounds:  sweep the character-sum bounds, emit CSV
* quantum:        simulate the k-copy identification measurement
* bench:          grid of recovery runs with query/work accounting

Reports go to stdout (JSON or CSV; --out additionally writes a file),
logs and errors to stderr.  Exit codes: 0 success, 1 semantic failure
(recovery mismatch, bound violation, non-convergence), 2 usage errors.
Identical flags and seed give byte-identical reports; --no-timing drops
the wall-time fields so outputs are reproducible, and --threads never
changes any output, only how scans are partitioned.  Field names are
frozen in SCHEMA.md.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import statistics
import sys
from pathlib import Path

from . import charsum, quantum, reconstruct
from .ffield import PrimeModulus
from .limits import DEFAULT_OP_BUDGET, BudgetExceeded
from .oracle import OracleSession
from .poly import MonicPoly, is_squarefree, parse_poly, random_squarefree, squarefree_count
from .reconstruct import AlgorithmParams

ALGORITHMS = ("brute", "short", "two-stage")
LEMMAS = ("pair-identity", "weil", "weil-short", "mult-weil", "average")


def _err(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _json_dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _load_modulus(p: int) -> PrimeModulus:
    return PrimeModulus(p)  # ValueError on bad p; callers translate to exit 2


def _load_hidden(text: str, modulus: PrimeModulus, d: int, seed: int) -> MonicPoly:
    if text == "random":
        return random_squarefree(modulus, d, random.Random(seed))
    hidden = parse_poly(text, modulus, degree=d)
    if not is_squarefree(hidden):
        raise ValueError(f"hidden polynomial {text!r} is not square-free")
    return hidden


# ----------------------------------------------------------------------
# recover
# ----------------------------------------------------------------------


def cmd_recover(args: argparse.Namespace) -> int:
    try:
        modulus = _load_modulus(args.p)
        if args.d < 1:
            raise ValueError("d must be at least 1")
        hidden = _load_hidden(args.hidden, modulus, args.d, args.seed)
        if args.reps < 1 or (args.reps > 1 and args.reps % 2 == 0):
            raise ValueError("--reps must be 1 or a positive odd integer")
        session = OracleSession(hidden, gamma=args.gamma, rng_seed=args.seed)
    except ValueError as exc:
        _err(str(exc))
        return 2

    try:
        if args.algo == "brute":
            report = reconstruct.brute_force_recover(
                session, args.d, threads=args.threads, budget=args.budget, reps=args.reps
            )
        elif args.algo == "short":
            report = reconstruct.short_window_recover(
                session, args.d, threads=args.threads, budget=args.budget, reps=args.reps
            )
        else:
            report = reconstruct.two_stage_recover(
                session, args.d, threads=args.threads, reps=args.reps
            )
    except BudgetExceeded as exc:
        _err(str(exc))
        return 2
    except ValueError as exc:
        _err(str(exc))
        return 2

    match = report.recovered == hidden
    payload = {
        "p": args.p,
        "d": args.d,
        "seed": args.seed,
        "gamma": args.gamma,
        "reps": args.reps,
        "hidden": str(hidden),
        "match": match,
        "query_lower_bound": reconstruct.query_lower_bound(modulus, args.d),
    }
    payload.update(report.to_dict(include_timing=not args.no_timing))

    if args.json:
        _emit(_json_dumps(payload), args.out)
    else:
        lines = [f"{key}: {json.dumps(value)}" for key, value in payload.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if match else 1


# ----------------------------------------------------------------------
# verify-bounds
# ----------------------------------------------------------------------


def _bound_rows(args: argparse.Namespace) -> list[charsum.BoundCheckRow]:
    primes = tuple(args.p) if args.p else None
    lemmas = (args.lemma,) if args.lemma else LEMMAS
    rows: list[charsum.BoundCheckRow] = []
    for lemma in lemmas:
        if lemma == "pair-identity":
            rows += charsum.sweep_pair_identity(primes or charsum.DEFAULT_PAIR_PRIMES)
        elif lemma == "weil":
            rows += charsum.sweep_weil(
                primes or charsum.DEFAULT_WEIL_PRIMES,
                threads=args.threads,
                budget=args.budget,
            )
        elif lemma == "weil-short":
            rows += charsum.sweep_weil_short(
                primes or charsum.DEFAULT_SHORT_PRIMES, seed=args.seed
            )
        elif lemma == "mult-weil":
            rows += charsum.sweep_mult_weil(
                primes or charsum.DEFAULT_MULT_PRIMES, seed=args.seed, budget=args.budget
            )
        else:
            rows += charsum.sweep_moment(
                primes or charsum.DEFAULT_MOMENT_PRIMES, seed=args.seed, budget=args.budget
            )
    return rows


def _rows_to_csv(rows: list[charsum.BoundCheckRow]) -> str:
    lines = ["lemma,p,d,params,measured,bound,pass"]
    for r in rows:
        params = r.params.replace(",", ";")
        lines.append(
            f"{r.lemma},{r.p},{r.d},{params},{r.measured!r},{r.bound!r},"
            f"{'pass' if r.passed else 'fail'}"
        )
    return "\n".join(lines) + "\n"


def cmd_verify_bounds(args: argparse.Namespace) -> int:
    try:
        if args.p:
            for p in args.p:
                _load_modulus(p)
        rows = _bound_rows(args)
    except BudgetExceeded as exc:
        _err(f"budget too small: {exc}")
        return 2
    except ValueError as exc:
        _err(str(exc))
        return 2

    _emit(_rows_to_csv(rows), args.out)
    violations = [r for r in rows if not r.passed]
    if violations:
        _err(f"{len(violations)} bound violation(s)")
        for r in violations[:20]:
            _err(f"  {r.lemma} p={r.p} d={r.d} {r.params}: {r.measured} > {r.bound}")
        return 1
    return 0


# ----------------------------------------------------------------------
# quantum
# ----------------------------------------------------------------------


def cmd_quantum(args: argparse.Namespace) -> int:
    try:
        modulus = _load_modulus(args.p)
        if args.d < 1:
            raise ValueError("d must be at least 1")
        hidden = _load_hidden(args.hidden, modulus, args.d, args.seed)
        k = args.k if args.k is not None else quantum.choose_k(args.d, args.epsilon)
        if k < 1:
            raise ValueError("k must be at least 1")
    except ValueError as exc:
        _err(str(exc))
        return 2

    if args.d > args.p ** (0.5 - min(args.epsilon, 0.5)):
        print(
            f"note: d={args.d} exceeds p^(1/2-epsilon); the analysis regime "
            "does not apply at this size",
            file=sys.stderr,
        )

    try:
        sigma = quantum.sigma_2d(modulus, args.d)
        gram = quantum.gram_matrix(modulus, args.d, k)
        dist = quantum.measurement_distribution(hidden, args.d, k, gram=gram)
    except BudgetExceeded as exc:
        _err(str(exc))
        return 2
    except quantum.PowerIterationError as exc:
        _err(str(exc))
        return 1

    payload = {
        "p": args.p,
        "d": args.d,
        "epsilon": args.epsilon,
        "hidden": str(hidden),
        "k": k,
        "sigma_2d": sigma,
        "sigma_bound": quantum.sigma_bound(modulus, args.d),
        "lambda_max": dist.lambda_max,
        "alpha": dist.alpha,
        "one_minus_alpha_times_p": (1.0 - dist.alpha) * args.p,
        "p_correct": dist.outcomes[hidden],
        "residual_mass": dist.residual_mass,
    }
    if args.json:
        _emit(_json_dumps(payload), args.out)
    else:
        lines = [f"{key}: {json.dumps(value)}" for key, value in payload.items()]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


# ----------------------------------------------------------------------
# bench
# ----------------------------------------------------------------------


def _work_count(report, sf_count: int, p: int, d: int) -> int:
    # deterministic candidate*window products actually scanned
    params = report.params
    if report.algorithm == "brute":
        return sf_count * p
    if report.algorithm == "short-window":
        return sf_count * params.M
    work = sf_count * params.N
    if report.survivors_stage1:
        work += report.survivors_stage1 * params.M
    if report.fallback:
        work += max(report.survivors_stage2 or 0, report.survivors_stage1 or 0) * p
    return work


def cmd_bench(args: argparse.Namespace) -> int:
    algos = args.algos or list(ALGORITHMS)
    lines = (
        ["p,d,algo,seeds,status,success,median_queries,work,median_ms"]
        if not args.no_timing
        else ["p,d,algo,seeds,status,success,median_queries,work"]
    )
    worst_failure = 0
    for p in args.p:
        try:
            modulus = _load_modulus(p)
        except ValueError as exc:
            _err(str(exc))
            return 2
        sf_count = squarefree_count(modulus, args.d)
        for algo in algos:
            if algo not in ALGORITHMS:
                _err(f"unknown algorithm {algo!r}")
                return 2
            queries, works, times, successes = [], [], [], 0
            status = "ok"
            for seed in range(args.seeds):
                hidden = random_squarefree(modulus, args.d, random.Random(seed))
                session = OracleSession(hidden, rng_seed=seed)
                try:
                    if algo == "brute":
                        report = reconstruct.brute_force_recover(
                            session, args.d, threads=args.threads, budget=args.budget
                        )
                    elif algo == "short":
                        report = reconstruct.short_window_recover(
                            session, args.d, threads=args.threads, budget=args.budget
                        )
                    else:
                        report = reconstruct.two_stage_recover(
                            session, args.d, threads=args.threads
                        )
                except (BudgetExceeded, ValueError):
                    status = "skipped"
                    break
                queries.append(report.total_queries)
                works.append(_work_count(report, sf_count, p, args.d))
                times.append(sum(report.stage_seconds.values()) * 1000.0)
                successes += report.recovered == hidden
            if status == "skipped":
                row = [str(p), str(args.d), algo, str(args.seeds), status, "", "", ""]
                if not args.no_timing:
                    row.append("")
            else:
                if successes < args.seeds:
                    worst_failure = 1
                row = [
                    str(p),
                    str(args.d),
                    algo,
                    str(args.seeds),
                    status,
                    str(successes),
                    str(statistics.median(queries)),
                    str(statistics.median(works)),
                ]
                if not args.no_timing:
                    row.append(f"{statistics.median(times):.3f}")
            lines.append(",".join(row))
    _emit("\n".join(lines) + "\n", args.out)
    return worst_failure


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    sub.add_argument("--threads", type=int, default=1, help="scan workers (never changes output)")
    sub.add_argument("--budget", type=int, default=None,
                     help=f"elementary-operation budget (default {DEFAULT_OP_BUDGET})")
    sub.add_argument("--out", default=None, help="also write the report to this file")
    sub.add_argument("--no-timing", action="store_true",
                     help="omit wall-time fields for byte-identical output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiddenpoly",
        description="Recover a hidden square-free monic polynomial over F_p from "
        "quadratic-character queries; verify character-sum bounds; simulate the "
        "identification measurement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("recover", help="run one recovery experiment")
    rec.add_argument("--p", type=int, required=True, help="odd prime modulus")
    rec.add_argument("--d", type=int, required=True, help="degree of the hidden polynomial")
    rec.add_argument("--algo", choices=ALGORITHMS, default="two-stage")
    rec.add_argument("--hidden", default="random",
                     help="'random', a polynomial like 'x^2 + 3*x + 5', or coefficients '5,3'")
    rec.add_argument("--gamma", type=float, default=1.0, help="oracle reliability in (1/2, 1]")
    rec.add_argument("--reps", type=int, default=1,
                     help="odd repetition count per point (plurality vote) for noisy oracles")
    rec.add_argument("--json", action="store_true", help="emit the JSON report")
    _add_common(rec)
    rec.set_defaults(func=cmd_recover)

    ver = sub.add_parser("verify-bounds", help="sweep the character-sum bounds, emit CSV")
    ver.add_argument("--lemma", choices=LEMMAS, default=None, help="restrict to one bound")
    ver.add_argument("--p", type=int, nargs="*", default=None,
                     help="override the prime set of the sweep")
    _add_common(ver)
    ver.set_defaults(func=cmd_verify_bounds)

    qua = sub.add_parser("quantum", help="simulate the identification measurement")
    qua.add_argument("--p", type=int, required=True, help="odd prime modulus")
    qua.add_argument("--d", type=int, required=True, help="candidate degree")
    qua.add_argument("--epsilon", type=float, default=0.5, help="target failure parameter")
    qua.add_argument("--k", type=int, default=None, help="override the query-round count")
    qua.add_argument("--hidden", default="random", help="measured polynomial (or 'random')")
    qua.add_argument("--json", action="store_true", help="emit the JSON report")
    _add_common(qua)
    qua.set_defaults(func=cmd_quantum)

    ben = sub.add_parser("bench", help="benchmark the recovery algorithms")
    ben.add_argument("--p", type=int, nargs="*", default=[101, 1009, 10007])
    ben.add_argument("--d", type=int, default=1)
    ben.add_argument("--algos", nargs="*", default=None, help=f"subset of {ALGORITHMS}")
    ben.add_argument("--seeds", type=int, default=5)
    _add_common(ben)
    ben.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
