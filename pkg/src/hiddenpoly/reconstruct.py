"""Recover the hidden polynomial from character queries.

Three algorithms over the square-free monic degree-d candidates:

* brute_force_recover: query every point, return the correlation argmax.
* two_stage_recover: a short window [1, N] keeps the candidates whose
  absolute correlation reaches N - d, then a longer window [1, M]
  confirms with a signed threshold M - d; ties fall back to a full-range
  argmax.  Windows are N = min(ceil(d ln^2 p), p) and
  M = min(ceil(d sqrt(p) ln^2 p), p), natural logs.
* short_window_recover: single-stage signed argmax over [1, M].

Oracle answers over a window are queried once, cached, and reused by
every candidate, so query counts are exact.  Correctness is guaranteed
for exact oracles (gamma = 1); noisy sessions can be driven best-effort
through repeated queries (reps > 1 takes a plurality per point).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .ffield import PrimeModulus, chi_table
from .limits import check_ops
from .oracle import OracleSession
from .poly import MonicPoly, poly_from_index, squarefree_count

__all__ = [
    "AlgorithmParams",
    "RecoveryReport",
    "brute_force_recover",
    "stage1_survivors",
    "two_stage_recover",
    "short_window_recover",
    "query_lower_bound",
]


@dataclass(frozen=True)
class AlgorithmParams:
    """Window sizes and acceptance thresholds for the staged recovery."""

    epsilon: float
    N: int
    M: int
    stage1_threshold: int
    stage2_threshold: int

    @classmethod
    def for_problem(
        cls, modulus: PrimeModulus, d: int, epsilon: float = 0.5
    ) -> "AlgorithmParams":
        if d < 1:
            raise ValueError("degree must be at least 1")
        p = modulus.p
        ln = math.log(p)
        n = min(math.ceil(d * ln * ln), p)
        m = min(math.ceil(d * math.sqrt(p) * ln * ln), p)
        if n <= d:
            raise ValueError(f"stage-1 window {n} does not exceed the degree {d}; p too small")
        return cls(
            epsilon=epsilon,
            N=n,
            M=m,
            stage1_threshold=n - d,
            stage2_threshold=m - d,
        )

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "N": self.N,
            "M": self.M,
            "stage1_threshold": self.stage1_threshold,
            "stage2_threshold": self.stage2_threshold,
        }


@dataclass
class RecoveryReport:
    """Outcome and exact accounting for one recovery run."""

    algorithm: str
    recovered: Optional[MonicPoly]
    survivors_stage1: Optional[int]
    survivors_stage2: Optional[int]
    total_queries: int
    distinct_points_queried: int
    stage_seconds: dict[str, float]
    params: Optional[AlgorithmParams]
    fallback: bool = False
    ambiguous: bool = False

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "algo": self.algorithm,
            "recovered": None if self.recovered is None else str(self.recovered),
            "survivors_stage1": self.survivors_stage1,
            "survivors_stage2": self.survivors_stage2,
            "total_queries": self.total_queries,
            "distinct_points": self.distinct_points_queried,
            "fallback": self.fallback,
            "ambiguous": self.ambiguous,
            "params": None if self.params is None else self.params.to_dict(),
        }
        if include_timing:
            out["elapsed_ms"] = round(sum(self.stage_seconds.values()) * 1000.0, 3)
            out["stage_ms"] = {
                k: round(v * 1000.0, 3) for k, v in self.stage_seconds.items()
            }
        return out


class _WindowCache:
    """Caches oracle answers per residue so each point is queried once."""

    def __init__(self, session: OracleSession, reps: int = 1):
        if reps < 1 or (reps > 1 and reps % 2 == 0):
            raise ValueError("reps must be 1 or a positive odd integer")
        self.session = session
        self.reps = reps
        p = session.p
        self.values = np.zeros(p, dtype=np.int64)
        self.seen = np.zeros(p, dtype=bool)

    def window(self, x0: int, m: int) -> np.ndarray:
        p = self.session.p
        xs = (x0 + np.arange(m, dtype=np.int64)) % p
        for x in xs:
            xi = int(x)
            if not self.seen[xi]:
                if self.reps == 1:
                    self.values[xi] = self.session.query(xi)
                else:
                    self.values[xi] = self.session.majority_estimate(xi, self.reps)
                self.seen[xi] = True
        return self.values[xs]

    @property
    def distinct(self) -> int:
        return int(self.seen.sum())


def _candidate_window_sum(
    modulus: PrimeModulus, d: int, index: int, x0: int, m: int, weights: np.ndarray
) -> int:
    p = modulus.p
    xs = (x0 + np.arange(m, dtype=np.int64)) % p
    digits = []
    t = index
    for _ in range(d):
        digits.append(t % p)
        t //= p
    acc = np.ones(m, dtype=np.int64)
    for c in reversed(digits):
        acc = (acc * xs + c) % p
    chi = chi_table(modulus).astype(np.int64)
    return int(np.dot(weights, chi[acc]))


def query_lower_bound(modulus: PrimeModulus, d: int) -> int:
    """ceil(log3 of the square-free candidate count), computed exactly.

    Any strategy issuing fewer ternary-answer queries cannot distinguish
    all candidates.
    """
    n = squarefree_count(modulus, d)
    k = 0
    power = 1
    while power < n:
        power *= 3
        k += 1
    return k


def _finish_report(
    algorithm: str,
    session: OracleSession,
    queries_before: int,
    cache: _WindowCache,
    recovered: Optional[MonicPoly],
    stage_seconds: dict[str, float],
    params: Optional[AlgorithmParams],
    survivors_stage1: Optional[int] = None,
    survivors_stage2: Optional[int] = None,
    fallback: bool = False,
    ambiguous: bool = False,
) -> RecoveryReport:
    return RecoveryReport(
        algorithm=algorithm,
        recovered=recovered,
        survivors_stage1=survivors_stage1,
        survivors_stage2=survivors_stage2,
        total_queries=session.query_count - queries_before,
        distinct_points_queried=cache.distinct,
        stage_seconds=stage_seconds,
        params=params,
        fallback=fallback,
        ambiguous=ambiguous,
    )


def _try_params(modulus: PrimeModulus, d: int) -> Optional[AlgorithmParams]:
    try:
        return AlgorithmParams.for_problem(modulus, d)
    except ValueError:
        return None


def brute_force_recover(
    session: OracleSession,
    d: int,
    *,
    threads: int = 1,
    budget: int | None = None,
    reps: int = 1,
) -> RecoveryReport:
    """Query all p points and return the full-range correlation argmax."""
    modulus = session.modulus
    p = modulus.p
    check_ops(p**d * p, budget, "brute-force scan")
    queries_before = session.query_count
    cache = _WindowCache(session, reps)
    t0 = time.perf_counter()
    weights = cache.window(0, p)
    corr = _kernels.windowed_correlations(p, d, 0, p, weights, threads=threads)
    mask = _kernels.squarefree_mask(p, d, budget)
    corr_sf = np.where(mask, corr, np.iinfo(np.int64).min)
    best = int(np.max(corr_sf))
    winners = np.nonzero(corr_sf == best)[0]
    recovered = poly_from_index(d, modulus, int(winners[0]))
    elapsed = {"scan": time.perf_counter() - t0}
    return _finish_report(
        "brute",
        session,
        queries_before,
        cache,
        recovered,
        elapsed,
        _try_params(modulus, d),
        ambiguous=len(winners) > 1,
    )


def _stage1_indices(
    session: OracleSession,
    d: int,
    params: AlgorithmParams,
    cache: _WindowCache,
    threads: int,
) -> np.ndarray:
    p = session.p
    weights = cache.window(1, params.N)
    corr = _kernels.windowed_correlations(p, d, 1, params.N, weights, threads=threads)
    mask = _kernels.squarefree_mask(p, d)
    keep = mask & (np.abs(corr) >= params.stage1_threshold)
    return np.nonzero(keep)[0]


def stage1_survivors(
    session: OracleSession,
    d: int,
    params: Optional[AlgorithmParams] = None,
    *,
    threads: int = 1,
    reps: int = 1,
) -> list[MonicPoly]:
    """Square-free candidates passing the stage-1 absolute threshold, in order."""
    modulus = session.modulus
    params = params or AlgorithmParams.for_problem(modulus, d)
    cache = _WindowCache(session, reps)
    idx = _stage1_indices(session, d, params, cache, threads)
    return [poly_from_index(d, modulus, int(i)) for i in idx]


def two_stage_recover(
    session: OracleSession,
    d: int,
    params: Optional[AlgorithmParams] = None,
    *,
    threads: int = 1,
    reps: int = 1,
) -> RecoveryReport:
    """Stage-1 sieve on [1, N], signed stage-2 confirmation on [1, M].

    If several candidates clear stage 2 (or none do, which cannot happen
    for an exact oracle), falls back to the full-range correlation argmax
    over the surviving pool; ties break to the lexicographically smallest.
    """
    modulus = session.modulus
    p = modulus.p
    params = params or AlgorithmParams.for_problem(modulus, d)
    queries_before = session.query_count
    cache = _WindowCache(session, reps)

    t0 = time.perf_counter()
    surv1 = _stage1_indices(session, d, params, cache, threads)
    t1 = time.perf_counter()
    stage_seconds = {"stage1": t1 - t0}

    weights2 = cache.window(1, params.M)
    surv2 = [
        int(i)
        for i in surv1
        if _candidate_window_sum(modulus, d, int(i), 1, params.M, weights2)
        >= params.stage2_threshold
    ]
    stage_seconds["stage2"] = time.perf_counter() - t1

    fallback = len(surv2) != 1
    if not fallback:
        recovered = poly_from_index(d, modulus, surv2[0])
    else:
        # ambiguity: decide on the full range among the surviving pool
        t2 = time.perf_counter()
        pool = surv2 if surv2 else [int(i) for i in surv1]
        full = cache.window(0, p)
        best_idx = None
        best_val = None
        for i in pool:
            v = _candidate_window_sum(modulus, d, i, 0, p, full)
            if best_val is None or v > best_val:
                best_val = v
                best_idx = i
        recovered = None if best_idx is None else poly_from_index(d, modulus, best_idx)
        stage_seconds["fallback"] = time.perf_counter() - t2

    return _finish_report(
        "two-stage",
        session,
        queries_before,
        cache,
        recovered,
        stage_seconds,
        params,
        survivors_stage1=len(surv1),
        survivors_stage2=len(surv2),
        fallback=fallback,
    )


def short_window_recover(
    session: OracleSession,
    d: int,
    params: Optional[AlgorithmParams] = None,
    *,
    threads: int = 1,
    budget: int | None = None,
    reps: int = 1,
) -> RecoveryReport:
    """Single-stage signed argmax over the window [1, M]."""
    modulus = session.modulus
    p = modulus.p
    params = params or AlgorithmParams.for_problem(modulus, d)
    check_ops(p**d * params.M, budget, "short-window scan")
    queries_before = session.query_count
    cache = _WindowCache(session, reps)
    t0 = time.perf_counter()
    weights = cache.window(1, params.M)
    corr = _kernels.windowed_correlations(p, d, 1, params.M, weights, threads=threads)
    mask = _kernels.squarefree_mask(p, d, budget)
    corr_sf = np.where(mask, corr, np.iinfo(np.int64).min)
    best = int(np.max(corr_sf))
    winners = np.nonzero(corr_sf == best)[0]
    recovered = poly_from_index(d, modulus, int(winners[0]))
    elapsed = {"scan": time.perf_counter() - t0}
    return _finish_report(
        "short-window",
        session,
        queries_before,
        cache,
        recovered,
        elapsed,
        params,
        ambiguous=len(winners) > 1,
    )
