"""Index-based numpy scan kernels shared by charsum, reconstruct, quantum.

Candidates are addressed by index = sum_i s_i p^i (the package-wide
lexicographic order).  With the upper coefficients fixed, the s_0 axis
is contiguous in index space and chi((base + s_0) mod p) is a plain
slice of a doubled character table; the kernels exploit that instead of
re-evaluating polynomials per candidate.  All accumulation is integer
exact (float64 appears only where every intermediate is an integer well
below 2^53).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .ffield import PrimeModulus, _chi_ext_table_cached, _chi_table_cached
from .limits import BudgetExceeded, check_ops
from .poly import is_squarefree, poly_from_index


@lru_cache(maxsize=64)
def _chi2(p: int, patched: bool, dtype: str) -> np.ndarray:
    base = _chi_ext_table_cached(p) if patched else _chi_table_cached(p)
    arr = np.concatenate([base, base]).astype(dtype)
    arr.setflags(write=False)
    return arr


def _run_partitioned(fn, n: int, threads: int) -> None:
    # contiguous ranges, disjoint output slices: thread count never changes results
    t = max(1, int(threads))
    if t == 1 or n < 2:
        fn(0, n)
        return
    bounds = [n * i // t for i in range(t + 1)]
    with ThreadPoolExecutor(max_workers=t) as ex:
        futures = [
            ex.submit(fn, bounds[i], bounds[i + 1])
            for i in range(t)
            if bounds[i] < bounds[i + 1]
        ]
        for fut in futures:
            fut.result()


def _x_powers(p: int, top: int, xs: np.ndarray) -> np.ndarray:
    xp = np.empty((top + 1, len(xs)), dtype=np.int64)
    xp[0] = 1
    for i in range(1, top + 1):
        xp[i] = xp[i - 1] * xs % p
    return xp


def windowed_correlations(
    p: int,
    d: int,
    x0: int,
    m: int,
    weights,
    threads: int = 1,
) -> np.ndarray:
    """corr[i] = sum_j weights[j] * chi(g_i(x0 + j mod p)) for all monic degree-d g_i.

    The window is the contiguous residue run x0, x0+1, ..., x0+m-1 (mod p),
    1 <= m <= p.  Returns int64 of length p^d in index order.
    """
    if not (1 <= m <= p and 0 <= x0 < p):
        raise ValueError("window must be a contiguous run of at most p residues")
    w = np.asarray(weights)
    if w.shape != (m,):
        raise ValueError("weights must match the window length")

    if d == 1:
        # corr[s] = sum_j w[j] * chi2[x0 + s + j]: one sliding dot product
        chi2 = _chi2(p, False, "float64")
        seg = chi2[x0 : x0 + p - 1 + m]
        corr = np.correlate(seg, w.astype(np.float64), mode="valid")
        return np.rint(corr).astype(np.int64)

    chi2 = _chi2(p, False, "int64")
    n_high = p ** (d - 1)
    xs = (x0 + np.arange(m, dtype=np.int64)) % p
    xp = _x_powers(p, d, xs)
    wi = w.astype(np.int64)
    pos = np.nonzero(wi == 1)[0]
    neg = np.nonzero(wi == -1)[0]
    rest = np.nonzero((wi != 0) & (wi != 1) & (wi != -1))[0]
    corr = np.empty(p**d, dtype=np.int64)

    def run(lo: int, hi: int) -> None:
        row = np.empty(p, dtype=np.int64)
        for h in range(lo, hi):
            base = xp[d].copy()
            hh = h
            for i in range(1, d):
                si = hh % p
                hh //= p
                if si:
                    base += si * xp[i]
            base %= p
            row[:] = 0
            for j in pos:
                row += chi2[base[j] : base[j] + p]
            for j in neg:
                row -= chi2[base[j] : base[j] + p]
            for j in rest:
                row += wi[j] * chi2[base[j] : base[j] + p]
            corr[h * p : (h + 1) * p] = row

    _run_partitioned(run, n_high, threads)
    return corr


def all_monic_char_sums(
    p: int, degree: int, threads: int = 1, budget: int | None = None
) -> np.ndarray:
    """Complete character sums sum_x chi(F(x)) for every monic degree-D F."""
    check_ops(p ** (degree + 1), budget, "complete character-sum scan")
    if degree == 1:
        return windowed_correlations(p, 1, 0, p, np.ones(p, dtype=np.int64))
    n_high = p ** (degree - 1)
    chi2 = _chi2(p, False, "int8")
    xs = np.arange(p, dtype=np.int64)
    xp = _x_powers(p, degree, xs)
    out = np.empty(p**degree, dtype=np.int64)
    s0 = np.arange(p, dtype=np.int64)
    chunk = max(1, (1 << 21) // p)

    def run(lo: int, hi: int) -> None:
        for c0 in range(lo, hi, chunk):
            c1 = min(hi, c0 + chunk)
            hs = np.arange(c0, c1, dtype=np.int64)
            base = np.broadcast_to(xp[degree], (c1 - c0, p)).copy()
            hh = hs.copy()
            for i in range(1, degree):
                si = hh % p
                hh //= p
                base += si[:, None] * xp[i][None, :]
            base %= p
            block = np.zeros((c1 - c0, p), dtype=np.int64)
            for j in range(p):
                block += chi2[base[:, j][:, None] + s0[None, :]]
            out[c0 * p : c1 * p] = block.reshape(-1)

    _run_partitioned(run, n_high, threads)
    return out


def perfect_square_indices(p: int, degree: int, budget: int | None = None) -> np.ndarray:
    """Indices (in the monic degree-D order) of all perfect squares g^2."""
    if degree % 2:
        return np.empty(0, dtype=np.int64)
    m = degree // 2
    check_ops(p**m * (m + 1) ** 2, budget, "perfect-square enumeration")
    out = np.empty(p**m, dtype=np.int64)
    for gi in range(p**m):
        g = []
        t = gi
        for _ in range(m):
            g.append(t % p)
            t //= p
        g.append(1)
        sq = [0] * (2 * m + 1)
        for i, a in enumerate(g):
            if a == 0:
                continue
            for j, b in enumerate(g):
                sq[i + j] = (sq[i + j] + a * b) % p
        idx = 0
        for c in reversed(sq[:-1]):
            idx = idx * p + c
        out[gi] = idx
    return out


def squarefree_mask(p: int, d: int, budget: int | None = None) -> np.ndarray:
    """Boolean mask over the monic degree-d index space: True iff square-free."""
    if d == 1:
        return np.ones(p, dtype=bool)
    if d == 2:
        # x^2 + s_1 x + s_0 has a repeated root iff s_1^2 - 4 s_0 = 0
        idx = np.arange(p * p, dtype=np.int64)
        s1 = idx // p
        s0 = idx % p
        return (s1 * s1 - 4 * s0) % p != 0
    total = p**d
    check_ops(total * d * d * 8, budget, "square-free scan")
    modulus = PrimeModulus(p)
    mask = np.zeros(total, dtype=bool)
    for i in range(total):
        mask[i] = is_squarefree(poly_from_index(d, modulus, i))
    return mask


def chi_window_matrix(p: int, d: int, x0: int, m: int, budget: int | None = None) -> np.ndarray:
    """int8 matrix of chi(g(x)): rows all monic degree-d g, columns the window."""
    check_ops(p**d * m, budget, "window matrix")
    chi2 = _chi2(p, False, "int8")
    n_high = p ** (d - 1)
    xs = (x0 + np.arange(m, dtype=np.int64)) % p
    xp = _x_powers(p, d, xs)
    out = np.empty((p**d, m), dtype=np.int8)
    for h in range(n_high):
        base = xp[d].copy()
        hh = h
        for i in range(1, d):
            si = hh % p
            hh //= p
            if si:
                base += si * xp[i]
        base %= p
        for j in range(m):
            out[h * p : (h + 1) * p, j] = chi2[base[j] : base[j] + p]
    return out


def sf_sign_matrix(
    p: int, d: int, max_order: int = 5000
) -> tuple[np.ndarray, np.ndarray]:
    """Patched-character sign matrix over the square-free candidates.

    Returns (A, indices): A[r, x] = chi_ext(g_r(x)) as int8, rows in index
    order over the square-free monic degree-d polynomials.
    """
    mask = squarefree_mask(p, d)
    idx = np.nonzero(mask)[0]
    if len(idx) > max_order:
        raise BudgetExceeded(
            f"{len(idx)} square-free candidates exceed the dense-matrix budget {max_order}"
        )
    chie2 = _chi2(p, True, "int8")
    a = np.empty((len(idx), p), dtype=np.int8)
    if d == 1:
        for r, s in enumerate(idx):
            a[r] = chie2[s : s + p]
        return a, idx
    xs = np.arange(p, dtype=np.int64)
    chie = chie2[:p]
    for r, ci in enumerate(idx):
        digits = []
        t = int(ci)
        for _ in range(d):
            digits.append(t % p)
            t //= p
        acc = np.ones(p, dtype=np.int64)
        for c in reversed(digits):
            acc = (acc * xs + c) % p
        a[r] = chie[acc]
    return a, idx
