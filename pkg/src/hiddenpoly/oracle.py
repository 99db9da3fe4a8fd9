"""Black-box access to character values of a hidden polynomial.

A session owns the hidden square-free monic polynomial f and answers
point queries with the quadratic character of f(x) (signed mode, values
in {-1, 0, 1}) or the patched character (patched mode, values in
{-1, 1}).  With reliability gamma < 1 an answer is wrong with
probability 1 - gamma, uniformly over the incorrect values of the
mode's codomain.  Noise draws are a pure function of
(rng_seed, x, draw index), so answers do not depend on global query
order and concurrent callers see a consistent oracle.
"""

from __future__ import annotations

import hashlib
import struct
import threading

from .ffield import FpElement, PrimeModulus, legendre, legendre_ext
from .poly import MonicPoly, is_squarefree

SIGNED = "signed"
PATCHED = "patched"

_MASK64 = (1 << 64) - 1


class OracleSession:
    """Query interface to a hidden square-free monic polynomial."""

    def __init__(
        self,
        hidden: MonicPoly,
        *,
        gamma: float = 1.0,
        rng_seed: int = 0,
        mode: str = SIGNED,
    ):
        if not is_squarefree(hidden):
            raise ValueError("hidden polynomial must be square-free")
        if not 0.5 < gamma <= 1.0:
            raise ValueError("gamma must lie in (1/2, 1]")
        if mode not in (SIGNED, PATCHED):
            raise ValueError(f"mode must be {SIGNED!r} or {PATCHED!r}")
        self._hidden = hidden
        self.gamma = float(gamma)
        self.rng_seed = int(rng_seed) & _MASK64
        self.mode = mode
        self._count = 0
        self._draws: dict[int, int] = {}
        self._lock = threading.Lock()

    @property
    def hidden(self) -> MonicPoly:
        """Ground truth, exposed for harnesses that must verify recovery."""
        return self._hidden

    @property
    def modulus(self) -> PrimeModulus:
        return self._hidden.modulus

    @property
    def p(self) -> int:
        return self._hidden.modulus.p

    @property
    def degree(self) -> int:
        return self._hidden.degree

    @property
    def query_count(self) -> int:
        return self._count

    def _truth(self, xv: int) -> int:
        value = FpElement(self._hidden.eval_int(xv), self.modulus)
        return legendre(value) if self.mode == SIGNED else legendre_ext(value)

    def _noise_words(self, xv: int, draw: int) -> tuple[float, int]:
        digest = hashlib.sha256(
            b"hiddenpoly-oracle" + struct.pack("<QQQ", self.rng_seed, xv, draw)
        ).digest()
        u = int.from_bytes(digest[:8], "little") / 2.0**64
        pick = int.from_bytes(digest[8:16], "little")
        return u, pick

    def query(self, x) -> int:
        """One oracle answer at x; increments the query counter by one."""
        xv = x.value if isinstance(x, FpElement) else int(x) % self.p
        with self._lock:
            self._count += 1
            if self.gamma < 1.0:
                draw = self._draws.get(xv, 0)
                self._draws[xv] = draw + 1
        truth = self._truth(xv)
        if self.gamma == 1.0:
            return truth
        u, pick = self._noise_words(xv, draw)
        if u < self.gamma:
            return truth
        codomain = (-1, 0, 1) if self.mode == SIGNED else (-1, 1)
        wrong = [v for v in codomain if v != truth]
        return wrong[pick % len(wrong)]

    def majority_estimate(self, x, t: int) -> int:
        """Plurality of t repeated queries at x; t odd, smallest value on ties."""
        if t < 1 or t % 2 == 0:
            raise ValueError("t must be a positive odd integer")
        counts: dict[int, int] = {}
        for _ in range(t):
            v = self.query(x)
            counts[v] = counts.get(v, 0) + 1
        best = max(counts.values())
        return min(v for v, c in counts.items() if c == best)
