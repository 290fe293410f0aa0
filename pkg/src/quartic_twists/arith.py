"""Exact integer and p-adic arithmetic helpers.

Everything here is deterministic and exact except ``gamma_eval``, which is a
fixed-coefficient rational approximation accurate to ~1e-13 relative error on
(0, 2].
"""
from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

SPF_MAGIC = b"SPFTABLE"
SPF_LIMIT_CAP = 2**31


class NotSquareFreeError(ValueError):
    """Raised by callers that require square-free input."""


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by quadratic reciprocity.

    No factorization of n is performed.  Returns 0 when gcd(a, n) > 1.
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi: n must be odd and positive, got {n}")
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def valuation(n: int, p: int) -> int:
    """Largest v with p^v | n.  n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError(f"valuation: p must be >= 2, got {p}")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(n: int, p: int) -> int:
    """n / p^valuation(n, p); keeps the sign of n."""
    return n // p ** valuation(n, p)


def is_padic_square(n: int, p: int) -> bool:
    """Whether nonzero integer n is a square in Q_p.

    Odd p: even valuation and quadratic-residue unit part.
    p = 2: even valuation and unit part congruent to 1 mod 8.
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    v = valuation(n, p)
    if v % 2 == 1:
        return False
    u = n // p**v
    if p == 2:
        return u % 8 == 1
    return jacobi(u % p, p) == 1


def squarefree_factor(n: int, table: "PrimeTable | None" = None) -> list[int] | None:
    """Distinct prime factors of n >= 1, or None when n is not square-free.

    Uses the smallest-prime-factor table when one covering n is supplied,
    otherwise trial division.
    """
    if n < 1:
        raise ValueError(f"squarefree_factor: n must be >= 1, got {n}")
    if n == 1:
        return []
    primes: list[int] = []
    if table is not None and n <= table.limit:
        while n > 1:
            p = table.smallest_factor(n)
            n //= p
            if n % p == 0:
                return None
            primes.append(p)
        return primes
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return None
            primes.append(d)
        d += 1 if d == 2 else 2
    if n > 1:
        primes.append(n)
    return primes


class PrimeTable:
    """Smallest-prime-factor table for 2..limit, backed by a uint32 array."""

    def __init__(self, limit: int):
        if limit < 2:
            raise ValueError(f"PrimeTable: limit must be >= 2, got {limit}")
        if limit > SPF_LIMIT_CAP:
            raise ValueError(f"PrimeTable: limit {limit} exceeds cap {SPF_LIMIT_CAP}")
        self.limit = int(limit)
        self.spf = self._sieve(self.limit)

    @staticmethod
    def _sieve(limit: int) -> np.ndarray:
        spf = np.zeros(limit + 1, dtype=np.uint32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                spf[p] = p
                sl = spf[p * p :: p]
                sl[sl == 0] = p
        rest = np.nonzero(spf[2:] == 0)[0] + 2
        spf[rest] = rest
        return spf

    def smallest_factor(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range 2..{self.limit}")
        return int(self.spf[n])

    def is_prime(self, n: int) -> bool:
        return n >= 2 and self.smallest_factor(n) == n

    def primes(self) -> np.ndarray:
        """All primes <= limit, ascending."""
        idx = np.arange(self.limit + 1, dtype=np.uint32)
        return np.nonzero(self.spf == idx)[0][1:].astype(np.int64)  # drop index 0

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Sorted (prime, exponent) pairs for 1 <= n <= limit."""
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range 1..{self.limit}")
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    # -- persistence: magic, 8-byte little-endian limit, uint32 entries for 2..limit

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with open(path, "wb") as fh:
            fh.write(SPF_MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            fh.write(self.spf[2:].astype("<u4").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "PrimeTable":
        path = Path(path)
        raw = path.read_bytes()
        if len(raw) < 16 or raw[:8] != SPF_MAGIC:
            raise ValueError(f"{path}: not a prime-table file (bad magic)")
        (limit,) = struct.unpack("<Q", raw[8:16])
        if limit < 2 or limit > SPF_LIMIT_CAP:
            raise ValueError(f"{path}: invalid limit {limit}")
        body = raw[16:]
        if len(body) != 4 * (limit - 1):
            raise ValueError(
                f"{path}: expected {4 * (limit - 1)} bytes of entries, got {len(body)}"
            )
        table = cls.__new__(cls)
        table.limit = int(limit)
        spf = np.zeros(limit + 1, dtype=np.uint32)
        spf[2:] = np.frombuffer(body, dtype="<u4")
        table.spf = spf
        return table


# Lanczos approximation, g = 7, 9 coefficients.  Literals are the standard
# double-precision set; relative error below 1e-13 on the range used here.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_eval(z: float) -> float:
    """Gamma(z) for real 0 < z <= 2 via the Lanczos series above."""
    if not 0.0 < z <= 2.0:
        raise ValueError(f"gamma_eval: z must lie in (0, 2], got {z}")
    if z < 0.5:
        # reflection onto [0.5, 2] keeps the series in its sweet spot
        return math.pi / (math.sin(math.pi * z) * gamma_eval(1.0 - z))
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (z - 1.0 + i)
    t = z - 1.0 + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z - 0.5) * math.exp(-t) * acc
