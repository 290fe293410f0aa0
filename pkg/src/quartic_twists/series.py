"""Coefficient streams, character twists, and filtration identities.

Dirichlet series appear only through their coefficient streams (a_n for
n <= N), with exact rational arithmetic.  The base stream g attached to a
quartic f is the indicator of square-free n composed of good primes where f
has a root; its twists by the mod-8 characters and by quadratic symbols
filter g by congruence class and by symbol value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import PrimeTable, jacobi

# values of the four real characters mod 8 on residues 1, 3, 5, 7
_CHI_TABLE = {
    1: (1, 1, 1, 1),
    2: (1, 1, -1, -1),
    3: (1, -1, -1, 1),
    4: (1, -1, 1, -1),
}
_RESIDUE_INDEX = {1: 0, 3: 1, 5: 2, 7: 3}


def chi_value(i: int, n: int) -> int:
    """chi_i(n) for the character table mod 8; zero on even n."""
    if i not in _CHI_TABLE:
        raise ValueError(f"chi index must be 1..4, got {i}")
    if n % 2 == 0:
        return 0
    return _CHI_TABLE[i][_RESIDUE_INDEX[n % 8]]


@dataclass(frozen=True)
class CharacterMod8:
    index: int

    def __post_init__(self):
        if self.index not in _CHI_TABLE:
            raise ValueError(f"chi index must be 1..4, got {self.index}")

    def value(self, n: int) -> int:
        return chi_value(self.index, n)


@dataclass(frozen=True)
class QuadCharacter:
    """n -> Jacobi symbol (n/r) for a fixed odd modulus r."""

    r: int

    def __post_init__(self):
        if self.r < 3 or self.r % 2 == 0:
            raise ValueError(f"quadratic-symbol modulus must be odd >= 3, got {self.r}")

    def value(self, n: int) -> int:
        return jacobi(n, self.r)


class FrobenianMultiplicative:
    """Square-free-supported multiplicative function from root existence.

    value(p) = 1 when f has a root mod p and p is outside the exceptional set
    S (the primes dividing 2*disc(f)); all higher prime powers map to 0.
    """

    def __init__(self, f):
        self.f = f
        self.exceptional = frozenset(f.bad_primes())

    def prime_value(self, p: int) -> int:
        if p in self.exceptional:
            return 0
        return 1 if self.f.has_root_mod_p(p) else 0

    def __call__(self, p: int) -> int:
        return self.prime_value(p)


@dataclass
class Stream:
    """Coefficients a_1..a_N of a Dirichlet series, exact."""

    a: list  # index 0 unused; ints or Fractions

    @property
    def N(self) -> int:
        return len(self.a) - 1

    def __getitem__(self, n: int):
        return self.a[n]

    @classmethod
    def zero(cls, N: int) -> "Stream":
        return cls([0] * (N + 1))

    @classmethod
    def one(cls, N: int) -> "Stream":
        a = [0] * (N + 1)
        if N >= 1:
            a[1] = 1
        return cls(a)


def rho_coefficients(rho: FrobenianMultiplicative, N: int,
                     table: PrimeTable | None = None) -> Stream:
    """Stream of rho(n) for n <= N, by sieving.

    rho(n) = 1 exactly when n is square-free and every prime factor has
    rho(p) = 1; in particular the stream vanishes on multiples of exceptional
    primes.
    """
    if table is None or table.limit < N:
        table = PrimeTable(max(N, 2))
    a = np.ones(N + 1, dtype=np.int8)
    a[0] = 0
    primes, flags = rho.f.root_census(N, table) if N >= 2 else (np.array([]), np.array([]))
    for p, ok in zip(primes.tolist(), flags.tolist()):
        if p in rho.exceptional or not ok:
            a[p::p] = 0
        elif p * p <= N:
            a[p * p :: p * p] = 0
    return Stream(a.tolist())


def twist_coefficients(stream: Stream, chars) -> Stream:
    """Multiply a_n by the product of character values at n."""
    out = [0] * (stream.N + 1)
    for n in range(1, stream.N + 1):
        v = stream[n]
        if v:
            for ch in chars:
                v *= ch.value(n)
                if v == 0:
                    break
            out[n] = v
    return Stream(out)


def dirichlet_convolve(f: Stream, g: Stream) -> Stream:
    """(f * g)_n = sum over d | n of f_d g_(n/d), truncated at min(N_f, N_g)."""
    N = min(f.N, g.N)
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        fd = f[d]
        if fd:
            for m in range(1, N // d + 1):
                if g[m]:
                    out[d * m] += fd * g[m]
    return Stream(out)


def dirichlet_inverse(f: Stream) -> Stream:
    """Convolution inverse; requires a_1 != 0.  Exact over Fractions."""
    if f.N < 1 or f[1] == 0:
        raise ValueError("inverse requires a nonzero first coefficient")
    inv1 = Fraction(1, 1) / Fraction(f[1])
    out = [Fraction(0)] * (f.N + 1)
    out[1] = inv1
    for n in range(2, f.N + 1):
        s = Fraction(0)
        for d in range(2, n + 1):
            if n % d == 0 and f[d]:
                s += Fraction(f[d]) * out[n // d]
        out[n] = -inv1 * s
    return Stream(out)


def filtration_check_mod8(stream: Stream, c: int, N: int | None = None) -> bool:
    """Coefficientwise check that the quarter-sum of character twists picks
    out exactly the residue class c mod 8."""
    if c not in _RESIDUE_INDEX:
        raise ValueError(f"mod-8 class must be odd, got {c}")
    N = stream.N if N is None else min(N, stream.N)
    for n in range(1, N + 1):
        an = stream[n]
        lhs = Fraction(
            sum(chi_value(i, c) * chi_value(i, n) for i in (1, 2, 3, 4)), 4
        ) * an
        rhs = an if n % 8 == c else 0
        if lhs != rhs:
            return False
    return True


def filtration_check_modr(stream: Stream, r: int, sign: int, N: int | None = None) -> bool:
    """Coefficientwise check of the half-sum identity for symbol value sign,
    over n <= N coprime to r."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    psi = QuadCharacter(r)
    N = stream.N if N is None else min(N, stream.N)
    for n in range(1, N + 1):
        if n % r == 0:
            continue
        an = stream[n]
        lhs = Fraction(an + sign * psi.value(n) * an, 2)
        rhs = an if psi.value(n) == sign else 0
        if lhs != rhs:
            return False
    return True


def F_coefficients(bundle, N: int, table: PrimeTable | None = None) -> Stream:
    """Coefficients of the generating series of allowed twists, from the
    merged character terms.  Exact; the result is 0/1-valued when the term
    list is sound."""
    rho = FrobenianMultiplicative(bundle.f)
    base = rho_coefficients(rho, N, table)
    out = [Fraction(0)] * (N + 1)
    psi_cache: dict[int, QuadCharacter] = {}
    for t in bundle.terms:
        chars = [CharacterMod8(t.chi)]
        for r in t.psis:
            chars.append(psi_cache.setdefault(r, QuadCharacter(r)))
        m = t.prefactor
        for n1 in range(1, N // m + 1):
            v = base[n1]
            if v:
                for ch in chars:
                    v *= ch.value(n1)
                    if v == 0:
                        break
                if v:
                    out[m * n1] += t.coeff * v
    return Stream(out)


def empirical_mean(rho: FrobenianMultiplicative, chars, B: int,
                   table: PrimeTable | None = None) -> Fraction:
    """Average of rho(p) * prod chi(p) over unexceptional primes p <= B."""
    if table is None or table.limit < B:
        table = PrimeTable(max(B, 2))
    primes, flags = rho.f.root_census(B, table)
    total = Fraction(0)
    count = 0
    plist = primes.tolist()
    flist = flags.tolist()
    char_list = list(chars)
    for p, ok in zip(plist, flist):
        if p in rho.exceptional:
            continue
        count += 1
        if ok:
            v = 1
            for ch in char_list:
                v *= ch.value(p)
                if v == 0:
                    break
            total += v
    if count == 0:
        raise ValueError("no unexceptional primes below the bound")
    return total / count
