"""Monic integer quartics: invariants, reduction types, Galois classification.

The central object is ``Quartic``, a monic irreducible degree-4 integer
polynomial x^4 + a3 x^3 + a2 x^2 + a1 x + a0.  Everything downstream (local
solvability, the twist criterion, densities) keys off the data computed here.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import PrimeTable, squarefree_factor
from .errors import TripwireError

# factorization types of a squarefree quartic mod p = cycle types in S4
TYPE_1111 = (1, 1, 1, 1)
TYPE_112 = (1, 1, 2)
TYPE_13 = (1, 3)
TYPE_22 = (2, 2)
TYPE_4 = (4,)
ALL_TYPES = (TYPE_1111, TYPE_112, TYPE_13, TYPE_22, TYPE_4)
ROOTED_TYPES = (TYPE_1111, TYPE_112, TYPE_13)  # types with a degree-1 part


class GaloisType(str, Enum):
    V4 = "V4"
    C4 = "C4"
    D4 = "D4"
    A4 = "A4"
    S4 = "S4"


class ClassificationConflict(TripwireError):
    """Exact Galois classification contradicted by sampled reduction types."""


@dataclass(frozen=True)
class Quartic:
    """Monic irreducible quartic with integer coefficients."""

    a3: int
    a2: int
    a1: int
    a0: int

    def __post_init__(self):
        for name in ("a3", "a2", "a1", "a0"):
            v = getattr(self, name)
            if not isinstance(v, int):
                raise TypeError(f"{name} must be int, got {type(v).__name__}")
        if not self._is_irreducible():
            raise ValueError(f"{self} is reducible over Q")

    # ---- basic structure -------------------------------------------------

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        """(c0, c1, c2, c3, c4) ascending, c4 = 1."""
        return (self.a0, self.a1, self.a2, self.a3, 1)

    def __call__(self, x: int) -> int:
        return ((x + self.a3) * x + self.a2) * x * x + self.a1 * x + self.a0

    def derivative(self, x: int) -> int:
        return ((4 * x + 3 * self.a3) * x + 2 * self.a2) * x + self.a1

    def reversed_coeffs(self) -> tuple[int, int, int, int, int]:
        """Coefficients of u^4 f(1/u) = 1 + a3 u + a2 u^2 + a1 u^3 + a0 u^4."""
        return (1, self.a3, self.a2, self.a1, self.a0)

    def __str__(self) -> str:
        terms = ["x^4"]
        for coeff, mon in [(self.a3, "x^3"), (self.a2, "x^2"), (self.a1, "x"), (self.a0, "")]:
            if coeff == 0:
                continue
            sign = " + " if coeff > 0 else " - "
            mag = abs(coeff)
            if mon and mag == 1:
                terms.append(f"{sign}{mon}")
            elif mon:
                terms.append(f"{sign}{mag}*{mon}")
            else:
                terms.append(f"{sign}{mag}")
        return "".join(terms)

    @classmethod
    def parse(cls, text: str) -> "Quartic":
        """Parse 'x^4 - x + 1' style input (integer coefficients, monic)."""
        s = text.replace(" ", "").replace("**", "^").replace("*", "")
        if not s:
            raise ValueError("empty polynomial")
        coeffs = {4: 0, 3: 0, 2: 0, 1: 0, 0: 0}
        pos = 0
        term_re = re.compile(r"([+-]?)(\d*)(x(?:\^(\d+))?)?")
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial at ...{s[pos:]!r}")
            sign, num, xpart, exp = m.groups()
            if not num and not xpart:
                raise ValueError(f"cannot parse polynomial at ...{s[pos:]!r}")
            c = int(num) if num else 1
            if sign == "-":
                c = -c
            deg = 0
            if xpart:
                deg = int(exp) if exp else 1
            if deg > 4:
                raise ValueError(f"degree {deg} term in quartic input")
            coeffs[deg] += c
            pos = m.end()
        if coeffs[4] != 1:
            raise ValueError(f"polynomial must be monic of degree 4: {text!r}")
        return cls(coeffs[3], coeffs[2], coeffs[1], coeffs[0])

    # ---- invariants --------------------------------------------------------

    def discriminant(self) -> int:
        """Discriminant via the explicit degree-4 expansion (exact)."""
        b, c, d, e = self.a3, self.a2, self.a1, self.a0
        return (
            256 * e**3
            - 192 * b * d * e**2
            - 128 * c**2 * e**2
            + 144 * c * d**2 * e
            - 27 * d**4
            + 144 * b**2 * c * e**2
            - 6 * b**2 * d**2 * e
            - 80 * b * c**2 * d * e
            + 18 * b * c * d**3
            + 16 * c**4 * e
            - 4 * c**3 * d**2
            - 27 * b**4 * e**2
            + 18 * b**3 * c * d * e
            - 4 * b**3 * d**3
            - 4 * b**2 * c**3 * e
            + b**2 * c**2 * d**2
        )

    def bad_primes(self) -> list[int]:
        """2 together with the odd primes dividing the discriminant, sorted.

        2 counts as a bad prime whether or not it divides disc(f): the mod-8
        solvability table is always consulted.
        """
        d = abs(self.discriminant())
        out = {2}
        dd = d
        for p in (2,):
            while dd % p == 0:
                dd //= p
        f = 3
        while f * f <= dd:
            if dd % f == 0:
                out.add(f)
                while dd % f == 0:
                    dd //= f
            f += 2
        if dd > 1:
            out.add(dd)
        return sorted(out)

    def resolvent_cubic(self) -> tuple[int, int, int, int]:
        """Coefficients (1, r2, r1, r0) of the cubic resolvent.

        Roots of the resolvent are the three pairwise products-plus-products
        r1r2 + r3r4 etc. of the roots of f.
        """
        b, c, d, e = self.a3, self.a2, self.a1, self.a0
        return (1, -c, b * d - 4 * e, -(b * b * e - 4 * c * e + d * d))

    # ---- irreducibility ---------------------------------------------------

    def _is_irreducible(self) -> bool:
        # rational root would be an integer dividing a0
        if self.a0 == 0:
            return False
        for r in _divisors_signed(self.a0):
            if self(r) == 0:
                return False
        # quadratic split: (x^2 + p x + q)(x^2 + r x + s) with qs = a0
        for q in _divisors_signed(self.a0):
            s, rem = divmod(self.a0, q)
            if rem:
                continue
            # p + r = a3, p r = a2 - q - s  =>  p, r roots of t^2 - a3 t + (a2-q-s)
            disc = self.a3 * self.a3 - 4 * (self.a2 - q - s)
            if disc < 0:
                continue
            w = math.isqrt(disc)
            if w * w != disc or (self.a3 + w) % 2 != 0:
                continue
            p = (self.a3 + w) // 2
            r = self.a3 - p
            if p * s + q * r == self.a1:
                return False
        return True

    # ---- reduction types ---------------------------------------------------

    def has_root_mod_p(self, p: int) -> bool:
        """Whether f has a root in F_p (defined for every prime p)."""
        if p < 7:
            return any(self(x) % p == 0 for x in range(p))
        fp = tuple(c % p for c in self.coeffs)
        xp = _xpow_mod(p, fp, p)
        g = list(xp)
        g[1] = (g[1] - 1) % p  # x^p - x
        return _gcd_degree(fp, tuple(g), p) >= 1

    def factorization_type(self, p: int) -> tuple[int, ...]:
        """Factorization type of f mod p for p not dividing disc(f)."""
        if self.discriminant() % p == 0:
            raise ValueError(f"p={p} divides disc; factorization type undefined here")
        if p < 7:
            return _type_by_counting(self, p)
        fp = tuple(c % p for c in self.coeffs)
        xp = _xpow_mod(p, fp, p)
        g1 = list(xp)
        g1[1] = (g1[1] - 1) % p
        r1 = _gcd_degree(fp, tuple(g1), p)
        if r1 == 4:
            return TYPE_1111
        if r1 == 2:
            return TYPE_112
        if r1 == 1:
            return TYPE_13
        # r1 == 0: split (2,2) from (4) by roots in F_{p^2}
        xp2 = _polpow_mod(xp, p, fp, p)
        g2 = list(xp2)
        g2[1] = (g2[1] - 1) % p
        r2 = _gcd_degree(fp, tuple(g2), p)
        return TYPE_22 if r2 == 4 else TYPE_4

    def root_census(self, limit: int, table: PrimeTable | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(primes, has_root flags) for all primes <= limit.

        The x^p mod f powering runs vectorized over all primes at once; the
        final gcd degree is taken per prime.
        """
        if table is None or table.limit < limit:
            table = PrimeTable(limit)
        primes = table.primes()
        primes = primes[primes <= limit]
        xp = _xpow_mod_batch(primes, self.coeffs)
        flags = np.zeros(len(primes), dtype=bool)
        cols = [xp[i].tolist() for i in range(4)]
        plist = primes.tolist()
        fp_cache_coeffs = self.coeffs
        for i, p in enumerate(plist):
            if p < 7:
                flags[i] = any(self(x) % p == 0 for x in range(p))
                continue
            g = (cols[0][i], (cols[1][i] - 1) % p, cols[2][i], cols[3][i])
            fp = tuple(c % p for c in fp_cache_coeffs)
            flags[i] = _gcd_degree(fp, g, p) >= 1
        return primes, flags

    # ---- Galois classification ----------------------------------------------

    def classify_galois(self) -> GaloisType:
        """Decision table on the cubic resolvent and disc squareness."""
        disc = self.discriminant()
        _, r2, r1, r0 = self.resolvent_cubic()
        roots = _cubic_rational_roots(r2, r1, r0)
        if len(roots) == 0:
            return GaloisType.A4 if _is_square(disc) else GaloisType.S4
        if len(roots) == 3:
            return GaloisType.V4
        (t,) = roots
        # C4 iff both auxiliary discriminants are squares in Q(sqrt(disc))
        z1 = t * t - 4 * self.a0
        z2 = self.a3 * self.a3 - 4 * (self.a2 - t)
        if _square_in_quad_ext(z1, disc) and _square_in_quad_ext(z2, disc):
            return GaloisType.C4
        return GaloisType.D4

    def classify_checked(self, sample_bound: int = 2000) -> GaloisType:
        """classify_galois plus a sampled reduction-type cross-check.

        Observed factorization types at primes of good reduction must be cycle
        types realized in the claimed group; a C4 claim additionally forbids
        type (1,1,2).  Disagreement raises ClassificationConflict.
        """
        g = self.classify_galois()
        allowed = set(realizable_types(g))
        disc = self.discriminant()
        for p in _primes_upto(sample_bound):
            if (2 * disc) % p == 0:
                continue
            t = self.factorization_type(p)
            if t not in allowed:
                raise ClassificationConflict(
                    f"{self}: classified {g.value} but type {t} occurs at p={p}"
                )
        return g


def _divisors_signed(n: int) -> list[int]:
    n = abs(n)
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out += [d, -d, n // d, -(n // d)]
    return sorted(set(out))


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _square_in_quad_ext(z: int, disc: int) -> bool:
    """Whether integer z is a square in Q(sqrt(disc))."""
    return _is_square(z) or _is_square(z * disc)


def _cubic_rational_roots(r2: int, r1: int, r0: int) -> list[int]:
    """Distinct integer roots of the monic cubic y^3 + r2 y^2 + r1 y + r0.

    A monic integer cubic has all its rational roots in Z dividing r0, and it
    is irreducible over Q exactly when it has none.
    """
    if r0 == 0:
        cands = {0}
        cands.update(_divisors_signed(r0) if r0 else [])
        # remaining quadratic y^2 + r2 y + r1
        d = r2 * r2 - 4 * r1
        if _is_square(d):
            w = math.isqrt(d)
            for num in (-r2 + w, -r2 - w):
                if num % 2 == 0:
                    cands.add(num // 2)
        return sorted({y for y in cands if ((y + r2) * y + r1) * y + r0 == 0})
    roots = [y for y in _divisors_signed(r0) if ((y + r2) * y + r1) * y + r0 == 0]
    return sorted(set(roots))


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return tuple(i for i in range(2, n + 1) if sieve[i])


# ---- polynomial arithmetic in F_p[x] mod f (degree < 4 representatives) ----

def _polmul_mod(a, b, fp, p):
    """(a * b) mod (f, p) for coefficient tuples of length 4."""
    c = [0] * 7
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] += ai * bj
    for k in range(6, 3, -1):
        ck = c[k] % p
        if ck:
            # x^k = -x^(k-4) * (a3 x^3 + a2 x^2 + a1 x + a0)
            c[k - 1] -= ck * fp[3]
            c[k - 2] -= ck * fp[2]
            c[k - 3] -= ck * fp[1]
            c[k - 4] -= ck * fp[0]
        c[k] = 0
    return (c[0] % p, c[1] % p, c[2] % p, c[3] % p)


def _polpow_mod(base, e, fp, p):
    result = (1, 0, 0, 0)
    b = base
    while e:
        if e & 1:
            result = _polmul_mod(result, b, fp, p)
        b = _polmul_mod(b, b, fp, p)
        e >>= 1
    return result


def _xpow_mod(e, fp, p):
    """x^e mod (f, p)."""
    return _polpow_mod((0, 1, 0, 0), e, fp, p)


def _gcd_degree(fp, g, p):
    """deg gcd(f, g) in F_p[x]; f is the fixed quartic (monic), deg g <= 3."""
    a = [fp[0], fp[1], fp[2], fp[3], 1]
    b = list(g)
    while True:
        while b and b[-1] % p == 0:
            b.pop()
        if not b:
            return len(a) - 1
        inv = pow(b[-1], p - 2, p)
        db = len(b) - 1
        while len(a) - 1 >= db:
            lead = a[-1] % p
            if lead:
                shift = len(a) - 1 - db
                for i in range(len(b)):
                    a[shift + i] = (a[shift + i] - lead * inv * b[i]) % p
            a.pop()
            while a and a[-1] % p == 0 and len(a) - 1 >= db:
                a.pop()
        a, b = b, a


def _type_by_counting(f: Quartic, p: int) -> tuple[int, ...]:
    """Factorization type for tiny p by exhaustive root counts over F_p, F_p^2."""
    r1 = sum(1 for x in range(p) if f(x) % p == 0)
    if r1 == 4:
        return TYPE_1111
    if r1 == 2:
        return TYPE_112
    if r1 == 1:
        return TYPE_13
    # roots in F_p^2 = F_p[t]/(t^2 - n) for a non-residue n (p odd), or F_4
    fp = tuple(c % p for c in f.coeffs)
    xp2 = _xpow_mod(p * p, fp, p)
    g = list(xp2)
    g[1] = (g[1] - 1) % p
    r2 = _gcd_degree(fp, tuple(g), p)
    return TYPE_22 if r2 == 4 else TYPE_4


def _xpow_mod_batch(primes: np.ndarray, coeffs) -> np.ndarray:
    """x^p mod (f, p) for all p in primes at once; returns shape (4, n) int64.

    Left-to-right binary powering with 24-ish squarings; coefficients stay
    below p^2 < 2^63 between reductions.
    """
    p = primes.astype(np.int64)
    n = len(p)
    a0, a1, a2, a3, _ = [np.int64(c) for c in coeffs]
    f0, f1, f2, f3 = a0 % p, a1 % p, a2 % p, a3 % p
    r = np.zeros((4, n), dtype=np.int64)
    r[0] = 1
    maxbit = int(primes.max()).bit_length() - 1 if n else 0

    def reduce_top(c):  # c has 7 coefficient rows, degrees 0..6
        for k in (6, 5, 4):
            ck = c[k] % p
            c[k - 1] = (c[k - 1] - ck * f3) % p
            c[k - 2] = (c[k - 2] - ck * f2) % p
            c[k - 3] = (c[k - 3] - ck * f1) % p
            c[k - 4] = (c[k - 4] - ck * f0) % p
            c[k][:] = 0
        return c

    for bit in range(maxbit, -1, -1):
        # square
        c = [np.zeros(n, dtype=np.int64) for _ in range(7)]
        for i in range(4):
            c[2 * i] = (c[2 * i] + r[i] * r[i]) % p
            for j in range(i + 1, 4):
                c[i + j] = (c[i + j] + 2 * r[i] * r[j] % p) % p
        c = reduce_top(c)
        r = np.stack(c[:4])
        # multiply by x where the bit is set
        mask = (p >> bit) & 1 == 1
        if mask.any():
            shifted = [np.zeros(n, dtype=np.int64) for _ in range(7)]
            for i in range(4):
                shifted[i + 1] = r[i].copy()
            shifted = reduce_top(shifted)
            for i in range(4):
                r[i] = np.where(mask, shifted[i], r[i])
    return r % p


# ---- permutation groups on 4 letters ---------------------------------------

Perm = tuple[int, int, int, int]
_IDENTITY: Perm = (0, 1, 2, 3)


def _compose(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return (a[b[0]], a[b[1]], a[b[2]], a[b[3]])


def _closure(gens: list[Perm]) -> tuple[Perm, ...]:
    elems = {_IDENTITY}
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        if g in elems:
            continue
        elems.add(g)
        for h in list(elems):
            for c in (_compose(g, h), _compose(h, g)):
                if c not in elems:
                    frontier.append(c)
    return tuple(sorted(elems))


def cycle_type(g: Perm) -> tuple[int, ...]:
    seen, parts = set(), []
    for i in range(4):
        if i in seen:
            continue
        j, n = i, 0
        while j not in seen:
            seen.add(j)
            j = g[j]
            n += 1
        parts.append(n)
    return tuple(sorted(parts))


_C4_GEN: Perm = (1, 2, 3, 0)  # (1234)
_GROUP_GENS: dict[GaloisType, list[Perm]] = {
    GaloisType.V4: [(1, 0, 3, 2), (2, 3, 0, 1)],
    GaloisType.C4: [_C4_GEN],
    GaloisType.D4: [_C4_GEN, (2, 1, 0, 3)],  # (1234), (13)
    GaloisType.A4: [(1, 2, 0, 3), (0, 2, 3, 1)],  # (123), (234)
    GaloisType.S4: [(1, 0, 2, 3), (1, 2, 3, 0)],  # (12), (1234)
}
_GROUP_ORDER = {GaloisType.V4: 4, GaloisType.C4: 4, GaloisType.D4: 8,
                GaloisType.A4: 12, GaloisType.S4: 24}


@lru_cache(maxsize=None)
def group_elements(g: GaloisType) -> tuple[Perm, ...]:
    elems = _closure(_GROUP_GENS[g])
    assert len(elems) == _GROUP_ORDER[g], f"{g}: got {len(elems)} elements"
    return elems


@lru_cache(maxsize=None)
def realizable_types(g: GaloisType) -> tuple[tuple[int, ...], ...]:
    """Cycle types realized by elements of g, in ALL_TYPES order."""
    present = {cycle_type(e) for e in group_elements(g)}
    return tuple(t for t in ALL_TYPES if t in present)


def mean_rho(g: GaloisType) -> Fraction:
    """Fraction of group elements whose cycle type has a fixed point.

    Exactly the types (1,1,1,1), (1,1,2), (1,3); this is the density of primes
    where f acquires a root.
    """
    elems = group_elements(g)
    good = sum(1 for e in elems if cycle_type(e) in ROOTED_TYPES)
    return Fraction(good, len(elems))


def frobenius_order_type(t: tuple[int, ...], g: GaloisType) -> tuple[int, ...]:
    """Splitting type in the Galois closure: (d, ..., d) with d = lcm(t).

    t must be realizable in g; the closure has degree |g|.
    """
    if t not in realizable_types(g):
        raise ValueError(f"cycle type {t} not realized in {g.value}")
    d = math.lcm(*t)
    order = _GROUP_ORDER[g]
    return tuple([d] * (order // d))


@lru_cache(maxsize=None)
def _s4_coset_reps() -> tuple[tuple[Perm, ...], ...]:
    """The 8 left cosets of <(123)> in S4, each as a sorted element tuple."""
    h = _closure([(1, 2, 0, 3)])
    seen: dict[tuple[Perm, ...], None] = {}
    for s in itertools.permutations(range(4)):
        coset = tuple(sorted(_compose(s, x) for x in h))
        seen.setdefault(coset, None)
    assert len(seen) == 8
    return tuple(seen.keys())


def coset_orbit_type(sigma: Perm) -> tuple[int, ...]:
    """Orbit lengths of <sigma> on the 8 cosets of <(123)> in S4, sorted.

    This is the splitting type in the degree-8 subfield fixed by the Sylow
    3-subgroup; it depends only on the conjugacy class of sigma.
    """
    cosets = _s4_coset_reps()
    index = {c: i for i, c in enumerate(cosets)}

    def act(c: tuple[Perm, ...]) -> tuple[Perm, ...]:
        return tuple(sorted(_compose(sigma, x) for x in c))

    seen: set[int] = set()
    parts = []
    for c in cosets:
        if index[c] in seen:
            continue
        cur, n = c, 0
        while index[cur] not in seen:
            seen.add(index[cur])
            cur = act(cur)
            n += 1
        parts.append(n)
    return tuple(sorted(parts))


def element_of_type(t: tuple[int, ...], g: GaloisType) -> Perm:
    """First element of g (sorted order) with cycle type t."""
    for e in group_elements(g):
        if cycle_type(e) == t:
            return e
    raise ValueError(f"cycle type {t} not realized in {g.value}")
