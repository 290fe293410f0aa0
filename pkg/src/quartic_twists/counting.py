"""Count solvable twists up to x, and fit the leading constant.

``count_L`` evaluates L(x) = #{1 <= q <= x : q square-free, H_q everywhere
locally solvable} exactly, by sieving the criterion's congruence conditions
with numpy over range partitions (deterministic under any worker count).
``count_L_reference`` is the same count done one q at a time through
``is_ELS_criterion`` — slow, kept as an independent cross-check.

``fit_cf`` turns checkpoint counts into c(x) = L(x) (ln x)^m / x with the
group-determined exponent m, and ``euler_cf_truncated`` gives a truncated
Euler-product estimate of the limiting constant for comparison.
"""
from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .arith import PrimeTable, gamma_eval, jacobi
from .criterion import (
    COPRIME_RESIDUE_ONLY,
    DIVIDING_COFACTOR_NONRESIDUE,
    DIVIDING_COFACTOR_RESIDUE,
    DIVIDING_FORBIDDEN,
    CriterionBundle,
    is_ELS_criterion,
)
from .quartic import GaloisType, Quartic, mean_rho
from .series import FrobenianMultiplicative

CACHE_ENV_VAR = "QTWIST_CACHE_DIR"


def census_cache_dir(cache_dir: str | os.PathLike | None = None) -> Path:
    """Directory for cached root censuses (env override, else ~/.cache)."""
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "quartic-twists"


def _census_key(f: Quartic, limit: int) -> str:
    tag = f"{f.a3},{f.a2},{f.a1},{f.a0}|{limit}".encode()
    return hashlib.sha256(tag).hexdigest()[:20]


def cached_root_census(
    f: Quartic,
    limit: int,
    table: PrimeTable | None = None,
    use_cache: bool = True,
    cache_dir: str | os.PathLike | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Root census (primes, flags) with an on-disk .npz cache.

    The cache stores only the flags; primes are regenerated from the sieve.
    A corrupt or mismatched file is ignored and overwritten.
    """
    if table is None or table.limit < limit:
        table = PrimeTable(max(limit, 2))
    path = census_cache_dir(cache_dir) / f"census_{_census_key(f, limit)}.npz"
    primes = table.primes()
    primes = primes[primes <= limit]
    if use_cache and path.is_file():
        try:
            with np.load(path) as data:
                coeffs = data["coeffs"]
                if (
                    list(coeffs) == [f.a3, f.a2, f.a1, f.a0]
                    and int(data["limit"]) == limit
                    and data["flags"].shape == primes.shape
                ):
                    return primes, data["flags"].astype(bool)
        except (OSError, ValueError, KeyError):
            pass
    census_primes, flags = f.root_census(limit, table)
    assert census_primes.shape == primes.shape
    if use_cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npz")
        np.savez_compressed(
            tmp,
            coeffs=np.array([f.a3, f.a2, f.a1, f.a0], dtype=np.int64),
            limit=np.int64(limit),
            flags=flags,
        )
        os.replace(tmp, path)
    return primes, flags


# ---------------------------------------------------------------------------
# vectorized counting


def _bundle_sieve_data(bundle: CriterionBundle):
    """Precompute the numpy lookup tables the range sieve needs."""
    lut_odd = np.zeros(8, dtype=bool)
    for c in bundle.mod8.odd_allowed:
        lut_odd[c] = True
    lut_half = np.zeros(8, dtype=bool)
    for c in bundle.mod8.half_allowed:
        lut_half[c] = True
    odd_rules = []
    for t in bundle.odd_tables:
        jlut = np.array([jacobi(x, t.p) for x in range(t.p)], dtype=np.int8)
        odd_rules.append((t.p, t.coprime_rule, t.dividing_rule, jlut))
    return lut_odd, lut_half, odd_rules


def _count_range(
    lo: int,
    hi: int,
    sq_primes: np.ndarray,
    rootless_good: np.ndarray,
    lut_odd: np.ndarray,
    lut_half: np.ndarray,
    odd_rules,
) -> np.ndarray:
    """Boolean mask over q in [lo, hi): q square-free and criterion-allowed."""
    n = hi - lo
    ok = np.ones(n, dtype=bool)
    # square-free: strike multiples of p^2
    for p in sq_primes.tolist():
        p2 = p * p
        if p2 >= hi:
            break
        start = ((lo + p2 - 1) // p2) * p2
        if start < hi:
            ok[start - lo :: p2] = False
    # good primes without a root of f may not divide q
    for p in rootless_good.tolist():
        start = ((lo + p - 1) // p) * p
        if start < hi:
            ok[start - lo :: p] = False
    qv = np.arange(lo, hi, dtype=np.int64)
    # mod-8 condition at 2 (on q when odd, on q/2 when even)
    odd = (qv & 1) == 1
    allowed = np.empty(n, dtype=bool)
    allowed[odd] = lut_odd[qv[odd] & 7]
    even = ~odd
    allowed[even] = lut_half[(qv[even] >> 1) & 7]
    ok &= allowed
    # per odd bad prime: coprime rule away from p, dividing rule on multiples
    for p, cop_rule, div_rule, jlut in odd_rules:
        resid = qv % p
        div = resid == 0
        if cop_rule == COPRIME_RESIDUE_ONLY:
            cok = jlut[resid] == 1
        else:
            cok = np.ones(n, dtype=bool)
        if div_rule == DIVIDING_FORBIDDEN:
            dok = np.zeros(n, dtype=bool)
        elif div_rule == DIVIDING_COFACTOR_RESIDUE:
            dok = jlut[(qv // p) % p] == 1
        elif div_rule == DIVIDING_COFACTOR_NONRESIDUE:
            dok = jlut[(qv // p) % p] == -1
        else:
            dok = np.ones(n, dtype=bool)
        ok &= np.where(div, dok, cok)
    return ok


def _split_ranges(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split [lo, hi) into <= parts contiguous non-empty ranges."""
    n = hi - lo
    parts = max(1, min(parts, n))
    step = n // parts
    bounds = [lo + i * step for i in range(parts)] + [hi]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def count_L(
    bundle: CriterionBundle,
    xmax: int,
    checkpoints: list[int] | None = None,
    table: PrimeTable | None = None,
    workers: int = 1,
    use_cache: bool = True,
    cache_dir: str | os.PathLike | None = None,
) -> list[tuple[int, int]]:
    """Exact (x, L(x)) at each checkpoint, by partitioned sieving.

    The result is independent of ``workers``: ranges are sieved separately
    and merged in ascending order.
    """
    if xmax < 1:
        raise ValueError("xmax must be >= 1")
    checkpoints = sorted(set(checkpoints)) if checkpoints else [xmax]
    if checkpoints[0] < 1 or checkpoints[-1] > xmax:
        raise ValueError("checkpoints must lie in [1, xmax]")
    if table is None or table.limit < xmax:
        table = PrimeTable(max(xmax, 2))
    primes, flags = cached_root_census(bundle.f, xmax, table, use_cache, cache_dir)
    bad = np.array(sorted(bundle.f.bad_primes()), dtype=primes.dtype)
    good = ~np.isin(primes, bad)
    rootless_good = primes[good & ~flags].astype(np.int64)
    sq_primes = primes[primes.astype(np.int64) ** 2 <= xmax].astype(np.int64)
    lut_odd, lut_half, odd_rules = _bundle_sieve_data(bundle)

    ranges = _split_ranges(1, xmax + 1, workers)
    args = [
        (lo, hi, sq_primes, rootless_good, lut_odd, lut_half, odd_rules)
        for lo, hi in ranges
    ]
    if len(ranges) == 1:
        masks = [_count_range(*args[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            masks = list(pool.map(lambda a: _count_range(*a), args))
    full = np.concatenate(masks)  # index i <-> q = 1 + i
    csum = np.cumsum(full, dtype=np.int64)
    return [(cp, int(csum[cp - 1])) for cp in checkpoints]


def count_L_reference(
    bundle: CriterionBundle,
    xmax: int,
    checkpoints: list[int] | None = None,
    table: PrimeTable | None = None,
) -> list[tuple[int, int]]:
    """Same count, one q at a time through the criterion (cross-check)."""
    if xmax < 1:
        raise ValueError("xmax must be >= 1")
    checkpoints = sorted(set(checkpoints)) if checkpoints else [xmax]
    if table is None or table.limit < xmax:
        table = PrimeTable(max(xmax, 2))
    primes, flags = bundle.f.root_census(xmax, table)
    flag_map = dict(zip(primes.tolist(), flags.tolist()))
    lookup = lambda p: bool(flag_map[p])  # noqa: E731
    out = []
    it = iter(checkpoints)
    cp = next(it)
    total = 0
    for q in range(1, xmax + 1):
        fac = table.factor(q) if q > 1 else []
        if all(e == 1 for _, e in fac) and is_ELS_criterion(bundle, q, lookup):
            total += 1
        while cp == q:
            out.append((cp, total))
            cp = next(it, None)
        if cp is None:
            break
    return out


# ---------------------------------------------------------------------------
# asymptotic fit


@dataclass(frozen=True)
class FitPoint:
    x: int
    count: int
    cx: float  # L(x) (ln x)^m / x


@dataclass(frozen=True)
class FitReport:
    group: GaloisType
    m: Fraction
    points: tuple[FitPoint, ...]
    cf_estimate: float  # c(x) at the largest checkpoint
    trend: float | None  # relative change between the last two checkpoints


def fit_cf(rows: list[tuple[int, int]], group: GaloisType) -> FitReport:
    """Rescale checkpoint counts by x / (ln x)^m; m = 1 - mean of rho over G."""
    if not rows:
        raise ValueError("need at least one (x, count) row")
    m = 1 - mean_rho(group)
    pts = []
    for x, count in sorted(rows):
        if x < 2:
            raise ValueError("fit needs x >= 2 so that ln x > 0")
        cx = count * math.log(x) ** float(m) / x
        pts.append(FitPoint(x, count, cx))
    trend = None
    if len(pts) >= 2 and pts[-2].cx > 0:
        trend = abs(pts[-1].cx - pts[-2].cx) / pts[-2].cx
    return FitReport(group, m, tuple(pts), pts[-1].cx, trend)


def euler_cf_truncated(
    f: Quartic,
    B: int,
    table: PrimeTable | None = None,
) -> float:
    """Truncated Euler-product estimate of the limiting constant.

    (1 / Gamma(m)) * prod_{p <= B} (1 + rho(p)/p) (1 - 1/p)^m, with rho(p)
    taken as 0 at the exceptional primes.  Heuristic companion number for
    ``fit_cf``; convergence in B is slow (power of 1/log B).
    """
    rho = FrobenianMultiplicative(f)
    if table is None or table.limit < B:
        table = PrimeTable(max(B, 2))
    m = float(1 - mean_rho(f.classify_galois()))
    primes, flags = f.root_census(B, table)
    exceptional = rho.exceptional
    log_acc = 0.0
    for p, has_root in zip(primes.tolist(), flags.tolist()):
        rp = 1 if (has_root and p not in exceptional) else 0
        log_acc += math.log1p(rp / p) + m * math.log1p(-1.0 / p)
    return math.exp(log_acc) / gamma_eval(m)


@dataclass(frozen=True)
class DensityReport:
    group: GaloisType
    expected: Fraction
    empirical: Fraction
    bound: int
    error: float
    tolerance: float
    passed: bool


def density_check(
    f: Quartic,
    B: int = 10**6,
    tolerance: float = 0.01,
    table: PrimeTable | None = None,
) -> DensityReport:
    """Compare the prime-average of rho against the exact group mean."""
    from .series import empirical_mean

    group = f.classify_galois()
    expected = mean_rho(group)
    rho = FrobenianMultiplicative(f)
    emp = empirical_mean(rho, (), B, table)
    err = abs(float(emp - expected))
    return DensityReport(group, expected, emp, B, err, tolerance, err <= tolerance)
