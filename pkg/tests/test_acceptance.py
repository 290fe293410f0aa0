"""Acceptance gate: the package's headline guarantees, one test per claim.

Each test is a single pass/fail line under ``pytest -v``.  Stated runtime
budgets are asserted where the guarantee includes one.  Tolerances are pinned
in the assertions themselves; everything not marked approximate is exact.
"""
import math
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from quartic_twists.arith import PrimeTable
from quartic_twists.counting import count_L, density_check, fit_cf
from quartic_twists.criterion import build_bundle, is_ELS_criterion
from quartic_twists.errors import TripwireError
from quartic_twists.localsolve import is_ELS_direct, is_locally_solvable
from quartic_twists.quartic import GaloisType, Quartic, mean_rho
from quartic_twists.series import (
    F_coefficients,
    FrobenianMultiplicative,
    QuadCharacter,
    filtration_check_mod8,
    filtration_check_modr,
    rho_coefficients,
    twist_coefficients,
)
from quartic_twists.verify import default_corpus, run_suites
from quartic_twists.zeta import verify_all


@pytest.fixture(scope="module")
def table_1e7():
    return PrimeTable(10**7)


F_S4 = Quartic(0, 0, -1, 1)  # x^4 - x + 1


def test_01_twelve_reference_local_facts():
    """H_q = q y^2 = x^4 - x + 1 over Q_229 and Q_2: twelve facts, exact."""
    t0 = time.monotonic()
    solvable_229 = {1: True, 2: True, 229: True, 458: False}
    for q, want in solvable_229.items():
        assert is_locally_solvable(F_S4, q, 229) is want, (q, 229)
    solvable_2 = {1: True, -1: True, 5: True, -5: True,
                  2: False, -2: False, 10: False, -10: False}
    for q, want in solvable_2.items():
        assert is_locally_solvable(F_S4, q, 2) is want, (q, 2)
    assert time.monotonic() - t0 < 10.0


def test_02_criterion_matches_direct_solver_to_2000(corpus, table_1e5):
    """Congruence criterion == direct p-adic search, all square-free q <= 2000,
    for one quartic per Galois group.  Zero tolerance."""
    t0 = time.monotonic()
    for name, f in corpus.items():
        bundle = build_bundle(f)
        for q in range(1, 2001):
            fac = table_1e5.factor(q) if q > 1 else []
            if any(e > 1 for _, e in fac):
                continue
            assert is_ELS_criterion(bundle, q) == is_ELS_direct(f, q), (name, q)
    assert time.monotonic() - t0 < 600.0


def test_03_group_mean_table(corpus):
    """Enumerated fixed-point density per group, and the complementary
    exponent m = 1 - mean, both exact."""
    want_mean = {
        GaloisType.V4: Fraction(1, 4),
        GaloisType.C4: Fraction(1, 4),
        GaloisType.D4: Fraction(3, 8),
        GaloisType.A4: Fraction(3, 4),
        GaloisType.S4: Fraction(5, 8),
    }
    want_m = {
        GaloisType.V4: Fraction(3, 4),
        GaloisType.C4: Fraction(3, 4),
        GaloisType.D4: Fraction(5, 8),
        GaloisType.A4: Fraction(1, 4),
        GaloisType.S4: Fraction(3, 8),
    }
    for g in GaloisType:
        assert mean_rho(g) == want_mean[g], g
        assert 1 - mean_rho(g) == want_m[g], g
    # and the corpus classifies onto all five groups
    assert {f.classify_galois() for f in corpus.values()} == set(GaloisType)


def test_04_three_term_series_identity_1e5(table_1e5):
    """For x^4 - x + 1: the bundle-derived coefficients equal
    g + (1/2) 229^{-s} g + (1/2) 229^{-s} g^{psi_229}, termwise to 10^5."""
    N = 10**5
    bundle = build_bundle(F_S4)
    F = F_coefficients(bundle, N, table_1e5)
    g = rho_coefficients(FrobenianMultiplicative(F_S4), N, table_1e5)
    gpsi = twist_coefficients(g, [QuadCharacter(229)])
    half = Fraction(1, 2)
    for n in range(1, N + 1):
        want = Fraction(g[n])
        if n % 229 == 0:
            m = n // 229
            want += half * g[m] + half * gpsi[m]
        assert F[n] == want, n


def test_05_filtration_identities_1e5(table_1e5):
    """Quarter-sum class picking (all four odd classes mod 8) and half-sum
    symbol splitting (both signs, r = 229 and r = 5), exact to 10^5."""
    N = 10**5
    g = rho_coefficients(FrobenianMultiplicative(F_S4), N, table_1e5)
    for c in (1, 3, 5, 7):
        assert filtration_check_mod8(g, c, N), f"class {c}"
    for r in (229, 5):
        for sign in (1, -1):
            assert filtration_check_modr(g, r, sign, N), (r, sign)


def test_06_zeta_identities_all_cells():
    """Every (group, realizable reduction type) local identity closes with a
    residual free of degree-1 factors."""
    t0 = time.monotonic()
    checks = verify_all()
    assert len(checks) == 17
    for chk in checks:
        assert chk.nice, (chk.group, chk.ftype, str(chk.residual))
        assert chk.residual.exponent(1) == 0
    assert time.monotonic() - t0 < 1.0


def test_07_prime_density_1e6(corpus, table_1e6):
    """Empirical mean of the root indicator over primes to 10^6 within 0.01
    of the exact group mean, per corpus quartic."""
    t0 = time.monotonic()
    for name, f in corpus.items():
        rep = density_check(f, 10**6, 0.01, table_1e6)
        assert rep.passed, (name, rep.error)
    assert time.monotonic() - t0 < 120.0


def test_08_count_growth_to_1e7(corpus, table_1e7):
    """L(x) (ln x)^m / x positive at x in {1e4, 1e5, 1e6, 1e7} with the last
    two checkpoints within 25% of each other, per corpus quartic."""
    t0 = time.monotonic()
    xs = [10**4, 10**5, 10**6, 10**7]
    for name, f in corpus.items():
        bundle = build_bundle(f)
        rows = count_L(bundle, 10**7, xs, table_1e7, workers=4)
        rep = fit_cf(rows, bundle.galois)
        assert all(p.cx > 0 for p in rep.points), name
        assert rep.trend is not None and rep.trend < 0.25, (name, rep.trend)
    assert time.monotonic() - t0 < 900.0


def test_09_no_tripwire_events(corpus, table_1e5):
    """Depth caps, classification cross-checks, and criterion/solver agreement
    stay silent: no tripwire anywhere in a full moderate-scale pipeline pass,
    and no exit-code-3 from the CLI over a twist sweep."""
    try:
        for f in corpus.values():
            f.classify_checked()
        suites = run_suites("all", N=2000, qmax=300, B=10**5, tolerance=0.02)
    except TripwireError as exc:  # pragma: no cover - failure path
        pytest.fail(f"tripwire fired: {type(exc).__name__}: {exc}")
    assert all(s.passed for s in suites)

    # CLI: a sweep of els calls may use exits 0/1 (1 for non-square-free q),
    # never 3
    cmd_base = [sys.executable, "-m", "quartic_twists.cli"]
    for q in (1, 4, 12, 229, 458, 1999):
        proc = subprocess.run(
            cmd_base + ["els", "x^4-x+1", "--q", str(q)],
            capture_output=True, text=True,
        )
        assert proc.returncode in (0, 1), (q, proc.returncode, proc.stderr)
