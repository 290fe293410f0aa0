"""Number-theory helpers: exact values, brute-force cross-checks, file format."""
import math
import struct

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_twists.arith import (
    SPF_LIMIT_CAP,
    SPF_MAGIC,
    PrimeTable,
    gamma_eval,
    is_padic_square,
    jacobi,
    squarefree_factor,
    unit_part,
    valuation,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def legendre_brute(a: int, p: int) -> int:
    """Euler criterion for odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


class TestJacobi:
    def test_small_table(self):
        # (a/15) for a = 1..14: classical values
        want = [1, 1, 0, 1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1]
        assert [jacobi(a, 15) for a in range(1, 15)] == want

    def test_rejects_even_or_nonpositive_modulus(self):
        with pytest.raises(ValueError):
            jacobi(3, 4)
        with pytest.raises(ValueError):
            jacobi(3, -5)
        with pytest.raises(ValueError):
            jacobi(3, 0)

    def test_trivial_modulus(self):
        assert jacobi(0, 1) == 1
        assert jacobi(12345, 1) == 1

    @given(st.integers(-10**9, 10**9), st.sampled_from([p for p in SMALL_PRIMES if p > 2]))
    def test_matches_euler_criterion_at_primes(self, a, p):
        assert jacobi(a, p) == legendre_brute(a, p)

    @given(st.integers(-10**6, 10**6), st.integers(1, 2000))
    def test_multiplicative_in_modulus(self, a, n):
        n = 2 * n + 1  # odd 3..4001
        fac = squarefree_factor(n)
        if fac is None:  # not square-free: factor with multiplicity instead
            prod = 1
            m = n
            d = 3
            fac = []
            while m > 1:
                while m % d:
                    d += 2
                m //= d
                fac.append(d)
        else:
            prod = 1
        for p in fac:
            prod *= legendre_brute(a, p)
        assert jacobi(a, n) == prod

    @given(st.integers(-500, 500), st.integers(-500, 500), st.integers(1, 500))
    def test_multiplicative_in_numerator(self, a, b, n):
        n = 2 * n + 1
        assert jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n)


class TestValuation:
    def test_basic(self):
        assert valuation(24, 2) == 3
        assert valuation(24, 3) == 1
        assert valuation(-24, 2) == 3
        assert valuation(7, 2) == 0
        assert unit_part(24, 2) == 3
        assert unit_part(-24, 2) == -3

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            valuation(0, 2)

    @given(st.integers(-10**9, 10**9).filter(lambda n: n != 0), st.sampled_from(SMALL_PRIMES))
    def test_defining_property(self, n, p):
        v = valuation(n, p)
        assert n % p**v == 0 and (n // p**v) % p != 0


class TestPadicSquare:
    def test_reference_values(self):
        assert is_padic_square(1, 2)
        assert is_padic_square(4, 2)
        assert is_padic_square(9, 2)  # 9 = 1 mod 8
        assert not is_padic_square(2, 2)
        assert not is_padic_square(3, 2)
        assert not is_padic_square(-1, 2)  # -1 = 7 mod 8
        assert is_padic_square(-1, 5)  # (-1/5) = 1
        assert not is_padic_square(-1, 3)
        assert is_padic_square(2, 7)  # (2/7) = 1

    @given(
        st.sampled_from([2, 3, 5, 7]),
        st.integers(0, 3),
        st.integers(1, 400),
    )
    @settings(max_examples=200)
    def test_against_exhaustive_modulus(self, p, e, u):
        if u % p == 0:
            u += 1  # force unit part
        n = p**e * u
        # squares in Z_p are decided by the residue mod p^(e+3)
        mod = p ** (e + 3)
        squares = {(y * y) % mod for y in range(mod)}
        assert is_padic_square(n, p) == (n % mod in squares)


class TestSquarefreeFactor:
    def test_values(self):
        assert squarefree_factor(1) == []
        assert squarefree_factor(30) == [2, 3, 5]
        assert squarefree_factor(12) is None
        assert squarefree_factor(49) is None
        assert squarefree_factor(229) == [229]

    def test_table_and_trial_agree(self, table_1e5):
        for n in range(1, 3000):
            assert squarefree_factor(n) == squarefree_factor(n, table_1e5)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            squarefree_factor(0)


class TestPrimeTable:
    def test_factor_reconstructs(self, table_1e5):
        for n in list(range(1, 500)) + [99991, 99856, 65536]:
            prod = 1
            for p, e in table_1e5.factor(n):
                assert table_1e5.is_prime(p)
                prod *= p**e
            assert prod == n

    def test_primes_against_sieve(self, table_1e5):
        ps = table_1e5.primes()
        assert ps[0] == 2 and ps[-1] == 99991
        assert len(ps) == 9592  # pi(10^5)
        # spot-check primality with sympy
        import sympy

        for p in ps[::997]:
            assert sympy.isprime(int(p))

    def test_limit_validation(self):
        with pytest.raises(ValueError):
            PrimeTable(1)
        with pytest.raises(ValueError):
            PrimeTable(SPF_LIMIT_CAP + 1)

    def test_save_load_roundtrip(self, tmp_path):
        t = PrimeTable(5000)
        path = tmp_path / "spf.bin"
        t.save(path)
        raw = path.read_bytes()
        assert raw[:8] == SPF_MAGIC
        (limit,) = struct.unpack("<Q", raw[8:16])
        assert limit == 5000
        assert len(raw) == 16 + 4 * (5000 - 1)
        t2 = PrimeTable.load(path)
        assert t2.limit == t.limit
        assert np.array_equal(t2.spf, t.spf)
        assert t2.factor(4998) == t.factor(4998)

    def test_load_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOTME!!!" + struct.pack("<Q", 100) + b"\0" * 396)
        with pytest.raises(ValueError, match="magic"):
            PrimeTable.load(path)

    def test_load_rejects_truncation(self, tmp_path):
        t = PrimeTable(100)
        path = tmp_path / "trunc.bin"
        t.save(path)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ValueError, match="bytes"):
            PrimeTable.load(path)

    def test_load_rejects_silly_limit(self, tmp_path):
        path = tmp_path / "limit.bin"
        path.write_bytes(SPF_MAGIC + struct.pack("<Q", 1) + b"")
        with pytest.raises(ValueError, match="limit"):
            PrimeTable.load(path)


class TestGamma:
    # high-precision reference values (30 significant digits)
    REFERENCE = {
        0.25: 3.62560990822190831193068515587,
        0.375: 2.37043618441660090864647350418,
        0.625: 1.43451884809055677563601973946,
        0.75: 1.22541670246517764512909830336,
        1.0: 1.0,
        1.5: 0.886226925452758013649083741671,
        2.0: 1.0,
    }

    def test_reference_values(self):
        for z, want in self.REFERENCE.items():
            assert gamma_eval(z) == pytest.approx(want, rel=1e-12)

    def test_domain_enforced(self):
        for z in (0.0, -1.0, 2.5):
            with pytest.raises(ValueError):
                gamma_eval(z)

    @given(st.floats(0.01, 2.0, allow_nan=False))
    @settings(max_examples=300)
    def test_against_mpmath(self, z):
        assert gamma_eval(z) == pytest.approx(float(mpmath.gamma(z)), rel=5e-12)

    def test_functional_equation(self):
        # Gamma(z+1) = z Gamma(z) across the reflection boundary
        for z in (0.1, 0.3, 0.49, 0.51, 0.9):
            assert gamma_eval(z + 1.0) == pytest.approx(z * gamma_eval(z), rel=1e-12)
