"""Coefficient streams, character twists, and filtration identities."""
import random
from fractions import Fraction

import pytest

from quartic_twists.arith import jacobi
from quartic_twists.criterion import build_bundle, is_ELS_criterion
from quartic_twists.quartic import mean_rho
from quartic_twists.series import (
    CharacterMod8,
    FrobenianMultiplicative,
    QuadCharacter,
    Stream,
    chi_value,
    dirichlet_convolve,
    dirichlet_inverse,
    empirical_mean,
    filtration_check_mod8,
    filtration_check_modr,
    F_coefficients,
    rho_coefficients,
    twist_coefficients,
)


class TestCharacters:
    FROZEN = {
        1: {1: 1, 3: 1, 5: 1, 7: 1},
        2: {1: 1, 3: 1, 5: -1, 7: -1},
        3: {1: 1, 3: -1, 5: -1, 7: 1},
        4: {1: 1, 3: -1, 5: 1, 7: -1},
    }

    def test_frozen_table(self):
        for i, row in self.FROZEN.items():
            for n, v in row.items():
                assert chi_value(i, n) == v
                assert chi_value(i, n + 8) == v  # period 8

    def test_even_is_zero(self):
        assert all(chi_value(i, 2 * k) == 0 for i in (1, 2, 3, 4) for k in range(1, 6))

    def test_orthogonality(self):
        for a in (1, 3, 5, 7):
            for b in (1, 3, 5, 7):
                s = sum(chi_value(i, a) * chi_value(i, b) for i in (1, 2, 3, 4))
                assert s == (4 if a == b else 0)

    def test_multiplicative(self):
        for i in (1, 2, 3, 4):
            for a in range(1, 30, 2):
                for b in range(1, 30, 2):
                    assert chi_value(i, a * b) == chi_value(i, a) * chi_value(i, b)

    def test_validation(self):
        with pytest.raises(ValueError):
            chi_value(5, 1)
        with pytest.raises(ValueError):
            CharacterMod8(0)
        with pytest.raises(ValueError):
            QuadCharacter(4)
        with pytest.raises(ValueError):
            QuadCharacter(1)

    def test_quad_character_is_jacobi(self):
        psi = QuadCharacter(229)
        for n in range(1, 60):
            assert psi.value(n) == jacobi(n, 229)


def _random_stream(N: int, seed: int, ensure_unit: bool = True) -> Stream:
    rng = random.Random(seed)
    a = [0] + [rng.randint(-3, 3) for _ in range(N)]
    if ensure_unit and a[1] == 0:
        a[1] = 1
    return Stream(a)


class TestStreamAlgebra:
    def test_one_is_identity(self):
        f = _random_stream(80, 1)
        g = dirichlet_convolve(f, Stream.one(80))
        assert g.a == f.a

    def test_commutative(self):
        f = _random_stream(64, 2)
        g = _random_stream(64, 3)
        assert dirichlet_convolve(f, g).a == dirichlet_convolve(g, f).a

    def test_associative(self):
        f = _random_stream(48, 4)
        g = _random_stream(48, 5)
        h = _random_stream(48, 6)
        lhs = dirichlet_convolve(dirichlet_convolve(f, g), h)
        rhs = dirichlet_convolve(f, dirichlet_convolve(g, h))
        assert lhs.a == rhs.a

    def test_inverse(self):
        f = _random_stream(60, 7)
        inv = dirichlet_inverse(f)
        prod = dirichlet_convolve(f, inv)
        assert prod[1] == 1
        assert all(prod[n] == 0 for n in range(2, 61))

    def test_inverse_requires_unit(self):
        with pytest.raises(ValueError):
            dirichlet_inverse(Stream.zero(10))

    def test_twist_distributes_over_convolution(self):
        """A completely multiplicative twist is a ring homomorphism."""
        f = _random_stream(60, 8)
        g = _random_stream(60, 9)
        for chars in ([CharacterMod8(3)], [QuadCharacter(5)],
                      [CharacterMod8(2), QuadCharacter(3)]):
            lhs = twist_coefficients(dirichlet_convolve(f, g), chars)
            rhs = dirichlet_convolve(
                twist_coefficients(f, chars), twist_coefficients(g, chars)
            )
            assert lhs.a == rhs.a


class TestBaseStream:
    def test_support(self, corpus, table_1e5):
        """Nonzero exactly on square-free products of rooted good primes."""
        N = 600
        for f in corpus.values():
            rho = FrobenianMultiplicative(f)
            g = rho_coefficients(rho, N, table_1e5)
            assert g[1] == 1
            for n in range(2, N + 1):
                fac = table_1e5.factor(n)
                want = 1
                if any(e > 1 for _, e in fac):
                    want = 0
                elif any(rho.prime_value(p) == 0 for p, _ in fac):
                    want = 0
                assert g[n] == want, (str(f), n)

    def test_exceptional_set(self, corpus):
        rho = FrobenianMultiplicative(corpus["S4"])
        assert rho.exceptional == frozenset({2, 229})
        assert rho(2) == 0 and rho(229) == 0
        assert rho(7) == 0       # x^4 - x + 1 has no root mod 7
        assert rho(3) == 1       # root at x = 2: 16 - 2 + 1 = 15

    def test_prime_value_matches_roots(self, corpus, table_1e5):
        f = corpus["S4"]
        rho = FrobenianMultiplicative(f)
        for p in (p for p in table_1e5.primes().tolist() if p <= 200):
            brute = any((x**4 - x + 1) % p == 0 for x in range(p))
            want = 0 if p in rho.exceptional else int(brute)
            assert rho.prime_value(p) == want


class TestSeriesIdentity:
    def test_F_equals_indicator(self, corpus, table_1e5):
        N = 2000
        for name, f in corpus.items():
            b = build_bundle(f)
            F = F_coefficients(b, N, table_1e5)
            for q in range(1, N + 1):
                sf = all(e == 1 for _, e in table_1e5.factor(q)) if q > 1 else True
                want = 1 if (sf and is_ELS_criterion(b, q)) else 0
                assert F[q] == want, (name, q, F[q])

    def test_S4_three_term_shape(self, corpus, table_1e5):
        """F = g + (1/2) 229^{-s} g + (1/2) 229^{-s} g^{psi_229}, termwise."""
        f = corpus["S4"]
        b = build_bundle(f)
        N = 3000
        F = F_coefficients(b, N, table_1e5)
        g = rho_coefficients(FrobenianMultiplicative(f), N, table_1e5)
        gpsi = twist_coefficients(g, [QuadCharacter(229)])
        for n in range(1, N + 1):
            want = Fraction(g[n])
            if n % 229 == 0:
                m = n // 229
                want += Fraction(1, 2) * (g[m] + gpsi[m])
            assert F[n] == want, n

    def test_values_are_zero_or_one(self, corpus, table_1e5):
        for f in corpus.values():
            F = F_coefficients(build_bundle(f), 1500, table_1e5)
            assert set(F.a[1:]) <= {0, 1, Fraction(0), Fraction(1)}


class TestFiltration:
    def test_mod8_all_classes(self, corpus, table_1e5):
        g = rho_coefficients(FrobenianMultiplicative(corpus["S4"]), 4000, table_1e5)
        for c in (1, 3, 5, 7):
            assert filtration_check_mod8(g, c)

    def test_mod8_rejects_even_class(self, corpus, table_1e5):
        g = rho_coefficients(FrobenianMultiplicative(corpus["S4"]), 100, table_1e5)
        with pytest.raises(ValueError):
            filtration_check_mod8(g, 2)

    def test_modr_both_signs(self, corpus, table_1e5):
        for name, r in (("S4", 229), ("C4", 5), ("A4", 3)):
            g = rho_coefficients(
                FrobenianMultiplicative(corpus[name]), 4000, table_1e5
            )
            assert filtration_check_modr(g, r, 1)
            assert filtration_check_modr(g, r, -1)

    def test_modr_sign_validation(self, corpus, table_1e5):
        g = rho_coefficients(FrobenianMultiplicative(corpus["S4"]), 50, table_1e5)
        with pytest.raises(ValueError):
            filtration_check_modr(g, 229, 0)

    def test_holds_on_arbitrary_streams(self):
        """The quarter- and half-sum identities are unconditional."""
        s = _random_stream(400, 11, ensure_unit=False)
        assert all(filtration_check_mod8(s, c) for c in (1, 3, 5, 7))
        assert filtration_check_modr(s, 7, 1) and filtration_check_modr(s, 7, -1)


class TestEmpiricalMean:
    def test_untwisted_mean_near_density(self, corpus, table_1e5):
        for name, f in corpus.items():
            rho = FrobenianMultiplicative(f)
            m = empirical_mean(rho, (), 10**5, table_1e5)
            assert isinstance(m, Fraction)
            target = mean_rho(f.classify_galois())
            assert abs(m - target) <= Fraction(1, 50), (name, float(m))

    def test_twisted_means_small(self, corpus, table_1e5):
        """Character twists knock the prime-average down toward zero."""
        f = corpus["S4"]
        rho = FrobenianMultiplicative(f)
        base = empirical_mean(rho, (), 10**5, table_1e5)
        for chars in ([CharacterMod8(2)], [QuadCharacter(229)],
                      [CharacterMod8(3), QuadCharacter(229)]):
            tw = empirical_mean(rho, chars, 10**5, table_1e5)
            assert abs(tw) < base / 4

    def test_no_primes_raises(self, corpus):
        rho = FrobenianMultiplicative(corpus["V4"])
        with pytest.raises(ValueError):
            empirical_mean(rho, (), 2)
