import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pellcert.quadring import (
    QuadInt,
    QuadResidue,
    claim3_full_product,
    claim3_linear_pass,
    claim4_nonrational_check,
    quad_mul_mod,
    quad_pow_mod,
)

D = 39028039587479


def test_d_mod_3():
    assert D % 3 == 2


class TestModularLaw:
    def test_sqrt_d_squared_mod_3(self):
        x = QuadResidue.make(0, 1, 3, D)
        assert (x * x).pair == (2, 0)
        assert quad_pow_mod(x, 4).pair == (1, 0)

    def test_fourth_and_eighth_powers(self):
        assert quad_pow_mod(QuadResidue.make(1, 1, 3, D), 4).pair == (2, 0)
        assert quad_pow_mod(QuadResidue.make(2, 1, 3, D), 4).pair == (2, 0)
        assert quad_pow_mod(QuadResidue.make(1, 1, 3, D), 8).pair == (1, 0)

    def test_identity(self):
        x = QuadResidue.make(17, 40, 97, 13)
        assert x * QuadResidue.one(97, 13) == x
        assert quad_pow_mod(x, 0) == QuadResidue.one(97, 13)
        assert x**1 == x

    def test_mismatch(self):
        with pytest.raises(ValueError):
            quad_mul_mod(QuadResidue.make(1, 1, 5, 2), QuadResidue.make(1, 1, 7, 2))
        with pytest.raises(ValueError):
            quad_mul_mod(QuadResidue.make(1, 1, 5, 2), QuadResidue.make(1, 1, 5, 3))

    def test_bad_modulus_and_exponent(self):
        with pytest.raises(ValueError):
            QuadResidue.make(1, 1, 1, 2)
        with pytest.raises(ValueError):
            quad_pow_mod(QuadResidue.make(1, 1, 5, 2), -1)

    def test_reduce_matches_exact_product(self):
        rng = random.Random(3)
        for _ in range(500):
            d, m = rng.randint(2, 1000), rng.randint(2, 1000)
            x = QuadInt(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6), d)
            y = QuadInt(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6), d)
            assert (x * y).reduce(m) == x.reduce(m) * y.reduce(m)


class TestQuadInt:
    @given(st.integers(-10**12, 10**12), st.integers(-10**12, 10**12), st.integers(-10**12, 10**12),
           st.integers(-10**12, 10**12), st.integers(2, 10**6))
    def test_norm_multiplicative(self, u1, v1, u2, v2, d):
        x, y = QuadInt(u1, v1, d), QuadInt(u2, v2, d)
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x * y).conj() == x.conj() * y.conj()
        assert (x + y).conj() == x.conj() + y.conj()

    def test_norm(self):
        assert QuadInt(24335, 3588, 46).norm() == 1

    def test_radicand_mismatch(self):
        with pytest.raises(ValueError):
            QuadInt(1, 1, 2) * QuadInt(1, 1, 3)
        with pytest.raises(ValueError):
            QuadInt(1, 1, 2) + QuadInt(1, 1, 3)


class TestLinearPass:
    def test_single_relation(self):
        res, steps = claim3_linear_pass([(D + 5, -3)], D)
        assert res.pair == (5, D - 3) and steps == []

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            claim3_linear_pass([], D)
        with pytest.raises(ValueError):
            claim3_linear_pass([(1, 1)], 1)

    def test_step_identities(self):
        rng = random.Random(8)
        d = 10007
        pairs = [(rng.randint(-10**5, 10**5), rng.randint(1, 10**4)) for _ in range(12)]
        res, steps = claim3_linear_pass(pairs, d)
        for s in steps:
            assert s.u_value == s.u_quotient * d + s.u_residue
            assert s.v_value == s.v_quotient * d + s.v_residue
            assert 0 <= s.u_residue < d and 0 <= s.v_residue < d
        # same as the ring product of (a + b sqrt(d)) modulo d
        acc = QuadResidue.one(d, d)
        for a, b in pairs:
            acc = acc * QuadResidue.make(a, b, d, d)
        assert acc == res

    def test_equivalence_with_full_product(self):
        # (a + sqrt(d))**b == a**(b-1) * (a + b sqrt(d)) (mod d): vanishing agrees
        rng = random.Random(21)
        agree = 0
        while agree < 100:
            d = rng.choice([7, 11, 19, 23, 31, 43, 47, 59, 67, 71])
            pairs = [(rng.randint(1, 3 * d), rng.randint(1, 3 * d)) for _ in range(rng.randint(1, 5))]
            if any(a % d == 0 for a, _ in pairs):
                continue
            lin, _ = claim3_linear_pass(pairs, d)
            full = claim3_full_product(pairs, d)
            assert (lin.v == 0) == (full.v == 0)
            agree += 1

    def test_full_product_empty_exponents(self):
        assert claim3_full_product([(5, 0), (7, 0)], 11).pair == (1, 0)
        assert claim3_full_product([], 11).pair == (1, 0)


class TestClaim4:
    def test_all_zero_exponents(self):
        res, flag = claim4_nonrational_check([(4, 0)], 3, D)
        assert res.pair == (1, 0) and not flag

    def test_rational_product(self):
        d = 46
        # (1 + sqrt(d))(1 - sqrt(d)) = 1 - d is an integer
        acc = QuadResidue.make(1, 1, 5, d) * QuadResidue.make(1, -1, 5, d)
        assert acc.v == 0 and acc.u == (1 - d) % 5
        res, flag = claim4_nonrational_check([(1, 2)], 5, d)
        assert flag == (res.v != 0)

    def test_bad_modulus(self):
        with pytest.raises(ValueError):
            claim4_nonrational_check([(1, 1)], 1, D)


def test_pow_against_brute_force():
    rng = random.Random(1)
    for _ in range(1000):
        m, d = rng.randint(2, 97), rng.randint(2, 50)
        x = QuadResidue.make(rng.randint(-50, 50), rng.randint(-50, 50), m, d)
        n = rng.randint(0, 60)
        acc = QuadResidue.one(m, d)
        for _ in range(n):
            acc = quad_mul_mod(acc, x)
        assert quad_pow_mod(x, n) == acc
