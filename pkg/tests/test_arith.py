import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellcert.arith import (
    CostMeter,
    CostTally,
    binary_digits,
    classify_add,
    classify_mul,
    ext_gcd,
    factorize_small,
    is_prime_small,
    is_square,
    isqrt,
    pow_mod_traced,
    sieve,
    trial_division_prime,
)

D = 39028039587479


class TestBinaryDigits:
    def test_one(self):
        assert binary_digits(1) == [1]

    def test_known_strings(self):
        assert "".join(map(str, binary_digits(D - 1))) == "1000110111111011101100011011111001011010010110"
        assert "".join(map(str, binary_digits(10790168534))) == "1010000011001001001110011111010110"

    @pytest.mark.parametrize("n", [0, -3])
    def test_rejects_nonpositive(self, n):
        with pytest.raises(ValueError):
            binary_digits(n)

    def test_recurrence_regenerates_random_inputs(self):
        rng = random.Random(5)
        for _ in range(10_000):
            n = rng.randrange(1, 2**256)
            bits = binary_digits(n)
            assert bits[0] == 1
            acc = 0
            for b in bits:
                acc = 2 * acc + b
            assert acc == n


class TestPowModTraced:
    def test_fermat_for_d(self):
        r, trace, cost = pow_mod_traced(2, D - 1, D)
        assert r == 1
        assert len(trace.steps) == 46
        assert trace.check()
        assert trace.reconstructed_exponent == D - 1
        assert 60 <= cost.hard <= 90

    def test_early_steps(self):
        _, trace, _ = pow_mod_traced(2, D - 1, D)
        st5 = trace.steps[4]
        assert (st5.prefix, st5.bit, st5.previous, st5.residue) == (17, 1, 256, 131072)
        assert [s.prefix for s in trace.steps[:6]] == [1, 2, 4, 8, 17, 35]

    def test_subgroup_residues(self):
        assert pow_mod_traced(2, (D - 1) // 3617, D)[0] == 10285064380914
        assert pow_mod_traced(2, (D - 1) // 4021, D)[0] == 15901499388071

    def test_single_bit(self):
        r, trace, _ = pow_mod_traced(12345, 1, 1000)
        assert r == 345 and len(trace.steps) == 1

    def test_bit_index_counts_down(self):
        _, trace, _ = pow_mod_traced(3, 0b1011, 101)
        assert [s.bit_index for s in trace.steps] == [3, 2, 1, 0]

    def test_rejects_small_modulus(self):
        with pytest.raises(ValueError):
            pow_mod_traced(2, 5, 1)

    def test_tampered_trace_fails_check(self):
        import dataclasses

        _, trace, _ = pow_mod_traced(2, 1000, 997)
        steps = list(trace.steps)
        steps[3] = dataclasses.replace(steps[3], quotient=steps[3].quotient + 1)
        assert not dataclasses.replace(trace, steps=tuple(steps)).check()

    def test_brute_force_agreement(self):
        rng = random.Random(11)
        for _ in range(300):
            m = rng.randint(2, 500)
            b = rng.randint(-1000, 1000)
            e = rng.randint(1, 2**16)
            acc = 1
            for _ in range(e):
                acc = acc * b % m
            assert pow_mod_traced(b, e, m)[0] == acc

    @given(st.integers(-10**30, 10**30), st.integers(1, 10**40), st.integers(2, 10**20))
    @settings(max_examples=200)
    def test_matches_builtin_pow(self, b, e, m):
        r, trace, _ = pow_mod_traced(b, e, m)
        assert r == pow(b, e, m)
        assert trace.check()


class TestCostModel:
    def test_boundaries(self):
        assert classify_mul(10**3, 10**7) == "hard"
        assert classify_mul(999, 10**20) == "easy"
        assert classify_mul(10**3, 10**6) == "easy"
        assert classify_mul(-(10**5), -(10**5)) == "hard"

    def test_additions(self):
        assert classify_add(7, 10**12) == "trivial"
        assert classify_add(-9, 10**12) == "trivial"
        assert classify_add(10, 10**12) == "easy"

    def test_meter_counts(self):
        m = CostMeter()
        assert m.mul(10**5, 10**6) == 10**11
        assert m.add(1, 2) == 3
        assert m.sub(100, 50) == 50
        assert m.tally() == CostTally(1, 1, 1)

    def test_tally_arithmetic(self):
        t = CostTally(1, 2, 3) + CostTally(4, 5, 6)
        assert t == CostTally(5, 7, 9) and t.total == 21
        assert t.to_dict() == {"hard": 5, "easy": 7, "trivial": 9}

    def test_empty_meter(self):
        assert CostMeter().tally() == CostTally(0, 0, 0)


class TestExtGcd:
    def test_witness_residue(self):
        g, u, v = ext_gcd(10285064380913, D)
        assert g == 1 and u * 10285064380913 + v * D == 1

    def test_zero(self):
        assert ext_gcd(0, 7) == (7, 0, 1)

    def test_small(self):
        g, u, v = ext_gcd(48, 18)
        assert g == 6 and 48 * u + 18 * v == 6

    def test_both_zero(self):
        with pytest.raises(ValueError):
            ext_gcd(0, 0)

    @given(st.integers(-10**40, 10**40), st.integers(-10**40, 10**40))
    def test_bezout(self, a, b):
        if a == 0 and b == 0:
            return
        import math

        g, u, v = ext_gcd(a, b)
        assert g == math.gcd(a, b) and u * a + v * b == g


class TestIsqrt:
    @pytest.mark.parametrize("n,r", [(0, 0), (1, 1), (15, 3), (16, 4), (17, 4)])
    def test_small(self, n, r):
        assert isqrt(n) == r

    def test_d(self):
        s = isqrt(D)
        assert s * s <= D < (s + 1) ** 2

    def test_negative(self):
        with pytest.raises(ValueError):
            isqrt(-1)

    @given(st.integers(0, 10**80))
    def test_bracket(self, n):
        s = isqrt(n)
        assert s * s <= n < (s + 1) ** 2

    def test_monotone(self):
        prev = 0
        for n in range(0, 20_000):
            cur = isqrt(n)
            assert prev <= cur
            prev = cur

    def test_is_square(self):
        assert is_square(144) and not is_square(145) and not is_square(-4)


class TestTrialDivision:
    def test_p(self):
        ok, wit = trial_division_prime(3617)
        assert ok
        assert any((w.divisor, w.quotient, w.remainder) == (59, 61, 18) for w in wit)
        assert (wit[0].divisor, wit[0].quotient, wit[0].remainder) == (2, 1808, 1)
        assert [w.divisor for w in wit] == sieve(60)

    def test_q(self):
        ok, wit = trial_division_prime(4021)
        assert ok and any((w.divisor, w.quotient, w.remainder) == (61, 65, 56) for w in wit)

    def test_composite(self):
        ok, wit = trial_division_prime(4)
        assert not ok and wit[-1].remainder == 0

    def test_limits(self):
        with pytest.raises(ValueError):
            trial_division_prime(1)
        with pytest.raises(ValueError):
            trial_division_prime(2**64)

    def test_agrees_with_sieve(self):
        primes = set(sieve(5000))
        for n in range(2, 5001):
            assert trial_division_prime(n)[0] == (n in primes) == is_prime_small(n)

    def test_factorize(self):
        assert factorize_small(360) == [(2, 3), (3, 2), (5, 1)]
        assert factorize_small(1) == []
        with pytest.raises(ValueError):
            factorize_small(0)
