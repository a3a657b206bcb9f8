"""Exact integer primitives used on the trusted verification path.

Everything here works on Python ints; there is no floating point anywhere.
Multiplications, additions and subtractions that belong to a hand-checkable
transcript go through a :class:`CostMeter` so that the verifier can report how
much work a human would face.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

HARD_FACTOR = 10**3
HARD_PRODUCT = 10**10
TRIAL_DIVISION_LIMIT = 2**64


# ---------------------------------------------------------------------------
# cost accounting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostTally:
    hard: int = 0
    easy: int = 0
    trivial: int = 0

    def __add__(self, other: "CostTally") -> "CostTally":
        return CostTally(self.hard + other.hard, self.easy + other.easy, self.trivial + other.trivial)

    @property
    def total(self) -> int:
        return self.hard + self.easy + self.trivial

    def to_dict(self) -> dict:
        return {"hard": self.hard, "easy": self.easy, "trivial": self.trivial}


def classify_mul(a: int, b: int) -> str:
    """Return ``"hard"`` or ``"easy"`` for the product ``a*b``."""
    if abs(a) >= HARD_FACTOR and abs(b) >= HARD_FACTOR and abs(a * b) >= HARD_PRODUCT:
        return "hard"
    return "easy"


def classify_add(a: int, b: int) -> str:
    """Additions and subtractions with a single-digit member are trivial."""
    if abs(a) <= 9 or abs(b) <= 9:
        return "trivial"
    return "easy"


class CostMeter:
    """Mutable accumulator; performs the arithmetic and tallies it."""

    __slots__ = ("hard", "easy", "trivial")

    def __init__(self) -> None:
        self.hard = 0
        self.easy = 0
        self.trivial = 0

    def _bump(self, kind: str) -> None:
        setattr(self, kind, getattr(self, kind) + 1)

    def mul(self, a: int, b: int) -> int:
        self._bump(classify_mul(a, b))
        return a * b

    def add(self, a: int, b: int) -> int:
        self._bump(classify_add(a, b))
        return a + b

    def sub(self, a: int, b: int) -> int:
        self._bump(classify_add(a, b))
        return a - b

    def tally(self) -> CostTally:
        return CostTally(self.hard, self.easy, self.trivial)


# ---------------------------------------------------------------------------
# binary ladder
# ---------------------------------------------------------------------------


def binary_digits(n: int) -> List[int]:
    """Bits of ``n``, most significant first."""
    if n < 1:
        raise ValueError("binary_digits needs n >= 1 (the leading bit must be 1)")
    return [int(ch) for ch in bin(n)[2:]]


@dataclass(frozen=True)
class LadderStep:
    """One line of a square-and-multiply transcript.

    ``prefix`` is the exponent read so far (``2*previous_prefix + bit``);
    the residue identity reads ``base**bit * previous**2 == quotient*modulus + residue``.
    """

    bit_index: int
    bit: int
    prefix: int
    previous: int
    quotient: int
    residue: int


@dataclass(frozen=True)
class LadderTrace:
    base: int
    modulus: int
    steps: Tuple[LadderStep, ...]

    @property
    def reconstructed_exponent(self) -> int:
        n = 0
        for st in self.steps:
            n = 2 * n + st.bit
        return n

    @property
    def reconstructed_binary(self) -> str:
        return "".join(str(st.bit) for st in self.steps)

    @property
    def result(self) -> int:
        return self.steps[-1].residue

    def check(self) -> bool:
        """Re-verify every identity from the trace alone."""
        prefix, prev = 0, 1 % self.modulus
        for st in self.steps:
            if st.bit not in (0, 1) or st.previous != prev:
                return False
            prefix = 2 * prefix + st.bit
            if st.prefix != prefix:
                return False
            if not 0 <= st.residue < self.modulus:
                return False
            if self.base**st.bit * prev * prev != st.quotient * self.modulus + st.residue:
                return False
            prev = st.residue
        return True


def pow_mod_traced(
    base: int, exponent: int, modulus: int, meter: Optional[CostMeter] = None
) -> Tuple[int, LadderTrace, CostTally]:
    """Left-to-right binary exponentiation with a full transcript.

    Starting from ``h = 1`` each bit ``g`` produces ``h <- base**g * h**2``,
    reduced to its canonical residue. Every product and the check
    ``value == quotient*modulus + residue`` are metered.
    """
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    own = CostMeter() if meter is None else meter
    before = own.tally()
    bits = binary_digits(exponent)
    m = len(bits) - 1
    b = base % modulus
    prefix, h = 0, 1
    steps = []
    for k, bit in enumerate(bits):
        prefix = own.mul(2, prefix)
        if bit:
            prefix = own.add(prefix, 1)
        value = own.mul(h, h)
        if bit:
            value = own.mul(b, value)
        q, r = divmod(value, modulus)
        if q:
            check = own.add(own.mul(q, modulus), r)
            if check != value:  # pragma: no cover - divmod is exact
                raise ArithmeticError("ladder identity failed")
        steps.append(LadderStep(m - k, bit, prefix, h, q, r))
        h = r
    trace = LadderTrace(b, modulus, tuple(steps))
    after = own.tally()
    spent = CostTally(after.hard - before.hard, after.easy - before.easy, after.trivial - before.trivial)
    return h, trace, spent


# ---------------------------------------------------------------------------
# gcd, square roots, small primes
# ---------------------------------------------------------------------------


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``u*a + v*b == g == gcd(a, b) >= 1``."""
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    if old_u * a + old_v * b != old_r or a % old_r or b % old_r:
        raise ArithmeticError("Bezout identity failed")  # pragma: no cover
    return old_r, old_u, old_v


def isqrt(n: int) -> int:
    """Floor of the square root, by integer Newton iteration."""
    if n < 0:
        raise ValueError("isqrt of a negative number")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 1) // 2)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            break
        x = y
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def sieve(limit: int) -> List[int]:
    """Primes ``<= limit`` (Eratosthenes)."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


@dataclass(frozen=True)
class DivisionWitness:
    divisor: int
    quotient: int
    remainder: int


def trial_division_prime(n: int) -> Tuple[bool, List[DivisionWitness]]:
    """Decide primality of ``2 <= n < 2**64`` by dividing by every prime ``t <= isqrt(n)``.

    The witness list has one ``n == quotient*t + remainder`` record per tested
    prime, ascending, stopping at the first zero remainder.
    """
    if n < 2:
        raise ValueError("trial_division_prime needs n >= 2")
    if n >= TRIAL_DIVISION_LIMIT:
        raise ValueError("n >= 2**64: use a Pocklington certificate instead")
    witnesses = []
    for t in sieve(isqrt(n)):
        q, r = divmod(n, t)
        witnesses.append(DivisionWitness(t, q, r))
        if r == 0:
            return False, witnesses
    return True, witnesses


def is_prime_small(n: int) -> bool:
    """Convenience wrapper; ``False`` for n < 2."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    t = 3
    while t * t <= n:
        if n % t == 0:
            return False
        t += 2
    return True


def factorize_small(n: int) -> List[Tuple[int, int]]:
    """Trial-division factorization ``[(p, k), ...]``, for desk-scale inputs only."""
    if n < 1:
        raise ValueError("factorize_small needs n >= 1")
    out: List[Tuple[int, int]] = []
    t = 2
    while t * t <= n:
        if n % t == 0:
            k = 0
            while n % t == 0:
                n //= t
                k += 1
            out.append((t, k))
        t += 1 if t == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out
