"""Arithmetic in Z[sqrt(d)] and in its quotients Z[sqrt(d)]/m.

Elements are written ``u + v*sqrt(d)``.  Only the maximal order of
``Q(sqrt(d))`` for ``d = 2, 3 (mod 4)`` is handled here; the half-integral
basis for ``d = 1 (mod 4)`` lives in :mod:`pellcert.oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .arith import CostMeter


@dataclass(frozen=True)
class QuadInt:
    u: int
    v: int
    d: int

    def norm(self) -> int:
        return self.u * self.u - self.d * self.v * self.v

    def conj(self) -> "QuadInt":
        return QuadInt(self.u, -self.v, self.d)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        if other.d != self.d:
            raise ValueError("different radicands")
        return QuadInt(self.u * other.u + self.d * self.v * other.v, self.u * other.v + self.v * other.u, self.d)

    def __add__(self, other: "QuadInt") -> "QuadInt":
        if other.d != self.d:
            raise ValueError("different radicands")
        return QuadInt(self.u + other.u, self.v + other.v, self.d)

    def reduce(self, m: int) -> "QuadResidue":
        return QuadResidue.make(self.u, self.v, m, self.d)


@dataclass(frozen=True)
class QuadResidue:
    """``u + v*sqrt(d)`` modulo ``m``; ``u``, ``v`` and ``d_mod_m`` are canonical in ``[0, m)``."""

    u: int
    v: int
    m: int
    d_mod_m: int

    @classmethod
    def make(cls, u: int, v: int, m: int, d: int) -> "QuadResidue":
        if m < 2:
            raise ValueError("modulus must be >= 2")
        return cls(u % m, v % m, m, d % m)

    @classmethod
    def one(cls, m: int, d: int) -> "QuadResidue":
        return cls.make(1, 0, m, d)

    @property
    def pair(self) -> Tuple[int, int]:
        return self.u, self.v

    def __mul__(self, other: "QuadResidue") -> "QuadResidue":
        return quad_mul_mod(self, other)

    def __pow__(self, n: int) -> "QuadResidue":
        return quad_pow_mod(self, n)


def quad_mul_mod(x: QuadResidue, y: QuadResidue) -> QuadResidue:
    if x.m != y.m or x.d_mod_m != y.d_mod_m:
        raise ValueError(f"modulus mismatch: ({x.m}, {x.d_mod_m}) vs ({y.m}, {y.d_mod_m})")
    m = x.m
    return QuadResidue((x.u * y.u + x.d_mod_m * x.v * y.v) % m, (x.u * y.v + x.v * y.u) % m, m, x.d_mod_m)


def quad_pow_mod(x: QuadResidue, n: int) -> QuadResidue:
    """``x**n`` by the left-to-right binary ladder; ``x**0`` is ``(1, 0)``."""
    if n < 0:
        raise ValueError("negative exponent")
    acc = QuadResidue(1 % x.m, 0, x.m, x.d_mod_m)
    if n == 0:
        return acc
    for ch in bin(n)[2:]:
        acc = quad_mul_mod(acc, acc)
        if ch == "1":
            acc = quad_mul_mod(acc, x)
    return acc


# ---------------------------------------------------------------------------
# products of the relation elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearStep:
    """Step ``k`` of the running product ``u_k + v_k*sqrt(d)`` modulo ``d``.

    ``u_value = u_{k-1}*a_k`` and ``v_value = v_{k-1}*a_k + u_{k-1}*b_k``, each
    written as ``quotient*d + residue``.  The ``d*v*b`` cross term is a multiple
    of ``d`` and never formed.
    """

    k: int
    a: int
    b: int
    prev_u: int
    prev_v: int
    u_quotient: int
    u_residue: int
    v_quotient: int
    v_residue: int

    @property
    def u_value(self) -> int:
        return self.prev_u * self.a

    @property
    def v_value(self) -> int:
        return self.prev_v * self.a + self.prev_u * self.b


def claim3_linear_pass(
    relations: Sequence[Tuple[int, int]], d: int, meter: Optional[CostMeter] = None
) -> Tuple[QuadResidue, List[LinearStep]]:
    """Multiply out ``prod (a_i + b_i*sqrt(d))`` modulo ``d``, left to right.

    The first factor enters unreduced; from the second one on each step records
    both coordinates as ``quotient*d + canonical residue``.
    """
    if not relations:
        raise ValueError("need at least one relation")
    if d < 2:
        raise ValueError("d must be >= 2")
    meter = CostMeter() if meter is None else meter
    u, v = relations[0]
    steps: List[LinearStep] = []
    for k, (a, b) in enumerate(relations[1:], start=2):
        uu = meter.mul(u, a)
        vv = meter.add(meter.mul(v, a), meter.mul(u, b))
        uq, ur = divmod(uu, d)
        vq, vr = divmod(vv, d)
        for q, r, val in ((uq, ur, uu), (vq, vr, vv)):
            if q and meter.add(meter.mul(q, d), r) != val:  # pragma: no cover - divmod is exact
                raise ArithmeticError("linear pass identity failed")
        steps.append(LinearStep(k, a, b, u, v, uq, ur, vq, vr))
        u, v = ur, vr
    return QuadResidue.make(u, v, d, d), steps


def claim3_full_product(relations: Sequence[Tuple[int, int]], d: int) -> QuadResidue:
    """``prod (a_i + sqrt(d))**b_i`` modulo ``d``, each power by its own ladder.

    The factors commute, so the order of accumulation does not affect the value.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    acc = QuadResidue.one(d, d)
    for a, b in relations:
        acc = quad_mul_mod(acc, quad_pow_mod(QuadResidue.make(a, 1, d, d), b))
    return acc


def claim4_nonrational_check(relations: Sequence[Tuple[int, int]], m: int, d: int) -> Tuple[QuadResidue, bool]:
    """``prod (a_i + sqrt(d))**b_i`` modulo ``m``; nonrational iff the sqrt(d) part is nonzero mod m.

    A nonzero ``sqrt(d)`` coefficient mod ``m`` means the exact product is not a rational integer.
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    acc = QuadResidue.one(m, d)
    for a, b in relations:
        acc = quad_mul_mod(acc, quad_pow_mod(QuadResidue.make(a, 1, m, d), b))
    return acc, acc.v != 0
