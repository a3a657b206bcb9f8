"""Pocklington-style primality certificates.

A certificate for ``c`` names a fully factored part ``a`` of ``c - 1`` with
``a**2 > c`` and a base ``b``.  If ``b**(c-1) == 1 (mod c)`` and
``gcd(b**((c-1)/p) - 1, c) == 1`` for every prime ``p | a`` then ``c`` is prime.
Only the hypotheses are checked here; every check leaves an exact identity in the
returned evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .arith import (
    CostMeter,
    CostTally,
    DivisionWitness,
    LadderTrace,
    ext_gcd,
    pow_mod_traced,
    trial_division_prime,
)
from .errors import CheckFailed

NOT_PRIME_FACTOR = "NOT_PRIME_FACTOR"
A_SQUARED_TOO_SMALL = "A_SQUARED_TOO_SMALL"
A_NOT_DIVISOR = "A_NOT_DIVISOR"
FERMAT_FAIL = "FERMAT_FAIL"
GCD_FAIL = "GCD_FAIL"
MALFORMED = "MALFORMED"


@dataclass(frozen=True)
class CoprimeWitness:
    """Explicit certificate that ``gcd(residue - 1, c) == 1``:
    ``multiplier*(residue - 1) == quotient*c + sign`` with ``sign`` in {1, -1}."""

    p: int
    multiplier: int
    quotient: int
    sign: int


@dataclass(frozen=True)
class PocklingtonWitness:
    c: int
    factored_part: Tuple[Tuple[int, int], ...]
    base: int
    coprime_witnesses: Tuple[CoprimeWitness, ...] = ()

    @property
    def a(self) -> int:
        out = 1
        for p, k in self.factored_part:
            out *= p**k
        return out


@dataclass(frozen=True)
class SubgroupCheck:
    p: int
    exponent: int
    residue: int
    trace: LadderTrace
    multiplier: int
    quotient: int
    sign: int
    source: str  # "witness" or "ext_gcd"

    @property
    def residue_minus_one(self) -> int:
        return self.residue - 1


@dataclass
class PocklingtonEvidence:
    c: int
    a: int
    cofactor: int
    factor_witnesses: Dict[int, List[DivisionWitness]]
    fermat: LadderTrace
    subgroup: List[SubgroupCheck] = field(default_factory=list)
    cost: CostTally = CostTally()


def congruence_class_check(d: int) -> int:
    """Residue of ``d`` mod 4."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return d % 4


def _coprime_by_witness(w: CoprimeWitness, residue: int, c: int, meter: CostMeter) -> None:
    if w.sign not in (1, -1):
        raise CheckFailed(MALFORMED, f"witness sign must be +1 or -1, got {w.sign}", {"p": w.p})
    rm1 = meter.sub(residue, 1)
    lhs = meter.mul(w.multiplier, rm1)
    rhs = meter.add(meter.mul(w.quotient, c), w.sign)
    if lhs != rhs:
        raise CheckFailed(
            GCD_FAIL,
            f"{w.multiplier}*{rm1} != {w.quotient}*{c} + ({w.sign})",
            {"p": w.p},
        )


def pocklington_verify(w: PocklingtonWitness, meter: Optional[CostMeter] = None) -> PocklingtonEvidence:
    """Check the hypotheses; return the evidence or raise :class:`CheckFailed`.

    Checks run in order and the first violated hypothesis is reported:
    factor primality, ``a**2 > c``, ``a | c-1``, the Fermat condition, the gcds.
    """
    meter = CostMeter() if meter is None else meter
    before = meter.tally()
    c = w.c
    if c < 3:
        raise CheckFailed(MALFORMED, f"c must be >= 3, got {c}")
    if not w.factored_part or any(k < 1 or p < 2 for p, k in w.factored_part):
        raise CheckFailed(MALFORMED, "factored part must list primes with positive multiplicities")
    if any(k > (c - 1).bit_length() for _, k in w.factored_part):
        raise CheckFailed(A_NOT_DIVISOR, "a prime power in the factored part exceeds c - 1")
    primes = [p for p, _ in w.factored_part]
    if len(set(primes)) != len(primes):
        raise CheckFailed(MALFORMED, "repeated prime in factored part")
    a = w.a
    if a == 1:
        raise CheckFailed(MALFORMED, "factored part is 1")
    by_p: Dict[int, CoprimeWitness] = {}
    for cw in w.coprime_witnesses:
        if cw.p not in primes or cw.p in by_p:
            raise CheckFailed(MALFORMED, f"coprime witness for unexpected or repeated p={cw.p}", {"p": cw.p})
        by_p[cw.p] = cw

    factor_witnesses: Dict[int, List[DivisionWitness]] = {}
    for p in primes:
        try:
            ok, wit = trial_division_prime(p)
        except ValueError as exc:
            raise CheckFailed(NOT_PRIME_FACTOR, str(exc), {"p": p}) from None
        if not ok:
            raise CheckFailed(NOT_PRIME_FACTOR, f"{p} has divisor {wit[-1].divisor}", {"p": p})
        factor_witnesses[p] = wit

    if not a * a > c:
        raise CheckFailed(A_SQUARED_TOO_SMALL, f"a^2 = {a * a} <= c = {c}")
    cofactor, rem = divmod(c - 1, a)
    if rem:
        raise CheckFailed(A_NOT_DIVISOR, f"c - 1 = {cofactor}*{a} + {rem}")

    r, fermat, _ = pow_mod_traced(w.base, c - 1, c, meter)
    if r != 1:
        raise CheckFailed(FERMAT_FAIL, f"{w.base}^(c-1) = {r} (mod c)")

    evidence = PocklingtonEvidence(c, a, cofactor, factor_witnesses, fermat)
    for p in primes:
        e = (c - 1) // p
        res, trace, _ = pow_mod_traced(w.base, e, c, meter)
        if p in by_p:
            cw = by_p[p]
            _coprime_by_witness(cw, res, c, meter)
            evidence.subgroup.append(SubgroupCheck(p, e, res, trace, cw.multiplier, cw.quotient, cw.sign, "witness"))
        else:
            g, u, v = ext_gcd(res - 1, c)
            if g != 1:
                raise CheckFailed(GCD_FAIL, f"gcd({res} - 1, c) = {g}", {"p": p})
            evidence.subgroup.append(SubgroupCheck(p, e, res, trace, u, -v, 1, "ext_gcd"))
    after = meter.tally()
    evidence.cost = CostTally(after.hard - before.hard, after.easy - before.easy, after.trivial - before.trivial)
    return evidence

