"""Checks that pin down the prime-ideal factorization of each ``(a_i + sqrt(d))``.

A split-prime row ``(c, e, f)`` with ``c*f + e**2 == d`` defines
``P = (c, e + sqrt(d))`` and its conjugate ``Pbar = (c, e - sqrt(d))``.  The
first row is the ramified prime above 2.

Sign convention: ``a + sqrt(d)`` lies in ``P**k`` iff ``c**k | a - e_k`` and in
``Pbar**k`` iff ``c**k | a + e_k``, where ``e_k`` is the Hensel lift of ``e``
modulo ``c**k``.  Membership in every listed prime power together with equal
norms forces the principal ideal to equal the listed product.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import CostMeter, trial_division_prime
from .errors import CheckFailed

IDENTITY_FAIL = "IDENTITY_FAIL"
NOT_PRIME = "NOT_PRIME"
GCD_FAIL = "GCD_FAIL"
EQUALS_D = "EQUALS_D"
NOT_RAMIFIED = "NOT_RAMIFIED"
DUPLICATE_PRIME = "DUPLICATE_PRIME"
HENSEL_PRECONDITION = "HENSEL_PRECONDITION"
DIVISIBILITY_FAIL = "DIVISIBILITY_FAIL"
RAMIFIED_FORM = "RAMIFIED_FORM"
NORM_MISMATCH = "NORM_MISMATCH"
VALUATION_MISMATCH = "VALUATION_MISMATCH"


@dataclass(frozen=True)
class SplitPrime:
    j: int
    c: int
    e: int
    f: int

    @property
    def ramified(self) -> bool:
        return self.j == 1


@dataclass(frozen=True)
class FactorEntry:
    j: int
    conj: bool
    mult: int


@dataclass(frozen=True)
class Relation:
    i: int
    a: int
    b: int
    factors: Tuple[FactorEntry, ...]


def split_prime_check(sp: SplitPrime, d: int) -> None:
    if d < 2:
        raise ValueError("d must be >= 2")
    where = {"j": sp.j}
    if sp.c * sp.f + sp.e * sp.e != d:
        raise CheckFailed(IDENTITY_FAIL, f"{sp.c}*{sp.f} + {sp.e}^2 != d", where)
    if sp.c == d:
        raise CheckFailed(EQUALS_D, f"c = d = {d}", where)
    try:
        ok = sp.c >= 2 and trial_division_prime(sp.c)[0]
    except ValueError:
        ok = False
    if not ok:
        raise CheckFailed(NOT_PRIME, f"{sp.c} is not certified prime", where)
    if sp.ramified:
        if sp.c != 2:
            raise CheckFailed(NOT_RAMIFIED, f"row 1 must be the prime 2, got {sp.c}", where)
        if gcd(sp.c, sp.e) != 1:
            raise CheckFailed(GCD_FAIL, f"gcd(2, {sp.e}) != 1", where)
    elif gcd(sp.c, 2 * sp.e) != 1:
        raise CheckFailed(GCD_FAIL, f"gcd({sp.c}, 2*{sp.e}) != 1", where)


def distinct_primes_check(primes: Sequence[SplitPrime]) -> None:
    """All ``c_j`` distinct, so the listed prime powers are pairwise comaximal."""
    seen: Dict[int, int] = {}
    for sp in primes:
        if sp.c in seen:
            raise CheckFailed(DUPLICATE_PRIME, f"c = {sp.c} repeats row {seen[sp.c]}", {"j": sp.j})
        seen[sp.c] = sp.j


def hensel_root(c: int, e: int, ell: int, d: int) -> int:
    """The unique ``r`` in ``[0, c**ell)`` with ``r == e (mod c)`` and ``r**2 == d (mod c**ell)``."""
    if ell < 1:
        raise CheckFailed(HENSEL_PRECONDITION, f"exponent {ell} < 1")
    if c < 3 or c % 2 == 0 or (e * e - d) % c or gcd(2 * e, c) != 1:
        raise CheckFailed(HENSEL_PRECONDITION, f"no simple root: c={c}, e={e}")
    r = e % c
    mod = c
    for _ in range(ell - 1):
        mod *= c
        r = (r - (r * r - d) * pow(2 * r, -1, mod)) % mod
    return r


@dataclass(frozen=True)
class Membership:
    """``a - sign*root == quotient * c**mult`` with sign +1 for P, -1 for Pbar."""

    j: int
    conj: bool
    mult: int
    root: int
    quotient: int


def membership_check(a: int, sp: SplitPrime, conj: bool, mult: int, d: int, where: Optional[dict] = None) -> Membership:
    loc = dict(where or {})
    loc.update(j=sp.j, conj=conj, mult=mult)
    if sp.ramified:
        if mult != 1 or conj:
            raise CheckFailed(RAMIFIED_FORM, "the ramified prime enters only as P_1 to the first power", loc)
        q, r = divmod(a - sp.e, 2)
        if r:
            raise CheckFailed(DIVISIBILITY_FAIL, f"2 does not divide {a} - {sp.e}", loc)
        return Membership(sp.j, False, 1, sp.e, q)
    if mult < 1:
        raise CheckFailed(DIVISIBILITY_FAIL, f"multiplicity {mult} < 1", loc)
    norm = abs(a * a - d)
    if norm and mult > norm.bit_length():
        # c**mult > |N(a + sqrt(d))|, so it cannot divide the norm
        raise CheckFailed(DIVISIBILITY_FAIL, f"{sp.c}^{mult} exceeds |a^2 - d| = {norm}", loc)
    root = hensel_root(sp.c, sp.e, mult, d)
    target = a + root if conj else a - root
    q, r = divmod(target, sp.c**mult)
    if r:
        sign = "+" if conj else "-"
        raise CheckFailed(DIVISIBILITY_FAIL, f"{sp.c}^{mult} does not divide {a} {sign} {root}", loc)
    return Membership(sp.j, conj, mult, root, q)


def norm_product_check(rel: Relation, primes: Sequence[SplitPrime], d: int, meter: Optional[CostMeter] = None) -> int:
    """``|a**2 - d|`` must equal ``prod c_j**mult`` over the factor list; returns the norm."""
    meter = CostMeter() if meter is None else meter
    norm = abs(meter.sub(d, meter.mul(rel.a, rel.a)))
    where = {"relation": rel.i}
    if sum(fe.mult for fe in rel.factors) > norm.bit_length():
        # every c_j >= 2, so the product would exceed the norm
        raise CheckFailed(NORM_MISMATCH, f"more prime factors listed than |d - a^2| = {norm} can have", where)
    prod = 1
    for fe in rel.factors:
        c = primes[fe.j - 1].c
        for _ in range(fe.mult):
            prod = meter.mul(prod, c) if prod != 1 else c
    if norm != prod:
        raise CheckFailed(NORM_MISMATCH, f"|d - a^2| = {norm} but factor norms multiply to {prod}", where)
    return norm


@dataclass(frozen=True)
class ValuationEquation:
    """``sum b_i * mult_i == expected`` for one prime ideal (``side`` is ``"P"`` or ``"Pbar"``)."""

    j: int
    side: str
    terms: Tuple[Tuple[int, int], ...]  # (relation index, multiplicity)
    total: int
    expected: int

    @property
    def holds(self) -> bool:
        return self.total == self.expected


def aggregate_valuations(
    relations: Sequence[Relation],
    primes: Sequence[SplitPrime],
    exponents: Sequence[int],
    meter: Optional[CostMeter] = None,
) -> List[ValuationEquation]:
    """Compare the valuation of ``prod (a_i + sqrt(d))**b_i`` with that of ``prod c_j**d_j``.

    Returns all ``2s - 1`` equations; raises ``VALUATION_MISMATCH`` listing each failing one.
    """
    meter = CostMeter() if meter is None else meter
    s = len(primes)
    if len(exponents) != s:
        raise ValueError("one exponent per split prime")
    buckets: Dict[Tuple[int, bool], List[Tuple[int, int, int]]] = {}
    for rel in relations:
        for fe in rel.factors:
            side = False if fe.j == 1 else fe.conj
            buckets.setdefault((fe.j, side), []).append((rel.i, fe.mult, rel.b))
    eqs: List[ValuationEquation] = []
    for sp, dj in zip(primes, exponents):
        sides = (False,) if sp.ramified else (False, True)
        for conj in sides:
            total = 0
            terms = []
            for i, mult, b in buckets.get((sp.j, conj), []):
                term = meter.mul(mult, b) if mult != 1 else b
                total = meter.add(total, term) if total else term
                terms.append((i, mult))
            expected = meter.mul(2, dj) if sp.ramified else dj
            eqs.append(ValuationEquation(sp.j, "Pbar" if conj else "P", tuple(terms), total, expected))
    bad = [q for q in eqs if not q.holds]
    if bad:
        first = bad[0]
        raise CheckFailed(
            VALUATION_MISMATCH,
            "; ".join(f"j={q.j} {q.side}: got {q.total}, expected {q.expected}" for q in bad),
            {"j": first.j, "side": first.side, "got": first.total, "expected": first.expected,
             "mismatches": [[q.j, q.side, q.total, q.expected] for q in bad]},
        )
    return eqs
