"""Continued-fraction oracle for fundamental units at desk scale.

This module is independent of the certificate path and shares nothing with it
beyond :mod:`pellcert.arith`.  It expands the quadratic surd ``(P + sqrt(D))/Q``
with the usual recursion

    a = (P + isqrt(D)) // Q,   P' = a*Q - P,   Q' = (D - P'**2) / Q

and reads the fundamental unit off the last convergent of the first period.
For ``d = 1 (mod 4)`` the surd ``omega = (1 + sqrt(d))/2`` is expanded directly
(``P0 = 1, Q0 = 2``) so the unit comes out in the ``omega`` basis.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .arith import factorize_small, is_prime_small, isqrt

ORACLE_LIMIT = 10**9
SCAN_LIMIT = 10**7

SQRT_D = "SQRT_D"
HALF_ONE_PLUS_SQRT_D = "HALF_ONE_PLUS_SQRT_D"


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class Expansion:
    d: int
    a0: int
    period: Tuple[int, ...]


@dataclass(frozen=True)
class Convergent:
    """``h/k`` after partial quotient ``n``; ``q_next`` is the ``Q`` of the following state."""

    n: int
    h: int
    k: int
    q_next: int


@dataclass(frozen=True)
class FundamentalUnit:
    d: int
    x: int
    y: int
    omega_form: str
    norm_sign: int

    def norm(self) -> int:
        if self.omega_form == SQRT_D:
            return self.x * self.x - self.d * self.y * self.y
        return self.x * self.x + self.x * self.y - self.y * self.y * ((self.d - 1) // 4)

    def sqrt_d_coordinates(self) -> Tuple[int, int, int]:
        """``(u, v, w)`` with ``eps = (u + v*sqrt(d)) / w``."""
        if self.omega_form == SQRT_D:
            return self.x, self.y, 1
        return 2 * self.x + self.y, self.y, 2


@dataclass(frozen=True)
class ScanHit:
    d: int
    prime: bool
    d_mod_4: int
    x: int
    y: int


def _surd_states(D: int, P: int, Q: int) -> Iterator[Tuple[int, int, int]]:
    """Yield ``(a, P, Q)`` for successive complete quotients of ``(P + sqrt(D))/Q``."""
    r = isqrt(D)
    while True:
        a = (P + r) // Q
        yield a, P, Q
        P = a * Q - P
        Q = (D - P * P) // Q


def cf_expand(d: int) -> Expansion:
    """``sqrt(d) = [a0; period]``; the period closes at the first later state with ``Q == 1``."""
    if d < 2:
        raise OracleError("d must be >= 2")
    r = isqrt(d)
    if r * r == d:
        raise OracleError(f"{d} is a perfect square ({r}^2)")
    states = _surd_states(d, 0, 1)
    a0, _, _ = next(states)
    period = []
    for a, _, Q in states:
        period.append(a)
        if Q == 1:
            break
    return Expansion(d, a0, tuple(period))


def convergents(d: int, count: Optional[int] = None) -> List[Convergent]:
    """Convergents of ``sqrt(d)`` with the next ``Q`` of the surd recursion.

    They satisfy ``h**2 - d*k**2 == (-1)**(n+1) * q_next``.  Without ``count``
    the list covers exactly one period.
    """
    if d < 2 or isqrt(d) ** 2 == d:
        raise OracleError(f"{d} must be a non-square >= 2")
    out = []
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    states = _surd_states(d, 0, 1)
    a, _, _ = next(states)
    n = 0
    while count is None or n < count:
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        a, _, q_next = next(states)
        out.append(Convergent(n, h0, k0, q_next))
        n += 1
        if count is None and q_next == 1:
            break
    return out


def squarefree_check(d: int) -> None:
    if d < 2:
        raise OracleError("d must be >= 2")
    if d >= ORACLE_LIMIT:
        raise OracleError(f"d = {d} is beyond the oracle bound {ORACLE_LIMIT}")
    r = isqrt(d)
    if r * r == d:
        raise OracleError(f"{d} is a perfect square ({r}^2)")
    for p, k in factorize_small(d):
        if k >= 2:
            raise OracleError(f"{d} is not squarefree: {p}^2 divides it")


def _unit_from_surd(D: int, P0: int, Q0: int) -> Tuple[int, int, int]:
    """Return ``(p, q, n)``: the convergent ``p/q`` closing the first period of length ``n``."""
    h2, h1 = 0, 1
    k2, k1 = 1, 0
    n = 0
    for a, _, Q in _surd_states(D, P0, Q0):
        if n and Q == Q0:
            return h1, k1, n
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
        n += 1
    raise AssertionError("unreachable")  # pragma: no cover


def fundamental_unit(d: int) -> FundamentalUnit:
    """Smallest unit ``> 1`` of the maximal order of ``Q(sqrt(d))``, in the ``omega`` basis."""
    squarefree_check(d)
    if d % 4 == 1:
        p, q, n = _unit_from_surd(d, 1, 2)
        x, y = p - q, q
        unit = FundamentalUnit(d, x, y, HALF_ONE_PLUS_SQRT_D, (-1) ** n)
    else:
        p, q, n = _unit_from_surd(d, 0, 1)
        unit = FundamentalUnit(d, p, q, SQRT_D, (-1) ** n)
    if unit.norm() != unit.norm_sign:
        raise ArithmeticError(f"norm identity failed for d = {d}")  # pragma: no cover
    return unit


def divides_y(d: int) -> bool:
    return fundamental_unit(d).y % d == 0


def _scan_chunk(args: Tuple[int, int, bool, Optional[int]]) -> List[ScanHit]:
    lo, hi, primes_only, mod4 = args
    hits = []
    for d in range(lo, hi + 1):
        if mod4 is not None and d % 4 != mod4:
            continue
        if primes_only and not is_prime_small(d):
            continue
        try:
            unit = fundamental_unit(d)
        except OracleError:
            continue  # squares and non-squarefree d are skipped
        if unit.y % d == 0:
            hits.append(ScanHit(d, is_prime_small(d), d % 4, unit.x, unit.y))
    return hits


def scan(d_min: int, d_max: int, primes_only: bool = False, mod4: Optional[int] = None,
         workers: int = 1) -> List[ScanHit]:
    """All squarefree ``d`` in ``[d_min, d_max]`` with ``d | y``, ascending."""
    if d_min < 2 or d_max < d_min - 1:
        raise OracleError(f"bad range [{d_min}, {d_max}]")
    if d_max >= SCAN_LIMIT:
        raise OracleError(f"d_max = {d_max} is beyond the scan bound {SCAN_LIMIT}")
    if workers <= 1 or d_max - d_min < 1000:
        return _scan_chunk((d_min, d_max, primes_only, mod4))
    step = -(-(d_max - d_min + 1) // (4 * workers))
    chunks = [(lo, min(lo + step - 1, d_max), primes_only, mod4) for lo in range(d_min, d_max + 1, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [hit for part in pool.map(_scan_chunk, chunks) for hit in part]
