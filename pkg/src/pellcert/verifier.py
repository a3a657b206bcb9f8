"""End-to-end check of a ``d | y`` certificate.

The checks run in a fixed order: the class of ``d`` mod 4, then Claim 1
(``d`` prime), Claim 2 (``eta O_K = O_K`` for ``eta = z/n``), Claim 3
(``eta`` lies in ``O_d = Z + d O_K``), Claim 4 (``eta != +-1``) and finally
the size bounds that give ``eta = +-eps**k`` with ``0 < |k| < d``.  Since ``d``
is a ramified prime the index ``(O_K^x : O_d^x)`` divides ``d``; a unit of
``O_d`` that is a power ``eps**k`` with ``0 < |k| < d`` therefore forces the
index to be 1, so ``eps`` itself lies in ``O_d`` and ``d | y``.

Every step is attempted even after a failure.  The verdict names the first
failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .arith import CostMeter, CostTally, LadderTrace, isqrt
from .certificate import Certificate
from .errors import CheckFailed
from .ideals import (
    Membership,
    ValuationEquation,
    aggregate_valuations,
    distinct_primes_check,
    membership_check,
    norm_product_check,
    split_prime_check,
)
from .primality import PocklingtonEvidence, congruence_class_check, pocklington_verify
from .quadring import (
    LinearStep,
    claim3_full_product,
    claim3_linear_pass,
    claim4_nonrational_check,
)

D_DIVIDES_Y = "D_DIVIDES_Y"

NOT_3_MOD_4 = "NOT_3_MOD_4"
WRONG_MODULUS = "WRONG_MODULUS"
EXPONENT_RANGE = "EXPONENT_RANGE"
NOT_IN_ORDER = "NOT_IN_ORDER"
CROSS_CHECK_MISMATCH = "CROSS_CHECK_MISMATCH"
RATIONAL_PRODUCT = "RATIONAL_PRODUCT"
BOUND_FAIL = "BOUND_FAIL"
FACTOR_BELOW_ONE = "FACTOR_BELOW_ONE"

STEPS = ("congruence", "claim1", "claim2", "claim3", "claim4", "bounds")

ASSUMPTIONS = (
    "eps >= 1 + sqrt(d) for the fundamental unit of Z[sqrt(d)], d >= 3, so 2**d <= eps**d",
    "(O_K^x : O_d^x) divides d when d is a ramified prime (index formula for orders of prime conductor)",
)

INFERENCE = (
    "d is prime and d = 3 (mod 4), so O_K = Z[sqrt(d)] and d ramifies",
    "eta O_K = O_K, so eta = z/n is a unit: eta = +-eps**k",
    "eta lies in O_d = Z + d O_K",
    "eta is not rational, so eta != +-1 and k != 0",
    "eta < 2**d <= eps**d and 1/eta < 2**d <= eps**d, so |k| < d",
    "the index (O_K^x : O_d^x) divides d and eps**k lies in O_d with 0 < |k| < d, so the index is 1",
    "eps lies in O_d, hence d | y",
)


@dataclass
class StepReport:
    name: str
    passed: bool = True
    failure: Optional[CheckFailed] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def fail(self, exc: CheckFailed) -> None:
        if self.passed:
            self.passed = False
            self.failure = exc
        self.details.setdefault("failures", []).append(exc.to_dict())

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"passed": self.passed}
        if self.failure is not None:
            out["failure"] = self.failure.to_dict()
        out.update(self.details)
        return out


@dataclass
class LabeledLadder:
    label: str
    exponent: int
    trace: LadderTrace


@dataclass
class VerificationReport:
    d: int
    congruence: StepReport
    claim1: StepReport
    claim2: StepReport
    claim3: StepReport
    claim4: StepReport
    bounds: StepReport
    ladders: List[LabeledLadder] = field(default_factory=list)
    linear_steps: List[LinearStep] = field(default_factory=list)
    memberships: List[Tuple[int, Membership]] = field(default_factory=list)
    valuations: List[ValuationEquation] = field(default_factory=list)
    costs: CostTally = CostTally()

    def steps(self) -> List[StepReport]:
        return [getattr(self, name) for name in STEPS]

    @property
    def first_failure(self) -> Optional[StepReport]:
        return next((st for st in self.steps() if not st.passed), None)

    @property
    def verified(self) -> bool:
        return self.first_failure is None

    @property
    def conclusion(self) -> str:
        bad = self.first_failure
        if bad is None:
            return D_DIVIDES_Y
        return f"FAILED({bad.name}/{bad.failure.code})"


def _attempt(report: StepReport, fn: Callable[[], Any]) -> Any:
    try:
        return fn()
    except CheckFailed as exc:
        report.fail(exc)
        return None


# ---------------------------------------------------------------------------
# individual steps
# ---------------------------------------------------------------------------


def _congruence(cert: Certificate) -> StepReport:
    st = StepReport("congruence")
    r = congruence_class_check(cert.d)
    st.details["d_mod_4"] = r
    if r != 3:
        st.fail(CheckFailed(NOT_3_MOD_4, f"d = {r} (mod 4); the certificate path needs 3"))
    return st


def _claim1(cert: Certificate, meter: CostMeter) -> Tuple[StepReport, Optional[PocklingtonEvidence]]:
    st = StepReport("claim1")
    ev = _attempt(st, lambda: pocklington_verify(cert.primality, meter))
    if cert.primality.c != cert.d:
        st.fail(CheckFailed(WRONG_MODULUS, f"primality witness certifies {cert.primality.c}, not d"))
    if ev is not None:
        st.details.update(
            a=ev.a,
            cofactor=ev.cofactor,
            fermat_residue=ev.fermat.result,
            subgroup=[
                {"p": sg.p, "exponent": sg.exponent, "residue": sg.residue, "multiplier": sg.multiplier,
                 "quotient": sg.quotient, "sign": sg.sign, "source": sg.source}
                for sg in ev.subgroup
            ],
        )
    return st, ev


def _claim2(cert: Certificate, meter: CostMeter, report: VerificationReport) -> StepReport:
    st = StepReport("claim2")
    d = cert.d
    for sp in cert.split_primes:
        _attempt(st, lambda sp=sp: split_prime_check(sp, d))
    _attempt(st, lambda: distinct_primes_check(cert.split_primes))
    norms = 0
    for rel in cert.relations:
        loc = {"relation": rel.i}
        for fe in rel.factors:
            sp = cert.split_primes[fe.j - 1]
            mem = _attempt(st, lambda sp=sp, fe=fe: membership_check(rel.a, sp, fe.conj, fe.mult, d, loc))
            if mem is not None:
                report.memberships.append((rel.i, mem))
        if _attempt(st, lambda rel=rel: norm_product_check(rel, cert.split_primes, d, meter)) is not None:
            norms += 1
    eqs = _attempt(st, lambda: aggregate_valuations(cert.relations, cert.split_primes,
                                                    cert.denominator_exponents, meter))
    if eqs is not None:
        report.valuations = eqs
    for j, dj in enumerate(cert.denominator_exponents, start=1):
        if dj < 1:
            st.fail(CheckFailed(EXPONENT_RANGE, f"d_{j} = {dj} < 1", {"j": j}))
    st.details.update(split_primes=cert.s, relations=cert.r, norm_identities=norms,
                      memberships=len(report.memberships), valuation_equations=len(report.valuations))
    return st


def _claim3(cert: Certificate, meter: CostMeter, report: VerificationReport) -> StepReport:
    st = StepReport("claim3")
    pairs = cert.exponent_pairs()
    linear, steps = claim3_linear_pass(pairs, cert.d, meter)
    report.linear_steps = steps
    full = claim3_full_product(pairs, cert.d)
    st.details.update(linear_pass=list(linear.pair), full_product=list(full.pair))
    if steps:
        st.details["final_v_quotient"] = steps[-1].v_quotient
    if linear.v != 0:
        st.fail(CheckFailed(NOT_IN_ORDER, f"sqrt(d) coefficient {linear.v} != 0 (mod d)"))
    if (linear.v == 0) != (full.v == 0):
        st.fail(CheckFailed(CROSS_CHECK_MISMATCH,
                            f"linear pass v = {linear.v} but full product v = {full.v} (mod d)"))
    return st


def _claim4(cert: Certificate) -> StepReport:
    st = StepReport("claim4")
    res, nonrational = claim4_nonrational_check(cert.exponent_pairs(), cert.nonunit_modulus, cert.d)
    st.details.update(modulus=res.m, residue=list(res.pair))
    if not nonrational:
        st.fail(CheckFailed(RATIONAL_PRODUCT, f"z = {res.u} (mod {res.m}) has no sqrt(d) part"))
    return st


def bounds_check(cert: Certificate) -> StepReport:
    """Bit-length bounds giving ``eta < 2**d`` and ``1/eta < 2**d``.

    ``log2 eta <= sum b_i*bitlen(|a_i| + isqrt(d) + 1)`` because every factor
    satisfies ``1 <= a_i + sqrt(d) <= |a_i| + isqrt(d) + 1``; the lower bound
    is checked here too, so ``|z| >= 1`` and ``1/eta <= n``.
    """
    st = StepReport("bounds")
    d = cert.d
    root = isqrt(d)
    for rel in cert.relations:
        # a + sqrt(d) >= 1  <=>  1 - a <= 0  or  (1 - a)**2 <= d
        gap = 1 - rel.a
        if gap > 0 and gap * gap > d:
            st.fail(CheckFailed(FACTOR_BELOW_ONE, f"a + sqrt(d) < 1 for a = {rel.a}", {"relation": rel.i}))
    upper = sum(rel.b * (abs(rel.a) + root + 1).bit_length() for rel in cert.relations)
    lower = sum(dj * sp.c.bit_length() for sp, dj in zip(cert.split_primes, cert.denominator_exponents))
    st.details.update(eta_bits=upper, inverse_bits=lower, limit=d)
    if not upper < d:
        st.fail(CheckFailed(BOUND_FAIL, f"sum b_i*bitlen(|a_i|+isqrt(d)+1) = {upper} >= d", {"sum": "eta"}))
    if not lower < d:
        st.fail(CheckFailed(BOUND_FAIL, f"sum d_j*bitlen(c_j) = {lower} >= d", {"sum": "inverse"}))
    return st


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def verify(cert: Certificate) -> VerificationReport:
    meter = CostMeter()
    cong = _congruence(cert)
    claim1, ev = _claim1(cert, meter)
    report = VerificationReport(cert.d, cong, claim1, StepReport("claim2"), StepReport("claim3"),
                                StepReport("claim4"), StepReport("bounds"))
    if ev is not None:
        report.ladders.append(LabeledLadder("fermat", cert.primality.c - 1, ev.fermat))
        for sg in ev.subgroup:
            report.ladders.append(LabeledLadder(f"p={sg.p}", sg.exponent, sg.trace))
    report.claim2 = _claim2(cert, meter, report)
    report.claim3 = _claim3(cert, meter, report)
    report.claim4 = _claim4(cert)
    report.bounds = bounds_check(cert)
    report.costs = meter.tally()
    return report


def cost_report(report: VerificationReport) -> CostTally:
    return report.costs


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _qd(q: int, r: int) -> str:
    """``q*d + r`` written the way a hand transcript would."""
    if q == 0:
        return str(r)
    head = {1: "d", -1: "-d"}.get(q, f"{q}d")
    return f"{head}+{r}"


def ladder_lines(lad: LabeledLadder) -> List[str]:
    lines = []
    prefix = 0
    b = lad.trace.base
    for st in lad.trace.steps:
        left = f"2·{prefix}+1={st.prefix}" if st.bit else f"2·{prefix}={st.prefix}"
        mult = f"{b}·" if st.bit else ""
        lines.append(f"{left},  {mult}{st.previous}²={_qd(st.quotient, st.residue)}")
        prefix = st.prefix
    return lines


def linear_lines(steps: List[LinearStep]) -> List[str]:
    lines = []
    for st in steps:
        k = st.k
        if k == 2:  # the first factor enters unreduced
            u, v = "a1·a2", "b1·a2+a1·b2"
        else:
            u = f"{st.prev_u}·a{k}"
            v = f"{st.prev_v}·a{k}+{st.prev_u}·b{k}"
        lines.append(f"{u}={_qd(st.u_quotient, st.u_residue)},  {v}={_qd(st.v_quotient, st.v_residue)}")
    return lines


def render_text(report: VerificationReport, trace: bool = False, costs: bool = True) -> str:
    out = [f"d = {report.d}"]
    labels = {
        "congruence": "d mod 4",
        "claim1": "Claim 1 (d prime)",
        "claim2": "Claim 2 (eta is a unit)",
        "claim3": "Claim 3 (eta in O_d)",
        "claim4": "Claim 4 (eta != +-1)",
        "bounds": "bounds (|k| < d)",
    }
    for st in report.steps():
        line = f"{labels[st.name]}: {'pass' if st.passed else 'FAIL'}"
        if st.failure is not None:
            f = st.failure
            where = f" at {f.where}" if f.where else ""
            line += f"  [{f.code}{where}] {f.message}"
        out.append(line)
    b = report.bounds.details
    if "eta_bits" in b:
        out.append(f"  eta bits {b['eta_bits']}, 1/eta bits {b['inverse_bits']}, limit d")
    if trace:
        for lad in report.ladders:
            out.append("")
            out.append(f"ladder {lad.label}: {lad.trace.base}^{lad.exponent} mod d, bits {lad.trace.reconstructed_binary}")
            out.extend(f"  • {ln}" for ln in ladder_lines(lad))
        out.append("")
        out.append("linear pass mod d:")
        out.extend(f"  • {ln}" for ln in linear_lines(report.linear_steps))
    if costs:
        c = report.costs
        out.append(f"cost: {c.hard} hard, {c.easy} easy, {c.trivial} trivial operations")
    out.append("assumptions:")
    out.extend(f"  - {a}" for a in ASSUMPTIONS)
    if report.verified:
        out.append("inference:")
        out.extend(f"  - {s}" for s in INFERENCE)
        out.append("d | y: VERIFIED")
    else:
        out.append(f"d | y: NOT VERIFIED ({report.conclusion})")
    return "\n".join(out) + "\n"


def _ladder_dict(lad: LabeledLadder) -> Dict[str, Any]:
    return {
        "label": lad.label,
        "base": lad.trace.base,
        "exponent": str(lad.exponent),
        "binary": lad.trace.reconstructed_binary,
        "result": str(lad.trace.result),
        "steps": [
            {"bit_index": s.bit_index, "bit": s.bit, "prefix": str(s.prefix), "previous": str(s.previous),
             "quotient": str(s.quotient), "residue": str(s.residue)}
            for s in lad.trace.steps
        ],
    }


def _stringify(obj: Any) -> Any:
    """Integers outside the signed 32-bit range become decimal strings, so no JSON consumer loses precision."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj if -(2**31) <= obj < 2**31 else str(obj)
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def to_structured(report: VerificationReport, trace: bool = False) -> Dict[str, Any]:
    out: Dict[str, Any] = {"d": str(report.d), "conclusion": report.conclusion}
    for st in report.steps():
        out[st.name] = _stringify(st.to_dict())
    out["costs"] = report.costs.to_dict()
    out["assumptions"] = list(ASSUMPTIONS)
    out["inference"] = list(INFERENCE) if report.verified else []
    if trace:
        out["traces"] = {
            "ladders": [_ladder_dict(lad) for lad in report.ladders],
            "linear_pass": [
                {"k": s.k, "u_quotient": str(s.u_quotient), "u_residue": str(s.u_residue),
                 "v_quotient": str(s.v_quotient), "v_residue": str(s.v_residue)}
                for s in report.linear_steps
            ],
        }
    return out
