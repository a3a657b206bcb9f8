"""``pellcert`` command line: verify certificates, run the oracle, check primality.

Exit status: 0 verified / prime, 1 verification failed / composite, 2 bad input.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import certificate, oracle, verifier
from .arith import TRIAL_DIVISION_LIMIT, trial_division_prime
from .errors import CertificateError, CheckFailed
from .primality import pocklington_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 already; keep the prefix short
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> Optional[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None


def cmd_verify(args: argparse.Namespace) -> int:
    text = _read(args.path)
    if text is None:
        return EXIT_USAGE
    try:
        cert = certificate.parse(text)
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = verifier.verify(cert)
    if args.format == "structured":
        doc = verifier.to_structured(report, trace=args.trace)
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(verifier.render_text(report, trace=args.trace, costs=True))
    if not report.verified:
        bad = report.first_failure
        print(f"verification failed at {bad.name}: {bad.failure}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _sqrt_label(d: int) -> str:
    return f"√{d}"


def cmd_oracle_unit(args: argparse.Namespace) -> int:
    try:
        unit = oracle.fundamental_unit(args.d)
    except oracle.OracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    basis = _sqrt_label(unit.d) if unit.omega_form == oracle.SQRT_D else f"(1+{_sqrt_label(unit.d)})/2"
    sign = "+1" if unit.norm_sign > 0 else "-1"
    hit = "yes" if unit.y % unit.d == 0 else "no"
    print(f"ε = {unit.x} + {unit.y}·{basis}, norm {sign}, {unit.d} | y: {hit}")
    return EXIT_OK


def cmd_oracle_scan(args: argparse.Namespace) -> int:
    try:
        hits = oracle.scan(args.lo, args.hi, primes_only=args.primes, mod4=args.mod4, workers=args.workers)
    except oracle.OracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for h in hits:
        kind = "prime" if h.prime else "composite"
        print(f"{h.d}  {kind}  d mod 4 = {h.d_mod_4}  y = {h.y}")
    print(f"{len(hits)} hit(s) in [{args.lo}, {args.hi}]")
    return EXIT_OK


def cmd_prime(args: argparse.Namespace) -> int:
    if args.cert is not None:
        text = _read(args.cert)
        if text is None:
            return EXIT_USAGE
        try:
            raw = json.loads(text)
            if isinstance(raw, dict) and "primality" in raw:
                wit = certificate.from_dict(raw).primality
            else:
                wit = certificate.parse_primality(raw, "$")
        except json.JSONDecodeError as exc:
            print(f"error: PARSE_ERROR at line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
            return EXIT_USAGE
        except CertificateError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            ev = pocklington_verify(wit)
        except CheckFailed as exc:
            print(f"{wit.c}: not certified ({exc})")
            return EXIT_FAILED
        print(f"{ev.c}: prime (Pocklington, a = {ev.a}, c - 1 = {ev.cofactor}·a, base {wit.base})")
        for sg in ev.subgroup:
            print(f"  p = {sg.p}: {sg.multiplier}·{sg.residue - 1} = {sg.quotient}·c + ({sg.sign})")
        return EXIT_OK
    n = args.n
    if n is None:
        print("error: give N or --cert PATH", file=sys.stderr)
        return EXIT_USAGE
    if n < 2 or n >= TRIAL_DIVISION_LIMIT:
        print(f"error: N must satisfy 2 <= N < 2^64, got {n}", file=sys.stderr)
        return EXIT_USAGE
    ok, wit = trial_division_prime(n)
    if ok:
        print(f"{n}: prime (trial division by {len(wit)} primes)")
        for w in wit:
            print(f"  {n} = {w.quotient}·{w.divisor} + {w.remainder}")
        return EXIT_OK
    w = wit[-1]
    print(f"{n}: composite ({n} = {w.quotient}·{w.divisor})")
    return EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pellcert", description="Exact verifier for d | y certificates and a small-d unit oracle.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check a certificate file")
    v.add_argument("path")
    v.add_argument("--trace", action="store_true", help="print the ladder and linear-pass transcripts")
    v.add_argument("--costs", action="store_true", help="print the operation tally (always included)")
    v.add_argument("--format", choices=("text", "structured"), default="text")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="continued-fraction oracle")
    osub = o.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    u = osub.add_parser("unit", help="fundamental unit of Q(sqrt(D))")
    u.add_argument("d", type=int, metavar="D")
    u.set_defaults(func=cmd_oracle_unit)
    s = osub.add_parser("scan", help="squarefree d in [LO, HI] with d | y")
    s.add_argument("lo", type=int, metavar="LO")
    s.add_argument("hi", type=int, metavar="HI")
    s.add_argument("--primes", action="store_true", help="only prime d")
    s.add_argument("--mod4", type=int, choices=(0, 1, 2, 3), default=None, help="only d in this class mod 4")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_oracle_scan)

    pr = sub.add_parser("prime", help="primality by trial division or a Pocklington witness")
    pr.add_argument("n", type=int, nargs="?", metavar="N")
    pr.add_argument("--cert", metavar="PATH", help="certificate file or bare primality object")
    pr.set_defaults(func=cmd_prime)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
