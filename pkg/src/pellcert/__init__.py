"""Exact-arithmetic verification of ``d | y`` for fundamental units of real quadratic fields."""

from .certificate import Certificate, load, load_bundled, parse, serialize
from .verifier import D_DIVIDES_Y, VerificationReport, verify

__all__ = [
    "Certificate",
    "D_DIVIDES_Y",
    "VerificationReport",
    "load",
    "load_bundled",
    "parse",
    "serialize",
    "verify",
]
__version__ = "0.1.0"
