"""Certificate data model and its JSON file format.

Every integer is stored as a decimal string so that no consumer ever routes the
values through a binary float.  Parsing is all-or-nothing: either a fully
validated :class:`Certificate` comes back or :class:`CertificateError` is raised
with the JSON path of the offending field.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, List, Tuple, Union

from .errors import CertificateError
from .ideals import FactorEntry, Relation, SplitPrime
from .primality import CoprimeWitness, PocklingtonWitness

FORMAT_VERSION = 1
BUNDLED_NAME = "mordell-39028039587479.json"
BUNDLED_SHA256 = "341dea11c22e095f5ba192507a116c44721161baabd3c98f20bf24b865359f2e"

_INT_RE = re.compile(r"-?[0-9]+\Z")
PARSE_ERROR = "PARSE_ERROR"
RANGE_ERROR = "RANGE_ERROR"


@dataclass(frozen=True)
class Certificate:
    d: int
    primality: PocklingtonWitness
    split_primes: Tuple[SplitPrime, ...]
    denominator_exponents: Tuple[int, ...]
    relations: Tuple[Relation, ...]
    nonunit_modulus: int

    @property
    def r(self) -> int:
        return len(self.relations)

    @property
    def s(self) -> int:
        return len(self.split_primes)

    def exponent_pairs(self) -> List[Tuple[int, int]]:
        return [(rel.a, rel.b) for rel in self.relations]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise CertificateError(PARSE_ERROR, path, "expected a decimal integer string, got a boolean")
    if isinstance(value, int):
        return value
    if not isinstance(value, str) or not _INT_RE.match(value):
        raise CertificateError(PARSE_ERROR, path, f"expected a decimal integer string, got {value!r}")
    return int(value)


def _obj(value: Any, path: str, keys: Tuple[str, ...], optional: Tuple[str, ...] = ()) -> dict:
    if not isinstance(value, dict):
        raise CertificateError(PARSE_ERROR, path, "expected an object")
    missing = [k for k in keys if k not in value]
    if missing:
        raise CertificateError(PARSE_ERROR, f"{path}.{missing[0]}", "missing field")
    extra = sorted(set(value) - set(keys) - set(optional))
    if extra:
        raise CertificateError(PARSE_ERROR, f"{path}.{extra[0]}", "unknown field")
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise CertificateError(PARSE_ERROR, path, "expected a list")
    return value


def _at_least(n: int, lo: int, path: str) -> int:
    if n < lo:
        raise CertificateError(RANGE_ERROR, path, f"{n} < {lo}")
    return n


def parse_primality(raw: Any, path: str = "primality") -> PocklingtonWitness:
    p = _obj(raw, path, ("c", "factored_part", "base"), ("coprime_witnesses",))
    factored = []
    for k, item in enumerate(_list(p["factored_part"], f"{path}.factored_part")):
        ip = f"{path}.factored_part[{k}]"
        pair = _list(item, ip)
        if len(pair) != 2:
            raise CertificateError(PARSE_ERROR, ip, "expected [prime, multiplicity]")
        factored.append((_int(pair[0], f"{ip}[0]"), _at_least(_int(pair[1], f"{ip}[1]"), 1, f"{ip}[1]")))
    if not factored:
        raise CertificateError(RANGE_ERROR, f"{path}.factored_part", "empty factored part")
    witnesses = []
    for k, item in enumerate(_list(p.get("coprime_witnesses", []), f"{path}.coprime_witnesses")):
        ip = f"{path}.coprime_witnesses[{k}]"
        w = _obj(item, ip, ("p", "multiplier", "quotient", "sign"))
        sign = _int(w["sign"], f"{ip}.sign")
        if sign not in (1, -1):
            raise CertificateError(RANGE_ERROR, f"{ip}.sign", "sign must be 1 or -1")
        witnesses.append(CoprimeWitness(_int(w["p"], f"{ip}.p"), _int(w["multiplier"], f"{ip}.multiplier"),
                                        _int(w["quotient"], f"{ip}.quotient"), sign))
    return PocklingtonWitness(_int(p["c"], f"{path}.c"), tuple(factored), _int(p["base"], f"{path}.base"),
                              tuple(witnesses))


def from_dict(raw: Any) -> Certificate:
    top = _obj(raw, "$", ("format_version", "d", "primality", "split_primes", "denominator_exponents",
                          "relations", "nonunit_modulus"))
    version = _int(top["format_version"], "$.format_version")
    if version != FORMAT_VERSION:
        raise CertificateError(RANGE_ERROR, "$.format_version", f"unsupported version {version}")
    d = _at_least(_int(top["d"], "$.d"), 2, "$.d")
    primality = parse_primality(top["primality"], "$.primality")

    primes = []
    for k, item in enumerate(_list(top["split_primes"], "$.split_primes")):
        ip = f"$.split_primes[{k}]"
        row = _obj(item, ip, ("c", "e", "f"))
        primes.append(SplitPrime(k + 1, _int(row["c"], f"{ip}.c"), _int(row["e"], f"{ip}.e"), _int(row["f"], f"{ip}.f")))
    s = len(primes)
    if s < 1:
        raise CertificateError(RANGE_ERROR, "$.split_primes", "need at least one split prime")

    exps_raw = _list(top["denominator_exponents"], "$.denominator_exponents")
    if len(exps_raw) != s:
        raise CertificateError(RANGE_ERROR, "$.denominator_exponents", f"expected {s} entries, got {len(exps_raw)}")
    exps = tuple(_int(v, f"$.denominator_exponents[{k}]") for k, v in enumerate(exps_raw))

    relations = []
    for k, item in enumerate(_list(top["relations"], "$.relations")):
        ip = f"$.relations[{k}]"
        rel = _obj(item, ip, ("a", "b", "factors"))
        factors = []
        last = 0
        for m, fitem in enumerate(_list(rel["factors"], f"{ip}.factors")):
            fp = f"{ip}.factors[{m}]"
            fe = _obj(fitem, fp, ("j", "conj", "mult"))
            j = _int(fe["j"], f"{fp}.j")
            if not 1 <= j <= s:
                raise CertificateError(RANGE_ERROR, f"{fp}.j", f"index {j} outside [1, {s}]")
            if j <= last:
                raise CertificateError(RANGE_ERROR, f"{fp}.j", "factor indices must strictly increase")
            last = j
            if not isinstance(fe["conj"], bool):
                raise CertificateError(PARSE_ERROR, f"{fp}.conj", "expected true or false")
            factors.append(FactorEntry(j, fe["conj"], _at_least(_int(fe["mult"], f"{fp}.mult"), 1, f"{fp}.mult")))
        if not factors:
            raise CertificateError(RANGE_ERROR, f"{ip}.factors", "empty factor list")
        relations.append(Relation(k + 1, _int(rel["a"], f"{ip}.a"), _at_least(_int(rel["b"], f"{ip}.b"), 1, f"{ip}.b"),
                                  tuple(factors)))
    if not relations:
        raise CertificateError(RANGE_ERROR, "$.relations", "need at least one relation")

    m = _at_least(_int(top["nonunit_modulus"], "$.nonunit_modulus"), 2, "$.nonunit_modulus")
    return Certificate(d, primality, tuple(primes), exps, tuple(relations), m)


def parse(text: str) -> Certificate:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(PARSE_ERROR, f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_dict(raw)


def load(path: Union[str, Path]) -> Certificate:
    return parse(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def primality_to_dict(w: PocklingtonWitness) -> dict:
    return {
        "c": str(w.c),
        "factored_part": [[str(p), str(k)] for p, k in w.factored_part],
        "base": str(w.base),
        "coprime_witnesses": [
            {"p": str(x.p), "multiplier": str(x.multiplier), "quotient": str(x.quotient), "sign": str(x.sign)}
            for x in w.coprime_witnesses
        ],
    }


def to_dict(cert: Certificate) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "d": str(cert.d),
        "primality": primality_to_dict(cert.primality),
        "split_primes": [{"c": str(sp.c), "e": str(sp.e), "f": str(sp.f)} for sp in cert.split_primes],
        "denominator_exponents": [str(x) for x in cert.denominator_exponents],
        "relations": [
            {
                "a": str(rel.a),
                "b": str(rel.b),
                "factors": [{"j": str(fe.j), "conj": fe.conj, "mult": str(fe.mult)} for fe in rel.factors],
            }
            for rel in cert.relations
        ],
        "nonunit_modulus": str(cert.nonunit_modulus),
    }


def _one_line(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def serialize(cert: Certificate) -> str:
    """Canonical text: fixed key order, one split prime / relation per line, trailing newline."""
    raw = to_dict(cert)
    out = ["{"]
    out.append(f'  "format_version": {raw["format_version"]},')
    out.append(f'  "d": {_one_line(raw["d"])},')
    out.append(f'  "primality": {_one_line(raw["primality"])},')
    for key in ("split_primes", "denominator_exponents", "relations"):
        items = raw[key]
        out.append(f'  "{key}": [')
        out.extend(f"    {_one_line(x)}{',' if n + 1 < len(items) else ''}" for n, x in enumerate(items))
        out.append("  ],")
    out.append(f'  "nonunit_modulus": {_one_line(raw["nonunit_modulus"])}')
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# bundled instance
# ---------------------------------------------------------------------------


def bundled_text() -> str:
    return resources.files("pellcert").joinpath("data").joinpath(BUNDLED_NAME).read_text(encoding="utf-8")


def bundled_sha256() -> str:
    return hashlib.sha256(bundled_text().encode("utf-8")).hexdigest()


def load_bundled() -> Certificate:
    return parse(bundled_text())
