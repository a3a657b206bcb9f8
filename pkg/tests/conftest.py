from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Dict, List, Tuple

import pytest

from pellcert import certificate

DATA = Path(__file__).parent / "data"
REPO = Path(__file__).resolve().parents[1]
BUNDLED_PATH = REPO / "certs" / certificate.BUNDLED_NAME


@pytest.fixture(scope="session")
def cert():
    return certificate.load_bundled()


@pytest.fixture(scope="session")
def ref():
    return json.loads((DATA / "reference_vectors.json").read_text())


@pytest.fixture(scope="session")
def report(cert):
    from pellcert.verifier import verify

    return verify(cert)


def bump_last_digit(n: int, at_least: int = None) -> int:
    """Replace the lowest decimal digit of ``n`` by the next one (9 wraps to 0).

    When the result would drop below ``at_least`` the digit moves forward once more.
    """
    sign = -1 if n < 0 else 1
    m = abs(n)
    out = sign * (m - m % 10 + (m % 10 + 1) % 10)
    if at_least is not None and out < at_least:
        out = sign * (m - m % 10 + (m % 10 + 2) % 10)
    return out


def replace_split(cert, j: int, **changes):
    primes = list(cert.split_primes)
    primes[j - 1] = dataclasses.replace(primes[j - 1], **changes)
    return dataclasses.replace(cert, split_primes=tuple(primes))


def replace_relation(cert, i: int, **changes):
    rels = list(cert.relations)
    rels[i - 1] = dataclasses.replace(rels[i - 1], **changes)
    return dataclasses.replace(cert, relations=tuple(rels))


def replace_factor(cert, i: int, m: int, **changes):
    rel = cert.relations[i - 1]
    factors = list(rel.factors)
    factors[m] = dataclasses.replace(factors[m], **changes)
    return replace_relation(cert, i, factors=tuple(factors))


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion
# ---------------------------------------------------------------------------

_criteria: Dict[int, Dict] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "outcomes": []})
    entry["outcomes"].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        ok = all(entry["outcomes"])
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {entry['title']}")
