from __future__ import annotations

from typing import Any, Dict, Optional


class CheckFailed(Exception):
    """A certificate check did not hold.

    ``code`` is a stable enumerated string (``FERMAT_FAIL``, ``IDENTITY_FAIL`` ...);
    ``where`` locates the offending datum, e.g. ``{"relation": 29, "j": 16}``.
    """

    def __init__(self, code: str, message: str = "", where: Optional[Dict[str, Any]] = None) -> None:
        self.code = code
        self.message = message or code
        self.where = dict(where or {})
        super().__init__(f"{code}: {self.message}")

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "where": self.where}


class CertificateError(ValueError):
    """Malformed certificate text; ``code`` is ``PARSE_ERROR`` or ``RANGE_ERROR``."""

    def __init__(self, code: str, path: str, message: str) -> None:
        self.code = code
        self.path = path
        super().__init__(f"{code} at {path}: {message}")
