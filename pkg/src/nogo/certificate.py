"""Serializable witnesses.

A certificate is ``{"schema", "kind", "payload", "digest"}``; the digest is
SHA-256 over the canonical JSON of kind and payload, so any edit to the
payload is caught before the mathematical re-check even starts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import ParseError, SchemaVersionError

SCHEMA = "nogo-certificate/1"


class Kind(str, Enum):
    DERIVED_IDEAL = "DerivedIdeal"
    BRACKET_DECOMPOSITION = "BracketDecomposition"
    GRAM_POSITIVITY = "GramPositivity"
    TRIVIALITY_CONCLUSION = "TrivialityConclusion"
    FEASIBILITY_VERDICT = "FeasibilityVerdict"
    AD_INVARIANCE = "AdInvariance"
    MINIMALITY = "Minimality"
    TRIVIAL_PREQUANTIZATION = "TrivialPrequantization"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_of(kind: str, payload: dict) -> str:
    return hashlib.sha256(canonical({"kind": kind, "payload": payload}).encode()).hexdigest()


@dataclass
class Certificate:
    kind: Kind
    payload: dict
    # set only by checker.verify
    checked: bool = field(default=False, compare=False)

    @property
    def digest(self) -> str:
        return digest_of(self.kind.value, self.payload)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "kind": self.kind.value, "payload": self.payload, "digest": self.digest}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.dumps())
        return path

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        """Parse; schema and shape problems raise InputError subclasses.
        The digest is not checked here (see ``checker.verify``)."""
        if not isinstance(data, dict):
            raise ParseError("certificate must be a JSON object")
        if data.get("schema") != SCHEMA:
            raise SchemaVersionError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA}")
        try:
            kind = Kind(data["kind"])
            payload = data["payload"]
        except (KeyError, ValueError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from exc
        if not isinstance(payload, dict):
            raise ParseError("payload must be an object")
        return cls(kind, payload)

    @classmethod
    def load(cls, path) -> tuple["Certificate", str | None]:
        """Returns the certificate and the digest recorded in the file."""
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from exc
        cert = cls.from_dict(data)
        return cert, data.get("digest")
