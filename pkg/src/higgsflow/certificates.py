"""Verification certificates and their on-disk formats.

A certificate records one check: what was checked, on which inputs, the
verdict, and enough payload (maps, counts, witnesses) to re-validate the
verdict offline from the serialized data alone.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

VERSION = "0.1.0"

PASS = "PASS"
FAIL = "FAIL"
FINDING = "FINDING"
SKIPPED = "SKIPPED"


@dataclass
class Certificate:
    kind: str
    inputs: dict
    status: str
    payload: dict = field(default_factory=dict)
    version: str = VERSION
    timing_ms: int | None = None

    def to_json(self):
        out = {
            "kind": self.kind,
            "inputs": self.inputs,
            "status": self.status,
            "payload": self.payload,
            "version": self.version,
        }
        if self.timing_ms is not None:
            out["timing_ms"] = self.timing_ms
        return out

    @classmethod
    def from_json(cls, data):
        return cls(
            kind=data["kind"],
            inputs=data["inputs"],
            status=data["status"],
            payload=data.get("payload", {}),
            version=data.get("version", VERSION),
            timing_ms=data.get("timing_ms"),
        )


def dump_certificate(cert, path):
    with open(path, "w") as fh:
        json.dump(cert.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_certificate(path):
    with open(path) as fh:
        return Certificate.from_json(json.load(fh))


def dump_csv(rows, header, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def dump_index(entries, path):
    with open(path, "w") as fh:
        json.dump({"version": VERSION, "certificates": entries}, fh, indent=2, sort_keys=True)
        fh.write("\n")
