"""Canonical report serialization: stable JSON and content hashes.

Reports must be byte-identical across runs, so serialization sorts keys,
pins separators, and never embeds wall-clock values; effort is reported as
deterministic case counters instead.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .act import Act
from .formula import Formula, format_formula
from .monoid import Monoid

SCHEMA = "sacts-report/1"


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2,
                      separators=(",", ": "), ensure_ascii=False) + "\n"


def content_hash(payload: Any) -> str:
    digest = hashlib.sha256(canonical_json(payload).encode("utf-8"))
    return digest.hexdigest()


def monoid_payload(m: Monoid) -> dict:
    return {
        "elements": list(m.elements),
        "identity": m.elements[m.identity],
        "table": [list(row) for row in m.table],
    }


def act_payload(a: Act) -> dict:
    return {
        "monoid": monoid_payload(a.monoid),
        "carrier": list(a.carrier),
        "action": [list(row) for row in a.action],
    }


def formula_payload(f: Formula) -> dict:
    return {
        "text": format_formula(f),
        "free": list(f.free),
        "bound": list(f.bound),
    }


def envelope(command: str, inputs: dict, body: dict) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": {key: content_hash(value) for key, value in sorted(inputs.items())},
        "report": body,
    }
