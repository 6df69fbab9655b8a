#!/usr/bin/env python3
"""
Report payloads: JSON schemas, canonical serialization and verdict tables.
"""

import json
from typing import Iterable, List

import jsonschema
from colorama import Fore, Style

REPORT_SCHEMA_ID = "kstandard.report/1"
COMPLEX_SCHEMA_ID = "kstandard.complex/1"
SCALAR_SYSTEM_SCHEMA_ID = "kstandard.scalars/1"
TRIVIALIZATION_SCHEMA_ID = "kstandard.trivialization/1"

VERDICTS = ("pass", "fail", "undetermined")
EXIT_CODES = {"pass": 0, "fail": 1, "undetermined": 2}
USAGE_EXIT_CODE = 64

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "check", "window", "params", "verdict", "details", "witnesses"],
    "properties": {
        "schema": {"const": REPORT_SCHEMA_ID},
        "check": {"type": "string"},
        "window": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "params": {
            "type": "object",
            "required": ["r", "N", "p"],
            "properties": {
                "r": {"type": "integer", "minimum": 1},
                "N": {"type": "integer", "minimum": 1},
                "p": {"type": "integer", "minimum": 2},
            },
        },
        "verdict": {"enum": list(VERDICTS)},
        "details": {"type": "object"},
        "witnesses": {"type": "array", "items": {"type": "object"}},
    },
}

_ELEMENT = {
    "type": "object",
    "required": ["start", "end", "terms"],
    "properties": {
        "start": {"type": "integer"},
        "end": {"type": "integer"},
        "terms": {
            "type": "array",
            "items": {"type": "object", "required": ["path", "coeff"]},
        },
    },
}

COMPLEX_SCHEMA = {
    "type": "object",
    "required": ["schema", "id", "complex"],
    "properties": {
        "schema": {"const": COMPLEX_SCHEMA_ID},
        "id": {"type": "string"},
        "complex": {
            "type": "object",
            "required": ["lo", "hi", "terms", "differentials"],
            "properties": {
                "lo": {"type": "integer"},
                "hi": {"type": "integer"},
                "terms": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                "differentials": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "array", "items": _ELEMENT}},
                },
            },
        },
    },
}

SCALAR_SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["schema", "window", "scalars"],
    "properties": {
        "schema": {"const": SCALAR_SYSTEM_SCHEMA_ID},
        "window": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "scalars": {"type": "object", "additionalProperties": {"type": "integer"}},
        "connecting": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}

TRIVIALIZATION_SCHEMA = {
    "type": "object",
    "required": ["schema", "objects", "components"],
    "properties": {
        "schema": {"const": TRIVIALIZATION_SCHEMA_ID},
        "objects": {"type": "object", "additionalProperties": {"type": "integer"}},
        "components": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        "connecting": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}


def validate_payload(payload: dict, schema: dict) -> dict:
    """Validate against a schema; raises ValueError with the failing path."""
    try:
        jsonschema.validate(payload, schema)
    except jsonschema.ValidationError as e:
        where = "/".join(str(part) for part in e.absolute_path) or "<root>"
        raise ValueError(f"✗ Error: invalid payload at {where}: {e.message}") from e
    return payload


def dumps(payload: dict) -> str:
    """Canonical JSON: sorted keys, 4-space indent, non-ASCII kept."""
    return json.dumps(payload, indent=4, sort_keys=True, ensure_ascii=False)


def combine_verdicts(verdicts: Iterable[str]) -> str:
    """fail beats undetermined beats pass."""
    verdicts = list(verdicts)
    if "fail" in verdicts:
        return "fail"
    if "undetermined" in verdicts:
        return "undetermined"
    return "pass"


def verdict_mark(verdict: str) -> str:
    if verdict == "pass":
        return f"{Fore.GREEN}✓ pass{Style.RESET_ALL}"
    if verdict == "fail":
        return f"{Fore.RED}✗ fail{Style.RESET_ALL}"
    return f"{Fore.YELLOW}? undetermined{Style.RESET_ALL}"


def render_reports(reports: List[dict]) -> str:
    """Human-readable table of report payloads."""
    lines = []
    for report in reports:
        lo, hi = report["window"]
        params = report["params"]
        lines.append(
            f"{report['check']:<18} A({params['r']},{params['N']}) p={params['p']} "
            f"[{lo},{hi}]  {verdict_mark(report['verdict'])}"
        )
        for key in sorted(report["details"]):
            value = report["details"][key]
            if isinstance(value, (int, str, float, bool)) or value is None:
                lines.append(f"    {key}: {value}")
        for witness in report["witnesses"][:10]:
            lines.append(f"    {Fore.RED}•{Style.RESET_ALL} " + ", ".join(f"{k}={witness[k]}" for k in sorted(witness)))
        if len(report["witnesses"]) > 10:
            lines.append(f"    ... {len(report['witnesses']) - 10} more")
    return "\n".join(lines)


def render_dim_table(labels: List[str], dims: List[List[int]]) -> str:
    width = max([len(label) for label in labels] + [4])
    header = " " * (width + 1) + " ".join(f"{i:>3}" for i in range(len(labels)))
    rows = [header]
    for i, label in enumerate(labels):
        cells = " ".join(f"{d:>3}" if d else f"{Style.DIM}  ·{Style.RESET_ALL}" for d in dims[i])
        rows.append(f"{label:<{width}} {cells}   ({i})")
    return "\n".join(rows)
