"""JSON report documents: fixed key order, schema validation, round trip.

Integers too large for a double (|x| >= 2**53) are written as decimal
strings and turned back into ints on parse.
"""

from __future__ import annotations

import hashlib
import json

__all__ = [
    "SCHEMA_VERSION",
    "ReportSchemaError",
    "render",
    "parse",
    "report_roundtrip",
    "validate",
    "digest",
]

SCHEMA_VERSION = "1"
_SAFE_INT = 2**53


class ReportSchemaError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _dict(**keys):
    return {"type": "dict", "keys": keys}


def _list(item):
    return {"type": "list", "items": item}


def _opt(spec):
    return {"type": "nullable", "inner": spec}


_INTS = _list("int")

_SMOOTHNESS = _dict(
    status="str",
    witness_point=_opt(_INTS),
    witness_field=_opt("str"),
    scanned_extensions=_INTS,
    certificate=_opt("str"),
)

_VANISHING = _dict(
    d="int",
    p="int",
    family=_opt("str"),
    computed_zero_set=_INTS,
    predicted_zero_set=_opt(_INTS),
    agree=_opt("bool"),
    verdict=_opt("str"),
    prediction="any",
)

_FIELD_REPORT = _dict(
    field="str",
    q="int",
    ambient_lines="int",
    total_lines_on_X="int",
    free_lines=_opt("int"),
    splitting_histogram=_opt(_list(_dict(type=_INTS, count="int", free="bool"))),
    point_census=_opt(_dict(points_on_X="int", incidences="int", histogram="any")),
)

SCHEMAS = {
    "degrees": _dict(
        schema_version="str",
        kind="str",
        d="int",
        catalan="int",
        conic_degree="int",
        bad_primes=_INTS,
        torsion_order_bound="int",
    ),
    "classify": _dict(
        schema_version="str",
        kind="str",
        n="int",
        degrees=_INTS,
        p="int",
        fano_index="int",
        expected_fiber_dim="int",
        tuple_label="str",
        branches=_list(_dict(d="int", branch="str", tested="int", label="str")),
        flags=_dict(
            index_at_least_2="bool",
            p_exceeds_max_degree="bool",
            tuple_p_special="bool",
            max_degree_at_least_p="bool",
        ),
        conclusion="str",
    ),
    "witness": _dict(
        schema_version="str",
        kind="str",
        family="str",
        n="int",
        d="int",
        field="str",
        polynomial="str",
        equations=_list("str"),
        hypotheses="any",
        smoothness=_SMOOTHNESS,
        vanishing=_VANISHING,
    ),
    "lines": _dict(
        schema_version="str",
        kind="str",
        n="int",
        equations=_list("str"),
        census="bool",
        reports=_list(_FIELD_REPORT),
    ),
    "manifest": _dict(
        schema_version="str",
        kind="str",
        command="str",
        argv=_list("str"),
        parameters="any",
        artifact_version="str",
        seed=_opt("int"),
        stdout_sha256="str",
        outputs=_list(_dict(path="str", sha256="str")),
    ),
    "replay": _dict(
        schema_version="str",
        kind="str",
        manifest="str",
        matches="bool",
        outputs=_list(_dict(path="str", expected="str", actual=_opt("str"), match="bool")),
    ),
    "error": _dict(schema_version="str", kind="str", error="str", message="str"),
}


def _check(value, spec, pointer: str):
    """Validate and normalize value against spec; returns the normalized value."""
    if spec == "any":
        return value
    if spec == "int":
        if isinstance(value, bool):
            raise ReportSchemaError(pointer, "expected integer")
        if isinstance(value, int):
            return value
        if isinstance(value, str) and value.lstrip("-").isdigit():
            return int(value)
        raise ReportSchemaError(pointer, "expected integer")
    if spec == "str":
        if not isinstance(value, str):
            raise ReportSchemaError(pointer, "expected string")
        return value
    if spec == "bool":
        if not isinstance(value, bool):
            raise ReportSchemaError(pointer, "expected boolean")
        return value
    kind = spec["type"]
    if kind == "nullable":
        return None if value is None else _check(value, spec["inner"], pointer)
    if kind == "list":
        if not isinstance(value, list):
            raise ReportSchemaError(pointer, "expected list")
        return [_check(v, spec["items"], f"{pointer}/{i}") for i, v in enumerate(value)]
    if kind == "dict":
        if not isinstance(value, dict):
            raise ReportSchemaError(pointer, "expected object")
        keys = spec["keys"]
        for k in value:
            if k not in keys:
                raise ReportSchemaError(f"{pointer}/{k}", f"unknown key {k!r}")
        out = {}
        for k, sub in keys.items():
            if k not in value:
                raise ReportSchemaError(f"{pointer}/{k}", f"missing key {k!r}")
            out[k] = _check(value[k], sub, f"{pointer}/{k}")
        return out
    raise AssertionError(f"bad schema node {spec!r}")


def validate(doc) -> dict:
    """Check a document against its schema and return it in canonical key order."""
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise ReportSchemaError("/schema_version", "missing schema version")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ReportSchemaError("/schema_version", f"unsupported schema version {doc['schema_version']!r}")
    kind = doc.get("kind")
    if kind not in SCHEMAS:
        raise ReportSchemaError("/kind", f"unknown report kind {kind!r}")
    return _check(doc, SCHEMAS[kind], "")


def _encode(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= _SAFE_INT else value
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def render(doc: dict) -> str:
    return json.dumps(_encode(validate(doc)), indent=2) + "\n"


def parse(text: str) -> dict:
    try:
        raw = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ReportSchemaError("", f"invalid JSON: {exc}") from None
    return validate(raw)


def report_roundtrip(doc: dict) -> dict:
    return parse(render(doc))


def digest(data: str | bytes) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()
