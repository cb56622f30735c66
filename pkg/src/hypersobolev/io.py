"""Reading and writing hypergroup definition files and function files.

A hypergroup file is a JSON object::

    {"labels": ["e", "a"], "identity": "e", "involution": {"e": "e", "a": "a"},
     "convolution": {"e|e": {"e": 1}, "e|a": {"a": 1}, "a|e": {"a": 1},
                     "a|a": {"e": "1/2", "a": "1/2"}},
     "haar": {"e": 1, "a": 2}}

Masses are JSON numbers or ``"p/q"`` strings; omitted masses are zero.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from .hypergroup import (
    DEFAULT_TOL,
    FiniteHypergroup,
    HypergroupError,
    require_valid,
)

_NUMBER = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}

HYPERGROUP_SCHEMA = {
    "type": "object",
    "required": ["labels", "identity", "involution", "convolution"],
    "properties": {
        "labels": {"type": "array", "items": {"type": "string", "pattern": r"^[^|]+$"}, "minItems": 1},
        "identity": {"type": "string"},
        "involution": {"type": "object", "additionalProperties": {"type": "string"}},
        "convolution": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": _NUMBER},
        },
        "haar": {"type": "object", "additionalProperties": _NUMBER},
    },
}

_VALUE = {
    "oneOf": [
        _NUMBER,
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
FUNCTION_SCHEMA = {"type": "object", "additionalProperties": _VALUE}


class SchemaError(HypergroupError):
    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


def _json_path(parts) -> str:
    path = "$"
    for p in parts:
        path += f"[{p}]" if isinstance(p, int) else (f".{p}" if p.isidentifier() else f"[{json.dumps(p)}]")
    return path


def _validate_schema(document, schema):
    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(document), key=lambda err: list(err.absolute_path))
    if not errors:
        return
    err = errors[0]
    parts = list(err.absolute_path)
    if err.validator == "required":
        missing = [k for k in err.validator_value if k not in err.instance]
        parts.append(missing[0])
        raise SchemaError("required field is missing", _json_path(parts))
    raise SchemaError(err.message, _json_path(parts))


def parse_number(value) -> Fraction | float:
    if isinstance(value, bool):
        raise SchemaError(f"expected a number, got {value!r}")
    if isinstance(value, str):
        return Fraction(value.replace(" ", ""))
    if isinstance(value, int):
        return Fraction(value)
    return float(value)


def format_number(value):
    """JSON form of a mass: ints stay ints, other rationals become "p/q"."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return float(value)


def parse(document, validate: bool = True, tol: float = DEFAULT_TOL) -> FiniteHypergroup:
    """Build a hypergroup from a decoded JSON document.

    With ``validate`` (the default) the axioms are checked and AxiomError is
    raised on failure; supplied Haar weights are checked, never trusted.
    """
    _validate_schema(document, HYPERGROUP_SCHEMA)
    labels = document["labels"]
    if len(set(labels)) != len(labels):
        raise SchemaError("labels must be distinct", "$.labels")
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)

    def lookup(label, path):
        if label not in index:
            raise SchemaError(f"unknown label {label!r}", path)
        return index[label]

    e = lookup(document["identity"], "$.identity")
    involution = document["involution"]
    for label in involution:
        lookup(label, _json_path(["involution", label]))
    inv = []
    for label in labels:
        if label not in involution:
            raise SchemaError(f"no image for {label!r}", _json_path(["involution", label]))
        inv.append(lookup(involution[label], _json_path(["involution", label])))

    conv = document["convolution"]
    c_exact = np.empty((n, n, n), dtype=object)
    c_exact.fill(Fraction(0))
    exact = True
    for key in conv:
        parts = key.split("|")
        if len(parts) != 2:
            raise SchemaError("keys must have the form 'x|y'", _json_path(["convolution", key]))
        for part in parts:
            lookup(part, _json_path(["convolution", key]))
    for x, lx in enumerate(labels):
        for y, ly in enumerate(labels):
            key = f"{lx}|{ly}"
            if key not in conv:
                raise SchemaError("missing product", _json_path(["convolution", key]))
            for lz, mass in conv[key].items():
                z = lookup(lz, _json_path(["convolution", key, lz]))
                value = parse_number(mass)
                exact = exact and isinstance(value, Fraction)
                c_exact[x, y, z] = value

    haar = haar_exact = None
    if "haar" in document:
        values = []
        for label in labels:
            if label not in document["haar"]:
                raise SchemaError(f"no Haar weight for {label!r}", _json_path(["haar", label]))
            values.append(parse_number(document["haar"][label]))
        for label in document["haar"]:
            lookup(label, _json_path(["haar", label]))
        haar = [float(v) for v in values]
        if all(isinstance(v, Fraction) for v in values):
            haar_exact = tuple(values)

    c = np.vectorize(float, otypes=[float])(c_exact)
    H = FiniteHypergroup(
        labels, c, inv, e, haar,
        c_exact=c_exact if exact else None, haar_exact=haar_exact,
    )
    return require_valid(H, tol) if validate else H


def serialize(H: FiniteHypergroup, include_haar: bool | None = None) -> dict:
    """Inverse of :func:`parse`; exact rational data is written as "p/q" strings.

    Haar weights are written when exact ones are known (or when asked to).
    """
    labels = list(H.labels)
    data = H.c_exact if H.c_exact is not None else H.c
    conv = {}
    for x, lx in enumerate(labels):
        for y, ly in enumerate(labels):
            conv[f"{lx}|{ly}"] = {
                labels[z]: format_number(data[x, y, z]) for z in range(H.n) if data[x, y, z] != 0
            }
    doc = {
        "labels": labels,
        "identity": labels[H.e],
        "involution": {labels[x]: labels[H.inv[x]] for x in range(H.n)},
        "convolution": conv,
    }
    if include_haar is None:
        include_haar = H.haar_exact is not None
    if include_haar and H.haar is not None:
        weights = H.haar_exact if H.haar_exact is not None else H.haar
        doc["haar"] = {label: format_number(w) for label, w in zip(labels, weights)}
    return doc


def dumps(document) -> str:
    return json.dumps(document, indent=1, ensure_ascii=False) + "\n"


def load(path, validate: bool = True, tol: float = DEFAULT_TOL) -> FiniteHypergroup:
    return parse(read_json(path), validate=validate, tol=tol)


def save(H: FiniteHypergroup, path) -> None:
    Path(path).write_text(dumps(serialize(H)), encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None


def parse_function(document, labels) -> np.ndarray:
    """Label-keyed values (numbers, "p/q" or [re, im]); omitted labels are 0."""
    _validate_schema(document, FUNCTION_SCHEMA)
    index = {label: i for i, label in enumerate(labels)}
    f = np.zeros(len(labels), dtype=complex)
    for label, value in document.items():
        if label not in index:
            raise SchemaError(f"unknown label {label!r}", _json_path([label]))
        f[index[label]] = complex(*value) if isinstance(value, list) else float(parse_number(value))
    return f


def complex_pair(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def parse_coefficients(document) -> np.ndarray:
    """A JSON array of numbers or [re, im] pairs."""
    if isinstance(document, dict) and "coefficients" in document:
        document = document["coefficients"]
    _validate_schema(document, {"type": "array", "items": _VALUE})
    return np.array([complex(*v) if isinstance(v, list) else float(parse_number(v)) for v in document])


def parse_cayley(document):
    """``{"labels": [...], "table": [[label, ...], ...]}`` -> (labels, index table)."""
    schema = {
        "type": "object",
        "required": ["labels", "table"],
        "properties": {
            "labels": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            "table": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        },
    }
    _validate_schema(document, schema)
    labels = document["labels"]
    index = {label: i for i, label in enumerate(labels)}
    table = []
    for r, row in enumerate(document["table"]):
        if len(row) != len(labels):
            raise SchemaError("row length differs from the number of labels", f"$.table[{r}]")
        out = []
        for col, label in enumerate(row):
            if label not in index:
                raise SchemaError(f"unknown label {label!r}", f"$.table[{r}][{col}]")
            out.append(index[label])
        table.append(out)
    if len(table) != len(labels):
        raise SchemaError("table must be square", "$.table")
    return labels, table
