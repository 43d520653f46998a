"""JSON document layout ("foliation/1") and decoding into library objects."""

import json

from jsonschema import Draft7Validator

from .algebra import BivarPoly
from .errors import SchemaError
from .foliation import VectorFieldC2
from .loops import LoopSpec

SCHEMA_VERSION = "foliation/1"

_NUMBER = {"type": "number"}

_COMPLEX = {
    "type": "object",
    "properties": {"re": _NUMBER, "im": _NUMBER},
    "required": ["re"],
}

BIVAR_POLY = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "i": {"type": "integer", "minimum": 0},
            "j": {"type": "integer", "minimum": 0},
            "re": _NUMBER,
            "im": _NUMBER,
        },
        "required": ["i", "j", "re"],
        "additionalProperties": False,
    },
}

LAURENT_POLY = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"k": {"type": "integer"}, "re": _NUMBER, "im": _NUMBER},
        "required": ["k", "re"],
        "additionalProperties": False,
    },
}

RATIONAL_FUNC = {
    "type": "object",
    "properties": {"num": LAURENT_POLY, "den": LAURENT_POLY},
    "required": ["num", "den"],
    "additionalProperties": False,
}

FIELD = {
    "type": "object",
    "properties": {"P": BIVAR_POLY, "Q": BIVAR_POLY},
    "required": ["P", "Q"],
}

CURVE = {"type": "object", "properties": {"F": BIVAR_POLY}, "required": ["F"]}

LOOP = {
    "type": "object",
    "properties": {
        "map": {
            "type": "object",
            "properties": {"z": RATIONAL_FUNC, "w": RATIONAL_FUNC},
            "required": ["z", "w"],
        },
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "orientation": {"enum": ["ccw", "cw"]},
    },
    "required": ["map", "radius"],
}

OPTIONS = {
    "type": "object",
    "properties": {
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "orientation": {"enum": ["ccw", "cw", "both"]},
        "method": {"type": "string"},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 8},
        "half_width": {"type": "number", "exclusiveMinimum": 0},
        "grid": {"type": "integer", "minimum": 2},
        "real_method": {"enum": ["conic", "sample"]},
        "reference_alpha_integral": _COMPLEX,
        "reference_note": {"type": "string"},
    },
}

DOCUMENT = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "field": FIELD,
        "curve": CURVE,
        "loop": LOOP,
        "options": OPTIONS,
        # flat request forms for the holonomy and real-points subcommands
        "F": BIVAR_POLY,
        "method": {"type": "string"},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 8},
        "half_width": {"type": "number", "exclusiveMinimum": 0},
        "grid": {"type": "integer", "minimum": 2},
    },
    "required": ["schema"],
}

_VALIDATOR = Draft7Validator(DOCUMENT)


def _pointer(path):
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate(doc):
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))
    return doc


def load_document(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    return validate(doc)


def require(doc, key):
    if key not in doc:
        raise SchemaError(f"'{key}' is required for this command", "/")
    return doc[key]


def decode_field(doc):
    data = require(doc, "field")
    try:
        return VectorFieldC2.from_json(data)
    except ValueError as exc:
        raise SchemaError(str(exc), "/field") from None


def decode_curve(doc):
    if "curve" in doc:
        data, where = doc["curve"]["F"], "/curve/F"
    elif "F" in doc:
        data, where = doc["F"], "/F"
    else:
        return None
    F = BivarPoly.from_json(data)
    if F.is_zero():
        raise SchemaError("curve polynomial is identically zero", where)
    return F


def decode_loop(doc, radius=None, orientation=None):
    if "loop" not in doc:
        return None
    try:
        loop = LoopSpec.from_json(doc["loop"])
    except ValueError as exc:
        raise SchemaError(str(exc), "/loop") from None
    if radius is not None:
        loop = loop.with_radius(radius)
    if orientation in ("ccw", "cw") and orientation != loop.orientation:
        loop = loop.reversed()
    return loop


def complex_from_json(data):
    return complex(data["re"], data.get("im", 0.0))


def complex_to_json(c):
    c = complex(c)
    return {"re": c.real, "im": c.imag}


def dumps(obj):
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
