"""Code-descriptor files: JSON documents that pin down a field and one code
construction, plus a content digest used as the plan-cache key.

Schema:
    {"field": {"p": 13, "m": 1, "modulus": [c0, c1, ...]?},
     "construction": "rs" | "lrcrs" | "generator",
     ... construction fields ...}

rs:        "points": [ints] or "all", "k": int
lrcrs:     "p_poly": [ints, lowest degree first], "l": [ints]
generator: "rows": [[ints], ...]

Integer symbols may be negative; they are normalized into the field.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import codeops, rscodes
from .galois import Field


class DescriptorError(ValueError):
    """Malformed descriptor; the message names the offending field."""


@dataclass(frozen=True)
class CodeBundle:
    """A parsed descriptor together with the objects it constructs."""
    descriptor: dict
    digest: str
    field: Field
    kind: str                      # "rs" | "lrcrs" | "generator"
    spec: object | None            # RsSpec | LrcRsSpec | None
    code: codeops.LinearCode


def parse_descriptor(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(
            f"not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}")
    if not isinstance(obj, dict):
        raise DescriptorError("descriptor must be a JSON object")
    return obj


def load_descriptor(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_descriptor(fh.read())


def descriptor_digest(desc: dict) -> str:
    canonical = json.dumps(desc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _require(desc: dict, key: str, kinds, where: str):
    if key not in desc:
        raise DescriptorError(f"{where}: missing field {key!r}")
    value = desc[key]
    if kinds is not None and not isinstance(value, kinds):
        raise DescriptorError(f"{where}.{key}: unexpected type {type(value).__name__}")
    return value


def build_field(desc: dict) -> Field:
    frag = _require(desc, "field", dict, "descriptor")
    p = _require(frag, "p", int, "field")
    m = frag.get("m", 1)
    if not isinstance(m, int):
        raise DescriptorError("field.m: must be an integer")
    modulus = frag.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list) or not all(isinstance(c, int) for c in modulus):
            raise DescriptorError("field.modulus: must be a list of integers")
        modulus = tuple(modulus)
    try:
        return Field(p, m, modulus)
    except ValueError as exc:
        raise DescriptorError(f"field: {exc}") from None


def build_code(desc: dict) -> CodeBundle:
    """Construct the field and code a descriptor describes."""
    field = build_field(desc)
    kind = _require(desc, "construction", str, "descriptor")
    digest = descriptor_digest(desc)
    if kind == "rs":
        points = _require(desc, "points", (list, str), "rs")
        if points == "all":
            points = list(field.elements())
        elif isinstance(points, str):
            raise DescriptorError('rs.points: expected a list or "all"')
        else:
            try:
                points = [field.normalize(v) for v in points]
            except ValueError as exc:
                raise DescriptorError(f"rs.points: {exc}") from None
        k = _require(desc, "k", int, "rs")
        try:
            spec = rscodes.rs_make(field, points, k)
        except ValueError as exc:
            raise DescriptorError(f"rs: {exc}") from None
        return CodeBundle(desc, digest, field, kind, spec, spec.code)
    if kind == "lrcrs":
        p_poly = _require(desc, "p_poly", list, "lrcrs")
        l = _require(desc, "l", list, "lrcrs")
        try:
            p_poly = [field.normalize(v) for v in p_poly]
            spec = rscodes.lrcrs_make(field, p_poly, l)
        except ValueError as exc:
            raise DescriptorError(f"lrcrs: {exc}") from None
        return CodeBundle(desc, digest, field, kind, spec, spec.code)
    if kind == "generator":
        rows = _require(desc, "rows", list, "generator")
        try:
            rows = [[field.normalize(v) for v in row] for row in rows]
            code = codeops.code_from_rows(field, rows)
        except ValueError as exc:
            raise DescriptorError(f"generator: {exc}") from None
        return CodeBundle(desc, digest, field, kind, None, code)
    raise DescriptorError(f"construction: unknown kind {kind!r}")
