"""Job files (UTF-8 JSON, ``"schema": 1``) and report envelopes."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property

from .domains import parse_domain
from .dynamics import PolyMap
from .errors import ValidationError
from .groebner import Ideal
from .parser import parse_poly
from .polynomial import PolyRing, parse_order

SCHEMA_VERSION = 1

KNOWN_FIELDS = {
    "schema",
    "name",
    "description",
    "variables",
    "coefficient_field",
    "defining_ideal",
    "sigma",
    "sigma_inv",
    "ideal_I",
    "ideal_J",
    "window",
    "prime",
    "precision",
    "point",
    "series",
    "options",
    "expected",
}


def _string_list(data, key, required=False):
    value = data.get(key)
    if value is None:
        if required:
            raise ValidationError("missing required field", field=key)
        return None
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValidationError("expected a list of polynomial strings", field=key)
    return value


def _int_field(data, key, minimum=None):
    value = data.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError("expected an integer", field=key)
    if minimum is not None and value < minimum:
        raise ValidationError(f"must be at least {minimum}", field=key)
    return value


@dataclass
class Job:
    """A validated job.  Algebraic objects are built lazily on first use."""

    data: dict
    variables: tuple = ()
    field_spec: str = "Q"
    window: int | None = None
    prime: int | None = None
    precision: int | None = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ValidationError("a job must be a JSON object")
        schema = data.get("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ValidationError(f"unsupported schema {schema!r}", field="schema")
        unknown = sorted(set(data) - KNOWN_FIELDS)
        if unknown:
            raise ValidationError(f"unknown field(s) {unknown}", field=unknown[0])
        variables = data.get("variables", [])
        if not isinstance(variables, list) or not all(isinstance(v, str) and v.isidentifier() for v in variables):
            raise ValidationError("expected a list of identifiers", field="variables")
        field_spec = data.get("coefficient_field", "Q")
        if not isinstance(field_spec, str):
            raise ValidationError("expected a string", field="coefficient_field")
        options = data.get("options", {}) or {}
        if not isinstance(options, dict):
            raise ValidationError("expected an object", field="options")
        for key in ("defining_ideal", "sigma", "sigma_inv", "ideal_I", "ideal_J", "point"):
            _string_list(data, key)
        job = cls(
            data=data,
            variables=tuple(variables),
            field_spec=field_spec,
            window=_int_field(data, "window", 0),
            prime=_int_field(data, "prime", 2),
            precision=_int_field(data, "precision", 1),
            options=options,
        )
        n = len(job.variables)
        for key in ("sigma", "sigma_inv", "point"):
            value = data.get(key)
            if value is not None and len(value) != n:
                raise ValidationError(f"expected {n} entries, one per variable, got {len(value)}", field=key)
        return job

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            raw = fh.read()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError("job file is not valid UTF-8", offset=exc.start)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            # report a byte offset, like the polynomial parser
            raise ValidationError(f"invalid JSON: {exc.msg}", offset=len(text[: exc.pos].encode("utf-8")))
        return cls.from_dict(data)

    # -- derived objects ----------------------------------------------------

    @cached_property
    def domain(self):
        return parse_domain(self.field_spec)

    @cached_property
    def ring(self):
        if not self.variables:
            raise ValidationError("no variables declared", field="variables")
        order = parse_order(self.options.get("order", "grevlex"))
        return PolyRing(self.domain, self.variables, order)

    def polys(self, key, required=True):
        texts = _string_list(self.data, key, required=required)
        if texts is None:
            return None
        out = []
        for i, text in enumerate(texts):
            out.append(parse_poly(text, self.ring, field=f"{key}[{i}]"))
        return out

    def ideal(self, key, required=True):
        polys = self.polys(key, required=required)
        return None if polys is None else Ideal(self.ring, polys)

    @cached_property
    def defining_ideal(self):
        Q = self.ideal("defining_ideal", required=False)
        return None if Q is None or Q.is_zero() else Q

    @cached_property
    def ideal_I(self):
        return self.ideal("ideal_I")

    @cached_property
    def ideal_J(self):
        return self.ideal("ideal_J")

    def sigma(self, require_inverse=True, verify=True):
        images = self.polys("sigma")
        inverse = self.polys("sigma_inv", required=require_inverse)
        return PolyMap(self.ring, images, inverse, modulo=self.defining_ideal, verify=verify)

    @cached_property
    def automorphism(self):
        return self.sigma()

    def option(self, key, default=None):
        return self.options.get(key, default)

    def canonical(self):
        return canonical_json(self.data)

    def hash(self):
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def envelope(command, job: Job, result, diagnostics=None):
    from . import __version__

    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "job_hash": job.hash(),
        "version": __version__,
        "result": result,
        "diagnostics": diagnostics or {},
        "job": job.data,
    }
