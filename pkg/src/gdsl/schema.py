"""The design-parameter space: schema, configurations, and the quantizer.

The shipped schema pins exactly 122 parameters split into topological
(component presence/count) and geometrical (dimensions) roles. Every
numeric parameter carries ordered descriptive buckets so it can be asked
as a multiple-choice question and edited in bucket steps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import yaml

from .errors import (
    InvalidArgument,
    ProjectionError,
    SchemaError,
    TokenDomainError,
    ValidationFailed,
)

PARAM_COUNT = 122
FLOAT_SCALE = 100  # the quantizer's precision factor for float parameters

KINDS = ("boolean", "integer", "float", "select")
ROLES = ("topological", "geometrical")


@dataclass(frozen=True)
class Bucket:
    """A descriptive label with its representative numeric value."""

    label: str
    value: float


@dataclass(frozen=True)
class ParamSpec:
    path: str
    kind: str
    role: str
    default: object
    range: tuple[float, float] | None = None
    options: tuple[str, ...] | None = None
    descriptive_buckets: tuple[Bucket, ...] = ()
    description: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"{self.path}: unknown kind {self.kind!r}")
        if self.role not in ROLES:
            raise SchemaError(f"{self.path}: unknown role {self.role!r}")
        if self.kind in ("integer", "float"):
            if self.range is None:
                raise SchemaError(f"{self.path}: numeric parameter needs a range")
            lo, hi = self.range
            if not lo < hi:
                raise SchemaError(f"{self.path}: bad range [{lo}, {hi}]")
            if self.kind == "integer" and lo < 0:
                raise SchemaError(f"{self.path}: integer range must be non-negative")
            if len(self.descriptive_buckets) < 2:
                raise SchemaError(
                    f"{self.path}: numeric parameter needs >= 2 descriptive buckets")
            values = [b.value for b in self.descriptive_buckets]
            if any(not lo <= v <= hi for v in values):
                raise SchemaError(f"{self.path}: bucket value outside range")
            if values != sorted(values):
                raise SchemaError(f"{self.path}: buckets must be ordered by value")
            labels = [b.label for b in self.descriptive_buckets]
            if len(set(labels)) != len(labels):
                raise SchemaError(f"{self.path}: duplicate bucket labels")
        if self.kind == "select":
            if not self.options or len(self.options) < 2:
                raise SchemaError(f"{self.path}: select needs >= 2 options")
            if len(set(self.options)) != len(self.options):
                raise SchemaError(f"{self.path}: duplicate select options")
        if self.check_value(self.default) is not None:
            raise SchemaError(
                f"{self.path}: default {self.default!r} outside parameter domain")

    def check_value(self, value) -> str | None:
        """None if the value is in this parameter's domain, else a reason."""
        if self.kind == "boolean":
            return None if isinstance(value, bool) else "wrong-kind"
        if self.kind == "select":
            if not isinstance(value, str):
                return "wrong-kind"
            return None if value in self.options else "out-of-range"
        if self.kind == "integer":
            if isinstance(value, bool) or not isinstance(value, int):
                return "wrong-kind"
        else:  # float
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return "wrong-kind"
        lo, hi = self.range
        return None if lo <= value <= hi else "out-of-range"

    def token_domain(self) -> tuple[int, int]:
        """Inclusive [lo, hi] token range for this parameter."""
        if self.kind == "boolean":
            return (0, 1)
        if self.kind == "select":
            return (0, len(self.options) - 1)
        if self.kind == "integer":
            return (int(self.range[0]), int(self.range[1]))
        return (0, FLOAT_SCALE)


@dataclass(frozen=True)
class DesignSchema:
    """The full, ordered 122-parameter design space."""

    params: tuple[ParamSpec, ...]
    schema_version: str = "1"

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        paths = [p.path for p in self.params]
        dups = {p for p in paths if paths.count(p) > 1}
        if dups:
            raise SchemaError(f"duplicate parameter paths: {sorted(dups)}")
        if len(self.params) != PARAM_COUNT:
            raise SchemaError(
                f"WRONG_PARAM_COUNT: schema has {len(self.params)} parameters, "
                f"expected {PARAM_COUNT}")
        object.__setattr__(self, "_by_path", {p.path: p for p in self.params})

    def __len__(self) -> int:
        return len(self.params)

    def __contains__(self, path: str) -> bool:
        return path in self._by_path

    def param(self, path: str) -> ParamSpec:
        try:
            return self._by_path[path]
        except KeyError:
            raise SchemaError(f"unknown parameter path {path!r}") from None

    def paths(self) -> tuple[str, ...]:
        return tuple(p.path for p in self.params)


@dataclass(frozen=True)
class DesignConfiguration:
    """One assignment of every schema parameter."""

    assignments: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignments", dict(self.assignments))

    def get(self, path: str):
        return self.assignments[path]

    def replace(self, updates: dict) -> "DesignConfiguration":
        merged = dict(self.assignments)
        merged.update(updates)
        return DesignConfiguration(merged)

    def to_json(self, schema: DesignSchema | None = None) -> str:
        order = schema.paths() if schema else sorted(self.assignments)
        doc = {"assignments": {p: self.assignments[p] for p in order
                               if p in self.assignments}}
        return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[int, ...]

    def __post_init__(self):
        toks = tuple(int(t) for t in self.tokens)
        if any(t < 0 for t in toks):
            raise InvalidArgument("tokens must be non-negative")
        if len(toks) != PARAM_COUNT:
            raise InvalidArgument(
                f"token sequence must have {PARAM_COUNT} entries, got {len(toks)}")
        object.__setattr__(self, "tokens", toks)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class ConfigViolation:
    path: str
    reason: str  # missing | out-of-range | unknown-path | wrong-kind
    message: str


# --- schema document ---------------------------------------------------------

def _param_from_doc(doc: dict) -> ParamSpec:
    if not isinstance(doc, dict) or "path" not in doc:
        raise SchemaError(f"parameter entry without a path: {doc!r}")
    path = doc["path"]
    try:
        buckets = tuple(Bucket(str(b["label"]), float(b["value"]))
                        for b in doc.get("descriptive_buckets", ()))
        rng = doc.get("range")
        return ParamSpec(
            path=str(path),
            kind=doc.get("kind", ""),
            role=doc.get("role", ""),
            default=doc.get("default"),
            range=(float(rng[0]), float(rng[1])) if rng is not None else None,
            options=tuple(str(o) for o in doc["options"]) if "options" in doc else None,
            descriptive_buckets=buckets,
            description=str(doc.get("description", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed parameter entry ({exc})") from None


def load_schema(text: str) -> DesignSchema:
    """Parse and validate a schema document (YAML, JSON-compatible)."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError(f"unreadable schema document: {exc}") from None
    if not isinstance(doc, dict) or "params" not in doc:
        raise SchemaError("schema document needs a top-level 'params' list")
    params = tuple(_param_from_doc(p) for p in doc["params"])
    return DesignSchema(params=params,
                        schema_version=str(doc.get("schema_version", "1")))


def schema_to_doc(schema: DesignSchema) -> dict:
    """The plain-data form of a schema, as served over HTTP."""
    params = []
    for p in schema.params:
        entry: dict = {"path": p.path, "kind": p.kind, "role": p.role,
                       "default": p.default}
        if p.range is not None:
            entry["range"] = list(p.range)
        if p.options is not None:
            entry["options"] = list(p.options)
        if p.descriptive_buckets:
            entry["descriptive_buckets"] = [
                {"label": b.label, "value": b.value} for b in p.descriptive_buckets]
        if p.description:
            entry["description"] = p.description
        params.append(entry)
    return {"schema_version": schema.schema_version, "params": params}


def package_data(name: str) -> str:
    """Read a text resource shipped under gdsl/data/."""
    return resources.files("gdsl").joinpath("data", name).read_text("utf-8")


def default_schema() -> DesignSchema:
    """The schema shipped with the package."""
    return load_schema(package_data("schema.yaml"))


def default_config(schema: DesignSchema) -> DesignConfiguration:
    return DesignConfiguration({p.path: p.default for p in schema.params})


def load_config(text: str) -> DesignConfiguration:
    """Parse a configuration document: {"assignments": {path: value}}."""
    import json as _json
    try:
        doc = _json.loads(text)
    except _json.JSONDecodeError as exc:
        from .errors import ParseError
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict) or "assignments" not in doc:
        from .errors import ParseError
        raise ParseError("configuration document needs an 'assignments' object",
                         field="$.assignments", code="MISSING_FIELD")
    return DesignConfiguration(doc["assignments"])


# --- configuration validation ------------------------------------------------

def validate_config(cfg: DesignConfiguration,
                    schema: DesignSchema) -> list[ConfigViolation]:
    """Domain check of every assignment; empty list means valid."""
    violations: list[ConfigViolation] = []
    for path in cfg.assignments:
        if path not in schema:
            violations.append(ConfigViolation(
                path, "unknown-path", f"{path!r} is not a schema parameter"))
    for spec in schema.params:
        if spec.path not in cfg.assignments:
            violations.append(ConfigViolation(
                spec.path, "missing", f"no value assigned for {spec.path!r}"))
            continue
        reason = spec.check_value(cfg.assignments[spec.path])
        if reason is not None:
            violations.append(ConfigViolation(
                spec.path, reason,
                f"{spec.path!r} = {cfg.assignments[spec.path]!r} ({reason})"))
    return violations


# --- quantization ------------------------------------------------------------

def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def quantize(cfg: DesignConfiguration, schema: DesignSchema) -> TokenSequence:
    """Type-based token encoding of a valid configuration.

    booleans -> 0/1; integers -> the value itself; floats -> min-max
    normalized and scaled by 100 (round half up); selects -> zero-based
    option index. Output length always equals the parameter count.
    """
    violations = validate_config(cfg, schema)
    if violations:
        raise ValidationFailed(
            f"cannot quantize an invalid configuration "
            f"({len(violations)} violations)", violations)
    tokens = []
    for spec in schema.params:
        value = cfg.assignments[spec.path]
        if spec.kind == "boolean":
            tokens.append(1 if value else 0)
        elif spec.kind == "integer":
            tokens.append(int(value))
        elif spec.kind == "float":
            lo, hi = spec.range
            norm = min(1.0, max(0.0, (float(value) - lo) / (hi - lo)))
            tokens.append(_round_half_up(FLOAT_SCALE * norm))
        else:
            tokens.append(spec.options.index(value))
    return TokenSequence(tuple(tokens))


def dequantize(tokens: TokenSequence, schema: DesignSchema) -> DesignConfiguration:
    """Inverse of :func:`quantize`; floats land on their token lattice."""
    assignments = {}
    for i, (spec, token) in enumerate(zip(schema.params, tokens.tokens)):
        lo, hi = spec.token_domain()
        if not lo <= token <= hi:
            raise TokenDomainError(
                f"token {token} outside domain [{lo}, {hi}] of {spec.path!r}", i)
        if spec.kind == "boolean":
            assignments[spec.path] = bool(token)
        elif spec.kind == "integer":
            assignments[spec.path] = int(token)
        elif spec.kind == "float":
            rlo, rhi = spec.range
            assignments[spec.path] = rlo + (token / FLOAT_SCALE) * (rhi - rlo)
        else:
            assignments[spec.path] = spec.options[token]
    return DesignConfiguration(assignments)


# --- descriptive-answer projection -------------------------------------------

def label_for_value(spec: ParamSpec, value) -> str:
    """The descriptive label that round-trips to this value, if any."""
    if spec.kind == "boolean":
        return "yes" if value else "no"
    if spec.kind == "select":
        if value in spec.options:
            return value
        raise ProjectionError(spec.path, value)
    for bucket in spec.descriptive_buckets:
        if bucket.value == value:
            return bucket.label
    raise ProjectionError(spec.path, value)


def value_for_label(spec: ParamSpec, label: str):
    """Map one descriptive answer label to a parameter value."""
    if spec.kind == "boolean":
        low = label.strip().lower()
        if low in ("yes", "true"):
            return True
        if low in ("no", "false"):
            return False
        raise ProjectionError(spec.path, label)
    if spec.kind == "select":
        for option in spec.options:
            if option.lower() == label.strip().lower():
                return option
        raise ProjectionError(spec.path, label)
    for bucket in spec.descriptive_buckets:
        if bucket.label.lower() == label.strip().lower():
            value = bucket.value
            return int(value) if spec.kind == "integer" else value
    raise ProjectionError(spec.path, label)


def project_answers(answers, schema: DesignSchema) -> DesignConfiguration:
    """Deterministic projector: descriptive answers -> configuration.

    Expects one validated answer per schema parameter (see
    ``agents.validate_answers``); raises ProjectionError otherwise.
    """
    by_path = {}
    for answer in answers:
        by_path[answer.param_path] = answer.label
    assignments = {}
    for spec in schema.params:
        if spec.path not in by_path:
            raise ProjectionError(spec.path, None)
        assignments[spec.path] = value_for_label(spec, by_path[spec.path])
    return DesignConfiguration(assignments)


# --- DressCode sequence-length model ------------------------------------------

@dataclass(frozen=True)
class DressCodeSeqParams:
    """Inputs of the vector-quantized baseline's sequence-length formula."""

    max_panels: int
    max_edges: int
    edge_len: int
    rotation_len: int = 4
    translation_len: int = 3
    stitch_len: int = 4

    def __post_init__(self):
        for name in ("max_panels", "max_edges", "edge_len", "rotation_len",
                     "translation_len", "stitch_len"):
            if getattr(self, name) <= 0:
                raise InvalidArgument(f"{name} must be positive")


def dresscode_seq_len(p: DressCodeSeqParams) -> int:
    """Token count a per-edge quantization scheme needs for the same space."""
    return p.max_panels * (p.max_edges * p.edge_len + p.rotation_len
                           + p.translation_len + p.max_edges * p.stitch_len) + 2
