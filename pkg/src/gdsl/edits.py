"""Natural-language-style edit commands: a small closed grammar.

Free-form edits live with the remote agent, whose comparison prompt asks
it to rewrite suggestions into this grammar. Here we only parse:

    CHANGE <garment> TO <garment>
    MAKE <target> (SLEEVELESS | LONGER | SHORTER)
    SHORTEN <target> | LENGTHEN <target>
    SET <path> TO <label>
    REMOVE <component>

Case-insensitive; articles are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EditError, ParseError
from .schema import DesignConfiguration, DesignSchema, value_for_label

_ARTICLES = {"the", "a", "an", "my", "this", "that", "its"}

# surface words -> canonical bottom-garment kinds
_GARMENT_KINDS = {
    "pant": "pants", "pants": "pants", "trouser": "pants", "trousers": "pants",
    "jeans": "pants", "shorts": "pants",
    "skirt": "skirt", "skirts": "skirt",
    "layered skirt": "layered_skirt", "layered_skirt": "layered_skirt",
    "tiered skirt": "layered_skirt",
}

# shorten/lengthen targets -> the length parameter they step
_LENGTH_TARGETS = {
    "sleeve": "sleeve.length",
    "skirt": "skirt.length",
    "layered skirt": "layered_skirt.base_length",
    "pants": "pants.length",
    "bodice": "bodice.length",
    "shirt": "bodice.length",
    "top": "bodice.length",
    "torso": "bodice.length",
    "dress": "skirt.length",
    "collar": "collar.height",
    "cuff": "cuff.height",
    "waistband": "waistband.height",
}

# removable components -> the topology flips that remove them
_REMOVABLES = {
    "sleeve": {"meta.sleeves.enabled": False, "meta.cuffs.enabled": False},
    "cuff": {"meta.cuffs.enabled": False},
    "collar": {"collar.kind": "none"},
    "waistband": {"meta.waistband.enabled": False},
    "bottom": {"meta.bottom.kind": "none"},
    "pants": {"meta.bottom.kind": "none"},
    "skirt": {"meta.bottom.kind": "none"},
    "layered skirt": {"meta.bottom.kind": "none"},
    "bodice": {"meta.upper.enabled": False, "meta.sleeves.enabled": False,
               "meta.cuffs.enabled": False, "collar.kind": "none"},
    "shirt": {"meta.upper.enabled": False, "meta.sleeves.enabled": False,
              "meta.cuffs.enabled": False, "collar.kind": "none"},
}

_SINGULAR = {"sleeves": "sleeve", "cuffs": "cuff", "collars": "collar",
             "skirts": "skirt", "shirts": "shirt", "tops": "top",
             "dresses": "dress", "waistbands": "waistband",
             "bodices": "bodice"}


@dataclass(frozen=True)
class EditCommand:
    verb: str  # set | change_garment | remove | shorten | lengthen
    target: str
    value: str | None = None

    def declared_paths(self) -> tuple[str, ...]:
        """Every configuration path this command is allowed to touch."""
        if self.verb == "set":
            return (self.target,)
        if self.verb == "change_garment":
            return ("meta.bottom.kind",)
        if self.verb == "remove":
            return tuple(_REMOVABLES[self.target])
        return (_LENGTH_TARGETS[self.target],)


@dataclass
class EditResult:
    config: DesignConfiguration
    changed_paths: list[str] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)


def _tokens(text: str) -> list[str]:
    cleaned = text.strip().rstrip(".!?").lower()
    return [t for t in cleaned.split() if t and t not in _ARTICLES]


def _canonical(words: list[str]) -> str:
    phrase = " ".join(_SINGULAR.get(w, w) for w in words)
    return phrase


def _match_target(words: list[str], table: dict, what: str, original: str):
    phrase = _canonical(words)
    if phrase in table:
        return phrase
    # try the last word alone ("make the red sleeve longer" -> sleeve)
    for w in reversed(words):
        single = _SINGULAR.get(w, w)
        if single in table:
            return single
    raise ParseError(f"no {what} found in {phrase!r}", field=original)


def parse_edit_instruction(text: str) -> EditCommand:
    """Parse one instruction; ParseError carries the unmatched remainder."""
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty instruction", field=text)
    verb, rest = toks[0], toks[1:]

    if verb == "change":
        if "to" not in rest:
            raise ParseError("CHANGE needs '... TO ...'", field=text)
        split = rest.index("to")
        src = _match_target(rest[:split], _GARMENT_KINDS, "garment", text)
        dst = _match_target(rest[split + 1:], _GARMENT_KINDS, "garment", text)
        return EditCommand("change_garment", _GARMENT_KINDS[src],
                           _GARMENT_KINDS[dst])

    if verb == "make":
        if not rest:
            raise ParseError("MAKE needs a target and a direction", field=text)
        last = rest[-1]
        if last == "sleeveless":
            return EditCommand("remove", "sleeve")
        if last in ("longer", "shorter"):
            target = _match_target(rest[:-1], _LENGTH_TARGETS, "target", text)
            return EditCommand("lengthen" if last == "longer" else "shorten", target)
        raise ParseError(f"MAKE supports SLEEVELESS/LONGER/SHORTER, got {last!r}",
                         field=text)

    if verb in ("shorten", "lengthen"):
        target = _match_target(rest, _LENGTH_TARGETS, "target", text)
        return EditCommand(verb, target)

    if verb == "set":
        if "to" not in rest:
            raise ParseError("SET needs '<path> TO <label>'", field=text)
        split = rest.index("to")
        if split != 1 or not rest[split + 1:]:
            raise ParseError("SET needs '<path> TO <label>'", field=text)
        return EditCommand("set", rest[0], " ".join(rest[split + 1:]))

    if verb == "remove":
        target = _match_target(rest, _REMOVABLES, "component", text)
        return EditCommand("remove", target)

    raise ParseError(f"no grammar rule matches {verb!r}", field=text)


def format_edit_command(cmd: EditCommand) -> str:
    """Canonical textual form; parsing it returns an equal command."""
    if cmd.verb == "set":
        return f"SET {cmd.target} TO {cmd.value}"
    if cmd.verb == "change_garment":
        return (f"CHANGE {cmd.target.replace('_', ' ').upper()} "
                f"TO {cmd.value.replace('_', ' ').upper()}")
    if cmd.verb == "remove":
        return f"REMOVE {cmd.target.upper()}"
    return f"{cmd.verb.upper()} {cmd.target.upper()}"


# --- applying commands ----------------------------------------------------------

def _bucket_index(spec, value) -> int:
    values = [b.value for b in spec.descriptive_buckets]
    if value in values:
        return values.index(value)
    return min(range(len(values)), key=lambda i: abs(values[i] - value))


def _step_bucket(cfg: DesignConfiguration, path: str, direction: int,
                 schema: DesignSchema, result: EditResult):
    spec = schema.param(path)
    if not spec.descriptive_buckets:
        raise EditError(f"{path} has no descriptive buckets to step through")
    idx = _bucket_index(spec, cfg.get(path))
    new_idx = idx + direction
    if not 0 <= new_idx < len(spec.descriptive_buckets):
        result.notices.append(
            f"{path} already at bucket extreme "
            f"({spec.descriptive_buckets[idx].label}); no change")
        return cfg
    bucket = spec.descriptive_buckets[new_idx]
    value = int(bucket.value) if spec.kind == "integer" else bucket.value
    result.changed_paths.append(path)
    result.notices.append(f"{path}: {spec.descriptive_buckets[idx].label} -> "
                          f"{bucket.label}")
    return cfg.replace({path: value})


def _flip(cfg: DesignConfiguration, updates: dict, result: EditResult):
    actual = {p: v for p, v in updates.items() if cfg.get(p) != v}
    if not actual:
        result.notices.append("already removed; no change")
        return cfg
    result.changed_paths.extend(actual)
    return cfg.replace(actual)


def apply_edit(cfg: DesignConfiguration, cmd: EditCommand,
               schema: DesignSchema) -> EditResult:
    """Apply one command; everything outside its declared paths is untouched."""
    result = EditResult(config=cfg)

    if cmd.verb == "set":
        if cmd.target not in schema:
            raise EditError(f"unknown parameter {cmd.target!r}")
        spec = schema.param(cmd.target)
        try:
            value = value_for_label(spec, cmd.value)
        except Exception:
            try:
                raw = float(cmd.value)
            except (TypeError, ValueError):
                raise EditError(
                    f"{cmd.value!r} is neither a choice label nor a number "
                    f"for {cmd.target}") from None
            if spec.kind not in ("integer", "float") or \
                    spec.check_value(int(raw) if spec.kind == "integer" else raw):
                raise EditError(f"{cmd.value!r} out of domain for {cmd.target}")
            value = int(raw) if spec.kind == "integer" else raw
        if cfg.get(cmd.target) == value:
            result.notices.append(f"{cmd.target} already {value!r}; no change")
        else:
            result.changed_paths.append(cmd.target)
            result.config = cfg.replace({cmd.target: value})
        return result

    if cmd.verb == "change_garment":
        current = cfg.get("meta.bottom.kind")
        if current != cmd.target:
            result.notices.append(
                f"bottom is {current!r}, not {cmd.target!r}; changing anyway")
        if current == cmd.value:
            result.notices.append(f"bottom already {cmd.value!r}; no change")
            return result
        result.changed_paths.append("meta.bottom.kind")
        result.config = cfg.replace({"meta.bottom.kind": cmd.value})
        return result

    if cmd.verb == "remove":
        result.config = _flip(cfg, _REMOVABLES[cmd.target], result)
        return result

    if cmd.verb in ("shorten", "lengthen"):
        path = _LENGTH_TARGETS[cmd.target]
        direction = 1 if cmd.verb == "lengthen" else -1
        result.config = _step_bucket(cfg, path, direction, schema, result)
        return result

    raise EditError(f"unknown verb {cmd.verb!r}")


# --- pressure feedback ------------------------------------------------------------

# pressure regions -> the ease/width parameter that relieves them
REGION_PARAMS = {
    "cuff": "cuff.ease",
    "upper_bodice": "bodice.ease",
    "lower_bodice": "bodice.hem_ease",
    "collar": "neckline.width_ratio",
}


def apply_pressure_feedback(cfg: DesignConfiguration, report,
                            schema: DesignSchema) -> EditResult:
    """Tight regions step their ease parameter up a bucket, loose ones down."""
    result = EditResult(config=cfg)
    for entry in report:
        region = entry["region"]
        tightness = entry["tightness"]
        if region not in REGION_PARAMS:
            raise EditError(f"unknown pressure region {region!r}")
        if tightness not in ("tight", "ok", "loose"):
            raise EditError(f"unknown tightness {tightness!r}")
        if tightness == "ok":
            continue
        direction = 1 if tightness == "tight" else -1
        result.config = _step_bucket(result.config, REGION_PARAMS[region],
                                     direction, schema, result)
    return result
