"""Body measurements consumed by the drafting rules."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

from .errors import DraftError, ParseError


@dataclass(frozen=True)
class BodyMeasurements:
    """Anthropometric measurements in cm. Defaults are the standard body
    (A-pose) used by every experiment unless a measurements file overrides it.
    """

    height: float = 170.0
    neck_circ: float = 36.0
    shoulder_width: float = 38.0
    bust_circ: float = 90.0
    underbust_circ: float = 78.0
    waist_circ: float = 70.0
    hip_circ: float = 95.0
    back_width: float = 36.0
    arm_length: float = 55.0
    wrist_circ: float = 16.0
    waist_to_hip: float = 20.0
    waist_to_knee: float = 55.0
    waist_to_floor: float = 100.0
    rise_depth: float = 26.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or value <= 0:
                raise DraftError(f"measurement {f.name} must be positive, got {value!r}")
        if self.bust_circ < self.underbust_circ:
            raise DraftError("bust_circ must be >= underbust_circ")
        if self.hip_circ < 0.8 * self.waist_circ:
            raise DraftError("hip_circ must be >= 0.8 * waist_circ")
        if self.waist_to_knee >= self.waist_to_floor:
            raise DraftError("waist_to_knee must be < waist_to_floor")


STANDARD_BODY = BodyMeasurements()


def load_body(text: str) -> BodyMeasurements:
    """Parse a measurements file: a JSON object of field -> cm."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("measurements document must be an object", field="$")
    known = {f.name for f in fields(BodyMeasurements)}
    unknown = set(doc) - known
    if unknown:
        raise ParseError(f"unknown measurements: {sorted(unknown)}", field="$")
    return BodyMeasurements(**{k: float(v) for k, v in doc.items()})
