"""The compiled sewing-pattern artifact.

A :class:`Pattern` is a set of flat panels (closed loops of parametric
edges, each with a 3D placement) plus a stitch graph. The validator is the
structural stand-in for draping a garment: closure, simplicity, stitch
resolution and stitch length compatibility. All types are immutable values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import GdslError, InvalidArgument, ParseError
from .geometry import Edge, PointSet2D, curve_length, is_simple_polygon

# Largest endpoint gap still considered "closed", and the per-edge sampling
# resolution used when a curved outline is discretized for simplicity checks.
CLOSURE_TOL_CM = 0.01
CURVE_SAMPLES = 32

# Relative tolerance on stitched-edge length ratio vs. the declared ruffle.
STITCH_LENGTH_RTOL = 0.05

RUFFLE_MIN, RUFFLE_MAX = 0.25, 4.0

PATTERN_FORMAT = "gdsl-pattern"
PATTERN_FORMAT_VERSION = 1


@dataclass(frozen=True)
class PanelPlacement:
    """Rigid 3D placement of a panel: unit quaternion (w,x,y,z) + translation (cm)."""

    rotation: tuple[float, float, float, float] = (1.0, 0.0, 0.0, 0.0)
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        rot = tuple(float(v) for v in self.rotation)
        tra = tuple(float(v) for v in self.translation)
        if len(rot) != 4 or len(tra) != 3:
            raise InvalidArgument("placement needs a 4-quaternion and a 3-translation")
        norm = math.sqrt(sum(v * v for v in rot))
        if abs(norm - 1.0) > 1e-6:
            raise InvalidArgument(f"rotation quaternion norm {norm:.6f} != 1")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", tra)


class EdgeRef(NamedTuple):
    """Reference to one edge of one panel."""

    panel_id: str
    edge_index: int


@dataclass(frozen=True)
class Stitch:
    """A sewing correspondence between two panel edges.

    ``ruffle_factor`` is the intended length ratio side_a/side_b; 1.0 means
    a plain seam, values above 1 gather side_a into side_b.
    """

    side_a: EdgeRef
    side_b: EdgeRef
    ruffle_factor: float = 1.0

    def __post_init__(self):
        a = EdgeRef(str(self.side_a[0]), int(self.side_a[1]))
        b = EdgeRef(str(self.side_b[0]), int(self.side_b[1]))
        if a == b:
            raise InvalidArgument(f"stitch cannot join an edge to itself: {a}")
        rho = float(self.ruffle_factor)
        if not (RUFFLE_MIN <= rho <= RUFFLE_MAX):
            raise InvalidArgument(
                f"ruffle_factor {rho} outside [{RUFFLE_MIN}, {RUFFLE_MAX}]")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)
        object.__setattr__(self, "ruffle_factor", rho)


@dataclass(frozen=True)
class Panel:
    """One flat piece: an ordered loop of edges plus a 3D placement."""

    id: str
    edges: tuple[Edge, ...]
    placement: PanelPlacement = PanelPlacement()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    def outline(self, samples_per_curve: int = CURVE_SAMPLES) -> PointSet2D:
        """Discretized boundary polygon (curved edges sampled, no dup points)."""
        pts: list[tuple[float, float]] = []
        for e in self.edges:
            if e.kind == "line":
                pts.append(e.start)
            else:
                for i in range(samples_per_curve):
                    pts.append(e.point_at(i / samples_per_curve))
        dedup: list[tuple[float, float]] = []
        for p in pts:
            if not dedup or math.hypot(p[0] - dedup[-1][0], p[1] - dedup[-1][1]) > 1e-9:
                dedup.append(p)
        if len(dedup) > 1 and math.hypot(dedup[0][0] - dedup[-1][0],
                                         dedup[0][1] - dedup[-1][1]) <= 1e-9:
            dedup.pop()
        return PointSet2D(tuple(dedup))

    def bbox(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) of the sampled outline."""
        pts = self.outline().points
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class Pattern:
    """The full artifact: panels plus the stitch graph."""

    panels: tuple[Panel, ...] = ()
    stitches: tuple[Stitch, ...] = ()
    provenance: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "panels", tuple(self.panels))
        object.__setattr__(self, "stitches", tuple(self.stitches))

    def panel_by_id(self, panel_id: str) -> Panel | None:
        for p in self.panels:
            if p.id == panel_id:
                return p
        return None

    def resolve(self, ref: EdgeRef) -> Edge | None:
        panel = self.panel_by_id(ref.panel_id)
        if panel is None or not (0 <= ref.edge_index < len(panel.edges)):
            return None
        return panel.edges[ref.edge_index]


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str
    measured: tuple[float, ...] = ()


@dataclass(frozen=True)
class ValidityReport:
    passed: bool
    violations: tuple[Violation, ...]

    @classmethod
    def from_violations(cls, violations: Iterable[Violation]) -> "ValidityReport":
        vs = tuple(violations)
        return cls(passed=not vs, violations=vs)

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


@dataclass(frozen=True)
class DiversityStats:
    num_panels: int
    mean_edges_per_panel: float
    num_stitches: int


def validate_pattern(pattern: Pattern) -> ValidityReport:
    """Structural validity check; reports every violation, never raises."""
    violations: list[Violation] = []

    seen_ids: set[str] = set()
    for panel in pattern.panels:
        if panel.id in seen_ids:
            violations.append(Violation(
                "DUPLICATE_PANEL_ID", panel.id, f"panel id {panel.id!r} used twice"))
        seen_ids.add(panel.id)

    # panel closure, then simplicity (skipped for unclosed panels)
    for panel in pattern.panels:
        if len(panel.edges) < 3:
            violations.append(Violation(
                "PANEL_TOO_FEW_EDGES", panel.id,
                f"panel {panel.id!r} has {len(panel.edges)} edges, needs >= 3"))
            continue
        closed = True
        for i, e in enumerate(panel.edges):
            nxt = panel.edges[(i + 1) % len(panel.edges)]
            gap = math.hypot(e.end[0] - nxt.start[0], e.end[1] - nxt.start[1])
            if gap > CLOSURE_TOL_CM:
                closed = False
                violations.append(Violation(
                    "PANEL_NOT_CLOSED", panel.id,
                    f"panel {panel.id!r} edge {i} ends {gap:.4f} cm from edge "
                    f"{(i + 1) % len(panel.edges)}", (gap,)))
        if closed and not is_simple_polygon(panel.outline()):
            violations.append(Violation(
                "PANEL_SELF_INTERSECT", panel.id,
                f"panel {panel.id!r} outline self-intersects"))

    # stitch resolution
    resolved: list[tuple[Stitch, Edge, Edge]] = []
    for k, stitch in enumerate(pattern.stitches):
        ea = pattern.resolve(stitch.side_a)
        eb = pattern.resolve(stitch.side_b)
        for side, edge in (("side_a", ea), ("side_b", eb)):
            if edge is None:
                ref = getattr(stitch, side)
                violations.append(Violation(
                    "STITCH_UNRESOLVED", f"stitch[{k}]",
                    f"stitch {k} {side} {ref.panel_id}:{ref.edge_index} "
                    "does not resolve to an edge"))
        if ea is not None and eb is not None:
            resolved.append((stitch, ea, eb))

    # one stitch per edge
    use_count: dict[EdgeRef, int] = {}
    for stitch in pattern.stitches:
        for ref in (stitch.side_a, stitch.side_b):
            use_count[ref] = use_count.get(ref, 0) + 1
    for ref, count in use_count.items():
        if count > 1:
            violations.append(Violation(
                "EDGE_REUSED", f"{ref.panel_id}:{ref.edge_index}",
                f"edge {ref.panel_id}:{ref.edge_index} appears in {count} stitches"))

    # stitched length compatibility against the declared ruffle factor
    for k, (stitch, ea, eb) in enumerate(resolved):
        len_a = curve_length(ea)
        len_b = curve_length(eb)
        rho = stitch.ruffle_factor
        ratio = len_a / len_b
        if abs(ratio - rho) > STITCH_LENGTH_RTOL * rho:
            violations.append(Violation(
                "STITCH_LENGTH_MISMATCH",
                f"{stitch.side_a.panel_id}:{stitch.side_a.edge_index}"
                f"<->{stitch.side_b.panel_id}:{stitch.side_b.edge_index}",
                f"stitched lengths {len_a:.2f}/{len_b:.2f} cm give ratio "
                f"{ratio:.3f}, declared ruffle {rho:.3f} allows "
                f"+/-{STITCH_LENGTH_RTOL * rho:.3f}",
                (len_a, len_b, ratio, rho)))

    return ValidityReport.from_violations(violations)


def pattern_stats(pattern: Pattern) -> DiversityStats:
    """Panel/edge/stitch counts used for the diversity statistics."""
    n = len(pattern.panels)
    mean_edges = (sum(len(p.edges) for p in pattern.panels) / n) if n else 0.0
    return DiversityStats(num_panels=n, mean_edges_per_panel=mean_edges,
                          num_stitches=len(pattern.stitches))


# --- serialization ----------------------------------------------------------

def _edge_to_doc(edge: Edge) -> dict:
    doc = {"start": list(edge.start), "end": list(edge.end),
           "control": [list(p) for p in edge.control]}
    if edge.label is not None:
        doc["label"] = edge.label
    return doc


def serialize_pattern(pattern: Pattern) -> str:
    """Render a pattern as the canonical JSON pattern document."""
    doc = {
        "format": PATTERN_FORMAT,
        "version": PATTERN_FORMAT_VERSION,
        "provenance": pattern.provenance,
        "panels": [
            {
                "id": p.id,
                "edges": [_edge_to_doc(e) for e in p.edges],
                "placement": {
                    "rotation": list(p.placement.rotation),
                    "translation": list(p.placement.translation),
                },
            }
            for p in pattern.panels
        ],
        "stitches": [
            {
                "side_a": {"panel": s.side_a.panel_id, "edge": s.side_a.edge_index},
                "side_b": {"panel": s.side_b.panel_id, "edge": s.side_b.edge_index},
                "ruffle_factor": s.ruffle_factor,
            }
            for s in pattern.stitches
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _require(doc: dict, key: str, context: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing required field", field=f"{context}.{key}",
                         code="MISSING_FIELD")
    return doc[key]


def _parse_point(value, context: str) -> tuple[float, float]:
    try:
        x, y = value
        return (float(x), float(y))
    except (TypeError, ValueError):
        raise ParseError("expected a 2D point [x, y]", field=context) from None


def deserialize_pattern(text: str) -> Pattern:
    """Parse a pattern document; raises ParseError with field/line context."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object", field="$")
    fmt = _require(doc, "format", "$")
    if fmt != PATTERN_FORMAT:
        raise ParseError(f"unknown format {fmt!r}", field="$.format")

    panels = []
    for i, pdoc in enumerate(doc.get("panels", [])):
        ctx = f"$.panels[{i}]"
        pid = str(_require(pdoc, "id", ctx))
        edges = []
        for j, edoc in enumerate(_require(pdoc, "edges", ctx)):
            ectx = f"{ctx}.edges[{j}]"
            start = _parse_point(_require(edoc, "start", ectx), f"{ectx}.start")
            end = _parse_point(_require(edoc, "end", ectx), f"{ectx}.end")
            control = tuple(_parse_point(c, f"{ectx}.control[{k}]")
                            for k, c in enumerate(edoc.get("control", [])))
            try:
                edges.append(Edge(start, end, control, edoc.get("label")))
            except GdslError as exc:
                raise ParseError(str(exc), field=ectx,
                                 code="INVARIANT_VIOLATION") from None
        placement = PanelPlacement()
        if "placement" in pdoc:
            pl = pdoc["placement"]
            pctx = f"{ctx}.placement"
            try:
                placement = PanelPlacement(
                    tuple(float(v) for v in _require(pl, "rotation", pctx)),
                    tuple(float(v) for v in _require(pl, "translation", pctx)))
            except InvalidArgument as exc:
                raise ParseError(str(exc), field=pctx,
                                 code="INVARIANT_VIOLATION") from None
        panels.append(Panel(pid, tuple(edges), placement))

    stitches = []
    for k, sdoc in enumerate(doc.get("stitches", [])):
        ctx = f"$.stitches[{k}]"
        sides = []
        for side in ("side_a", "side_b"):
            sd = _require(sdoc, side, ctx)
            sides.append(EdgeRef(str(_require(sd, "panel", f"{ctx}.{side}")),
                                 int(_require(sd, "edge", f"{ctx}.{side}"))))
        try:
            stitches.append(Stitch(sides[0], sides[1],
                                   float(sdoc.get("ruffle_factor", 1.0))))
        except InvalidArgument as exc:
            raise ParseError(str(exc), field=ctx,
                             code="INVARIANT_VIOLATION") from None

    provenance = doc.get("provenance")
    return Pattern(tuple(panels), tuple(stitches),
                   str(provenance) if provenance is not None else None)
