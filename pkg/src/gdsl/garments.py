"""Symbolic garment programs: parametric drafting rules and the assembler.

Each ``draft_*`` function turns (configuration, body) into a Component:
panels in local coordinates (cm, y up, bounding-box bottom-left at the
origin) plus named interfaces for joining. ``assemble`` dispatches the
programs enabled by the topology parameters and wires their interfaces
into one flat Pattern.

The drafting constants here are this engine's own rule set; the stitch
tolerances they have to satisfy live in :mod:`gdsl.pattern`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .body import STANDARD_BODY, BodyMeasurements
from .errors import AssemblyError, DraftError, ValidationFailed
from .geometry import Edge, curve_length
from .pattern import EdgeRef, Panel, PanelPlacement, Pattern, Stitch
from .schema import DesignConfiguration, DesignSchema, validate_config

# Sleeve caps are eased: cap length = (1 + CAP_EASE) * armhole length.
CAP_EASE = 0.04
CAP_SOLVE_TOL_CM = 0.05
CAP_SOLVE_MAX_ITER = 60

# Armhole depth below the shoulder line: bust/8 + 10 cm (+ config adjustment).
ARMHOLE_BASE_CM = 10.0

_WAISTLINE_SHIFT = {"natural": 0.0, "high": 3.0, "low": -4.0}

_BACK_ROT = (0.0, 0.0, 1.0, 0.0)  # 180 degrees about the vertical axis


@dataclass
class Component:
    """A drafted garment piece: panels plus named edge interfaces."""

    name: str
    panels: list[Panel] = field(default_factory=list)
    interfaces: dict[str, list[EdgeRef]] = field(default_factory=dict)
    children: list["Component"] = field(default_factory=list)
    internal_stitches: list[Stitch] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def all_panels(self) -> list[Panel]:
        out = list(self.panels)
        for child in self.children:
            out.extend(child.all_panels())
        return out

    def all_stitches(self) -> list[Stitch]:
        out = list(self.internal_stitches)
        for child in self.children:
            out.extend(child.all_stitches())
        return out


@dataclass(frozen=True)
class ComponentProgram:
    """A drafting program and the schema parameters its geometry reads."""

    kind: str
    param_subset: tuple[str, ...]


def _bbox_of_edges(edges) -> tuple[float, float, float, float]:
    xs, ys = [], []
    for e in edges:
        pts = [e.start, e.end]
        if e.control:
            # curve extrema stay within the control hull; sample for a
            # tight box so the origin convention holds for curved panels
            pts.extend(e.point_at(i / 16) for i in range(1, 16))
        xs.extend(p[0] for p in pts)
        ys.extend(p[1] for p in pts)
    return min(xs), min(ys), max(xs), max(ys)


def _panel(panel_id: str, edges, placement: PanelPlacement) -> Panel:
    """Build a panel normalized so its bbox bottom-left is the origin."""
    min_x, min_y, _, _ = _bbox_of_edges(edges)
    return Panel(panel_id, tuple(e.translated(-min_x, -min_y) for e in edges),
                 placement)


def _ref(panel: Panel, label: str) -> EdgeRef:
    for i, e in enumerate(panel.edges):
        if e.label == label:
            return EdgeRef(panel.id, i)
    raise AssemblyError(f"panel {panel.id!r} has no edge labelled {label!r}")


def _refs(panel: Panel, label: str) -> list[EdgeRef]:
    out = [EdgeRef(panel.id, i) for i, e in enumerate(panel.edges) if e.label == label]
    if not out:
        raise AssemblyError(f"panel {panel.id!r} has no edge labelled {label!r}")
    return out


# --- bodice -------------------------------------------------------------------

def _neckline_edges(kind: str, nw: float, depth: float, top_y: float) -> list[Edge]:
    """Edges from (+nw, top_y) across to (-nw, top_y)."""
    right, left = (nw, top_y), (-nw, top_y)
    if kind == "v":
        tip = (0.0, top_y - depth)
        return [Edge(right, tip, label="neckline"), Edge(tip, left, label="neckline")]
    if kind == "square":
        return [Edge(right, (nw, top_y - depth), label="neckline"),
                Edge((nw, top_y - depth), (-nw, top_y - depth), label="neckline"),
                Edge((-nw, top_y - depth), left, label="neckline")]
    # crew/boat: cubic scoop whose lowest point sits `depth` below the line
    cy = top_y - depth * 4.0 / 3.0
    return [Edge(right, left, ((nw / 3.0, cy), (-nw / 3.0, cy)), label="neckline")]


def _bodice_panel(cfg: DesignConfiguration, body: BodyMeasurements,
                  side: str) -> Panel:
    g = cfg.get
    front = side == "front"
    ease = g("bodice.ease")
    length = g("bodice.length")
    if length > body.waist_to_floor:
        raise DraftError(f"bodice length {length} exceeds waist_to_floor "
                         f"{body.waist_to_floor}")
    width = body.bust_circ / 2.0 * (1.0 + ease)
    hem_w = (body.waist_circ / 2.0 * (1.0 + g("bodice.hem_ease"))
             if g("bodice.side_shape") == "tapered" else width)
    depth = body.bust_circ / 8.0 + ARMHOLE_BASE_CM + g("bodice.armhole_depth_adj")
    if length - depth < 6.0:
        raise DraftError("armhole depth leaves no side seam on this bodice length")
    drop = g("bodice.shoulder_drop")
    xs = body.shoulder_width / 2.0
    nw = g("neckline.width_ratio") * xs
    if g("neckline.kind") == "boat":
        # boat necklines widen front AND back, keeping the shoulder seams equal
        nw = min(0.92 * xs, 1.7 * nw)
    kind = g("neckline.kind") if front else "crew"
    neck_depth = g("neckline.depth") if front else g("neckline.back_depth")
    if front and kind == "boat":
        neck_depth = max(1.0, neck_depth * 0.5)

    sag = g("bodice.hem_curve_depth") if g("bodice.hem_shape") == "curved" else 0.0
    if not front:
        sag += g("bodice.back_length_add")

    hem_mid = (0.0, -sag)
    if sag > 0:
        hem = [Edge((-hem_w / 2, 0), hem_mid, ((-hem_w / 4, -sag),), label="hem_left"),
               Edge(hem_mid, (hem_w / 2, 0), ((hem_w / 4, -sag),), label="hem_right")]
    else:
        hem = [Edge((-hem_w / 2, 0), (0, 0), label="hem_left"),
               Edge((0, 0), (hem_w / 2, 0), label="hem_right")]

    underarm_r = (width / 2, length - depth)
    tip_r = (xs, length - drop)
    edges = hem + [
        Edge((hem_w / 2, 0), underarm_r, label="side_right"),
        Edge(underarm_r, tip_r,
             ((width / 2, length - depth + 0.1 * depth),
              (xs, length - drop - 0.45 * depth)),
             label="armhole_right"),
        Edge(tip_r, (nw, length), label="shoulder_right"),
        *_neckline_edges(kind, nw, neck_depth, length),
        Edge((-nw, length), (-xs, length - drop), label="shoulder_left"),
        Edge((-xs, length - drop), (-width / 2, length - depth),
             ((-xs, length - drop - 0.45 * depth),
              (-width / 2, length - depth + 0.1 * depth)),
             label="armhole_left"),
        Edge((-width / 2, length - depth), (-hem_w / 2, 0), label="side_left"),
    ]
    z = 12.0 if front else -12.0
    placement = PanelPlacement(
        rotation=(1.0, 0, 0, 0) if front else _BACK_ROT,
        translation=(0.0, body.waist_to_floor - length, z))
    return _panel(f"bodice_{side}", edges, placement)


def draft_bodice(cfg: DesignConfiguration, body: BodyMeasurements) -> Component:
    """Front and back bodice panels, joined at sides and shoulders."""
    front = _bodice_panel(cfg, body, "front")
    back = _bodice_panel(cfg, body, "back")
    comp = Component("bodice", panels=[front, back])
    comp.interfaces = {
        "hem": [_ref(front, "hem_left"), _ref(front, "hem_right"),
                _ref(back, "hem_left"), _ref(back, "hem_right")],
        "armhole_left": [_ref(front, "armhole_left"), _ref(back, "armhole_left")],
        "armhole_right": [_ref(front, "armhole_right"), _ref(back, "armhole_right")],
        "neckline": _refs(front, "neckline") + _refs(back, "neckline"),
    }
    for label in ("side_left", "side_right", "shoulder_left", "shoulder_right"):
        comp.internal_stitches.append(Stitch(_ref(front, label), _ref(back, label)))
    return comp


# --- sleeve and cuff ------------------------------------------------------------

def _cap_edges(bicep: float, height: float, base_y: float) -> tuple[Edge, Edge]:
    back = Edge((bicep, base_y), (bicep / 2, base_y + height),
                ((bicep * 7 / 8, base_y + height),), label="cap_back")
    front = Edge((bicep / 2, base_y + height), (0.0, base_y),
                 ((bicep / 8, base_y + height),), label="cap_front")
    return back, front


def _solve_cap_height(bicep: float, armhole_len: float) -> float:
    """Bisect the cap height until the cap length hits (1+ease)*armhole."""
    target = (1.0 + CAP_EASE) * armhole_len

    def cap_len(h: float) -> float:
        back, front = _cap_edges(bicep, h, 0.0)
        return curve_length(back) + curve_length(front)

    lo, hi = 1e-3, armhole_len
    if cap_len(lo) > target or cap_len(hi) < target:
        raise DraftError(
            f"CAP_UNSOLVABLE: no cap height in (0, {armhole_len:.1f}) reaches "
            f"length {target:.2f}")
    for _ in range(CAP_SOLVE_MAX_ITER):
        mid = (lo + hi) / 2.0
        err = cap_len(mid) - target
        if abs(err) <= CAP_SOLVE_TOL_CM:
            return mid
        if err < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def draft_cuff(cfg: DesignConfiguration, body: BodyMeasurements,
               side: str) -> Component:
    g = cfg.get
    width = body.wrist_circ + g("cuff.ease")
    height = g("cuff.height") * (2.0 if g("cuff.kind") == "french" else 1.0)
    spread = width * g("cuff.flare") / 2.0
    edges = [
        Edge((-spread, 0), (width + spread, 0), label="cuff_bottom"),
        Edge((width + spread, 0), (width, height), label="cuff_side_right"),
        Edge((width, height), (0, height), label="cuff_top"),
        Edge((0, height), (-spread, 0), label="cuff_side_left"),
    ]
    sign = -1.0 if side == "left" else 1.0
    panel = _panel(f"cuff_{side}", edges,
                   PanelPlacement(translation=(sign * 34.0, 40.0, 0.0)))
    comp = Component(f"cuff_{side}", panels=[panel])
    comp.interfaces = {"wrist": [_ref(panel, "cuff_top")]}
    comp.meta["band_width"] = width
    return comp


def draft_sleeve(cfg: DesignConfiguration, body: BodyMeasurements,
                 armhole_length: float, side: str = "right") -> Component:
    """One sleeve panel; the cap is two quadratics solved to ease onto the
    armhole. Adds a cuff child when cuffs are enabled."""
    if armhole_length <= 0:
        raise DraftError(f"armhole length must be positive, got {armhole_length}")
    g = cfg.get
    bicep = g("sleeve.bicep_ratio") * armhole_length * (1.0 + g("sleeve.width_ease"))
    cap_h = _solve_cap_height(bicep, armhole_length)
    length = g("sleeve.length") * body.arm_length

    shape = g("sleeve.shape")
    if shape == "tapered":
        hem_w = body.wrist_circ + g("sleeve.hem_add")
    elif shape == "bell":
        hem_w = bicep * 1.25
    else:
        hem_w = bicep
    xl = (bicep - hem_w) / 2.0
    xr = xl + hem_w

    cap_back, cap_front = _cap_edges(bicep, cap_h, length)
    edges = [
        Edge((xl, 0), (xr, 0), label="sleeve_hem"),
        Edge((xr, 0), (bicep, length), label="sleeve_side_right"),
        cap_back,
        cap_front,
        Edge((0.0, length), (xl, 0), label="sleeve_side_left"),
    ]
    sign = -1.0 if side == "left" else 1.0
    panel = _panel(f"sleeve_{side}", edges,
                   PanelPlacement(translation=(
                       sign * (body.shoulder_width / 2.0 + 12.0),
                       body.waist_to_floor - length, 0.0)))
    comp = Component(f"sleeve_{side}", panels=[panel])
    comp.interfaces = {"cap": [_ref(panel, "cap_front"), _ref(panel, "cap_back")]}
    comp.meta["cap_length"] = curve_length(cap_back) + curve_length(cap_front)
    comp.meta["sleeve_length"] = length

    if g("meta.cuffs.enabled"):
        cuff = draft_cuff(cfg, body, side)
        comp.children.append(cuff)
        hem_ref = _ref(panel, "sleeve_hem")
        comp.internal_stitches.append(Stitch(
            hem_ref, cuff.interfaces["wrist"][0],
            ruffle_factor=hem_w / cuff.meta["band_width"]))
    return comp


# --- collar ---------------------------------------------------------------------

def draft_collar(cfg: DesignConfiguration, body: BodyMeasurements,
                 neckline_lengths: list[float]) -> Component:
    """Band segments, one per neckline edge; empty component for kind 'none'."""
    g = cfg.get
    kind = g("collar.kind")
    comp = Component("collar", interfaces={"attach": []})
    if kind == "none":
        return comp
    height = g("collar.height") * (2.2 if kind == "turtleneck" else 1.0)
    for i, seg_len in enumerate(neckline_lengths):
        if kind == "mandarin":
            top = Edge((seg_len, height), (0, height),
                       ((seg_len / 2, height * (1.0 + 2.0 * g("collar.top_curve"))),),
                       label="collar_top")
        else:
            top = Edge((seg_len, height), (0, height), label="collar_top")
        edges = [
            Edge((0, 0), (seg_len, 0), label="collar_attach"),
            Edge((seg_len, 0), (seg_len, height), label="collar_side_right"),
            top,
            Edge((0, height), (0, 0), label="collar_side_left"),
        ]
        panel = _panel(f"collar_{i}", edges, PanelPlacement(
            translation=(0.0, body.waist_to_floor + 4.0, -6.0 + 4.0 * i)))
        comp.panels.append(panel)
        comp.interfaces["attach"].append(_ref(panel, "collar_attach"))
    # close the band into a ring through its short sides
    n = len(comp.panels)
    for i in range(n if n > 1 else 1):
        a = _ref(comp.panels[i], "collar_side_right")
        b = _ref(comp.panels[(i + 1) % n], "collar_side_left")
        comp.internal_stitches.append(Stitch(a, b))
    return comp


# --- bottoms --------------------------------------------------------------------

def _quarters(attach, fallback_total: float) -> tuple[float, float, float, float]:
    if attach is None:
        q = fallback_total / 4.0
        return (q, q, q, q)
    fl, fr, bl, br = attach
    return (float(fl), float(fr), float(bl), float(br))


def _skirt_panel(name: str, left_q: float, right_q: float, length: float,
                 flare: float, sag: float, z: float, back: bool) -> Panel:
    waist_w = left_q + right_q
    hem_w = waist_w * (1.0 + flare)
    split_x = waist_w / 2.0 - right_q  # waist split so each edge matches its quarter
    if sag > 0:
        hem = [Edge((-hem_w / 2, 0), (0, -sag), ((-hem_w / 4, -sag),), label="hem_left"),
               Edge((0, -sag), (hem_w / 2, 0), ((hem_w / 4, -sag),), label="hem_right")]
    else:
        hem = [Edge((-hem_w / 2, 0), (0, 0), label="hem_left"),
               Edge((0, 0), (hem_w / 2, 0), label="hem_right")]
    edges = hem + [
        Edge((hem_w / 2, 0), (waist_w / 2, length), label="skirt_side_right"),
        Edge((waist_w / 2, length), (split_x, length), label="waist_right"),
        Edge((split_x, length), (-waist_w / 2, length), label="waist_left"),
        Edge((-waist_w / 2, length), (-hem_w / 2, 0), label="skirt_side_left"),
    ]
    placement = PanelPlacement(rotation=_BACK_ROT if back else (1.0, 0, 0, 0),
                               translation=(0.0, 0.0, z))
    return _panel(name, edges, placement)


def draft_skirt(cfg: DesignConfiguration, body: BodyMeasurements,
                attach=None) -> Component:
    """A-line skirt: front/back trapezoids hanging from the waist quarters."""
    g = cfg.get
    fl, fr, bl, br = _quarters(attach, body.waist_circ * (1.0 + g("skirt.ease")))
    length = max(5.0, g("skirt.length") * body.waist_to_floor
                 + _WAISTLINE_SHIFT[g("skirt.waistline")])
    flare = g("skirt.flare")
    sag = g("skirt.hem_curve") * 15.0
    front = _skirt_panel("skirt_front", fl, fr, length, flare, sag, 10.0, False)
    back = _skirt_panel("skirt_back", bl, br, length, flare, sag, -10.0, True)
    comp = Component("skirt", panels=[front, back])
    comp.interfaces = {"waist": [
        _ref(front, "waist_left"), _ref(front, "waist_right"),
        _ref(back, "waist_left"), _ref(back, "waist_right")]}
    for label in ("skirt_side_left", "skirt_side_right"):
        comp.internal_stitches.append(Stitch(_ref(front, label), _ref(back, label)))
    return comp


def draft_layered_skirt(cfg: DesignConfiguration, body: BodyMeasurements,
                        attach=None) -> Component:
    """Stacked gathered tiers; tier k is rho times longer than the edge above."""
    g = cfg.get
    n = g("layered_skirt.num_layers")
    if not 1 <= n <= 10:
        raise DraftError(f"layer count must be in [1, 10], got {n}")
    rho = g("layered_skirt.ruffle")
    base = g("layered_skirt.base_length")
    diff = g("layered_skirt.level_diff")
    heights = [base + k * diff for k in range(n)]
    if sum(heights) > body.waist_to_floor:
        raise DraftError(
            f"tiers sum to {sum(heights):.1f} cm, taller than waist_to_floor "
            f"{body.waist_to_floor} cm")
    fl, fr, bl, br = _quarters(
        attach, body.waist_circ * (1.0 + g("layered_skirt.top_ease")))

    comp = Component("layered_skirt", meta={"waist_ruffle": rho})
    panels_by_side = {}
    for side, (lq, rq, back) in (("front", (fl, fr, False)),
                                 ("back", (bl, br, True))):
        half = lq + rq
        side_panels = []
        for k in range(n):
            width = half * rho ** (k + 1)
            h = heights[k]
            if k == 0:
                split_x = width / 2.0 - rq * rho
                edges = [
                    Edge((-width / 2, 0), (width / 2, 0), label="tier_bottom"),
                    Edge((width / 2, 0), (width / 2, h)),
                    Edge((width / 2, h), (split_x, h), label="tier_top_right"),
                    Edge((split_x, h), (-width / 2, h), label="tier_top_left"),
                    Edge((-width / 2, h), (-width / 2, 0)),
                ]
            else:
                edges = [
                    Edge((-width / 2, 0), (width / 2, 0), label="tier_bottom"),
                    Edge((width / 2, 0), (width / 2, h)),
                    Edge((width / 2, h), (-width / 2, h), label="tier_top"),
                    Edge((-width / 2, h), (-width / 2, 0)),
                ]
            z = 10.0 if side == "front" else -10.0
            panel = _panel(f"layer{k}_{side}", edges, PanelPlacement(
                rotation=_BACK_ROT if back else (1.0, 0, 0, 0),
                translation=(0.0, -sum(heights[:k + 1]), z)))
            side_panels.append(panel)
            comp.panels.append(panel)
        panels_by_side[side] = side_panels
        for k in range(1, n):
            comp.internal_stitches.append(Stitch(
                _ref(side_panels[k], "tier_top"),
                _ref(side_panels[k - 1], "tier_bottom"),
                ruffle_factor=rho))
    comp.interfaces = {"waist": [
        _ref(panels_by_side["front"][0], "tier_top_left"),
        _ref(panels_by_side["front"][0], "tier_top_right"),
        _ref(panels_by_side["back"][0], "tier_top_left"),
        _ref(panels_by_side["back"][0], "tier_top_right")]}
    return comp


def _pants_panel(name: str, waist_q: float, body: BodyMeasurements,
                 cfg: DesignConfiguration, back: bool, mirror: bool) -> Panel:
    g = cfg.get
    length = max(20.0, g("pants.length") * body.waist_to_floor
                 + _WAISTLINE_SHIFT[g("pants.waistline")])
    rise = body.rise_depth + g("pants.rise_adj")
    rise = max(6.0, min(rise, length - 6.0))  # shorts get a shallower rise
    hip_q = body.hip_circ / 4.0 * (1.0 + g("pants.hip_ease"))
    ext = g("pants.crotch_ext_ratio") * body.hip_circ
    leg_w = g("pants.leg_width") * hip_q
    if back:
        # the wider back crotch shifts the hem inner point with it, keeping
        # front and back inseams the same length for the seam
        ext += g("pants.back_ext_add")
        leg_w += g("pants.back_ext_add")
    crotch_x = hip_q + ext
    if crotch_x <= waist_q + 1.0:
        raise DraftError("crotch point would fall inside the waist quarter")
    y_crotch = length - rise

    edges = [
        Edge((0, 0), (leg_w, 0), label="pants_hem"),
        Edge((leg_w, 0), (crotch_x, y_crotch), label="inseam"),
        Edge((crotch_x, y_crotch), (waist_q, length),
             ((waist_q + 0.6 * (crotch_x - waist_q), y_crotch),
              (waist_q, y_crotch + 0.5 * rise)),
             label="crotch"),
        Edge((waist_q, length), (0, length), label="pants_waist"),
        Edge((0, length), (0, 0), label="outseam"),
    ]
    if mirror:
        edges = [e.mirrored_x() for e in edges]
    placement = PanelPlacement(rotation=_BACK_ROT if back else (1.0, 0, 0, 0),
                               translation=((-1.0 if mirror else 1.0) * 12.0,
                                            0.0, -10.0 if back else 10.0))
    return _panel(name, edges, placement)


def draft_pants(cfg: DesignConfiguration, body: BodyMeasurements,
                attach=None) -> Component:
    """Four-panel trousers with cubic crotch curves."""
    g = cfg.get
    fl, fr, bl, br = _quarters(attach, body.waist_circ * (1.0 + g("pants.ease")))
    panels = {
        "front_left": _pants_panel("pants_front_left", fl, body, cfg, False, True),
        "front_right": _pants_panel("pants_front_right", fr, body, cfg, False, False),
        "back_left": _pants_panel("pants_back_left", bl, body, cfg, True, True),
        "back_right": _pants_panel("pants_back_right", br, body, cfg, True, False),
    }
    comp = Component("pants", panels=list(panels.values()))
    comp.interfaces = {"waist": [
        _ref(panels["front_left"], "pants_waist"),
        _ref(panels["front_right"], "pants_waist"),
        _ref(panels["back_left"], "pants_waist"),
        _ref(panels["back_right"], "pants_waist")]}
    for side in ("left", "right"):
        comp.internal_stitches.append(Stitch(
            _ref(panels[f"front_{side}"], "outseam"),
            _ref(panels[f"back_{side}"], "outseam")))
        comp.internal_stitches.append(Stitch(
            _ref(panels[f"front_{side}"], "inseam"),
            _ref(panels[f"back_{side}"], "inseam")))
    for row in ("front", "back"):
        comp.internal_stitches.append(Stitch(
            _ref(panels[f"{row}_left"], "crotch"),
            _ref(panels[f"{row}_right"], "crotch")))
    return comp


def draft_waistband(cfg: DesignConfiguration, body: BodyMeasurements,
                    attach=None) -> Component:
    """One band panel whose top/bottom edges are split into waist quarters."""
    g = cfg.get
    quarters = _quarters(attach, body.waist_circ + g("waistband.ease"))
    height = g("waistband.height")
    xs = [0.0]
    for q in quarters:
        xs.append(xs[-1] + q)
    total = xs[-1]
    names = ("fl", "fr", "bl", "br")
    edges = [Edge((xs[i], 0), (xs[i + 1], 0), label=f"wb_bottom_{names[i]}")
             for i in range(4)]
    edges.append(Edge((total, 0), (total, height), label="wb_side_right"))
    edges.extend(Edge((xs[i + 1], height), (xs[i], height), label=f"wb_top_{names[i]}")
                 for i in reversed(range(4)))
    edges.append(Edge((0, height), (0, 0), label="wb_side_left"))
    panel = _panel("waistband", edges,
                   PanelPlacement(translation=(0.0, body.waist_to_floor, 14.0)))
    comp = Component("waistband", panels=[panel])
    comp.interfaces = {
        "top": [_ref(panel, f"wb_top_{n}") for n in names],
        "bottom": [_ref(panel, f"wb_bottom_{n}") for n in names],
    }
    return comp


# --- assembly -------------------------------------------------------------------

_BOTTOM_PROGRAMS = {
    "skirt": draft_skirt,
    "layered_skirt": draft_layered_skirt,
    "pants": draft_pants,
}


def _interface_lengths(comp: Component, name: str,
                       panels_by_id: dict[str, Panel]) -> list[float]:
    out = []
    for ref in comp.interfaces[name]:
        panel = panels_by_id[ref.panel_id]
        out.append(curve_length(panel.edges[ref.edge_index]))
    return out


def _config_digest(cfg: DesignConfiguration) -> str:
    blob = repr(sorted(cfg.assignments.items())).encode()
    return "config:" + hashlib.sha1(blob).hexdigest()[:12]


def assemble(cfg: DesignConfiguration, body: BodyMeasurements = STANDARD_BODY,
             schema: DesignSchema | None = None) -> Pattern:
    """Compile a configuration into a flat pattern (the union of the enabled
    component programs, joined through their declared interfaces)."""
    if schema is not None:
        violations = validate_config(cfg, schema)
        if violations:
            raise ValidationFailed(
                f"configuration invalid ({len(violations)} violations)", violations)
    g = cfg.get
    upper = g("meta.upper.enabled")
    bottom_kind = g("meta.bottom.kind")
    wb_on = g("meta.waistband.enabled")
    sleeves_on = g("meta.sleeves.enabled")

    if sleeves_on and not upper:
        raise AssemblyError("dangling interface: sleeves enabled without a bodice "
                            "(sleeve.cap has nothing to join)")
    if g("meta.cuffs.enabled") and not sleeves_on:
        raise AssemblyError("dangling interface: cuffs enabled without sleeves")
    if g("collar.kind") != "none" and not upper:
        raise AssemblyError("dangling interface: collar enabled without a bodice "
                            "neckline")
    if not upper and bottom_kind == "none" and not wb_on:
        raise AssemblyError("unknown topology: no component enabled")

    components: list[Component] = []
    stitches: list[Stitch] = []
    panels_by_id: dict[str, Panel] = {}

    def add(comp: Component):
        components.append(comp)
        for panel in comp.all_panels():
            if panel.id in panels_by_id:
                raise AssemblyError(f"panel id collision: {panel.id!r}")
            panels_by_id[panel.id] = panel

    bodice = None
    if upper:
        bodice = draft_bodice(cfg, body)
        add(bodice)
        if sleeves_on:
            for side in ("left", "right"):
                armhole = bodice.interfaces[f"armhole_{side}"]
                armhole_len = sum(
                    curve_length(panels_by_id[r.panel_id].edges[r.edge_index])
                    for r in armhole)
                sleeve = draft_sleeve(cfg, body, armhole_len, side=side)
                add(sleeve)
                for cap_ref, armhole_ref in zip(sleeve.interfaces["cap"], armhole):
                    stitches.append(Stitch(cap_ref, armhole_ref,
                                           ruffle_factor=1.0 + CAP_EASE))
        if g("collar.kind") != "none":
            neck_lengths = _interface_lengths(bodice, "neckline", panels_by_id)
            collar = draft_collar(cfg, body, neck_lengths)
            add(collar)
            for collar_ref, neck_ref in zip(collar.interfaces["attach"],
                                            bodice.interfaces["neckline"]):
                stitches.append(Stitch(collar_ref, neck_ref))

    # the waist chain: bodice hem -> (waistband) -> bottom waist; each link
    # is drafted to the measured lengths of the link above it
    upper_iface = bodice.interfaces["hem"] if bodice else None
    upper_lengths = (_interface_lengths(bodice, "hem", panels_by_id)
                     if bodice else None)
    if wb_on:
        waistband = draft_waistband(cfg, body, upper_lengths)
        add(waistband)
        if upper_iface:
            for top_ref, hem_ref in zip(waistband.interfaces["top"], upper_iface):
                stitches.append(Stitch(top_ref, hem_ref))
        upper_iface = waistband.interfaces["bottom"]
        upper_lengths = _interface_lengths(waistband, "bottom", panels_by_id)

    if bottom_kind != "none":
        bottom = _BOTTOM_PROGRAMS[bottom_kind](cfg, body, upper_lengths)
        add(bottom)
        if upper_iface:
            rho = bottom.meta.get("waist_ruffle", 1.0)
            for waist_ref, hem_ref in zip(bottom.interfaces["waist"], upper_iface):
                stitches.append(Stitch(waist_ref, hem_ref, ruffle_factor=rho))

    for comp in components:
        stitches.extend(comp.all_stitches())

    return Pattern(panels=tuple(panels_by_id.values()), stitches=tuple(stitches),
                   provenance=_config_digest(cfg))


# --- program registry -----------------------------------------------------------

# Parameters that feed the armhole curve (and so every sleeve measurement).
_ARMHOLE_FEEDERS = ("bodice.ease", "bodice.armhole_depth_adj",
                    "bodice.shoulder_drop")
# Parameters that set the bodice hem lengths the waist chain propagates.
_WAIST_FEEDERS = ("meta.upper.enabled", "meta.waistband.enabled",
                  "bodice.hem_ease", "bodice.side_shape", "bodice.ease",
                  "bodice.hem_shape", "bodice.hem_curve_depth",
                  "bodice.back_length_add", "waistband.ease")

PROGRAMS: dict[str, ComponentProgram] = {
    "bodice": ComponentProgram("bodice", (
        "meta.upper.enabled", "bodice.length", "bodice.ease", "bodice.hem_ease",
        "bodice.shoulder_drop", "bodice.armhole_depth_adj", "bodice.side_shape",
        "bodice.hem_shape", "bodice.hem_curve_depth", "bodice.back_length_add",
        "neckline.kind", "neckline.depth", "neckline.width_ratio",
        "neckline.back_depth")),
    "sleeve": ComponentProgram("sleeve", (
        "meta.sleeves.enabled", "sleeve.length", "sleeve.width_ease",
        "sleeve.bicep_ratio", "sleeve.hem_add", "sleeve.shape",
        *_ARMHOLE_FEEDERS)),
    "cuff": ComponentProgram("cuff", (
        "meta.cuffs.enabled", "cuff.height", "cuff.ease", "cuff.kind",
        "cuff.flare")),
    "collar": ComponentProgram("collar", (
        "collar.kind", "collar.height", "collar.top_curve", "neckline.kind",
        "neckline.depth", "neckline.width_ratio", "neckline.back_depth")),
    "skirt": ComponentProgram("skirt", (
        "meta.bottom.kind", "skirt.length", "skirt.ease", "skirt.flare",
        "skirt.waistline", "skirt.hem_curve", *_WAIST_FEEDERS)),
    "layered_skirt": ComponentProgram("layered_skirt", (
        "meta.bottom.kind", "layered_skirt.num_layers",
        "layered_skirt.base_length", "layered_skirt.level_diff",
        "layered_skirt.ruffle", "layered_skirt.top_ease", *_WAIST_FEEDERS)),
    "pants": ComponentProgram("pants", (
        "meta.bottom.kind", "pants.length", "pants.ease", "pants.hip_ease",
        "pants.leg_width", "pants.rise_adj", "pants.crotch_ext_ratio",
        "pants.back_ext_add", "pants.waistline", *_WAIST_FEEDERS)),
    "waistband": ComponentProgram("waistband", (
        "meta.waistband.enabled", "waistband.height", "waistband.ease",
        "meta.upper.enabled", "bodice.hem_ease", "bodice.side_shape",
        "bodice.ease", "bodice.hem_shape", "bodice.hem_curve_depth",
        "bodice.back_length_add")),
}


# --- random configuration sampling ----------------------------------------------

def _random_value(spec, rng):
    if spec.kind == "boolean":
        return rng.random() < 0.5
    if spec.kind == "select":
        return rng.choice(spec.options)
    lo, hi = spec.range
    if spec.kind == "integer":
        return rng.randint(int(lo), int(hi))
    return rng.uniform(lo, hi)


def random_config(schema: DesignSchema, rng,
                  body: BodyMeasurements = STANDARD_BODY) -> DesignConfiguration:
    """Uniform sample over the valid *and assemblable* configuration space.

    Per-parameter draws are uniform; draws that violate the documented
    cross-parameter feasibility rules (dangling components, infeasible
    tier stacks, bodice longer than the body) are repaired or redrawn, so
    the result is a uniform sample of the feasible region.
    """
    a = {spec.path: _random_value(spec, rng) for spec in schema.params}

    if not a["meta.upper.enabled"]:
        a["meta.sleeves.enabled"] = False
        a["collar.kind"] = "none"
    if not a["meta.sleeves.enabled"]:
        a["meta.cuffs.enabled"] = False
    if not a["meta.upper.enabled"] and a["meta.bottom.kind"] == "none" \
            and not a["meta.waistband.enabled"]:
        a["meta.upper.enabled"] = True

    length_spec = schema.param("bodice.length")
    while a["bodice.length"] > body.waist_to_floor or \
            a["bodice.length"] - (body.bust_circ / 8.0 + ARMHOLE_BASE_CM
                                  + a["bodice.armhole_depth_adj"]) < 6.0:
        a["bodice.length"] = _random_value(length_spec, rng)
        a["bodice.armhole_depth_adj"] = _random_value(
            schema.param("bodice.armhole_depth_adj"), rng)

    if a["meta.bottom.kind"] == "layered_skirt":
        for _ in range(10_000):
            n = a["layered_skirt.num_layers"]
            total = sum(a["layered_skirt.base_length"]
                        + k * a["layered_skirt.level_diff"] for k in range(n))
            if total <= body.waist_to_floor - 1.0:
                break
            a["layered_skirt.num_layers"] = _random_value(
                schema.param("layered_skirt.num_layers"), rng)
            a["layered_skirt.base_length"] = _random_value(
                schema.param("layered_skirt.base_length"), rng)
            a["layered_skirt.level_diff"] = _random_value(
                schema.param("layered_skirt.level_diff"), rng)
        else:
            raise DraftError("could not sample a feasible tier stack")

    return DesignConfiguration(a)
