import pytest

from gdsl.geometry import Edge
from gdsl.pattern import EdgeRef, Panel, Pattern, Stitch


def square_panel(panel_id: str, size: float = 1.0, origin=(0.0, 0.0)) -> Panel:
    """Axis-aligned square with edges bottom, right, top, left (CCW)."""
    x, y = origin
    s = size
    return Panel(panel_id, (
        Edge((x, y), (x + s, y)),
        Edge((x + s, y), (x + s, y + s)),
        Edge((x + s, y + s), (x, y + s)),
        Edge((x, y + s), (x, y)),
    ))


def bowtie_panel(panel_id: str = "bowtie") -> Panel:
    """Self-intersecting four-edge loop (crossing diagonals)."""
    return Panel(panel_id, (
        Edge((0, 0), (1, 1)),
        Edge((1, 1), (1, 0)),
        Edge((1, 0), (0, 1)),
        Edge((0, 1), (0, 0)),
    ))


@pytest.fixture
def two_squares_stitched() -> Pattern:
    """Two unit squares joined along one matching edge each."""
    return Pattern(
        panels=(square_panel("a"), square_panel("b")),
        stitches=(Stitch(EdgeRef("a", 1), EdgeRef("b", 3)),),
    )
