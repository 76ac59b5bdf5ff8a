import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdsl.errors import DegenerateGeometry, InvalidArgument
from gdsl.geometry import (
    Edge,
    PointSet2D,
    chamfer_distance,
    curve_length,
    f_score,
    is_simple_polygon,
    sample_curve,
)


# --- independent oracles -----------------------------------------------------

def polyline_length(edge: Edge, segments: int) -> float:
    """Dense-polyline arc length, the reference for curve_length."""
    total = 0.0
    prev = edge.start
    for i in range(1, segments + 1):
        cur = edge.point_at(i / segments)
        total += math.hypot(cur[0] - prev[0], cur[1] - prev[1])
        prev = cur
    return total


def brute_chamfer(a, b):
    def one_way(src, dst):
        return sum(min(math.dist(p, q) for q in dst) for p in src) / len(src)
    return 0.5 * (one_way(a, b) + one_way(b, a))


def brute_f_score(a, b, threshold):
    precision = sum(1 for p in a if min(math.dist(p, q) for q in b) <= threshold) / len(a)
    recall = sum(1 for q in b if min(math.dist(q, p) for p in a) <= threshold) / len(b)
    if precision == 0 and recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def exact_simple_polygon(points) -> bool:
    """All-pairs segment intersection in exact rational arithmetic."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    n = len(pts)
    segs = [(pts[i], pts[(i + 1) % n]) for i in range(n)]

    def sub(p, q):
        return (p[0] - q[0], p[1] - q[1])

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    def dot(u, v):
        return u[0] * v[0] + u[1] * v[1]

    def seg_point_count(a, b, p):
        # 1 if p lies on closed segment ab
        if cross(sub(b, a), sub(p, a)) != 0:
            return 0
        t = dot(sub(p, a), sub(b, a))
        return 1 if 0 <= t <= dot(sub(b, a), sub(b, a)) else 0

    def overlap(s, t):
        (a, b), (c, d) = s, t
        d1 = cross(sub(b, a), sub(c, a))
        d2 = cross(sub(b, a), sub(d, a))
        d3 = cross(sub(d, c), sub(a, c))
        d4 = cross(sub(d, c), sub(b, c))
        if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and \
           ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
            return True
        return bool(seg_point_count(a, b, c) or seg_point_count(a, b, d)
                    or seg_point_count(c, d, a) or seg_point_count(c, d, b))

    for a, b in segs:
        if a == b:
            return False
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent: any contact beyond the shared vertex breaks simplicity
                shared = segs[i][1] if j == i + 1 else segs[i][0]
                other_i = segs[i][0] if j == i + 1 else segs[i][1]
                other_j = segs[j][1] if j == i + 1 else segs[j][0]
                if cross(sub(other_i, shared), sub(other_j, shared)) == 0 and \
                        dot(sub(other_i, shared), sub(other_j, shared)) > 0:
                    return False
            elif overlap(segs[i], segs[j]):
                return False
    return True


def star_polygon(rng: random.Random, n: int):
    """Random simple polygon: points sorted by angle around their centroid."""
    pts = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n)]
    cx = sum(p[0] for p in pts) / n
    cy = sum(p[1] for p in pts) / n
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


# --- Edge construction -------------------------------------------------------

def test_zero_length_edge_rejected():
    with pytest.raises(DegenerateGeometry):
        Edge((0, 0), (0.001, 0))


def test_too_many_control_points_rejected():
    with pytest.raises(InvalidArgument):
        Edge((0, 0), (1, 0), ((0.2, 1), (0.5, 1), (0.8, 1)))


def test_edge_kinds():
    assert Edge((0, 0), (1, 0)).kind == "line"
    assert Edge((0, 0), (2, 0), ((1, 1),)).kind == "quadratic-bezier"
    assert Edge((0, 0), (3, 0), ((1, 1), (2, 1))).kind == "cubic-bezier"


# --- curve_length ------------------------------------------------------------

def test_line_length_is_euclidean():
    assert curve_length(Edge((0, 0), (3, 4))) == pytest.approx(5.0)


def test_collinear_cubic_degenerates_to_chord():
    e = Edge((0, 0), (10, 0), ((3, 0), (7, 0)))
    assert curve_length(e) == pytest.approx(10.0, abs=1e-6)


def test_quadratic_arc_length_closed_form():
    # parabola through (0,0),(1,1),(2,0): exact length sqrt(2)+asinh(1)
    e = Edge((0, 0), (2, 0), ((1, 1),))
    exact = math.sqrt(2) + math.asinh(1.0)
    assert exact == pytest.approx(2.29559, abs=1e-5)
    assert curve_length(e) == pytest.approx(2.29559, abs=1e-3)
    assert curve_length(e) == pytest.approx(exact, rel=1e-4)


@pytest.mark.parametrize("control", [
    ((1.0, 2.5),),
    ((0.4, 3.0), (2.2, -1.5)),
    ((5.0, 5.0), (-2.0, 4.0)),
])
def test_length_matches_dense_polyline(control):
    e = Edge((0, 0), (3, 1), control)
    ref = polyline_length(e, 200_000)
    assert curve_length(e) == pytest.approx(ref, rel=1e-4)


def test_length_relative_error_vs_ten_times_denser_sampling():
    rng = random.Random(7)
    for _ in range(20):
        ctrl = tuple((rng.uniform(-20, 20), rng.uniform(-20, 20))
                     for _ in range(rng.choice([1, 2])))
        e = Edge((rng.uniform(-20, 20), rng.uniform(-20, 20)),
                 (rng.uniform(-20, 20), rng.uniform(-20, 20)), ctrl)
        coarse = polyline_length(e, 10_000)
        dense = polyline_length(e, 100_000)
        assert abs(curve_length(e) - dense) <= max(1e-4 * dense,
                                                   abs(coarse - dense) * 2)


def test_length_invariant_under_rigid_transform():
    rng = random.Random(3)
    e = Edge((0, 0), (8, 2), ((2, 5), (6, -3)))
    base = curve_length(e)
    for _ in range(10):
        theta = rng.uniform(0, 2 * math.pi)
        dx, dy = rng.uniform(-50, 50), rng.uniform(-50, 50)
        c, s = math.cos(theta), math.sin(theta)

        def tf(p):
            return (c * p[0] - s * p[1] + dx, s * p[0] + c * p[1] + dy)

        moved = Edge(tf(e.start), tf(e.end), tuple(tf(p) for p in e.control))
        assert curve_length(moved) == pytest.approx(base, rel=1e-6)


@given(st.tuples(st.floats(-50, 50), st.floats(-50, 50)),
       st.tuples(st.floats(-50, 50), st.floats(-50, 50)),
       st.tuples(st.floats(-50, 50), st.floats(-50, 50)))
@settings(max_examples=60, deadline=None)
def test_length_at_least_chord(start, end, ctrl):
    if math.dist(start, end) < 0.02:
        return
    e = Edge(start, end, (ctrl,))
    assert curve_length(e) >= math.dist(start, end) - 1e-9


# --- sample_curve ------------------------------------------------------------

def test_sample_line():
    pts = sample_curve(Edge((0, 0), (2, 0)), 3).points
    assert pts == ((0, 0), (1, 0), (2, 0))


def test_sample_two_returns_endpoints():
    e = Edge((0, 0), (2, 0), ((1, 7),))
    assert sample_curve(e, 2).points == ((0, 0), (2, 0))


def test_sample_quadratic_midpoint():
    pts = sample_curve(Edge((0, 0), (2, 0), ((1, 1),)), 3).points
    assert pts[1] == pytest.approx((1.0, 0.5))


def test_sample_requires_two_points():
    with pytest.raises(InvalidArgument):
        sample_curve(Edge((0, 0), (1, 0)), 1)


# --- is_simple_polygon -------------------------------------------------------

def test_square_is_simple():
    assert is_simple_polygon(PointSet2D(((0, 0), (1, 0), (1, 1), (0, 1))))


def test_bowtie_is_not_simple():
    assert not is_simple_polygon(PointSet2D(((0, 0), (1, 1), (1, 0), (0, 1))))


def test_regular_100gon_is_simple():
    pts = tuple((math.cos(2 * math.pi * i / 100), math.sin(2 * math.pi * i / 100))
                for i in range(100))
    assert is_simple_polygon(PointSet2D(pts))


def test_polygon_needs_three_points():
    with pytest.raises(InvalidArgument):
        is_simple_polygon(PointSet2D(((0, 0), (1, 1))))


def test_spike_doubles_back_not_simple():
    assert not is_simple_polygon(PointSet2D(((0, 0), (2, 0), (1, 0), (1, 1))))


def test_simplicity_matches_exact_oracle():
    rng = random.Random(20240601)
    for case in range(500):
        n = 4 + int(60 * rng.random() ** 2)
        if case % 2 == 0:
            pts = star_polygon(rng, n)
        else:
            pts = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n)]
        assert is_simple_polygon(PointSet2D(tuple(pts))) == exact_simple_polygon(pts)


# --- chamfer distance --------------------------------------------------------

def test_chamfer_identical_sets_zero():
    s = PointSet2D(((0, 0), (3, 2), (-1, 5)))
    assert chamfer_distance(s, s) == 0.0


def test_chamfer_single_pair():
    assert chamfer_distance(PointSet2D(((0, 0),)),
                            PointSet2D(((3, 4),))) == pytest.approx(5.0)


def test_chamfer_asymmetric_sets():
    # mean over a = (0+2)/2, mean over b = 0, symmetric mean = 0.5
    a = PointSet2D(((0, 0), (2, 0)))
    b = PointSet2D(((0, 0),))
    assert chamfer_distance(a, b) == pytest.approx(0.5)


def test_chamfer_empty_rejected():
    with pytest.raises(InvalidArgument):
        chamfer_distance(PointSet2D(()), PointSet2D(((0, 0),)))


def test_chamfer_symmetry_random():
    rng = random.Random(5)
    for _ in range(20):
        a = PointSet2D(tuple((rng.uniform(0, 10), rng.uniform(0, 10))
                             for _ in range(rng.randint(1, 30))))
        b = PointSet2D(tuple((rng.uniform(0, 10), rng.uniform(0, 10))
                             for _ in range(rng.randint(1, 30))))
        assert chamfer_distance(a, b) == pytest.approx(chamfer_distance(b, a))
        assert chamfer_distance(a, a) == 0.0


def test_chamfer_matches_brute_force():
    rng = random.Random(99)
    for _ in range(100):
        a = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(rng.randint(1, 40))]
        b = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(rng.randint(1, 40))]
        got = chamfer_distance(PointSet2D(tuple(a)), PointSet2D(tuple(b)))
        assert got == pytest.approx(brute_chamfer(a, b), abs=1e-9)


# --- f_score -----------------------------------------------------------------

def test_f_score_identical_sets():
    s = PointSet2D(((0, 0), (1, 1)))
    for tau in (0.001, 1.0, 100.0):
        assert f_score(s, s, tau) == 1.0


def test_f_score_disjoint_beyond_threshold():
    assert f_score(PointSet2D(((0, 0),)), PointSet2D(((10, 0),)), 1.0) == 0.0


def test_f_score_partial_overlap():
    a = PointSet2D(((0, 0), (10, 0)))
    b = PointSet2D(((0, 0),))
    assert f_score(a, b, 1.0) == pytest.approx(2.0 / 3.0)


def test_f_score_threshold_must_be_positive():
    with pytest.raises(InvalidArgument):
        f_score(PointSet2D(((0, 0),)), PointSet2D(((1, 0),)), 0.0)


def test_f_score_monotone_in_threshold():
    rng = random.Random(11)
    a = PointSet2D(tuple((rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(25)))
    b = PointSet2D(tuple((rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(25)))
    scores = [f_score(a, b, tau) for tau in (0.1, 0.5, 1.0, 2.0, 5.0, 20.0)]
    assert scores == sorted(scores)


def test_f_score_matches_brute_force():
    rng = random.Random(123)
    for _ in range(100):
        a = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(rng.randint(1, 40))]
        b = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(rng.randint(1, 40))]
        tau = rng.uniform(0.1, 5.0)
        got = f_score(PointSet2D(tuple(a)), PointSet2D(tuple(b)), tau)
        assert got == pytest.approx(brute_f_score(a, b, tau), abs=1e-9)
