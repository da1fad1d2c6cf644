import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from planedyn.geom import (
    bbox,
    bbox_disjoint,
    clip_segment_to_box,
    convex_clip,
    diameter_sq,
    intersect_segments,
    is_simple_path,
    on_segment,
    orient,
    point_in_polygon,
    point_in_region,
    polygon_area2,
    polygons_meet,
    polyline_intersections,
    pt,
    triangulate,
    winding_number,
)
from planedyn.rational import Q

UNIT_SQUARE = [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]


def square(x, y, side=1):
    x, y, s = Q(x), Q(y), Q(side)
    return [(x, y), (x + s, y), (x + s, y + s), (x, y + s)]


rational = st.builds(lambda n, d: Q(n, d), st.integers(-60, 60), st.integers(1, 40))
point = st.tuples(rational, rational)


# ---------------------------------------------------------------- orient


def test_orient_examples():
    assert orient(pt(0, 0), pt(1, 0), pt(0, 1)) == 1
    assert orient(pt(0, 0), pt(1, 1), pt(2, 2)) == 0
    assert orient(pt(0, 0), pt(0, 1), pt(1, 0)) == -1


@given(point, point, point)
def test_orient_antisymmetry(a, b, c):
    assert orient(a, b, c) == -orient(a, c, b)


@given(point, point, point)
def test_orient_cyclic(a, b, c):
    assert orient(a, b, c) == orient(b, c, a) == orient(c, a, b)


# ---------------------------------------------------------- intersection


def test_intersect_segments_examples():
    assert intersect_segments(pt(0, 0), pt(2, 0), pt(1, -1), pt(1, 1)) == (
        "point",
        pt(1, 0),
    )
    assert intersect_segments(pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)) == ("empty",)
    assert intersect_segments(pt(0, 0), pt(2, 0), pt(1, 0), pt(3, 0)) == (
        "overlap",
        pt(1, 0),
        pt(2, 0),
    )


def test_intersect_segments_endpoint_and_degenerate():
    assert intersect_segments(pt(0, 0), pt(1, 0), pt(1, 0), pt(2, 5)) == (
        "point",
        pt(1, 0),
    )
    # degenerate segments are tolerated
    assert intersect_segments(pt(1, 0), pt(1, 0), pt(0, 0), pt(2, 0)) == (
        "point",
        pt(1, 0),
    )
    assert intersect_segments(pt(1, 1), pt(1, 1), pt(1, 1), pt(1, 1)) == (
        "point",
        pt(1, 1),
    )


def _as_point_set(res, a, b, c, d):
    if res[0] == "empty":
        return frozenset()
    if res[0] == "point":
        return frozenset([res[1]])
    return frozenset([res[1], res[2]])


@given(point, point, point, point)
@settings(max_examples=300)
def test_intersect_segments_symmetric(a, b, c, d):
    r1 = intersect_segments(a, b, c, d)
    r2 = intersect_segments(c, d, a, b)
    assert _as_point_set(r1, a, b, c, d) == _as_point_set(r2, c, d, a, b)
    # sanity: any reported point lies on both segments
    for p in _as_point_set(r1, a, b, c, d):
        assert on_segment(p, a, b) and on_segment(p, c, d)


def test_clip_segment_to_box():
    box = (Q(0), Q(0), Q(2), Q(2))
    assert clip_segment_to_box(pt(-1, 1), pt(3, 1), box) == (Q(1, 4), Q(3, 4))
    assert clip_segment_to_box(pt(-1, 3), pt(3, 3), box) is None
    assert clip_segment_to_box(pt(1, 1), pt(1, 1) , box) == (Q(0), Q(1))


# ------------------------------------------------------ polygon queries


def test_point_in_polygon():
    assert point_in_polygon(pt("1/2", "1/2"), UNIT_SQUARE) == 1
    assert point_in_polygon(pt(1, "1/2"), UNIT_SQUARE) == 0
    assert point_in_polygon(pt(2, "1/2"), UNIT_SQUARE) == -1
    assert point_in_polygon(pt(0, 0), UNIT_SQUARE) == 0
    # orientation must not matter
    assert point_in_polygon(pt("1/2", "1/2"), list(reversed(UNIT_SQUARE))) == 1


def test_point_in_region_with_hole():
    region = (square(0, 0, 4), [square(1, 1, 2)])
    assert point_in_region(pt("1/2", "1/2"), region) == 1
    assert point_in_region(pt(2, 2), region) == -1  # inside the hole
    assert point_in_region(pt(1, 2), region) == 0  # on the hole rim
    assert point_in_region(pt(5, 5), region) == -1


def test_polygons_meet_examples():
    assert polygons_meet(square(0, 0), square(3, 3)) is None
    assert polygons_meet(square(0, 0), square(0, 0)) is not None
    w = polygons_meet(square(0, 0), square(1, 1))
    assert w == pt(1, 1)  # corner touch counts


def test_polygons_meet_nested():
    inner = square("1/4", "1/4", "1/2")
    w = polygons_meet(square(0, 0), inner)
    assert w is not None and point_in_polygon(w, inner) >= 0


def _meet_oracle(P, R):
    """Brute force, no culling: edge pairs + containment via winding."""
    nP, nR = len(P), len(R)
    for i in range(nP):
        for j in range(nR):
            a, b = P[i], P[(i + 1) % nP]
            c, d = R[j], R[(j + 1) % nR]
            if intersect_segments(a, b, c, d)[0] != "empty":
                return True
    try:
        if winding_number(P[0], R) != 0:
            return True
    except ValueError:
        return True
    try:
        if winding_number(R[0], P) != 0:
            return True
    except ValueError:
        return True
    return False


def _random_convex(rng):
    cx = Q(rng.randint(-40, 40), rng.randint(1, 8))
    cy = Q(rng.randint(-40, 40), rng.randint(1, 8))
    w = Q(rng.randint(1, 30), rng.randint(1, 4))
    h = Q(rng.randint(1, 30), rng.randint(1, 4))
    kind = rng.randrange(3)
    if kind == 0:
        poly = [(cx, cy), (cx + w, cy), (cx + w, cy + h), (cx, cy + h)]
    elif kind == 1:
        poly = [(cx, cy), (cx + w, cy), (cx, cy + h)]
    else:
        poly = [
            (cx + w, cy),
            (cx, cy + h),
            (cx - w, cy),
            (cx, cy - h),
        ]
    return poly


def test_polygons_meet_against_oracle():
    rng = random.Random(20260815)
    for _ in range(1000):
        P = _random_convex(rng)
        R = _random_convex(rng)
        assert (polygons_meet(P, R) is not None) == _meet_oracle(P, R)


# ---------------------------------------------------------------- winding


def test_winding_examples():
    assert winding_number(pt("1/2", "1/2"), UNIT_SQUARE) == 1
    assert winding_number(pt(5, 5), UNIT_SQUARE) == 0


def _winding_oracle(p, loop):
    """Float angle sum over a fine sampling of the loop; independent of
    the exact crossing rule."""
    samples = []
    n = len(loop)
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        for k in range(32):
            t = k / 32
            samples.append(
                (float(a[0]) + (float(b[0]) - float(a[0])) * t,
                 float(a[1]) + (float(b[1]) - float(a[1])) * t)
            )
    total = 0.0
    px, py = float(p[0]), float(p[1])
    m = len(samples)
    for i in range(m):
        x0, y0 = samples[i]
        x1, y1 = samples[(i + 1) % m]
        a0 = math.atan2(y0 - py, x0 - px)
        a1 = math.atan2(y1 - py, x1 - px)
        d = a1 - a0
        while d > math.pi:
            d -= 2 * math.pi
        while d < -math.pi:
            d += 2 * math.pi
        total += d
    return total / (2 * math.pi)


def test_winding_double_traversal():
    loop = UNIT_SQUARE + UNIT_SQUARE
    center = pt("1/2", "1/2")
    oracle = _winding_oracle(center, loop)
    assert abs(oracle - 2) < 1e-9
    assert winding_number(center, loop) == 2


def test_winding_cyclic_rotation_invariance():
    loop = [pt(0, 0), pt(3, 0), pt(3, 2), pt(1, 2), pt(1, 1), pt(0, 1)]
    p = pt("1/2", "1/2")
    base = winding_number(p, loop)
    for r in range(1, len(loop)):
        rotated = loop[r:] + loop[:r]
        assert winding_number(p, rotated) == base


def test_winding_orientation_and_errors():
    assert winding_number(pt("1/2", "1/2"), list(reversed(UNIT_SQUARE))) == -1
    try:
        winding_number(pt(0, "1/2"), UNIT_SQUARE)
        assert False, "point on curve should raise"
    except ValueError:
        pass


# ------------------------------------------------------------ clipping


def test_convex_clip_basic():
    out = convex_clip(square(0, 0, 2), square(1, 1, 2))
    assert sorted(out) == sorted(square(1, 1, 1))
    # grazing contact has empty interior
    assert convex_clip(square(0, 0), square(1, 0)) == []
    assert convex_clip(square(0, 0), square(5, 5)) == []


def test_convex_clip_triangle():
    tri = [pt(0, 0), pt(4, 0), pt(0, 4)]
    out = convex_clip(tri, square(1, 1, 4))
    assert polygon_area2(out) == Q(2) * 2  # the corner triangle (1,1),(3,1),(1,3)


# -------------------------------------------------------- triangulation


def _check_triangulation(poly, tris):
    assert sum(polygon_area2(list(t)) for t in tris) == abs(polygon_area2(poly))
    for t in tris:
        assert orient(*t) == 1
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            assert convex_clip(list(tris[i]), list(tris[j])) == []


def test_triangulate_convex_and_reflex():
    sq = square(0, 0, 2)
    _check_triangulation(sq, triangulate(sq))
    lshape = [pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)]
    _check_triangulation(lshape, triangulate(lshape))
    comb = [
        pt(0, 0), pt(6, 0), pt(6, 3), pt(5, 3), pt(5, 1), pt(4, 1),
        pt(4, 3), pt(3, 3), pt(3, 1), pt(2, 1), pt(2, 3), pt(0, 3),
    ]
    _check_triangulation(comb, triangulate(comb))


def test_triangulate_collinear_vertices():
    poly = [pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 2), pt(0, 2)]
    _check_triangulation(poly, triangulate(poly))


def test_triangulate_cw_input_normalized():
    sq = list(reversed(square(0, 0, 2)))
    _check_triangulation(sq, triangulate(sq))


# ---------------------------------------------------------- path checks


def test_is_simple_path():
    assert is_simple_path([pt(0, 0), pt(1, 0), pt(1, 1)])
    assert not is_simple_path([pt(0, 0), pt(2, 0), pt(1, 1), pt(1, -1)])
    assert not is_simple_path([pt(0, 0), pt(1, 0), pt(0, 0)])
    assert is_simple_path(UNIT_SQUARE, closed=True)
    bt = [pt(0, 0), pt(2, 0), pt(2, 2), pt(1, 0), pt(0, 2)]
    assert not is_simple_path(bt, closed=True)  # edge passes through (1,0)


def test_polyline_intersections():
    kind, pts = polyline_intersections(
        [pt(0, 0), pt(2, 2)], [pt(0, 2), pt(2, 0), pt(2, 4)]
    )
    assert kind == "points" and pts == [pt(1, 1), pt(2, 2)]
    kind, seg = polyline_intersections([pt(0, 0), pt(3, 0)], [pt(1, 0), pt(2, 0)])
    assert kind == "overlap" and sorted(seg) == [pt(1, 0), pt(2, 0)]


def test_bbox_and_diameter():
    b = bbox(UNIT_SQUARE)
    assert b == (0, 0, 1, 1)
    assert bbox_disjoint(b, (2, 2, 3, 3))
    assert not bbox_disjoint(b, (1, 1, 3, 3))  # closed boxes touch
    assert diameter_sq(UNIT_SQUARE) == 2
