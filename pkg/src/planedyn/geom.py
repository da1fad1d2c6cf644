"""Exact planar geometry kernel.

Every predicate and construction here is exact over the rationals; no
float participates in any decision.  Points are ``(x, y)`` tuples of
rationals, polygons are vertex lists without a repeated closing vertex.
Unless a function says otherwise, polygons may be given in either
orientation and may contain collinear (straight) vertices, but must be
simple.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

from .rational import Q, to_q

Pt = Tuple[object, object]


def pt(x, y) -> Pt:
    return (to_q(x), to_q(y))


def vadd(a: Pt, b: Pt) -> Pt:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Pt, b: Pt) -> Pt:
    return (a[0] - b[0], a[1] - b[1])


def vmul(a: Pt, k) -> Pt:
    return (a[0] * k, a[1] * k)


def lerp(a: Pt, b: Pt, t) -> Pt:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def cross(o: Pt, a: Pt, b: Pt):
    """Cross product (a-o) x (b-o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(a: Pt, b: Pt, c: Pt) -> int:
    """+1 if a,b,c make a left turn, -1 right turn, 0 collinear."""
    d = cross(a, b, c)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def dist_sq(a: Pt, b: Pt):
    dx, dy = a[0] - b[0], a[1] - b[1]
    return dx * dx + dy * dy


def diameter_sq(points: Sequence[Pt]):
    """Max squared euclidean distance over all pairs.  Quadratic; fine
    for the small vertex sets it is used on."""
    best = Q(0)
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            d = dist_sq(points[i], points[j])
            if d > best:
                best = d
    return best


# ---------------------------------------------------------------- boxes

Box = Tuple[object, object, object, object]  # xmin, ymin, xmax, ymax


def bbox(points: Iterable[Pt]) -> Box:
    it = iter(points)
    x, y = next(it)
    xmin = xmax = x
    ymin = ymax = y
    for x, y in it:
        if x < xmin:
            xmin = x
        elif x > xmax:
            xmax = x
        if y < ymin:
            ymin = y
        elif y > ymax:
            ymax = y
    return (xmin, ymin, xmax, ymax)


def bbox_disjoint(a: Box, b: Box) -> bool:
    """True when the closed boxes do not touch."""
    return a[2] < b[0] or b[2] < a[0] or a[3] < b[1] or b[3] < a[1]


def bbox_union(a: Box, b: Box) -> Box:
    return (min(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))


# ------------------------------------------------------------- segments


def on_segment(p: Pt, a: Pt, b: Pt) -> bool:
    """p lies on the closed segment [a, b]."""
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segment_param(p: Pt, a: Pt, b: Pt):
    """Parameter t with p = a + t (b - a); p must lie on the line ab."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx != 0:
        return (p[0] - a[0]) / Q(dx)
    if dy != 0:
        return (p[1] - a[1]) / Q(dy)
    raise ValueError("degenerate segment")


def intersect_segments_params(a: Pt, b: Pt, c: Pt, d: Pt):
    """Exact intersection of closed segments [a,b] and [c,d].

    Returns one of
      ("empty",)
      ("point", t, u)      one common point  a+t(b-a) = c+u(d-c)
      ("overlap", t0, t1)  collinear overlap, params along [a,b], t0 <= t1
    Degenerate (zero length) segments are handled.
    """
    r = vsub(b, a)
    s = vsub(d, c)
    rxs = r[0] * s[1] - r[1] * s[0]
    acx, acy = c[0] - a[0], c[1] - a[1]
    qpxr = acx * r[1] - acy * r[0]

    if rxs == 0:
        if r == (0, 0) and s == (0, 0):
            if a == c:
                return ("point", Q(0), Q(0))
            return ("empty",)
        if r == (0, 0):
            if on_segment(a, c, d):
                return ("point", Q(0), segment_param(a, c, d))
            return ("empty",)
        if s == (0, 0):
            if on_segment(c, a, b):
                return ("point", segment_param(c, a, b), Q(0))
            return ("empty",)
        if qpxr != 0:
            return ("empty",)
        # collinear: project [c,d] onto the parameter line of [a,b]
        rr = r[0] * r[0] + r[1] * r[1]
        t0 = (acx * r[0] + acy * r[1]) / Q(rr)
        t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / Q(rr)
        if t0 > t1:
            t0, t1 = t1, t0
        lo, hi = max(t0, Q(0)), min(t1, Q(1))
        if lo > hi:
            return ("empty",)
        if lo == hi:
            p = lerp(a, b, lo)
            return ("point", lo, segment_param(p, c, d))
        return ("overlap", lo, hi)

    t = (acx * s[1] - acy * s[0]) / Q(rxs)
    u = qpxr / Q(rxs)
    if 0 <= t <= 1 and 0 <= u <= 1:
        return ("point", t, u)
    return ("empty",)


def intersect_segments(a: Pt, b: Pt, c: Pt, d: Pt):
    """Point-level version: ("empty",) | ("point", p) | ("overlap", p, q)."""
    res = intersect_segments_params(a, b, c, d)
    if res[0] == "empty":
        return res
    if res[0] == "point":
        return ("point", lerp(a, b, res[1]) if a != b else a)
    return ("overlap", lerp(a, b, res[1]), lerp(a, b, res[2]))


def segments_meet(a: Pt, b: Pt, c: Pt, d: Pt) -> bool:
    return intersect_segments_params(a, b, c, d)[0] != "empty"


def clip_segment_to_box(a: Pt, b: Pt, box: Box):
    """Params (t0, t1) of [a,b] inside the closed box, or None."""
    t0, t1 = Q(0), Q(1)
    d = vsub(b, a)
    for lo, hi, p0, dd in (
        (box[0], box[2], a[0], d[0]),
        (box[1], box[3], a[1], d[1]),
    ):
        if dd == 0:
            if p0 < lo or p0 > hi:
                return None
            continue
        ta = (lo - p0) / Q(dd)
        tb = (hi - p0) / Q(dd)
        if ta > tb:
            ta, tb = tb, ta
        if ta > t0:
            t0 = ta
        if tb < t1:
            t1 = tb
        if t0 > t1:
            return None
    return (t0, t1)


# ------------------------------------------------------------- polygons


def polygon_area2(poly: Sequence[Pt]):
    """Twice the signed area (positive for counterclockwise)."""
    s = Q(0)
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


def ensure_ccw(poly: Sequence[Pt]) -> list:
    a2 = polygon_area2(poly)
    if a2 == 0:
        raise ValueError("degenerate polygon")
    return list(poly) if a2 > 0 else list(reversed(poly))


def polygon_edges(poly: Sequence[Pt]):
    n = len(poly)
    return [(poly[i], poly[(i + 1) % n]) for i in range(n)]


def dedupe_poly(poly: Sequence[Pt]) -> list:
    out: list = []
    for p in poly:
        if not out or p != out[-1]:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def point_in_polygon(p: Pt, poly: Sequence[Pt]) -> int:
    """+1 strictly inside, 0 on the boundary, -1 strictly outside.

    Exact even-odd crossing rule; orientation of poly is irrelevant.
    """
    n = len(poly)
    px, py = p
    inside = False
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        if (a[1] > py) != (b[1] > py):
            # exact x of the edge at height py
            xi = a[0] + (py - a[1]) * (b[0] - a[0]) / Q(b[1] - a[1])
            if xi > px:
                inside = not inside
    return 1 if inside else -1


def winding_number(p: Pt, loop: Sequence[Pt]) -> int:
    """Winding number of a closed polyline around p.

    The loop is the vertex list of a closed curve (a repeated final
    vertex is tolerated).  Raises if p lies on the curve: the winding
    number is undefined there and every caller treats that as a
    precondition failure, not a value.
    """
    pts = list(loop)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    n = len(pts)
    w = 0
    py = p[1]
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        if on_segment(p, a, b):
            raise ValueError("point lies on the curve")
        if a[1] <= py:
            if b[1] > py and orient(a, b, p) > 0:
                w += 1
        else:
            if b[1] <= py and orient(a, b, p) < 0:
                w -= 1
    return w


def convex_clip(subject: Sequence[Pt], clipper: Sequence[Pt]) -> list:
    """Intersection of a polygon with a convex polygon.

    clipper must be convex and counterclockwise.  Returns a vertex list,
    or [] when the intersection has empty interior (grazing contacts are
    dropped deliberately: callers only care about two-dimensional
    overlap).  The subject should be convex as well; that is the only
    case used here and the only one Sutherland-Hodgman is exact for.
    """
    nclip = len(clipper)
    for i in range(nclip):
        if orient(clipper[i], clipper[(i + 1) % nclip], clipper[(i + 2) % nclip]) < 0:
            raise ValueError("clipper is not convex ccw")
    output = list(subject)
    for i in range(nclip):
        ca, cb = clipper[i], clipper[(i + 1) % nclip]
        if not output:
            return []
        inp = output
        output = []
        m = len(inp)
        for j in range(m):
            p0, p1 = inp[j], inp[(j + 1) % m]
            s0 = cross(ca, cb, p0)
            s1 = cross(ca, cb, p1)
            if s0 >= 0:
                output.append(p0)
            if (s0 > 0 and s1 < 0) or (s0 < 0 and s1 > 0):
                t = s0 / Q(s0 - s1)
                output.append(lerp(p0, p1, t))
    output = dedupe_poly(output)
    if len(output) < 3 or polygon_area2(output) == 0:
        return []
    return output


def triangulate(poly: Sequence[Pt]) -> list:
    """Ear-clipping triangulation of a simple polygon.

    Returns a list of (a, b, c) point triples, counterclockwise, whose
    interiors are disjoint and whose union is the polygon.  Straight
    (collinear) vertices are allowed and removed as zero-area ears;
    spikes are rejected.
    """
    ring = dedupe_poly(list(poly))
    ring = ensure_ccw(ring)
    tris: list = []
    guard = 0
    while len(ring) > 3:
        guard += 1
        if guard > 4 * len(poly) * len(poly) + 64:
            raise ValueError("triangulation stuck; polygon not simple?")
        n = len(ring)
        clipped = False
        for i in range(n):
            a, b, c = ring[(i - 1) % n], ring[i], ring[(i + 1) % n]
            o = orient(a, b, c)
            if o < 0:
                continue
            if o == 0:
                if on_segment(b, a, c):
                    del ring[i]  # straight vertex
                    clipped = True
                    break
                raise ValueError("polygon has a spike")
            ok = True
            for v in ring:
                if v in (a, b, c):
                    continue
                # closed-triangle test: a vertex on the diagonal would
                # pinch the remaining polygon, so it blocks the ear too
                if (
                    orient(a, b, v) >= 0
                    and orient(b, c, v) >= 0
                    and orient(c, a, v) >= 0
                ):
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                del ring[i]
                clipped = True
                break
        if not clipped:
            raise ValueError("no ear found; polygon not simple?")
    if len(ring) == 3:
        if polygon_area2(ring) <= 0:
            o = orient(*ring)
            if o == 0:
                pass  # degenerate leftover, drop
            else:
                raise ValueError("inverted final triangle")
        else:
            tris.append(tuple(ring))
    return tris


def polygons_meet(P: Sequence[Pt], R: Sequence[Pt]) -> Optional[Pt]:
    """Witness point of (closed P) meets (closed R), or None.

    Closed-region semantics: boundary contact counts.  Complete: if the
    regions meet, either some edges meet or one polygon's vertices are
    inside the other.
    """
    if bbox_disjoint(bbox(P), bbox(R)):
        return None
    redges = polygon_edges(R)
    rboxes = [bbox(e) for e in redges]
    for pa, pb in polygon_edges(P):
        eb = bbox((pa, pb))
        for (ra, rb), rbx in zip(redges, rboxes):
            if bbox_disjoint(eb, rbx):
                continue
            res = intersect_segments(pa, pb, ra, rb)
            if res[0] != "empty":
                return res[1]
    for v in P:
        if point_in_polygon(v, R) > 0:
            return v
    for v in R:
        if point_in_polygon(v, P) > 0:
            return v
    return None


# --------------------------------------------------- regions with holes
# A region is (outer, holes): a simple polygon minus the open interiors
# of pairwise disjoint simple polygons contained in it.


def point_in_region(p: Pt, region) -> int:
    """+1 strict interior, 0 on boundary (outer or hole rim), -1 outside."""
    outer, holes = region
    side = point_in_polygon(p, outer)
    if side <= 0:
        return side
    for h in holes:
        hs = point_in_polygon(p, h)
        if hs > 0:
            return -1
        if hs == 0:
            return 0
    return 1


def region_boundary_edges(region) -> list:
    outer, holes = region
    edges = polygon_edges(outer)
    for h in holes:
        edges.extend(polygon_edges(h))
    return edges


# -------------------------------------------------------------- curves


def path_edges(path: Sequence[Pt]) -> list:
    return [(path[i], path[i + 1]) for i in range(len(path) - 1)]


def is_simple_path(path: Sequence[Pt], closed: bool = False) -> bool:
    """No repeated points, adjacent edges meet only at the shared vertex,
    non-adjacent edges do not meet at all."""
    pts = list(path)
    if closed and len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(set(pts)) != len(pts):
        return False
    edges = (
        [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
        if closed
        else path_edges(pts)
    )
    n = len(edges)
    for i in range(n):
        a, b = edges[i]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, d = edges[j]
            adjacent = (b == c) or (closed and j == n - 1 and i == 0 and d == a)
            res = intersect_segments(a, b, c, d)
            if res[0] == "empty":
                continue
            if res[0] == "overlap":
                return False
            p = res[1]
            if adjacent:
                shared = b if b == c else a
                if p != shared:
                    return False
            else:
                return False
    return True


def polyline_intersections(A: Sequence[Pt], B: Sequence[Pt]):
    """All meeting points of two open polylines.

    Returns ("points", sorted list of points) or, as soon as the two
    share a full sub-segment, ("overlap", (p, q)).
    """
    hits = set()
    bedges = path_edges(B)
    bboxes = [bbox(e) for e in bedges]
    for a0, a1 in path_edges(A):
        eb = bbox((a0, a1))
        for (b0, b1), bb in zip(bedges, bboxes):
            if bbox_disjoint(eb, bb):
                continue
            res = intersect_segments(a0, a1, b0, b1)
            if res[0] == "point":
                hits.add(res[1])
            elif res[0] == "overlap":
                if res[1] != res[2]:
                    return ("overlap", (res[1], res[2]))
                hits.add(res[1])
    return ("points", sorted(hits))


def polyline_meets_polygon(path: Sequence[Pt], poly: Sequence[Pt]) -> Optional[Pt]:
    """Witness of (open polyline) meets (closed polygon), or None."""
    if bbox_disjoint(bbox(path), bbox(poly)):
        return None
    for a, b in path_edges(path):
        for c, d in polygon_edges(poly):
            res = intersect_segments(a, b, c, d)
            if res[0] != "empty":
                return res[1]
    for v in path:
        if point_in_polygon(v, poly) > 0:
            return v
    return None
