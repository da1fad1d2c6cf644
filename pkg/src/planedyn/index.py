"""Exact fixed-point index of a closed polygonal curve under a PL map.

The index is the degree of the normalized displacement vector
f(c(s)) - c(s) along the curve.  Splitting the curve at every crossing
with the map's triangulation skeleton makes the displacement affine on
each sub-segment, so the displacement loop is itself a polygonal loop
with exact rational vertices.  A straight displacement segment avoiding
the origin turns by less than a half-turn, hence the degree is exactly
the signed number of crossings of the positive x-axis by that loop: no
numeric refinement is ever needed, and the crossing list doubles as a
re-checkable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .geom import Pt, orient, point_in_polygon, winding_number
from .plmap import PLDiskMap


@dataclass
class IndexResult:
    value: int
    # (edge index in the refined displacement loop, crossing sign)
    crossings: List[Tuple[int, int]]
    refined_curve: List[Pt]
    displacement: List[Pt]


def fixed_point_index(m: PLDiskMap, curve: Sequence[Pt]) -> IndexResult:
    pts = [tuple(p) for p in curve]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) < 3:
        raise ValueError("need a closed curve with at least three vertices")
    for p in pts:
        if point_in_polygon(p, m.domain) < 0:
            raise ValueError("curve exits the domain")

    hit = m.fixed_set().meets_path(pts, closed=True)
    if hit is not None:
        raise ValueError(f"fixed point {hit} lies on the curve")

    refined = m.refine_path(pts + [pts[0]])
    disp = [(m.evaluate(p)[0] - p[0], m.evaluate(p)[1] - p[1]) for p in refined]
    if disp[0] != disp[-1]:
        raise AssertionError("displacement loop failed to close")
    loop = disp[:-1]

    value = 0
    crossings: List[Tuple[int, int]] = []
    n = len(loop)
    origin = (0, 0)
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        if a[1] <= 0:
            if b[1] > 0 and orient(a, b, origin) > 0:
                value += 1
                crossings.append((i, 1))
        else:
            if b[1] <= 0 and orient(a, b, origin) < 0:
                value -= 1
                crossings.append((i, -1))

    # the loop cannot pass through the origin: a zero displacement on the
    # curve is a fixed point, excluded exactly above
    assert value == winding_number(origin, loop)
    return IndexResult(value, crossings, refined, loop)
