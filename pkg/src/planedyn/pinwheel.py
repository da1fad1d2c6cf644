"""A hand-built pinwheel of four crossing arc families.

Four copies of one lane, rotated by quarter turns around the origin
inside the square [-4, 4]^2.  Each lane climbs a vertical corridor,
turns into the central block, crosses it and climbs out on a parallel
corridor, so consecutive lanes meet three times and opposite lanes
twice: sixteen crossings in all, each a simple point of both families,
none on an orbit point, no triple points.  The boundary marks
interleave around the square so that the backward mark of lane i is
followed by the forward mark of lane i+2.

This is the workbench for the truncation calculus: small enough that
the crossing table, the clearance level and the maximal configuration
can be enumerated independently, large enough that all seven structural
facts of the maximal cut have content.  No map is attached; everything
downstream of the genericity audit works on the bare families.
"""

from __future__ import annotations

from typing import List, Tuple

from .fixtures import rect
from .geom import Pt, pt
from .plmap import BoundaryMark, Orbit
from .rational import Q
from .transarc import ArcFamily

__all__ = ["pinwheel_families", "PINWHEEL_DOMAIN", "quarter_turn"]

PINWHEEL_DOMAIN = rect(-4, -4, 4, 4)

# the base lane, orbit window -7..4; bends are the interior corners of a
# piece, everything else is straight
_BASE_POINTS = {
    -7: (2, Q(-13, 4)),
    -6: (2, Q(-11, 4)),
    -5: (2, Q(-9, 4)),
    -4: (2, Q(-7, 4)),
    -3: (2, Q(-5, 4)),
    -2: (2, Q(-3, 4)),
    -1: (0, Q(-1, 2)),
    0: (Q(-5, 8), Q(1, 4)),
    1: (Q(5, 8), Q(3, 4)),
    2: (Q(5, 8), Q(9, 4)),
    3: (Q(5, 8), Q(13, 4)),
    4: (Q(5, 8), Q(15, 4)),
}
_BASE_BENDS = {
    -2: [(2, Q(-1, 2))],
    -1: [(Q(-5, 8), Q(-1, 2))],
    0: [(Q(-5, 8), Q(3, 4))],
}
_BASE_ALPHA = (2, -4)
_BASE_OMEGA = (Q(5, 8), 4)


def quarter_turn(p: Pt, times: int = 1) -> Pt:
    """Rotate a point by quarter turns counterclockwise about the origin."""
    x, y = p
    for _ in range(times % 4):
        x, y = -y, x
    return (x, y)


def pinwheel_families() -> Tuple[List[ArcFamily], List[Pt]]:
    """The four families and the square domain they live in."""
    fams = []
    for i in range(4):
        points = {k: quarter_turn(pt(*p), i) for k, p in _BASE_POINTS.items()}
        pieces = {}
        for k in range(-7, 4):
            bends = [quarter_turn(pt(*b), i) for b in _BASE_BENDS.get(k, [])]
            pieces[k] = [points[k]] + bends + [points[k + 1]]
        orbit = Orbit(
            i, -7, 4, points,
            alpha=BoundaryMark(quarter_turn(pt(*_BASE_ALPHA), i), "alpha", i),
            omega=BoundaryMark(quarter_turn(pt(*_BASE_OMEGA), i), "omega", i),
        )
        fams.append(ArcFamily(orbit, pieces))
    return fams, list(PINWHEEL_DOMAIN)
