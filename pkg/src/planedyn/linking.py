"""Boundary linking data and the convex-subfamily reduction.

A configuration is a convex polygonal disk together with 2n marked
boundary points: for each index i a source mark (kind "alpha") and a
target mark (kind "omega"), joined by the oriented chord alpha_i ->
omega_i.  Three combinatorial hypotheses on the cyclic mark order are
checked exactly, and the chord arrangement is used to reduce the family
to a minimal subfamily whose half-planes pin down a compact convex face
where the half-plane count is extremal.

Everything is exact: boundary positions are compared by (edge index,
edge parameter), faces are built by rational half-plane clipping, and
boundedness of half-plane intersections is decided on recession
directions, never on coordinates of a large box.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .geom import (
    Pt,
    cross,
    dedupe_poly,
    ensure_ccw,
    intersect_segments_params,
    lerp,
    orient,
    point_in_polygon,
    polygon_area2,
    segment_param,
    vsub,
)
from .rational import Q


class LinkingError(ValueError):
    pass


def _clip_left(poly: Sequence[Pt], a: Pt, b: Pt) -> list:
    """Clip a convex polygon to the closed left side of the line a->b;
    empty-interior results collapse to []."""
    out: List[Pt] = []
    m = len(poly)
    for j in range(m):
        p0, p1 = poly[j], poly[(j + 1) % m]
        s0, s1 = cross(a, b, p0), cross(a, b, p1)
        if s0 >= 0:
            out.append(p0)
        if (s0 > 0 > s1) or (s0 < 0 < s1):
            out.append(lerp(p0, p1, s0 / Q(s0 - s1)))
    out = dedupe_poly(out)
    if len(out) < 3 or polygon_area2(out) == 0:
        return []
    return out


class LinkingData:
    """2n boundary marks and their oriented chords on a convex disk.

    Validation enforces the genericity the reduction needs: marks are
    pairwise distinct boundary points, every chord crosses the interior,
    no two chords are collinear and no three chords run through a common
    point.  Indices are 0-based throughout.
    """

    def __init__(self, domain: Sequence[Pt], alphas: Sequence[Pt],
                 omegas: Sequence[Pt]):
        dom = ensure_ccw(dedupe_poly([tuple(p) for p in domain]))
        m = len(dom)
        if m < 3:
            raise LinkingError("degenerate domain")
        for i in range(m):
            if orient(dom[i], dom[(i + 1) % m], dom[(i + 2) % m]) < 0:
                raise LinkingError("domain must be convex")
        self.domain = tuple(dom)

        if len(alphas) != len(omegas) or not alphas:
            raise LinkingError("need matching alpha/omega mark lists")
        self.alphas = tuple(tuple(p) for p in alphas)
        self.omegas = tuple(tuple(p) for p in omegas)
        self.n = len(self.alphas)

        every = list(self.alphas) + list(self.omegas)
        if len(set(every)) != 2 * self.n:
            raise LinkingError("marks are not pairwise distinct")

        order = []
        for i, p in enumerate(self.alphas):
            order.append((self.boundary_param(p), "alpha", i, p))
        for i, p in enumerate(self.omegas):
            order.append((self.boundary_param(p), "omega", i, p))
        order.sort()
        self.marks = order

        self.chords = tuple(zip(self.alphas, self.omegas))
        for i, (a, w) in enumerate(self.chords):
            mid = lerp(a, w, Q(1, 2))
            if point_in_polygon(mid, self.domain) != 1:
                raise LinkingError(f"chord {i} does not cross the interior")
        for i, j in combinations(range(self.n), 2):
            (a1, w1), (a2, w2) = self.chords[i], self.chords[j]
            if orient(a1, w1, a2) == 0 and orient(a1, w1, w2) == 0:
                raise LinkingError(f"chords {i} and {j} are collinear")
        for i, j, k in combinations(range(self.n), 3):
            p = _line_meet(self.chords[i], self.chords[j])
            if p is not None and orient(*self.chords[k], p) == 0:
                raise LinkingError(f"chords {i}, {j}, {k} are concurrent")

    def boundary_param(self, p: Pt) -> Tuple[int, object]:
        """Exact cyclic position of a boundary point: (edge index, edge
        parameter in [0, 1))."""
        m = len(self.domain)
        for i in range(m):
            a, b = self.domain[i], self.domain[(i + 1) % m]
            if orient(a, b, p) == 0:
                t = segment_param(p, a, b)
                if t is not None and 0 <= t < 1:
                    return (i, t)
        raise LinkingError(f"mark {p} is not on the domain boundary")

    def side_of(self, i: int, z: Pt) -> int:
        a, w = self.chords[i]
        return orient(a, w, z)


def _line_meet(ch1, ch2) -> Optional[Pt]:
    """Intersection point of the two full chord lines, or None when
    parallel."""
    (a1, b1), (a2, b2) = ch1, ch2
    d1, d2 = vsub(b1, a1), vsub(b2, a2)
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    t = ((a2[0] - a1[0]) * d2[1] - (a2[1] - a1[1]) * d2[0]) / Q(den)
    return (a1[0] + t * d1[0], a1[1] + t * d1[1])


def _cyclic_inside(a, x, b) -> bool:
    """Strictly between a and b going forward in cyclic param order; for
    a == b the interval is everything except a."""
    if a == b:
        return x != a
    if a < b:
        return a < x < b
    return x > a or x < b


def check_hypothesis_iii(data: LinkingData) -> bool:
    """For every i, the open boundary interval from omega_{i-1} to
    omega_i contains exactly the mark alpha_{i+1}."""
    n = data.n
    pos = {(kind, idx): par for par, kind, idx, _ in data.marks}
    for i in range(n):
        lo = pos[("omega", (i - 1) % n)]
        hi = pos[("omega", i)]
        inside = [(kind, idx) for par, kind, idx, _ in data.marks
                  if _cyclic_inside(lo, par, hi)]
        if inside != [("alpha", (i + 1) % n)]:
            return False
    return True


def check_iii_prime_second(data: LinkingData) -> Tuple[bool, bool]:
    """Weakened hypotheses: (every boundary interval between consecutive
    same-kind marks contains one of the other kind, i.e. kinds
    alternate; for every chord some other chord separates its
    endpoints on the boundary)."""
    kinds = [kind for _, kind, _, _ in data.marks]
    m = len(kinds)
    alternates = all(kinds[j] != kinds[(j + 1) % m] for j in range(m))

    pos = {(kind, idx): par for par, kind, idx, _ in data.marks}
    separated = True
    for i in range(data.n):
        a, w = pos[("alpha", i)], pos[("omega", i)]
        found = False
        for j in range(data.n):
            if j == i:
                continue
            inside = sum(1 for key in (("alpha", j), ("omega", j))
                         if _cyclic_inside(a, pos[key], w))
            if inside == 1:
                found = True
                break
        if not found:
            separated = False
            break
    return alternates, separated


# ------------------------------------------------------------ arrangement


def arrangement_cells(data: LinkingData) -> list:
    """Cells of the full chord-line arrangement clipped to the disk.

    Each entry is a dict with the convex cell polygon, the side sign of
    every chord line on it, the count `nu` of positive sides, and
    whether its closure touches the disk boundary.  Cell areas add up to
    the domain exactly.
    """
    cells = [list(data.domain)]
    for a, w in data.chords:
        nxt = []
        for poly in cells:
            nxt.extend(p for p in (_clip_left(poly, a, w), _clip_left(poly, w, a)) if p)
        cells = nxt

    if sum(polygon_area2(c) for c in cells) != polygon_area2(list(data.domain)):
        raise LinkingError("arrangement cells do not tile the disk")

    out = []
    for poly in cells:
        k = len(poly)
        rep = (sum(p[0] for p in poly) / Q(k), sum(p[1] for p in poly) / Q(k))
        sigma = tuple(data.side_of(i, rep) for i in range(data.n))
        assert all(s != 0 for s in sigma)
        out.append({
            "poly": poly,
            "sigma": sigma,
            "nu": sum(1 for s in sigma if s > 0),
            "touches": any(point_in_polygon(v, data.domain) == 0 for v in poly),
        })
    return out


def _halfplanes(data: LinkingData, subset, sign: int) -> list:
    """(anchor, direction) pairs whose left side is Pi_i^sign."""
    hs = []
    for i in subset:
        a, w = data.chords[i]
        hs.append((a, w) if sign > 0 else (w, a))
    return hs


def _recession_direction(hs) -> Optional[Pt]:
    """A nonzero direction in which the half-plane intersection is
    unbounded, or None (the intersection is bounded, possibly empty).
    Half-planes are closed left sides of a->b."""
    dirs = [vsub(b, a) for a, b in hs]
    cands = []
    for d in dirs:
        cands.append(d)
        cands.append((-d[0], -d[1]))
    for c in cands:
        # c recedes iff it points weakly left of every bounding line
        if all(d[0] * c[1] - d[1] * c[0] >= 0 for d in dirs):
            return c
    return None


def _halfplane_polygon(data: LinkingData, hs) -> list:
    """The (bounded) intersection of the half-planes, clipped inside a
    box that provably contains every vertex: all vertices are pairwise
    chord-line meets."""
    pts = [p for ch in data.chords for p in ch]
    for c1, c2 in combinations(data.chords, 2):
        q = _line_meet(c1, c2)
        if q is not None:
            pts.append(q)
    r = max(max(abs(p[0]), abs(p[1])) for p in pts) + 1
    poly = [(-r, -r), (r, -r), (r, r), (-r, r)]
    for a, b in hs:
        poly = _clip_left(poly, a, b)
        if not poly:
            return []
    return poly


def _subset_pins_compact_face(data: LinkingData, subset, sign: int) -> bool:
    """True iff the subset's half-plane intersection is nonempty,
    bounded, and stays strictly inside the disk."""
    hs = _halfplanes(data, subset, sign)
    if _recession_direction(hs) is not None:
        return False
    poly = _halfplane_polygon(data, hs)
    if not poly:
        return False
    return all(point_in_polygon(v, data.domain) == 1 for v in poly)


def _minimal_subset(data: LinkingData, allowed, sign: int) -> Optional[tuple]:
    """Smallest subset of `allowed` pinning a compact face; None when
    even the full set fails.  Size-ascending lexicographic search, so
    the result is inclusion-minimal and deterministic."""
    allowed = sorted(allowed)
    if not _subset_pins_compact_face(data, allowed, sign):
        return None
    if len(allowed) > 12:
        # greedy removal keeps this polynomial for large families
        keep = list(allowed)
        for i in list(keep):
            trial = [j for j in keep if j != i]
            if trial and _subset_pins_compact_face(data, trial, sign):
                keep = trial
        return tuple(keep)
    for size in range(1, len(allowed) + 1):
        for sub in combinations(allowed, size):
            if _subset_pins_compact_face(data, sub, sign):
                return sub
    return None


def reduce_to_convex_subfamily(data: LinkingData) -> dict:
    """Pick the compact arrangement face with extremal positive-side
    count and express its confinement by a minimal chord subfamily.

    Prefers the maximal count; falls back to the minimal one, and
    reports the unused side under "alt" when it also admits a compact
    extremal face.  Raises LinkingError when the weakened hypotheses
    fail or when every extremal face reaches the disk boundary.
    """
    alt_ok, sep_ok = check_iii_prime_second(data)
    if not (alt_ok and sep_ok):
        raise LinkingError(
            f"mark hypotheses fail: alternation={alt_ok} separation={sep_ok}")

    cells = arrangement_cells(data)
    nus = [c["nu"] for c in cells]

    def pick(side: str) -> Optional[dict]:
        sign = 1 if side == "+" else -1
        target = max(nus) if sign > 0 else min(nus)
        inner = [c for c in cells if c["nu"] == target and not c["touches"]]
        if not inner:
            return None
        face = min(inner, key=lambda c: sorted(c["poly"]))
        allowed = [i for i in range(data.n) if face["sigma"][i] * sign > 0]
        subset = _minimal_subset(data, allowed, sign)
        if subset is None:
            return None
        return {"side": side, "I": list(subset), "nu": target,
                "face": face["poly"]}

    plus, minus = pick("+"), pick("-")
    chosen, alt = (plus, minus) if plus is not None else (minus, plus)
    if chosen is None:
        raise LinkingError("every extremal face touches the disk boundary")

    return {
        "n": data.n,
        "side": chosen["side"],
        "I": chosen["I"],
        "nu": chosen["nu"],
        "face": chosen["face"],
        "alt": alt,
        "nu_range": [min(nus), max(nus)],
        "boundary_nu": sorted({c["nu"] for c in cells if c["touches"]}),
        "cells": len(cells),
    }


# ------------------------------------------------------------- reporting


def linking_report(data: LinkingData) -> dict:
    """Hypothesis flags plus (when they pass) the subfamily reduction;
    this is what the command line prints."""
    alternation, separation = check_iii_prime_second(data)
    rep: Dict[str, object] = {
        "n": data.n,
        "mark_order": [f"{kind}{idx}" for _, kind, idx, _ in data.marks],
        "interval_hypothesis": check_hypothesis_iii(data),
        "alternation": alternation,
        "separation": separation,
    }
    if alternation and separation:
        red = reduce_to_convex_subfamily(data)
        rep["reduction"] = {k: red[k] for k in
                            ("side", "I", "nu", "nu_range", "boundary_nu", "cells")}
    else:
        rep["reduction"] = None
    return rep
