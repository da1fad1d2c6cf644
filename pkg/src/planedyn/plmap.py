"""Piecewise-linear disk homeomorphisms with exact rational data.

A map is given by a triangulation of a convex polygonal disk plus an
image point for every vertex; it is affine on each triangle.  The
constructor proves (exactly) that this data defines an orientation
preserving homeomorphism of the disk:

  * source triangles are positively oriented, conforming (shared edges
    match vertex-to-vertex, no T junctions) and tile the disk (area sum
    equals the disk area, all vertices inside the convex disk);
  * image triangles are positively oriented, lie in the disk, and their
    areas sum to the disk area - together with continuity this forces
    the image complex to tile the disk without folds;
  * boundary vertices map to boundary points in the same cyclic order,
    so the boundary restriction is a circle homeomorphism;
  * declared boundary marks are fixed points of the boundary map.

Everything downstream (freeness, fixed sets, indices, certificates)
reduces to exact queries against this structure.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .geom import (
    Pt,
    bbox,
    bbox_disjoint,
    convex_clip,
    intersect_segments,
    intersect_segments_params,
    lerp,
    on_segment,
    orient,
    point_in_polygon,
    point_in_region,
    polygon_area2,
    polygon_edges,
    polygons_meet,
    polyline_intersections,
    polyline_meets_polygon,
    segment_param,
    triangulate,
)
from .rational import Q, fmt_q, to_q


class MapValidationError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryMark:
    point: Pt
    kind: str  # "alpha" | "omega"
    index: int  # orbit index in Z/nZ

    def label(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass
class Orbit:
    index: int
    kmin: int
    kmax: int
    points: Dict[int, Pt]
    alpha: Optional[BoundaryMark] = None
    omega: Optional[BoundaryMark] = None
    tail_alpha: Optional[List[Pt]] = None
    tail_omega: Optional[List[Pt]] = None

    def point(self, k: int) -> Pt:
        return self.points[k]

    def window(self) -> range:
        return range(self.kmin, self.kmax + 1)


class FixedSet:
    """Exact fixed locus, stored per triangle.

    Entries are (triangle index, kind, data) with kind in
    {"point", "segment", "triangle"}.
    """

    def __init__(self, entries: List[tuple]):
        self.entries = entries

    def is_empty(self) -> bool:
        return not self.entries

    def points_summary(self) -> list:
        return [(k, d) for (_, k, d) in self.entries]

    def contains_point(self, p: Pt) -> bool:
        for _, kind, data in self.entries:
            if kind == "point":
                if p == data:
                    return True
            elif kind == "segment":
                if on_segment(p, data[0], data[1]):
                    return True
            else:
                if point_in_polygon(p, list(data)) >= 0:
                    return True
        return False

    def meets_polygon(self, poly: Sequence[Pt]) -> Optional[Pt]:
        pbox = bbox(poly)
        for _, kind, data in self.entries:
            if kind == "point":
                if point_in_polygon(data, poly) >= 0:
                    return data
            elif kind == "segment":
                if bbox_disjoint(pbox, bbox(data)):
                    continue
                a, b = data
                if point_in_polygon(a, poly) >= 0:
                    return a
                if point_in_polygon(b, poly) >= 0:
                    return b
                for e0, e1 in polygon_edges(list(poly)):
                    res = intersect_segments(a, b, e0, e1)
                    if res[0] != "empty":
                        return res[1]
            else:
                if bbox_disjoint(pbox, bbox(data)):
                    continue
                w = polygons_meet(list(data), list(poly))
                if w is not None:
                    return w
        return None

    def meets_region(self, region) -> Optional[Pt]:
        """Exact intersection witness with an (outer, holes) region.

        A connected entry meets the region iff one of its vertices lies in
        it or it crosses the region boundary, since the boundary separates
        the region from both the outside and the hole interiors.
        """
        outer, holes = region
        loops = [list(outer) + [tuple(outer[0])]]
        loops += [list(h) + [tuple(h[0])] for h in holes]
        for _, kind, data in self.entries:
            if kind == "point":
                if point_in_region(data, region) >= 0:
                    return data
            elif kind == "segment":
                a, b = data
                if point_in_region(a, region) >= 0:
                    return a
                if point_in_region(b, region) >= 0:
                    return b
                for loop in loops:
                    kind2, payload = polyline_intersections([a, b], loop)
                    if kind2 == "overlap":
                        return payload[0]
                    if payload:
                        return payload[0]
            else:
                tri = list(data)
                for v in tri:
                    if point_in_region(v, region) >= 0:
                        return v
                for loop in loops:
                    w = polyline_meets_polygon(loop, tri)
                    if w is not None:
                        return w
        return None

    def meets_path(self, path: Sequence[Pt], closed: bool = False) -> Optional[Pt]:
        pts = list(path)
        if closed and pts[0] != pts[-1]:
            pts = pts + [pts[0]]
        edges = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
        for _, kind, data in self.entries:
            if kind == "point":
                for a, b in edges:
                    if on_segment(data, a, b):
                        return data
            elif kind == "segment":
                for a, b in edges:
                    res = intersect_segments(a, b, data[0], data[1])
                    if res[0] != "empty":
                        return res[1]
            else:
                w = polyline_meets_polygon(pts, list(data))
                if w is not None:
                    return w
        return None


def _poly_pieces(X) -> List[List[Pt]]:
    """Normalize polygon-or-list-of-polygons input."""
    if X and isinstance(X[0], tuple):
        return [list(X)]
    return [list(p) for p in X]


def _tri_contains(t, p: Pt) -> bool:
    a, b, c = t
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


class PLDiskMap:
    def __init__(
        self,
        domain: Sequence[Pt],
        verts: Sequence[Pt],
        tris: Sequence[Tuple[int, int, int]],
        images: Sequence[Pt],
        marks: Sequence[BoundaryMark] = (),
        name: str = "",
        validate: bool = True,
    ):
        self.domain = [tuple(p) for p in domain]
        self.verts = [tuple(p) for p in verts]
        self.tris = [tuple(t) for t in tris]
        self.images = [tuple(p) for p in images]
        self.marks = list(marks)
        self.name = name
        self._affines: Optional[list] = None
        self._tri_boxes: Optional[list] = None
        self._inverse: Optional["PLDiskMap"] = None
        self._fixed: Optional[FixedSet] = None
        self._grid = None
        self._edges: Optional[list] = None
        if validate:
            self._validate()

    # ------------------------------------------------------- validation

    def _validate(self) -> None:
        dom = self.domain
        n = len(dom)
        if n < 3 or polygon_area2(dom) <= 0:
            raise MapValidationError("domain must be a ccw polygon")
        for i in range(n):
            if orient(dom[i], dom[(i + 1) % n], dom[(i + 2) % n]) < 0:
                raise MapValidationError("domain must be convex")
        if len(self.verts) != len(self.images):
            raise MapValidationError("vertex/image count mismatch")
        if len(set(self.verts)) != len(self.verts):
            raise MapValidationError("duplicate vertices")

        used = set()
        area_src = Q(0)
        area_img = Q(0)
        edge_use: Dict[tuple, int] = {}
        for t in self.tris:
            a, b, c = (self.verts[i] for i in t)
            fa, fb, fc = (self.images[i] for i in t)
            if orient(a, b, c) <= 0:
                raise MapValidationError(f"source triangle {t} not ccw")
            if orient(fa, fb, fc) <= 0:
                raise MapValidationError(f"image triangle {t} folds")
            area_src += polygon_area2([a, b, c])
            area_img += polygon_area2([fa, fb, fc])
            used.update(t)
            for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                if (u, v) in edge_use:
                    raise MapValidationError("directed edge used twice")
                edge_use[(u, v)] = 1
        if used != set(range(len(self.verts))):
            raise MapValidationError("unused vertices present")

        dom_area = polygon_area2(dom)
        for p in self.verts:
            if point_in_polygon(p, dom) < 0:
                raise MapValidationError("vertex outside domain")
        for p in self.images:
            if point_in_polygon(p, dom) < 0:
                raise MapValidationError("image vertex outside domain")
        if area_src != dom_area:
            raise MapValidationError("source triangles do not tile the domain")
        if area_img != dom_area:
            raise MapValidationError("image triangles do not tile the domain")

        # conformity: undirected edges interior twice / boundary once,
        # boundary edges supported by a single domain side
        for (u, v) in list(edge_use):
            if u < v:
                both = ((v, u) in edge_use)
                if not both:
                    pu, pv = self.verts[u], self.verts[v]
                    if not self._on_one_domain_side(pu, pv):
                        raise MapValidationError(
                            f"interior edge {u}-{v} used by one triangle only"
                        )

        # no T junctions: no vertex interior to another triangle's edge
        xs = sorted((p[0], i) for i, p in enumerate(self.verts))
        xs_keys = [x for x, _ in xs]
        for (u, v) in edge_use:
            if u > v and (v, u) in edge_use:
                continue
            pu, pv = self.verts[u], self.verts[v]
            lo = bisect.bisect_left(xs_keys, min(pu[0], pv[0]))
            hi = bisect.bisect_right(xs_keys, max(pu[0], pv[0]))
            for _, i in xs[lo:hi]:
                if i in (u, v):
                    continue
                w = self.verts[i]
                if on_segment(w, pu, pv):
                    raise MapValidationError(
                        f"vertex {i} lies inside edge {u}-{v} (T junction)"
                    )

        # boundary restriction: same cyclic order on the circle
        bverts = []
        for i, p in enumerate(self.verts):
            t = self._boundary_param(p)
            if t is not None:
                bverts.append((t, i))
        bverts.sort()
        img_params = []
        for _, i in bverts:
            ti = self._boundary_param(self.images[i])
            if ti is None:
                raise MapValidationError(f"boundary vertex {i} maps off the boundary")
            img_params.append(ti)
        m = len(img_params)
        if m >= 2:
            rot = img_params.index(min(img_params))
            seq = img_params[rot:] + img_params[:rot]
            for i in range(m - 1):
                if not seq[i] < seq[i + 1]:
                    raise MapValidationError("boundary cyclic order not preserved")

        seen = set()
        for mk in self.marks:
            key = (mk.kind, mk.index)
            if key in seen or mk.kind not in ("alpha", "omega"):
                raise MapValidationError("bad boundary mark labels")
            seen.add(key)
            if self._boundary_param(mk.point) is None:
                raise MapValidationError("mark not on the boundary")
            if mk.point in self.verts:
                i = self.verts.index(mk.point)
                if self.images[i] != mk.point:
                    raise MapValidationError(f"mark {mk.label()} not fixed")
            # marks that are not mesh vertices are fixed iff their edge is

    def _on_one_domain_side(self, a: Pt, b: Pt) -> bool:
        for d0, d1 in polygon_edges(self.domain):
            if on_segment(a, d0, d1) and on_segment(b, d0, d1):
                return True
        return False

    def _boundary_param(self, p: Pt) -> Optional[object]:
        """Cyclic parameter of p along the domain boundary: edge index k
        plus position within, as k + t in [0, len)."""
        for k, (d0, d1) in enumerate(polygon_edges(self.domain)):
            if on_segment(p, d0, d1):
                t = segment_param(p, d0, d1)
                if t < 1:
                    return Q(k) + t
                # p == d1; belongs to the next edge's parameter 0
                return Q((k + 1) % len(self.domain))
        return None

    def boundary_param(self, p: Pt):
        t = self._boundary_param(p)
        if t is None:
            raise ValueError("point not on the domain boundary")
        return t

    # ------------------------------------------------------- evaluation

    def _affine(self, ti: int):
        if self._affines is None:
            self._affines = [None] * len(self.tris)
        aff = self._affines[ti]
        if aff is None:
            i, j, k = self.tris[ti]
            p0, p1, p2 = self.verts[i], self.verts[j], self.verts[k]
            q0, q1, q2 = self.images[i], self.images[j], self.images[k]
            u1 = (p1[0] - p0[0], p1[1] - p0[1])
            u2 = (p2[0] - p0[0], p2[1] - p0[1])
            v1 = (q1[0] - q0[0], q1[1] - q0[1])
            v2 = (q2[0] - q0[0], q2[1] - q0[1])
            det = Q(u1[0] * u2[1] - u1[1] * u2[0])
            # A = [v1 v2] [u1 u2]^{-1}
            a11 = (v1[0] * u2[1] - v2[0] * u1[1]) / det
            a12 = (v2[0] * u1[0] - v1[0] * u2[0]) / det
            a21 = (v1[1] * u2[1] - v2[1] * u1[1]) / det
            a22 = (v2[1] * u1[0] - v1[1] * u2[0]) / det
            c = (
                q0[0] - a11 * p0[0] - a12 * p0[1],
                q0[1] - a21 * p0[0] - a22 * p0[1],
            )
            aff = ((a11, a12, a21, a22), c)
            self._affines[ti] = aff
        return aff

    def tri_points(self, ti: int):
        i, j, k = self.tris[ti]
        return (self.verts[i], self.verts[j], self.verts[k])

    def tri_image_points(self, ti: int):
        i, j, k = self.tris[ti]
        return (self.images[i], self.images[j], self.images[k])

    def _boxes(self):
        if self._tri_boxes is None:
            self._tri_boxes = [bbox(self.tri_points(t)) for t in range(len(self.tris))]
        return self._tri_boxes

    def _grid_index(self):
        # float bucket grid over triangle bboxes; candidates only, exact
        # tests decide, full scan is the fallback
        if self._grid is None:
            boxes = self._boxes()
            dbox = bbox(self.domain)
            w = float(dbox[2] - dbox[0])
            h = float(dbox[3] - dbox[1])
            import math

            ncell = max(1, int(math.sqrt(len(self.tris))))
            sx = w / ncell or 1.0
            sy = h / ncell or 1.0
            buckets: Dict[tuple, list] = {}
            x0, y0 = float(dbox[0]), float(dbox[1])
            for ti, b in enumerate(boxes):
                i0 = int((float(b[0]) - x0) / sx) - 1
                i1 = int((float(b[2]) - x0) / sx) + 1
                j0 = int((float(b[1]) - y0) / sy) - 1
                j1 = int((float(b[3]) - y0) / sy) + 1
                for i in range(i0, i1 + 1):
                    for j in range(j0, j1 + 1):
                        buckets.setdefault((i, j), []).append(ti)
            self._grid = (x0, y0, sx, sy, buckets)
        return self._grid

    def locate(self, p: Pt) -> int:
        """Index of a triangle containing p; raises if p is outside."""
        x0, y0, sx, sy, buckets = self._grid_index()
        key = (int((float(p[0]) - x0) / sx), int((float(p[1]) - y0) / sy))
        for ti in buckets.get(key, ()):
            if _tri_contains(self.tri_points(ti), p):
                return ti
        for ti in range(len(self.tris)):  # exact fallback
            if _tri_contains(self.tri_points(ti), p):
                return ti
        raise ValueError(f"point {p} outside the domain")

    def evaluate(self, p: Pt) -> Pt:
        ti = self.locate(p)
        (a11, a12, a21, a22), c = self._affine(ti)
        return (a11 * p[0] + a12 * p[1] + c[0], a21 * p[0] + a22 * p[1] + c[1])

    def iterate(self, p: Pt, k: int) -> Pt:
        g = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            p = g.evaluate(p)
        return p

    def inverse(self) -> "PLDiskMap":
        if self._inverse is None:
            inv = PLDiskMap(
                self.domain,
                self.images,
                self.tris,
                self.verts,
                marks=self.marks,
                name=self.name + "^-1" if self.name else "",
                validate=False,  # same data, roles swapped; already proved
            )
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    # -------------------------------------------------------- fixed set

    def fixed_set(self) -> FixedSet:
        if self._fixed is not None:
            return self._fixed
        entries = []
        for ti in range(len(self.tris)):
            (a11, a12, a21, a22), c = self._affine(ti)
            tri = self.tri_points(ti)
            # solve (A - I) p = -c on the closed triangle
            m11, m12, m21, m22 = a11 - 1, a12, a21, a22 - 1
            r1, r2 = -c[0], -c[1]
            det = m11 * m22 - m12 * m21
            if det != 0:
                px = (m22 * r1 - m12 * r2) / Q(det)
                py = (m11 * r2 - m21 * r1) / Q(det)
                if _tri_contains(tri, (px, py)):
                    entries.append((ti, "point", (px, py)))
                continue
            if m11 == m12 == m21 == m22 == 0:
                if r1 == 0 and r2 == 0:
                    entries.append((ti, "triangle", tri))
                continue
            # rank one: consistent iff augmented minors vanish
            if m11 * r2 - m21 * r1 != 0 or m12 * r2 - m22 * r1 != 0:
                continue
            if (m11, m12) != (0, 0):
                a, b, r = m11, m12, r1
            else:
                a, b, r = m21, m22, r2
            hits = []
            for e0, e1 in polygon_edges(list(tri)):
                s0 = a * e0[0] + b * e0[1] - r
                s1 = a * e1[0] + b * e1[1] - r
                if s0 == 0:
                    hits.append(e0)
                if (s0 > 0 > s1) or (s0 < 0 < s1):
                    t = s0 / Q(s0 - s1)
                    hits.append(lerp(e0, e1, t))
            uniq = sorted(set(hits))
            if len(uniq) == 1:
                entries.append((ti, "point", uniq[0]))
            elif len(uniq) >= 2:
                entries.append((ti, "segment", (uniq[0], uniq[-1])))
        self._fixed = FixedSet(entries)
        return self._fixed

    # --------------------------------------------------------- freeness

    def domain_contains_poly(self, X) -> bool:
        return all(
            point_in_polygon(p, self.domain) >= 0
            for piece in _poly_pieces(X)
            for p in piece
        )

    def free_witness(self, X, tris_X: Optional[list] = None) -> Optional[Pt]:
        """Exact witness of f(X) meeting X, or None when X is free.

        X is a polygon or a list of polygons with pairwise disjoint
        interiors (closed-set semantics throughout).
        """
        pieces = _poly_pieces(X)
        if not self.domain_contains_poly(pieces):
            raise ValueError("X not contained in the domain")
        if tris_X is None:
            tris_X = [t for piece in pieces for t in triangulate(piece)]
        xbox = bbox([p for t in tris_X for p in t])
        xtri_boxes = [bbox(t) for t in tris_X]
        boxes = self._boxes()
        for ti in range(len(self.tris)):
            if bbox_disjoint(boxes[ti], xbox):
                continue
            tri = list(self.tri_points(ti))
            (a11, a12, a21, a22), c = self._affine(ti)
            for xt, xb in zip(tris_X, xtri_boxes):
                if bbox_disjoint(boxes[ti], xb):
                    continue
                piece = convex_clip(list(xt), tri)
                if not piece:
                    continue
                img = [
                    (a11 * p[0] + a12 * p[1] + c[0], a21 * p[0] + a22 * p[1] + c[1])
                    for p in piece
                ]
                ibox = bbox(img)
                for xt2, xb2 in zip(tris_X, xtri_boxes):
                    if bbox_disjoint(ibox, xb2):
                        continue
                    w = polygons_meet(img, list(xt2))
                    if w is not None:
                        return w
        return None

    def is_free(self, X) -> bool:
        return self.free_witness(X) is None

    # ----------------------------------------------------------- curves

    def mesh_edges(self):
        if self._edges is None:
            seen = set()
            out = []
            for t in self.tris:
                for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                    key = (min(u, v), max(u, v))
                    if key not in seen:
                        seen.add(key)
                        a, b = self.verts[key[0]], self.verts[key[1]]
                        out.append((a, b, bbox((a, b))))
            self._edges = out
        return self._edges

    def refine_path(self, path: Sequence[Pt]) -> List[Pt]:
        """Insert every crossing with the triangulation 1-skeleton, so the
        map is affine on each returned sub-segment."""
        out: List[Pt] = [tuple(path[0])]
        for i in range(len(path) - 1):
            a, b = tuple(path[i]), tuple(path[i + 1])
            if a == b:
                continue
            sbox = bbox((a, b))
            ts = set()
            for e0, e1, ebox in self.mesh_edges():
                if bbox_disjoint(sbox, ebox):
                    continue
                res = intersect_segments_params(a, b, e0, e1)
                if res[0] == "point":
                    ts.add(res[1])
                elif res[0] == "overlap":
                    ts.add(res[1])
                    ts.add(res[2])
            for t in sorted(ts | {Q(1)}):
                if t <= 0:
                    continue
                p = lerp(a, b, t)
                if p != out[-1]:
                    out.append(p)
        return out

    def map_path(self, path: Sequence[Pt]) -> List[Pt]:
        """Exact image polyline of a polyline."""
        refined = self.refine_path(path)
        return [self.evaluate(p) for p in refined]


# ------------------------------------------------------------ conjugation


def affine_conjugate(m: PLDiskMap, A: Tuple, b: Pt) -> PLDiskMap:
    """Conjugate by p -> Ap + b (det A > 0): returns h o f o h^{-1} as a
    PL map on the transformed domain."""
    a11, a12, a21, a22 = A
    if a11 * a22 - a12 * a21 <= 0:
        raise ValueError("conjugation must preserve orientation")

    def h(p: Pt) -> Pt:
        return (a11 * p[0] + a12 * p[1] + b[0], a21 * p[0] + a22 * p[1] + b[1])

    marks = [BoundaryMark(h(mk.point), mk.kind, mk.index) for mk in m.marks]
    return PLDiskMap(
        [h(p) for p in m.domain],
        [h(p) for p in m.verts],
        m.tris,
        [h(p) for p in m.images],
        marks=marks,
        name=m.name + "~conj" if m.name else "",
    )


# --------------------------------------------------------------- JSON IO


def _pt_to_json(p: Pt):
    return [fmt_q(p[0]), fmt_q(p[1])]


def _pt_from_json(v) -> Pt:
    return (to_q(v[0]), to_q(v[1]))


def poly_to_json(poly) -> list:
    return [_pt_to_json(p) for p in poly]


def poly_from_json(v) -> list:
    return [_pt_from_json(p) for p in v]


def region_to_json(region) -> dict:
    outer, holes = region
    return {"outer": poly_to_json(outer), "holes": [poly_to_json(h) for h in holes]}


def region_from_json(v):
    return (poly_from_json(v["outer"]), [poly_from_json(h) for h in v.get("holes", [])])


@dataclass
class Scenario:
    name: str
    map: PLDiskMap
    orbits: List[Orbit] = field(default_factory=list)
    extras: dict = field(default_factory=dict)


def scenario_to_json(sc: Scenario) -> dict:
    m = sc.map
    doc = {
        "name": sc.name,
        "domain": poly_to_json(m.domain),
        "vertices": poly_to_json(m.verts),
        "triangles": [list(t) for t in m.tris],
        "images": poly_to_json(m.images),
        "marks": [
            {"point": _pt_to_json(mk.point), "kind": mk.kind, "index": mk.index}
            for mk in m.marks
        ],
        "orbits": [
            {
                "index": o.index,
                "kmin": o.kmin,
                "kmax": o.kmax,
                "seed": _pt_to_json(o.points[0]),
                "tail_alpha": poly_to_json(o.tail_alpha) if o.tail_alpha else None,
                "tail_omega": poly_to_json(o.tail_omega) if o.tail_omega else None,
            }
            for o in sc.orbits
        ],
    }
    if sc.extras:
        doc["extras"] = sc.extras
    return doc


def save_scenario(sc: Scenario, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_json(sc), fh, indent=1, sort_keys=True)
        fh.write("\n")


def orbit_window(
    m: PLDiskMap,
    index: int,
    seed: Pt,
    kmin: int,
    kmax: int,
    tail_alpha: Optional[List[Pt]] = None,
    tail_omega: Optional[List[Pt]] = None,
) -> Orbit:
    """Exact orbit iteration with tail-containment checks.

    The infinite forward/backward limits are represented at window scale:
    the first window point must lie in the declared alpha-tail polygon and
    the last in the omega-tail polygon (when tails are declared).
    """
    if kmin > 0 or kmax < 0:
        raise ValueError("window must contain 0")
    pts: Dict[int, Pt] = {0: tuple(seed)}
    p = tuple(seed)
    for k in range(1, kmax + 1):
        p = m.evaluate(p)
        pts[k] = p
    p = tuple(seed)
    inv = m.inverse()
    for k in range(-1, kmin - 1, -1):
        p = inv.evaluate(p)
        pts[k] = p
    vals = list(pts.values())
    if len(set(vals)) != len(vals):
        raise ValueError("orbit window points not pairwise distinct")
    alpha = omega = None
    for mk in m.marks:
        if mk.index == index:
            if mk.kind == "alpha":
                alpha = mk
            else:
                omega = mk
    if tail_alpha is not None and point_in_polygon(pts[kmin], tail_alpha) < 0:
        raise ValueError(f"orbit {index}: backward end not in its alpha tail")
    if tail_omega is not None and point_in_polygon(pts[kmax], tail_omega) < 0:
        raise ValueError(f"orbit {index}: forward end not in its omega tail")
    return Orbit(index, kmin, kmax, pts, alpha, omega, tail_alpha, tail_omega)


def scenario_from_json(doc: dict) -> Scenario:
    marks = [
        BoundaryMark(_pt_from_json(mk["point"]), mk["kind"], mk["index"])
        for mk in doc.get("marks", [])
    ]
    m = PLDiskMap(
        poly_from_json(doc["domain"]),
        poly_from_json(doc["vertices"]),
        [tuple(t) for t in doc["triangles"]],
        poly_from_json(doc["images"]),
        marks=marks,
        name=doc.get("name", ""),
    )
    orbits = []
    for ob in doc.get("orbits", []):
        orbits.append(
            orbit_window(
                m,
                ob["index"],
                _pt_from_json(ob["seed"]),
                ob["kmin"],
                ob["kmax"],
                poly_from_json(ob["tail_alpha"]) if ob.get("tail_alpha") else None,
                poly_from_json(ob["tail_omega"]) if ob.get("tail_omega") else None,
            )
        )
    return Scenario(doc.get("name", ""), m, orbits, doc.get("extras", {}))


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        return scenario_from_json(json.load(fh))
