"""Brick decompositions of a compact region avoiding the fixed set.

The region is sliced into small rectangular bricks, staggered like the
courses of a brick wall, until every brick is free (disjoint from its own
image).  Staggering makes the wall trivalent: a cut never continues
straight through a course line, so no point of the skeleton has four
incident wall segments.  On top of the wall sit the transition graph
(brick b points to every brick its image meets, with an exact witness
point per arrow), the forward/backward step operators and their
closures, greedy merging into a maximal free decomposition, and cycle
extraction, which turns a transition cycle into a recurrence
certificate.

Conventions for the bounded setting:

* the region must be rectilinear (axis-aligned edges, holes allowed) and
  its corners must sit on the subdivision grid of the chosen depth;
* a vertex of the decomposition is a point where at least three wall
  segments meet; a region corner where exactly two segments bend is an
  interior point of a polyline edge, not a vertex;
* the region frame belongs to the brick boundaries but is not an edge of
  the decomposition, so "filled" asks that every edge separate two
  distinct bricks.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .geom import (
    Pt,
    bbox,
    bbox_disjoint,
    convex_clip,
    ensure_ccw,
    point_in_polygon,
    point_in_region,
    polygon_area2,
    polygons_meet,
    region_boundary_edges,
)
from .plmap import PLDiskMap, region_from_json, region_to_json
from .rational import Q, fmt_q, to_q

# Fractions of the course width used to shift each course's cuts.  All are
# nonzero, so a cut never lines up with a region edge or a carved edge
# (those sit at whole multiples of the width), and consecutive courses get
# different shifts, so cuts never line up across a course line either.
_COURSE_SHIFTS = (Q(1, 3), Q(1, 2), Q(2, 3))


class BrickError(ValueError):
    def __init__(self, message: str, witness: Optional[Pt] = None, brick=None):
        super().__init__(message)
        self.witness = witness
        self.brick = brick


def as_region(region):
    """Accept a bare polygon or an (outer, holes) pair."""
    if isinstance(region, tuple) and len(region) == 2 and region[1] is not None \
            and (not region[1] or isinstance(region[1][0], (list, tuple))) \
            and region[0] and isinstance(region[0][0], (list, tuple)):
        outer, holes = region
        return [tuple(p) for p in outer], [[tuple(p) for p in h] for h in holes]
    return [tuple(p) for p in region], []


def region_area2(region):
    outer, holes = region
    a = abs(polygon_area2(outer))
    for h in holes:
        a -= abs(polygon_area2(h))
    return a


def _is_whole(x) -> bool:
    return to_q(x).denominator == 1


def _axis_edges(region) -> list:
    edges = region_boundary_edges(region)
    for a, b in edges:
        if a[0] != b[0] and a[1] != b[1]:
            raise BrickError("region boundary must be axis-aligned")
    return edges


def masonry_cells(region, depth: int, extra_edges: Sequence[Tuple[Pt, Pt]] = ()):
    """Tile a rectilinear region with staggered rectangular cells.

    Courses have height side/2**depth; each course's vertical cuts are
    shifted by a per-course fraction of the width.  Vertical region edges
    (and carved extra edges) force cuts in every course they span, so
    cells never straddle a boundary.  Returns (cells, courses) where each
    cell is (x0, y0, x1, y1) and courses[j] = (ylo, yhi, [(x0, x1, cell)]).
    """
    region = as_region(region)
    outer, holes = region
    x0, y0, x1, y1 = bbox(outer)
    side = max(x1 - x0, y1 - y0)
    w = side / (2 ** depth)

    edges = _axis_edges(region) + [(tuple(a), tuple(b)) for a, b in extra_edges]
    for a, b in edges:
        if a[0] != b[0] and a[1] != b[1]:
            raise BrickError("carved edges must be axis-aligned")
        for vx, vy in (a, b):
            if not (_is_whole((vx - x0) / w) and _is_whole((vy - y0) / w)):
                raise BrickError(
                    f"corner ({fmt_q(vx)},{fmt_q(vy)}) off the depth-{depth} grid")

    vertical = [(a, b) for a, b in edges if a[0] == b[0]]
    n_rows = int((y1 - y0) / w)
    n_cols = int((x1 - x0) / w)

    cells: List[tuple] = []
    courses = []
    for j in range(n_rows):
        ylo, yhi = y0 + j * w, y0 + (j + 1) * w
        forced = {a[0] for a, b in vertical
                  if min(a[1], b[1]) <= ylo and max(a[1], b[1]) >= yhi}
        shift = _COURSE_SHIFTS[j % 3] * w
        cuts = {x0 + shift + i * w for i in range(n_cols)}
        xs = sorted({x0, x1} | forced | {c for c in cuts if x0 < c < x1})
        row = []
        for xa, xb in zip(xs, xs[1:]):
            centre = ((xa + xb) / 2, (ylo + yhi) / 2)
            if point_in_region(centre, region) > 0:
                row.append((xa, xb, len(cells)))
                cells.append((xa, ylo, xb, yhi))
        courses.append((ylo, yhi, row))

    # no boundary or carved edge may cross a cell interior
    for cx0, cy0, cx1, cy1 in cells:
        for a, b in edges:
            if a[0] == b[0]:  # vertical
                if cx0 < a[0] < cx1 and \
                        max(cy0, min(a[1], b[1])) < min(cy1, max(a[1], b[1])):
                    raise BrickError("edge crosses a cell interior")
            else:
                if cy0 < a[1] < cy1 and \
                        max(cx0, min(a[0], b[0])) < min(cx1, max(a[0], b[0])):
                    raise BrickError("edge crosses a cell interior")

    if sum(2 * (c[2] - c[0]) * (c[3] - c[1]) for c in cells) != region_area2(region):
        raise BrickError("cells do not tile the region exactly")
    return cells, courses


def _cell_poly(cell) -> list:
    cx0, cy0, cx1, cy1 = cell
    return [(cx0, cy0), (cx1, cy0), (cx1, cy1), (cx0, cy1)]


def compute_cell_transitions(m: PLDiskMap, cells: Sequence[tuple], courses) -> list:
    """Exact transition arrows between cells: i -> j iff f(cell_i) meets
    cell_j (closed sets), with a witness point per arrow.

    Each cell is clipped against the map's triangulation so its image is a
    union of convex polygons with rational vertices; candidate targets are
    looked up by course, then confirmed by exact intersection.
    """
    if not cells:
        return []
    overall = bbox([(c[0], c[1]) for c in cells] + [(c[2], c[3]) for c in cells])
    tri_ids = []
    tri_boxes = {}
    for ti in range(len(m.tris)):
        tb = bbox(m.tri_points(ti))
        if not bbox_disjoint(tb, overall):
            tri_ids.append(ti)
            tri_boxes[ti] = tb

    y_base = courses[0][0]
    height = courses[0][1] - courses[0][0]
    n_rows = len(courses)

    out: List[list] = []
    for ci, cell in enumerate(cells):
        cpoly = _cell_poly(cell)
        cbox = (cell[0], cell[1], cell[2], cell[3])
        pieces = []
        covered2 = 0
        for ti in tri_ids:
            if bbox_disjoint(cbox, tri_boxes[ti]):
                continue
            piece = convex_clip(cpoly, m.tri_points(ti))
            if piece:
                covered2 += polygon_area2(piece)
                pieces.append([m.evaluate(p) for p in piece])
        if covered2 != 2 * (cell[2] - cell[0]) * (cell[3] - cell[1]):
            raise BrickError(f"cell {ci} escapes the map domain")

        hits: Dict[int, Pt] = {}
        for img in pieces:
            ix0, iy0, ix1, iy1 = bbox(img)
            j_lo = max(0, int((iy0 - y_base) / height) - 1)
            j_hi = min(n_rows - 1, int((iy1 - y_base) / height) + 1)
            for j in range(j_lo, j_hi + 1):
                ylo, yhi, row = courses[j]
                if yhi < iy0 or ylo > iy1:
                    continue
                for xa, xb, cj in row:
                    if xb < ix0 or xa > ix1 or cj in hits:
                        continue
                    wpt = polygons_meet(img, _cell_poly(cells[cj]))
                    if wpt is not None:
                        hits[cj] = wpt
        out.append(sorted(hits.items()))
    return out


Region = Tuple[list, list]


@dataclass
class RecurrenceCertificate:
    """A closed chain of free disks: for each j, the k_j-th image of disk j
    meets disk j+1 at the recorded witness point.  Self-contained: every
    claim is re-checkable from the map alone."""

    disks: List[Region]
    iterates: List[int]
    witnesses: List[Pt]
    note: str = ""

    def __len__(self) -> int:
        return len(self.disks)


def certificate_to_json(cert: RecurrenceCertificate) -> dict:
    return {
        "kind": "recurrence-certificate",
        "disks": [region_to_json(d) for d in cert.disks],
        "iterates": list(cert.iterates),
        "witnesses": [[fmt_q(x), fmt_q(y)] for x, y in cert.witnesses],
        "note": cert.note,
    }


def certificate_from_json(doc: dict) -> RecurrenceCertificate:
    return RecurrenceCertificate(
        disks=[region_from_json(d) for d in doc["disks"]],
        iterates=[int(k) for k in doc["iterates"]],
        witnesses=[(to_q(x), to_q(y)) for x, y in doc["witnesses"]],
        note=doc.get("note", ""),
    )


def digraph_cycle(edges: Dict[int, Dict[int, Pt]]):
    """Deterministic cycle search in a directed graph with arrow payloads.

    Returns (nodes, payloads) for a simple cycle, payload[j] belonging to
    the arrow nodes[j] -> nodes[j+1], or None if the graph is acyclic.
    Iterative Tarjan, then a breadth-first return path inside the first
    cyclic strongly connected component.
    """
    nodes = sorted(set(edges) | {v for ts in edges.values() for v in ts})
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack = set()
    stack: List[int] = []
    counter = [0]
    sccs = []

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(sorted(edges.get(root, ()))))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if u not in index:
                    index[u] = low[u] = counter[0]
                    counter[0] += 1
                    stack.append(u)
                    on_stack.add(u)
                    work.append((u, iter(sorted(edges.get(u, ())))))
                    advanced = True
                    break
                if u in on_stack:
                    low[v] = min(low[v], index[u])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack.discard(u)
                    comp.append(u)
                    if u == v:
                        break
                sccs.append(sorted(comp))

    for comp in sorted(sccs):
        comp_set = set(comp)
        b0 = comp[0]
        if len(comp) == 1 and b0 not in edges.get(b0, {}):
            continue
        if b0 in edges.get(b0, {}):
            return [b0], [edges[b0][b0]]
        # shortest path b0 -> ... -> b0 inside the component
        prev = {}
        queue = [b0]
        found = None
        while queue and found is None:
            nxt = []
            for v in queue:
                for u in sorted(edges.get(v, ())):
                    if u == b0:
                        found = v
                        break
                    if u in comp_set and u not in prev:
                        prev[u] = v
                        nxt.append(u)
                if found is not None:
                    break
            queue = nxt
        assert found is not None, "cyclic component without a return path"
        path = [found]
        while path[-1] != b0:
            path.append(prev[path[-1]])
        path.reverse()  # b0 ... found
        payloads = [edges[path[j]][path[j + 1]] for j in range(len(path) - 1)]
        payloads.append(edges[found][b0])
        return path, payloads
    return None


class BrickDecomposition:
    """A tiling of a rectilinear region by free bricks, each brick a union
    of masonry cells, with the exact transition graph attached."""

    def __init__(self, m: PLDiskMap, region, cells, courses,
                 groups: Sequence[Sequence[int]], depth: int,
                 cell_out: Optional[list] = None, require_free: bool = True):
        self.map = m
        self.region = as_region(region)
        self.cells = [tuple(c) for c in cells]
        self.courses = courses
        self.depth = depth
        self.groups = [tuple(sorted(g)) for g in groups]
        self.groups.sort(key=lambda g: g[0])

        seen: set = set()
        for g in self.groups:
            if not g or seen & set(g):
                raise BrickError("groups must partition the cells")
            seen |= set(g)
        if seen != set(range(len(self.cells))):
            raise BrickError("groups must cover every cell")

        self.cell_brick = [0] * len(self.cells)
        for bi, g in enumerate(self.groups):
            for c in g:
                self.cell_brick[c] = bi

        if cell_out is None:
            cell_out = compute_cell_transitions(m, self.cells, courses)
        self.cell_out = cell_out

        self._build_skeleton()
        self._build_graphs(require_free)
        self._brick_regions: Dict[int, Region] = {}

    # -- skeleton ---------------------------------------------------------

    def _build_skeleton(self) -> None:
        on_h = defaultdict(set)  # y -> xs of cell corners on that line
        on_v = defaultdict(set)  # x -> ys
        for cx0, cy0, cx1, cy1 in self.cells:
            for x, y in ((cx0, cy0), (cx1, cy0), (cx1, cy1), (cx0, cy1)):
                on_h[y].add(x)
                on_v[x].add(y)

        seg_cells: Dict[tuple, list] = defaultdict(list)
        for ci, (cx0, cy0, cx1, cy1) in enumerate(self.cells):
            for fixed, lo, hi, horiz in (
                (cy0, cx0, cx1, True), (cy1, cx0, cx1, True),
                (cx0, cy0, cy1, False), (cx1, cy0, cy1, False),
            ):
                line = on_h[fixed] if horiz else on_v[fixed]
                stops = sorted([lo, hi] + [t for t in line if lo < t < hi])
                for a, b in zip(stops, stops[1:]):
                    key = ((a, fixed), (b, fixed)) if horiz else ((fixed, a), (fixed, b))
                    seg_cells[key].append(ci)
        self._seg_all = dict(seg_cells)
        self._line_pts = (on_h, on_v)

        # drop wall segments interior to a single brick
        kept: Dict[tuple, tuple] = {}
        for key, cs in seg_cells.items():
            if len(cs) > 2:
                raise BrickError(f"wall segment {key} shared by {len(cs)} cells")
            bricks = sorted({self.cell_brick[c] for c in cs})
            if len(cs) == 2 and len(bricks) == 1:
                continue
            kept[key] = (tuple(bricks), len(cs) == 1)
        self._wall = kept

        degree = defaultdict(int)
        inc = defaultdict(list)
        for (p, q) in kept:
            degree[p] += 1
            degree[q] += 1
            inc[p].append((q, (p, q)))
            inc[q].append((p, (p, q)))
        bad = [p for p, d in degree.items() if d not in (2, 3)]
        if bad:
            raise BrickError(f"skeleton not trivalent at {sorted(bad)[0]}")
        self.vertices = sorted(p for p, d in degree.items() if d == 3)

        verts = set(self.vertices)
        used = set()
        edges = []

        def walk(start, first_key):
            pts = [start]
            key = first_key
            cur = start
            tag = kept[key]
            while True:
                used.add(key)
                cur = key[0] if key[1] == cur else key[1]
                pts.append(cur)
                if cur in verts or cur == start:
                    break
                nxts = [(q, k) for q, k in inc[cur] if k != key]
                assert len(nxts) == 1
                if kept[nxts[0][1]] != tag:
                    break
                key = nxts[0][1]
            return pts, cur

        for v in self.vertices:
            for q, key in sorted(inc[v]):
                if key in used:
                    continue
                pts, end = walk(v, key)
                edges.append((self._simplify(pts), kept[key]))
        for key in sorted(kept):
            if key in used:
                continue  # closed loop with no trivalent point on it
            pts, end = walk(key[0], key)
            assert pts[0] == pts[-1], "loose wall run without a vertex"
            edges.append((self._simplify(pts), kept[key]))
        self.edges = edges
        self.filled = all(len(bricks) == 2
                          for _, (bricks, frame) in edges if not frame)

    @staticmethod
    def _simplify(pts: list) -> list:
        out = [pts[0]]
        for i in range(1, len(pts) - 1):
            a, p, c = pts[i - 1], pts[i], pts[i + 1]
            if (a[0] == p[0] == c[0]) or (a[1] == p[1] == c[1]):
                continue
            out.append(p)
        out.append(pts[-1])
        return out

    # -- graphs -----------------------------------------------------------

    def _build_graphs(self, require_free: bool) -> None:
        adj = defaultdict(set)
        for (bricks, frame) in self._wall.values():
            if len(bricks) == 2:
                a, b = bricks
                adj[a].add(b)
                adj[b].add(a)
        self.adjacency = {b: sorted(adj[b]) for b in range(len(self.groups))
                          if b in adj}

        trans: Dict[int, Dict[int, Pt]] = defaultdict(dict)
        for g in self.groups:
            for ci in g:
                a = self.cell_brick[ci]
                for cj, wpt in self.cell_out[ci]:
                    b = self.cell_brick[cj]
                    if b not in trans[a]:
                        trans[a][b] = wpt
        self.transitions = {a: dict(sorted(ts.items())) for a, ts in sorted(trans.items())}

        if require_free:
            for a, ts in self.transitions.items():
                if a in ts:
                    raise BrickError(
                        f"brick {a} is not free", witness=ts[a], brick=a)

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.groups)

    def brick_cells(self, b: int) -> tuple:
        return self.groups[b]

    def brick_region(self, b: int) -> Region:
        """Stitched outline of brick b as (outer, holes).

        Cell sides are traversed with the cell on the left, so boundary
        loops carry the brick interior on their left: the outer loop comes
        out counterclockwise, holes clockwise.  Trivalence rules out
        pinch points, hence each boundary point has a unique successor.
        """
        if b in self._brick_regions:
            return self._brick_regions[b]
        group = set(self.groups[b])
        on_h, on_v = self._line_pts
        succ: Dict[Pt, Pt] = {}
        for ci in sorted(group):
            cx0, cy0, cx1, cy1 = self.cells[ci]
            for p, q in (((cx0, cy0), (cx1, cy0)), ((cx1, cy0), (cx1, cy1)),
                         ((cx1, cy1), (cx0, cy1)), ((cx0, cy1), (cx0, cy0))):
                horiz = p[1] == q[1]
                axis = 0 if horiz else 1
                line = on_h[p[1]] if horiz else on_v[p[0]]
                lo, hi = min(p[axis], q[axis]), max(p[axis], q[axis])
                stops = sorted([lo, hi] + [t for t in line if lo < t < hi])
                if p[axis] > q[axis]:
                    stops.reverse()
                for s, t in zip(stops, stops[1:]):
                    u = (s, p[1]) if horiz else (p[0], s)
                    v = (t, p[1]) if horiz else (p[0], t)
                    key = (min(u, v), max(u, v))
                    inside = sum(1 for c in self._seg_all[key] if c in group)
                    if inside == 1:
                        assert u not in succ, "pinched brick boundary"
                        succ[u] = v
        loops = []
        unvisited = set(succ)
        while unvisited:
            start = min(unvisited)
            loop = [start]
            cur = start
            while True:
                unvisited.discard(cur)
                cur = succ[cur]
                if cur == start:
                    break
                loop.append(cur)
            loops.append(self._simplify_loop(loop))
        outer_loops = [lp for lp in loops if polygon_area2(lp) > 0]
        assert len(outer_loops) == 1, "brick outline must have one outer loop"
        outer = outer_loops[0]
        holes = [ensure_ccw(lp) for lp in loops if polygon_area2(lp) < 0]
        for h in holes:
            assert point_in_polygon(h[0], outer) > 0, "hole outside outline"
        reg = (outer, holes)
        self._brick_regions[b] = reg
        return reg

    @staticmethod
    def _simplify_loop(pts: list) -> list:
        out = []
        n = len(pts)
        for i, p in enumerate(pts):
            a, c = pts[i - 1], pts[(i + 1) % n]
            if (a[0] == p[0] == c[0]) or (a[1] == p[1] == c[1]):
                continue
            out.append(p)
        return out

    def step_set(self, X, direction: str = "forward") -> FrozenSet[int]:
        """Bricks whose intersection with the image (or preimage) of the
        bricks in X is nonempty."""
        X = set(X)
        out = set()
        if direction == "forward":
            for b in X:
                out |= set(self.transitions.get(b, ()))
        elif direction == "backward":
            for a, ts in self.transitions.items():
                if X & set(ts):
                    out.add(a)
        else:
            raise ValueError("direction must be forward or backward")
        return frozenset(out)

    def closure(self, b: int, strict: bool = True,
                direction: str = "forward") -> FrozenSet[int]:
        """Transitive closure of the step operator from a single brick."""
        frontier = self.step_set([b], direction)
        seen = set(frontier)
        while frontier:
            frontier = self.step_set(frontier, direction) - seen
            seen |= frontier
        if not strict:
            seen.add(b)
        return frozenset(seen)

    def is_connected_set(self, X) -> bool:
        X = set(X)
        if not X:
            return True
        start = min(X)
        seen = {start}
        queue = [start]
        while queue:
            v = queue.pop()
            for u in self.adjacency.get(v, ()):
                if u in X and u not in seen:
                    seen.add(u)
                    queue.append(u)
        return seen == X

    def maximality_violations(self) -> list:
        """Adjacent brick pairs whose union is still free (empty on a
        maximal decomposition)."""
        bad = []
        for a in sorted(self.adjacency):
            for b in self.adjacency[a]:
                if a < b and b not in self.transitions.get(a, {}) \
                        and a not in self.transitions.get(b, {}):
                    bad.append((a, b))
        return bad

def build_free_decomposition(m: PLDiskMap, region, max_depth: int = 10,
                             depth: Optional[int] = None) -> BrickDecomposition:
    """Subdivide until every brick is free.

    Tries increasing depths (or exactly `depth` when given).  Raises
    BrickError with the stuck brick and an exact overlap witness when the
    budget runs out, and beforehand when the region meets the fixed set.
    """
    region = as_region(region)
    fs = m.fixed_set()
    hit = fs.meets_region(region)
    if hit is not None:
        raise BrickError(f"region meets the fixed set at {hit}", witness=hit)
    outer = region[0]
    if not m.domain_contains_poly(outer):
        raise BrickError("region must lie inside the map domain")

    depths = [depth] if depth is not None else list(range(1, max_depth + 1))
    last: Optional[BrickError] = None
    for d in depths:
        try:
            cells, courses = masonry_cells(region, d)
        except BrickError as e:
            last = e
            continue
        cell_out = compute_cell_transitions(m, cells, courses)
        stuck = None
        for ci, outs in enumerate(cell_out):
            for cj, wpt in outs:
                if cj == ci:
                    stuck = (ci, wpt)
                    break
            if stuck:
                break
        if stuck:
            last = BrickError(
                f"depth {d}: brick over cell {stuck[0]} meets its own image "
                f"at ({fmt_q(stuck[1][0])},{fmt_q(stuck[1][1])})",
                witness=stuck[1], brick=stuck[0])
            continue
        return BrickDecomposition(
            m, region, cells, courses,
            [(i,) for i in range(len(cells))], d, cell_out)
    raise last if last is not None else BrickError("no admissible depth")


def maximal_free_subdecomposition(m: PLDiskMap, D: BrickDecomposition) -> BrickDecomposition:
    """Greedily merge adjacent bricks whose union is free until no merge
    remains.  Scan order: the lexicographically smallest eligible id pair,
    re-examined after every merge; implemented with a version-stamped heap
    that pops candidates in exactly that order.

    The union of two bricks is free iff there is no transition arrow
    between (or within) them, because the union's image-overlap set is the
    union of the pairwise cell overlaps.
    """
    n = len(D.groups)
    members = {b: set(D.groups[b]) for b in range(n)}
    out_nb = {b: set(D.transitions.get(b, ())) for b in range(n)}
    in_nb = defaultdict(set)
    for a, ts in D.transitions.items():
        for b in ts:
            in_nb[b].add(a)
    adj = {b: set(D.adjacency.get(b, ())) for b in range(n)}
    ver = [0] * n
    alive = [True] * n

    heap = []
    for a in range(n):
        for b in adj[a]:
            if a < b:
                heap.append((a, b, 0, 0))
    heapq.heapify(heap)

    while heap:
        a, b, va, vb = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or ver[a] != va or ver[b] != vb:
            continue
        if b in out_nb[a] or a in out_nb[b]:
            continue  # union not free; only a later merge can change that
        # merge b into a
        alive[b] = False
        members[a] |= members.pop(b)
        for g in in_nb[b]:
            out_nb[g].discard(b)
            out_nb[g].add(a)
        for g in out_nb[b]:
            in_nb[g].discard(b)
            in_nb[g].add(a)
        out_nb[a] |= out_nb.pop(b)
        in_nb[a] |= in_nb.pop(b, set())
        out_nb[a].discard(b)
        in_nb[a].discard(b)
        if a in out_nb[a] or a in in_nb[a]:
            raise AssertionError("merged a non-free union")
        for g in adj[b]:
            adj[g].discard(b)
            if g != a:
                adj[g].add(a)
        adj[a] |= adj.pop(b)
        adj[a].discard(a)
        adj[a].discard(b)
        ver[a] += 1
        for g in sorted(adj[a]):
            x, y = (a, g) if a < g else (g, a)
            heapq.heappush(heap, (x, y, ver[x], ver[y]))

    groups = sorted((tuple(sorted(ms)) for ms in members.values()), key=lambda g: g[0])
    return BrickDecomposition(m, D.region, D.cells, D.courses, groups,
                              D.depth, D.cell_out)


def merge_by_rescan(m: PLDiskMap, D: BrickDecomposition) -> BrickDecomposition:
    """Literal restart-scan merging; reference for the heap version."""
    groups = [set(g) for g in D.groups]
    while True:
        dec = BrickDecomposition(m, D.region, D.cells, D.courses,
                                 [tuple(sorted(g)) for g in groups],
                                 D.depth, D.cell_out)
        merged = False
        for a in sorted(dec.adjacency):
            for b in dec.adjacency[a]:
                if a < b and b not in dec.transitions.get(a, {}) \
                        and a not in dec.transitions.get(b, {}):
                    ga = next(g for g in groups if set(dec.groups[a]) == g)
                    gb = next(g for g in groups if set(dec.groups[b]) == g)
                    ga |= gb
                    groups.remove(gb)
                    merged = True
                    break
            if merged:
                break
        if not merged:
            return dec


def find_closed_chain(m: PLDiskMap, D: BrickDecomposition) -> Optional[RecurrenceCertificate]:
    """A transition cycle b0 -> b1 -> ... -> b0, packaged as a
    recurrence certificate with one-step witnesses, or None."""
    cyc = digraph_cycle(D.transitions)
    if cyc is None:
        return None
    nodes, wits = cyc
    return RecurrenceCertificate(
        disks=[D.brick_region(b) for b in nodes],
        iterates=[1] * len(nodes),
        witnesses=list(wits),
        note=f"closed chain of {len(nodes)} bricks at depth {D.depth}",
    )


def audit_decomposition(m: PLDiskMap, D: BrickDecomposition) -> dict:
    """Per-brick audit of a maximal free decomposition.

    For each brick: is some adjacent brick met by its image, and some
    adjacent brick met by its preimage; are the four step closures
    connected.  Bricks whose image (or preimage) leaves the region
    entirely are flagged: the both-sides assertion cannot be expected of
    them on a bounded region.  The theory promises the disjunction
    "either every brick passes both sides or a closed chain exists"; the
    report states it and records the cross-check.
    """
    per_brick = []
    violations = []
    for b in range(len(D.groups)):
        nbrs = set(D.adjacency.get(b, ()))
        fwd = set(D.transitions.get(b, ()))
        bwd = {a for a, ts in D.transitions.items() if b in ts}
        entry = {
            "brick": b,
            "forward_adjacent_hit": bool(fwd & nbrs),
            "backward_adjacent_hit": bool(bwd & nbrs),
            "image_meets_region": bool(fwd),
            "preimage_meets_region": bool(bwd),
            "closures_connected": {
                "forward": D.is_connected_set(D.closure(b, strict=False)),
                "forward_strict": D.is_connected_set(D.closure(b, strict=True)),
                "backward": D.is_connected_set(D.closure(b, strict=False, direction="backward")),
                "backward_strict": D.is_connected_set(D.closure(b, strict=True, direction="backward")),
            },
        }
        per_brick.append(entry)
        if not (entry["forward_adjacent_hit"] and entry["backward_adjacent_hit"]):
            violations.append(b)

    chain = find_closed_chain(m, D)
    interior_violations = [
        b for b in violations
        if per_brick[b]["image_meets_region"] and per_brick[b]["preimage_meets_region"]
    ]
    return {
        "bricks": len(D.groups),
        "maximal_verified": not D.maximality_violations(),
        "per_brick": per_brick,
        "violations": violations,
        "interior_violations": interior_violations,
        "chain_found": chain is not None,
        "chain": chain,
        "disjunction_holds": not violations or chain is not None,
        "interior_disjunction_holds": not interior_violations or chain is not None,
        "all_closures_connected": all(
            all(e["closures_connected"].values()) for e in per_brick),
    }


def decomposition_to_json(D: BrickDecomposition) -> dict:
    def q2(p):
        return [fmt_q(p[0]), fmt_q(p[1])]

    return {
        "kind": "brick-decomposition",
        "depth": D.depth,
        "region": region_to_json(D.region),
        "cells": [[fmt_q(v) for v in c] for c in D.cells],
        "bricks": [
            {"id": i, "cells": list(g), "outline": region_to_json(D.brick_region(i))}
            for i, g in enumerate(D.groups)
        ],
        "vertices": [q2(p) for p in D.vertices],
        "edges": [
            {"polyline": [q2(p) for p in pts], "bricks": list(bricks), "frame": frame}
            for pts, (bricks, frame) in D.edges
        ],
        "adjacency": [[a, b] for a in sorted(D.adjacency) for b in D.adjacency[a] if a < b],
        "transitions": [
            {"from": a, "to": b, "witness": q2(w)}
            for a in sorted(D.transitions) for b, w in D.transitions[a].items()
        ],
        "filled": D.filled,
    }
