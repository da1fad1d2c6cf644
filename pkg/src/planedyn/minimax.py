"""Truncation calculus on crossing families of translation arcs.

The input is a tuple of arc families (one per orbit, cyclically indexed)
that has passed the genericity audit: pairwise meetings are finitely many
simple crossings, no triple points, no crossing sits on an orbit point.
A *configuration* assigns to every family a cut parameter t_i inside its
window; the family is then read as the backward piece up to t_i.

Two quantities drive everything here.  The *active set* of a
configuration collects the families whose backward piece meets the
backward piece of some family other than itself and its predecessor; its
size is the *order*.  The *clearance level* K is the least whole number
such that below -K and above +K every family is clear of all the others.
All crossings therefore happen at parameters strictly between -K and K,
which makes the search space finite: between consecutive crossing
parameters of one family the geometry of the cut cannot change, so every
configuration is equivalent to one built from the candidate grid
(crossing parameters, midpoints between consecutive ones, and the two
clearance bounds).

`initial_configuration` builds the greedy cut: each family in turn is
cut at its first meeting with the union of the already cut ones.  It
always reaches order n-1 with pairwise disjoint open backward pieces.
`maximal_configuration` finds the lexicographically largest configuration
of full order n whose open backward pieces are pairwise disjoint.  A
configuration with a cut at a midpoint or at -K can always be raised to
the next crossing parameter without losing either property, so the
maximum is attained on crossing parameters; the search is a pruned
descending sweep over the candidate grid and is checked against a brute
enumeration in the tests.

At the maximum, the cut end of every family lands on exactly one other
family, strictly inside that family's own backward piece.  The module
then audits the seven structural facts this forces on the truncated
picture (`audit_truncations`), collapses each backward piece onto a
finite tree of attachment arcs (`build_trees`), and finally dresses the
trees with pairwise separated security disks carried by the map
(`build_graph_model`).  Separation statements are certified by exact
winding numbers: a closed cut is assembled from pieces of the claimed
separator, connectors to the boundary marks and a walk along the domain
edge, and the two probes must wind differently around it.

Everything is exact; no floats enter at any point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .geom import (
    Pt,
    bbox,
    intersect_segments_params,
    lerp,
    on_segment,
    point_in_polygon,
    polygons_meet,
    polyline_intersections,
    segment_param,
    segments_meet,
    winding_number,
)
from .plmap import PLDiskMap
from .rational import Q
from .transarc import ArcFamily, _param_hits

__all__ = [
    "MinimaxError",
    "FullOrderNotFound",
    "Crossing",
    "crossing_table",
    "Configuration",
    "SigmaReport",
    "sigma",
    "compute_K",
    "clamp_configuration",
    "candidate_parameters",
    "initial_configuration",
    "maximal_configuration",
    "audit_truncations",
    "AttachArc",
    "FamilyModel",
    "GraphModel",
    "build_trees",
    "build_graph_model",
]


class MinimaxError(ValueError):
    """Input breaks a precondition of the truncation calculus."""


class FullOrderNotFound(MinimaxError):
    """No configuration of full order exists inside the window."""


# ---------------------------------------------------------------------------
# crossings


@dataclass(frozen=True)
class Crossing:
    """A common point of families a < b, with its parameter on each."""

    a: int
    b: int
    ta: Q
    tb: Q
    point: Pt

    def param_on(self, i: int):
        if i == self.a:
            return self.ta
        if i == self.b:
            return self.tb
        return None

    def pair(self, i: int, j: int):
        """(param on i, param on j) if this crossing joins i and j."""
        if (self.a, self.b) == (i, j):
            return self.ta, self.tb
        if (self.a, self.b) == (j, i):
            return self.tb, self.ta
        return None, None


def crossing_table(families: Sequence[ArcFamily]) -> List[Crossing]:
    """All pairwise crossings, each a simple point of both families.

    Raises when two families share a sub-segment or meet at a point that
    is not simple on both: such input must first go through the
    genericity perturbation.
    """
    fams = list(families)
    polys = [f.polyline() for f in fams]
    out: List[Crossing] = []
    for a in range(len(fams)):
        for b in range(a + 1, len(fams)):
            kind, val = polyline_intersections(polys[a], polys[b])
            if kind != "points":
                raise MinimaxError(
                    f"families {a} and {b} overlap along a segment near {val[0]}")
            for p in val:
                ha = _param_hits(fams[a], p)
                hb = _param_hits(fams[b], p)
                if len(ha) != 1 or len(hb) != 1:
                    raise MinimaxError(
                        f"meeting point {p} of families {a} and {b} is not "
                        f"a simple point of both")
                out.append(Crossing(a, b, ha[0], hb[0], p))
    out.sort(key=lambda c: (c.a, c.b, c.ta, c.tb))
    return out


# ---------------------------------------------------------------------------
# configurations and the active set


@dataclass(frozen=True)
class Configuration:
    """Cut parameters, one per family, indexed cyclically."""

    values: Tuple[Q, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Q(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i: int):
        return self.values[i % len(self.values)]

    def as_strings(self) -> List[str]:
        return [str(v) for v in self.values]


@dataclass(frozen=True)
class SigmaReport:
    """Active set of a configuration, with witnesses.

    ``members`` lists the families whose backward piece meets the
    backward piece of a family other than itself and its predecessor;
    ``witnesses[i]`` is one such (partner, point).  ``prefixes_disjoint``
    states that no crossing is strictly below the cut on both sides, so
    the open backward pieces are pairwise disjoint; ``overlap`` is a
    witness (i, j, point) when they are not.
    """

    members: Tuple[int, ...]
    order: int
    witnesses: Dict[int, Tuple[int, Pt]]
    prefixes_disjoint: bool
    overlap: Optional[tuple]


def _values(fams: Sequence[ArcFamily], T) -> Tuple[Q, ...]:
    vals = tuple(Q(v) for v in (T.values if isinstance(T, Configuration) else T))
    if len(vals) != len(fams):
        raise MinimaxError(
            f"configuration has {len(vals)} entries for {len(fams)} families")
    for i, (f, v) in enumerate(zip(fams, vals)):
        if not (f.tmin <= v <= f.tmax):
            raise MinimaxError(f"cut parameter {v} of family {i} leaves its window")
    return vals


def sigma(families: Sequence[ArcFamily], T,
          crossings: Optional[List[Crossing]] = None) -> SigmaReport:
    """Active set, order and disjointness of a configuration."""
    fams = list(families)
    n = len(fams)
    if n < 3:
        raise MinimaxError("the cyclic active set needs at least three families")
    vals = _values(fams, T)
    cross = crossing_table(fams) if crossings is None else crossings
    overlap = None
    for c in cross:
        if c.ta < vals[c.a] and c.tb < vals[c.b]:
            overlap = (c.a, c.b, c.point)
            break
    members: List[int] = []
    witnesses: Dict[int, Tuple[int, Pt]] = {}
    for i in range(n):
        best = None
        for c in cross:
            if c.a == i:
                j, ui, uj = c.b, c.ta, c.tb
            elif c.b == i:
                j, ui, uj = c.a, c.tb, c.ta
            else:
                continue
            if j == (i - 1) % n:
                continue
            if ui <= vals[i] and uj <= vals[j]:
                key = (ui, uj, j)
                if best is None or key < best[0]:
                    best = (key, (j, c.point))
        if best is not None:
            members.append(i)
            witnesses[i] = best[1]
    return SigmaReport(tuple(members), len(members), witnesses,
                       overlap is None, overlap)


def compute_K(families: Sequence[ArcFamily]) -> int:
    """Least whole number K with every family clear of all the others
    below -K and above +K."""
    fams = list(families)
    if len(fams) < 2:
        raise MinimaxError("clearance needs at least two families")
    kmax = min(min(-f.tmin, f.tmax) for f in fams)
    kmax = int(kmax)
    if kmax < 1:
        raise MinimaxError(
            "window too short: no whole clearance level fits inside every window")
    polys = [f.polyline() for f in fams]
    for K in range(1, kmax + 1):
        clear = True
        for i, f in enumerate(fams):
            pre = f.prefix_path(Q(-K))
            suf = f.suffix_path(Q(K))
            for j, pj in enumerate(polys):
                if j == i:
                    continue
                for part in (pre, suf):
                    kind, val = polyline_intersections(part, pj)
                    if kind != "points" or val:
                        clear = False
                        break
                if not clear:
                    break
            if not clear:
                break
        if clear:
            return K
    raise MinimaxError(
        f"window too short: families still meet beyond clearance level {kmax}")


def clamp_configuration(T, K: int) -> Configuration:
    """Clip every cut into [-K, K].

    Crossing parameters all sit strictly inside that interval, so the
    comparisons that define the active set and disjointness never change
    under the clip; the tests exercise this as a property.
    """
    vals = T.values if isinstance(T, Configuration) else tuple(Q(v) for v in T)
    lo, hi = Q(-K), Q(K)
    return Configuration(tuple(min(max(v, lo), hi) for v in vals))


def candidate_parameters(families: Sequence[ArcFamily], K: Optional[int] = None,
                         crossings: Optional[List[Crossing]] = None) -> List[List[Q]]:
    """Per-family candidate grid: -K, every crossing parameter, the
    midpoints between consecutive ones, and K.

    Between consecutive crossing parameters nothing about a cut changes,
    so every configuration is equivalent to one drawn from this grid.
    """
    fams = list(families)
    cross = crossing_table(fams) if crossings is None else crossings
    if K is None:
        K = compute_K(fams)
    per: List[List[Q]] = []
    for i in range(len(fams)):
        S = sorted({c.param_on(i) for c in cross if c.param_on(i) is not None})
        for s in S:
            if not -K < s < K:
                raise MinimaxError(
                    f"crossing parameter {s} on family {i} sits outside the "
                    f"open clearance interval (-{K}, {K})")
        cand = [Q(-K)]
        for j, s in enumerate(S):
            cand.append(s)
            if j + 1 < len(S):
                cand.append((s + S[j + 1]) / 2)
        cand.append(Q(K))
        per.append(cand)
    return per


# ---------------------------------------------------------------------------
# the greedy cut and the lexicographic maximum


def initial_configuration(families: Sequence[ArcFamily], start: int = 0,
                          crossings: Optional[List[Crossing]] = None) -> Configuration:
    """Cut each family at its first meeting with the already cut ones.

    The family at ``start`` is cut at its first meeting with its (full)
    predecessor, which cuts the predecessor at the same point; each
    remaining family, walking backwards around the cycle, is then cut at
    its first meeting with the union of the already cut pieces.  The
    result has pairwise disjoint open backward pieces and order at least
    n-1, which is audited before returning.
    """
    fams = list(families)
    n = len(fams)
    if n < 3:
        raise MinimaxError("the greedy cut needs at least three families")
    cross = crossing_table(fams) if crossings is None else crossings
    start %= n
    prev = (start - 1) % n
    t: Dict[int, Q] = {}
    first = None
    for c in cross:
        ui, uj = c.pair(start, prev)
        if ui is not None and (first is None or ui < first[0]):
            first = (ui, uj)
    if first is None:
        raise MinimaxError(
            f"family {start} never meets family {prev} inside the window")
    t[start], t[prev] = first
    for r in range(2, n):
        tgt = (start - r) % n
        best = None
        for c in cross:
            for j in t:
                ui, uj = c.pair(tgt, j)
                if ui is not None and uj <= t[j] and (best is None or ui < best):
                    best = ui
        if best is None:
            raise MinimaxError(
                f"family {tgt} never meets the already cut families inside "
                f"the window")
        t[tgt] = best
    T = Configuration(tuple(t[i] for i in range(n)))
    rep = sigma(fams, T, cross)
    if not rep.prefixes_disjoint:
        raise MinimaxError(
            f"greedy cut produced meeting open pieces: {rep.overlap}")
    if rep.order < n - 1:
        raise MinimaxError(
            f"greedy cut only reaches order {rep.order}, expected at least {n - 1}")
    return T


def maximal_configuration(families: Sequence[ArcFamily],
                          index_order: Optional[Sequence[int]] = None,
                          crossings: Optional[List[Crossing]] = None,
                          K: Optional[int] = None) -> Configuration:
    """Lexicographically largest configuration of full order n with
    pairwise disjoint open backward pieces.

    ``index_order`` lists the families from least to most significant
    (default: positional order, so the last family weighs most).  The
    cut end of every family must land on exactly one other family,
    strictly inside that family's backward piece; this is audited before
    returning.  Raises FullOrderNotFound when no configuration of full
    order exists on the window.
    """
    fams = list(families)
    n = len(fams)
    if n < 3:
        raise MinimaxError("maximization needs at least three families")
    cross = crossing_table(fams) if crossings is None else crossings
    if K is None:
        K = compute_K(fams)
    cand = candidate_parameters(fams, K, cross)
    if index_order is None:
        index_order = list(range(n))
    if sorted(index_order) != list(range(n)):
        raise MinimaxError("index_order must be a permutation of the family positions")
    priority = list(reversed(list(index_order)))

    # crossings usable as active-set witnesses, seen from each family
    incident: List[List[Tuple[int, Q, Q]]] = [[] for _ in range(n)]
    for c in cross:
        if c.b != (c.a - 1) % n:
            incident[c.a].append((c.b, c.ta, c.tb))
        if c.a != (c.b - 1) % n:
            incident[c.b].append((c.a, c.tb, c.ta))

    top = Q(K)
    vals: Dict[int, Q] = {}

    def disjoint_with(i: int) -> bool:
        for c in cross:
            if (i in (c.a, c.b)) and c.a in vals and c.b in vals:
                if c.ta < vals[c.a] and c.tb < vals[c.b]:
                    return False
        return True

    def order_reachable() -> bool:
        # raising any unassigned cut to the top of the grid only helps
        for i in range(n):
            oi = vals.get(i, top)
            for (j, ui, uj) in incident[i]:
                if ui <= oi and uj <= vals.get(j, top):
                    break
            else:
                return False
        return True

    def search(depth: int):
        if depth == n:
            return tuple(vals[i] for i in range(n))
        i = priority[depth]
        for v in reversed(cand[i]):
            vals[i] = v
            if disjoint_with(i) and order_reachable():
                hit = search(depth + 1)
                if hit is not None:
                    return hit
            del vals[i]
        return None

    best = search(0)
    if best is None:
        raise FullOrderNotFound(
            f"no configuration of full order {n} inside the window")
    T = Configuration(best)
    for i in range(n):
        p = fams[i].point_at(best[i])
        hits = [(j, u) for j in range(n) if j != i
                for u in _param_hits(fams[j], p)]
        if len(hits) != 1 or not hits[0][1] < best[hits[0][0]]:
            raise MinimaxError(
                f"cut end of family {i} in the maximal configuration does "
                f"not sit on exactly one other family strictly inside its "
                f"backward piece: {hits}")
    return T


# ---------------------------------------------------------------------------
# the seven structural facts of the maximal truncation


def _meetings(pa: Sequence[Pt], pb: Sequence[Pt]):
    kind, val = polyline_intersections(pa, pb)
    if kind != "points":
        return None, val
    return val, None


def _on_path(p: Pt, path: Sequence[Pt]) -> bool:
    return any(on_segment(p, path[j], path[j + 1]) for j in range(len(path) - 1))


def _chain(*paths) -> List[Pt]:
    out: List[Pt] = []
    for path in paths:
        for p in path:
            if not out or p != out[-1]:
                out.append(p)
    return out


def _boundary_point_param(domain: Sequence[Pt], p: Pt):
    for idx in range(len(domain)):
        a, b = domain[idx], domain[(idx + 1) % len(domain)]
        if a != b and on_segment(p, a, b):
            return Q(idx) + segment_param(p, a, b)
    raise MinimaxError(f"point {p} is not on the domain edge")


def _boundary_walk(domain: Sequence[Pt], p_from: Pt, p_to: Pt) -> List[Pt]:
    """Walk along the domain edge from p_from to p_to, in the stored
    orientation of the polygon."""
    m = len(domain)
    ta = _boundary_point_param(domain, p_from)
    tb = _boundary_point_param(domain, p_to)
    total = (tb - ta) % m
    out = [p_from]
    k = (int(ta) + 1) % m
    acc = (Q(int(ta) + 1) - ta) % m
    while acc < total:
        out.append(domain[k])
        k = (k + 1) % m
        acc += 1
    out.append(p_to)
    return out


def _mark_connectors(fams: Sequence[ArcFamily], domain: Sequence[Pt]) -> Dict:
    """Straight connectors from each boundary mark to its window end.

    Audited: marks sit on the domain edge, every connector meets the
    families only at its own window end, and connectors are pairwise
    disjoint.  Zero-length connectors (window end on the edge) are kept
    as single points.
    """
    polys = [f.polyline() for f in fams]
    conns: Dict[int, Dict[str, List[Pt]]] = {}
    segs: List[Tuple[int, str, Pt, Pt]] = []
    for k, f in enumerate(fams):
        o = f.orbit
        if o.alpha is None or o.omega is None:
            raise MinimaxError(
                f"family {k} carries no boundary marks; separation "
                f"certificates need both ends marked")
        a, w = o.alpha.point, o.omega.point
        for p in (a, w):
            if point_in_polygon(p, domain) != 0:
                raise MinimaxError(
                    f"boundary mark {p} of family {k} is not on the domain edge")
        start, end = polys[k][0], polys[k][-1]
        conns[k] = {"alpha": [a, start], "omega": [end, w]}
        segs.append((k, "alpha", a, start))
        segs.append((k, "omega", end, w))
    for (k, side, u, v) in segs:
        if u == v:
            continue
        own = v if side == "alpha" else u
        for kk, poly in enumerate(polys):
            pts, ov = _meetings([u, v], poly)
            if ov is not None:
                raise MinimaxError(
                    f"the {side} connector of family {k} runs along family {kk}")
            for p in pts:
                if not (kk == k and p == own):
                    raise MinimaxError(
                        f"the {side} connector of family {k} crosses "
                        f"family {kk} at {p}")
    for x in range(len(segs)):
        for y in range(x + 1, len(segs)):
            if segs[x][2:] == segs[y][2:]:
                continue
            if segments_meet(segs[x][2], segs[x][3], segs[y][2], segs[y][3]):
                raise MinimaxError(
                    f"the {segs[x][1]} connector of family {segs[x][0]} meets "
                    f"the {segs[y][1]} connector of family {segs[y][0]}")
    return conns


def _winding_split(loop: Sequence[Pt], probe_a: Sequence[Pt],
                   probe_b: Sequence[Pt]) -> Optional[bool]:
    """True/False when both probes stay clear of the loop, else None.

    The loop need not be simple: the winding number is constant on every
    component of its complement, so differing winding numbers certify
    that the probes sit in different components.
    """
    for probe in (probe_a, probe_b):
        kind, val = polyline_intersections(list(probe), list(loop))
        if kind != "points" or val:
            return None
    return winding_number(probe_a[0], loop) != winding_number(probe_b[0], loop)


def audit_truncations(families: Sequence[ArcFamily], T,
                      K: Optional[int] = None,
                      domain: Optional[Sequence[Pt]] = None,
                      crossings: Optional[List[Crossing]] = None) -> dict:
    """Audit the seven structural facts of a maximal full-order cut.

    Writing minus_i for the backward piece up to the cut, plus_i for the
    forward piece above K + 1/2 and deep_i for the piece below -K:

      plus_clear      plus_i meets no other family's minus or plus piece
      plus_clear_own  plus_i meets its own minus piece nowhere
      ends_only       two minus pieces meet only at their cut ends
      deep_clear      deep_i meets no other minus piece
      one_face        every interior meeting point is the dangling cut
                      end of the other piece, simple on both families and
                      on no third one, so cutting it loose leaves each
                      minus piece whole
      far_meeting     every minus piece meets one of a non-neighbour
      separations     whenever minus_i meets minus_j for j neither i nor
                      i-1, a closed cut through the meeting point built
                      from minus_i, the full family j, connectors and a
                      boundary walk, winds differently around deep_{i-1}
                      than around plus_{i-1}

    Returns a report dict with one boolean per key, ``witnesses`` for
    the failures, and ``ok``.  The separation check needs ``domain`` and
    boundary marks; without meetings to certify it passes vacuously.
    """
    fams = list(families)
    n = len(fams)
    vals = _values(fams, T)
    cross = crossing_table(fams) if crossings is None else crossings
    if K is None:
        K = compute_K(fams)
    half = Q(K) + Q(1, 2)
    for i, f in enumerate(fams):
        if f.tmax < half:
            raise MinimaxError(
                f"window of family {i} ends below the forward tail level {half}")
        if not (-K < vals[i] < K):
            raise MinimaxError(
                f"cut of family {i} must sit strictly inside the clearance "
                f"interval (-{K}, {K})")
    minus = [f.prefix_path(vals[i]) for i, f in enumerate(fams)]
    plus = [f.suffix_path(half) for f in fams]
    deep = [f.prefix_path(Q(-K)) for f in fams]
    full = [f.polyline() for f in fams]
    ends = [fams[i].point_at(vals[i]) for i in range(n)]

    report: dict = {"witnesses": {}}

    def fail(key: str, w) -> None:
        report[key] = False
        report["witnesses"].setdefault(key, w)

    report["plus_clear"] = True
    report["plus_clear_own"] = True
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            for part in (minus[j], plus[j]):
                pts, ov = _meetings(plus[i], part)
                if ov is not None or pts:
                    fail("plus_clear", (i, j, (ov or pts)[0]))
        pts, ov = _meetings(plus[i], minus[i])
        if ov is not None or pts:
            fail("plus_clear_own", (i, (ov or pts)[0]))

    report["ends_only"] = True
    meets: Dict[Tuple[int, int], List[Pt]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            pts, ov = _meetings(minus[i], minus[j])
            if ov is not None:
                fail("ends_only", (i, j, ov[0]))
                meets[(i, j)] = []
                continue
            meets[(i, j)] = list(pts)
            for p in pts:
                if p != ends[i] and p != ends[j]:
                    fail("ends_only", (i, j, p))

    report["deep_clear"] = True
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            pts, ov = _meetings(deep[i], minus[j])
            if ov is not None or pts:
                fail("deep_clear", (i, j, (ov or pts)[0]))

    report["one_face"] = True
    for (i, j), pts in meets.items():
        for p in pts:
            for (host, owner) in ((i, j), (j, i)):
                if p != ends[owner]:
                    continue
                # dangling end of the owner, sitting inside the host
                if len(_param_hits(fams[host], p)) != 1 or \
                        len(_param_hits(fams[owner], p)) != 1:
                    fail("one_face", (host, owner, p))
                for k in range(n):
                    if k in (i, j):
                        continue
                    if any(u <= vals[k] for u in _param_hits(fams[k], p)):
                        fail("one_face", (k, p))
            if p != ends[i] and p != ends[j]:
                fail("one_face", (i, j, p))

    report["far_meeting"] = True
    for i in range(n):
        found = False
        for j in range(n):
            if j in (i, (i - 1) % n):
                continue
            pts = meets.get((min(i, j), max(i, j)), [])
            if pts:
                found = True
                break
        if not found:
            fail("far_meeting", (i,))

    report["separations"] = True
    needed = []
    for i in range(n):
        for j in range(n):
            if j in (i, (i - 1) % n):
                continue
            if meets.get((min(i, j), max(i, j))):
                needed.append((i, j))
    if needed:
        if domain is None:
            raise MinimaxError(
                "separation certificates need the domain polygon")
        conns = _mark_connectors(fams, domain)
        for (i, j) in needed:
            prev = (i - 1) % n
            certified = False
            for p in meets[(min(i, j), max(i, j))]:
                ui = [u for u in _param_hits(fams[i], p) if u <= vals[i]]
                if len(ui) != 1:
                    continue
                for uj in _param_hits(fams[j], p):
                    routes = [
                        (list(reversed(fams[j].prefix_path(uj))),
                         conns[j]["alpha"][0]),
                        (fams[j].suffix_path(uj), conns[j]["omega"][1]),
                    ]
                    for jpath, jmark in routes:
                        loop = _chain(
                            conns[i]["alpha"],
                            fams[i].prefix_path(ui[0]),
                            jpath,
                            [jmark],
                            _boundary_walk(domain, jmark,
                                           conns[i]["alpha"][0]),
                        )
                        split = _winding_split(loop, deep[prev], plus[prev])
                        if split:
                            certified = True
                            break
                    if certified:
                        break
                if certified:
                    break
            if not certified:
                fail("separations", (i, j))

    keys = ["plus_clear", "plus_clear_own", "ends_only", "deep_clear",
            "one_face", "far_meeting", "separations"]
    report["ok"] = all(report[k] for k in keys)
    return report


# ---------------------------------------------------------------------------
# parameter spans and first/last meetings along a family


def _param_segments(f: ArcFamily, lo: Q, hi: Q):
    """Maximal straight pieces of the family between parameters lo < hi,
    as (param_lo, param_hi, point_lo, point_hi), in parameter order."""
    out = []
    for k in f.piece_range():
        if Q(k + 1) <= lo or Q(k) >= hi:
            continue
        path = f.pieces[k]
        s = len(path) - 1
        for j in range(s):
            plo = Q(k) + Q(j, s)
            phi = Q(k) + Q(j + 1, s)
            if phi <= lo or plo >= hi:
                continue
            a, b = path[j], path[j + 1]
            clo, chi = max(plo, lo), min(phi, hi)
            pa = lerp(a, b, (clo - plo) / (phi - plo))
            pb = lerp(a, b, (chi - plo) / (phi - plo))
            if pa != pb:
                out.append((clo, chi, pa, pb))
    return out


def _span_path(f: ArcFamily, lo: Q, hi: Q) -> List[Pt]:
    segs = _param_segments(f, lo, hi)
    if not segs:
        return [f.point_at(lo)]
    return _chain([segs[0][2]], *([s[3]] for s in segs))


def _edges(path: Sequence[Pt]):
    return [(path[j], path[j + 1]) for j in range(len(path) - 1)
            if path[j] != path[j + 1]]


def _first_meeting(f: ArcFamily, lo: Q, hi: Q, union_segs) -> Tuple[Q, Pt]:
    for (plo, phi, a, b) in _param_segments(f, lo, hi):
        best = None
        for (c, d) in union_segs:
            res = intersect_segments_params(a, b, c, d)
            if res[0] == "empty":
                continue
            if res[0] == "overlap":
                raise MinimaxError(
                    f"attachment piece of a family runs along its own tree "
                    f"near {lerp(a, b, res[1])}")
            if best is None or res[1] < best:
                best = res[1]
        if best is not None:
            return plo + (phi - plo) * best, lerp(a, b, best)
    raise MinimaxError("attachment piece never reaches the tree it must join")


def _last_meeting(f: ArcFamily, lo: Q, hi: Q, union_segs) -> Tuple[Q, Pt]:
    for (plo, phi, a, b) in reversed(_param_segments(f, lo, hi)):
        best = None
        for (c, d) in union_segs:
            res = intersect_segments_params(a, b, c, d)
            if res[0] == "empty":
                continue
            if res[0] == "overlap":
                raise MinimaxError(
                    f"attachment piece of a family runs along its own tree "
                    f"near {lerp(a, b, res[1])}")
            if best is None or res[1] > best:
                best = res[1]
        if best is not None:
            return plo + (phi - plo) * best, lerp(a, b, best)
    raise MinimaxError("attachment piece never reaches the tree it must join")


# ---------------------------------------------------------------------------
# the tree summary


@dataclass(frozen=True)
class AttachArc:
    """One attachment piece of a family's tree.

    ``lo``/``hi`` are its parameter span after trimming, ``attach`` the
    point where it joins the earlier pieces (None for the seed pieces at
    levels -1 and +1).
    """

    family: int
    level: int
    lo: Q
    hi: Q
    path: Tuple[Pt, ...]
    attach: Optional[Pt]


@dataclass(frozen=True)
class FamilyModel:
    """Marked points and attachment pieces of one family."""

    index: int
    cut: Q
    neg_params: Dict[int, Q]
    pos_params: Dict[int, Q]
    star_level: int
    neg_arcs: Dict[int, AttachArc]
    pos_arcs: Dict[int, AttachArc]

    def minus_paths(self) -> List[Tuple[Pt, ...]]:
        return [self.neg_arcs[l].path for l in sorted(self.neg_arcs)]

    def plus_paths(self) -> List[Tuple[Pt, ...]]:
        return [self.pos_arcs[l].path for l in sorted(self.pos_arcs)]


@dataclass(frozen=True)
class GraphModel:
    """Finite summary of the maximal truncation.

    Per family: the marked parameters below the cut (level 0 is the cut
    itself, negative levels walk backwards through the marked points),
    the regular forward levels, and the attachment pieces whose union
    forms a tree.  ``L`` is the least depth at which every family's
    marked point has cleared -K.  ``disks`` carries the security disks
    when the model was built against a map.
    """

    T: Configuration
    K: int
    L: int
    families: Tuple[FamilyModel, ...]
    disks: Optional[Dict[Tuple[int, int], List[Pt]]]
    audits: dict

    def summary(self) -> dict:
        fams = []
        for F in self.families:
            fams.append({
                "index": F.index,
                "cut": str(F.cut),
                "star_level": F.star_level,
                "negative_params": {str(l): str(F.neg_params[l])
                                    for l in sorted(F.neg_params)},
                "positive_params": {str(l): str(F.pos_params[l])
                                    for l in sorted(F.pos_params)},
                "pieces": {
                    str(l): {
                        "span": [str(F.neg_arcs[l].lo), str(F.neg_arcs[l].hi)],
                        "attach": _pt_json(F.neg_arcs[l].attach),
                        "vertices": len(F.neg_arcs[l].path),
                    } for l in sorted(F.neg_arcs)
                },
                "forward_pieces": {
                    str(l): {
                        "span": [str(F.pos_arcs[l].lo), str(F.pos_arcs[l].hi)],
                        "attach": _pt_json(F.pos_arcs[l].attach),
                        "vertices": len(F.pos_arcs[l].path),
                    } for l in sorted(F.pos_arcs)
                },
            })
        out = {
            "cuts": self.T.as_strings(),
            "K": self.K,
            "L": self.L,
            "families": fams,
            "audits": _audit_json(self.audits),
        }
        if self.disks is not None:
            out["disks"] = {f"{i},{l}": [_pt_json(p) for p in poly]
                            for (i, l), poly in sorted(self.disks.items())}
        return out


def _pt_json(p: Optional[Pt]):
    if p is None:
        return None
    return [str(p[0]), str(p[1])]


def _audit_json(a):
    if isinstance(a, dict):
        return {str(k): _audit_json(v) for k, v in sorted(a.items(), key=lambda kv: str(kv[0]))}
    if isinstance(a, (list, tuple)):
        return [_audit_json(v) for v in a]
    if a is None or isinstance(a, (bool, int, str)):
        return a
    return str(a)


class _TreeGraph:
    """Exact vertex graph of a union of polylines forming a tree.

    Edges are split at every listed extra point and every mutual meeting
    point, so routes can start and end anywhere relevant.
    """

    def __init__(self, paths: Sequence[Sequence[Pt]], extra: Sequence[Pt] = ()):
        pts: Set[Pt] = set(extra)
        for p in paths:
            pts.update(p)
        for x in range(len(paths)):
            for y in range(x + 1, len(paths)):
                hit, ov = _meetings(list(paths[x]), list(paths[y]))
                if ov is not None:
                    raise MinimaxError(
                        f"tree pieces overlap along a segment near {ov[0]}")
                pts.update(hit)
        self.adj: Dict[Pt, Set[Pt]] = {}
        for path in paths:
            for (a, b) in _edges(path):
                marks = [(Q(0), a), (Q(1), b)]
                for q in pts:
                    if q != a and q != b and on_segment(q, a, b):
                        marks.append((segment_param(q, a, b), q))
                marks.sort(key=lambda mk: mk[0])
                for (u0, p0), (u1, p1) in zip(marks, marks[1:]):
                    if p0 != p1:
                        self._link(p0, p1)

    def _link(self, a: Pt, b: Pt) -> None:
        self.adj.setdefault(a, set()).add(b)
        self.adj.setdefault(b, set()).add(a)

    def is_tree(self) -> bool:
        if not self.adj:
            return True
        edges = sum(len(v) for v in self.adj.values()) // 2
        seen = {next(iter(self.adj))}
        queue = list(seen)
        while queue:
            u = queue.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(self.adj) and edges == len(self.adj) - 1

    def route(self, a: Pt, b: Pt) -> List[Pt]:
        if a not in self.adj or b not in self.adj:
            raise MinimaxError(f"point {a if a not in self.adj else b} "
                               f"is not a vertex of the tree")
        prev: Dict[Pt, Optional[Pt]] = {a: None}
        queue = [a]
        while queue:
            u = queue.pop(0)
            if u == b:
                break
            for v in sorted(self.adj[u]):
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
        if b not in prev:
            raise MinimaxError("tree is not connected between the route ends")
        path = [b]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        return path


def build_trees(families: Sequence[ArcFamily], T,
                domain: Optional[Sequence[Pt]] = None,
                K: Optional[int] = None,
                crossings: Optional[List[Crossing]] = None,
                strict: bool = True) -> GraphModel:
    """Collapse a maximal full-order truncation onto attachment trees.

    The marked points of a family below its cut are its orbit points and
    the cut ends of the other families landing on it; beyond depth L
    (the first depth at which every family's marked point has cleared
    -K) they must all be orbit points.  Forward of the clearance the
    marked points follow the fixed ladder K + 1/2, K + 1, K + 2, ...

    Each consecutive span between marked points is trimmed to an
    attachment piece: going down, a span is cut at its first meeting
    with the pieces already grown; going up, at its last one.  The union
    per family is audited to be a tree, and the seven structural facts
    are re-audited on the trees (same keys as ``audit_truncations``; the
    separation cuts route through the trees and the probes are the deep
    pieces and the forward tree of the predecessor).

    With ``strict`` the audits must pass; otherwise they are only
    recorded in ``audits``.  Separations need ``domain`` and marks; when
    the domain is missing they are recorded as None and not enforced.
    """
    fams = list(families)
    n = len(fams)
    if n < 3:
        raise MinimaxError("the tree summary needs at least three families")
    vals = _values(fams, T)
    cross = crossing_table(fams) if crossings is None else crossings
    if K is None:
        K = compute_K(fams)
    rep = sigma(fams, Configuration(vals), cross)
    if not rep.prefixes_disjoint or rep.order != n:
        raise MinimaxError(
            f"tree summary needs a disjoint configuration of full order {n}; "
            f"got order {rep.order}, disjoint={rep.prefixes_disjoint}")
    ends = [fams[i].point_at(vals[i]) for i in range(n)]
    for i in range(n):
        if not (-K < vals[i] < K):
            raise MinimaxError(
                f"cut of family {i} must sit strictly inside the clearance interval")
        hits = [(j, u) for j in range(n) if j != i
                for u in _param_hits(fams[j], ends[i])]
        if len(hits) != 1 or not hits[0][1] < vals[hits[0][0]]:
            raise MinimaxError(
                f"cut end of family {i} does not sit on exactly one other "
                f"family strictly inside its backward piece: {hits}")

    # marked parameters below the cut
    neg_params: List[Dict[int, Q]] = []
    for i, f in enumerate(fams):
        if vals[i].denominator == 1:
            raise MinimaxError(
                f"cut of family {i} sits on an orbit point; run the "
                f"genericity perturbation first")
        sing = {Q(k) for k in f.orbit.window() if Q(k) < vals[i]}
        for j in range(n):
            if j == i:
                continue
            for u in _param_hits(f, ends[j]):
                if u < vals[i]:
                    sing.add(u)
        levels: Dict[int, Q] = {0: vals[i]}
        for r, u in enumerate(sorted(sing, reverse=True), start=1):
            levels[-r] = u
        neg_params.append(levels)

    depth = 1
    while True:
        missing = [i for i in range(n) if -depth not in neg_params[i]]
        if missing:
            raise MinimaxError(
                f"window of family {missing[0]} too short: its marked points "
                f"run out before clearing the backward level -{K}")
        if all(neg_params[i][-depth] <= -K for i in range(n)):
            L = depth
            break
        depth += 1
    for i in range(n):
        if -(L + 1) not in neg_params[i]:
            raise MinimaxError(
                f"window of family {i} too short: no marked point strictly "
                f"below depth {L}")
        for l, u in neg_params[i].items():
            if l <= -L and u.denominator != 1:
                raise MinimaxError(
                    f"marked point of family {i} at depth {l} has cleared the "
                    f"backward level but is not an orbit point")

    # two families may not trade their cut ends with their last marked points
    for i0 in range(n):
        for i1 in range(i0 + 1, n):
            s0 = fams[i0].point_at(neg_params[i0][-1])
            s1 = fams[i1].point_at(neg_params[i1][-1])
            if s0 == ends[i1] and s1 == ends[i0]:
                raise MinimaxError(
                    f"families {i0} and {i1} trade their cut ends with their "
                    f"last marked points; the configuration is not maximal")

    # forward ladder
    pos_params: List[Dict[int, Q]] = []
    for i, f in enumerate(fams):
        levels = {1: Q(K) + Q(1, 2)}
        l = 2
        while Q(K + l - 1) <= f.tmax:
            levels[l] = Q(K + l - 1)
            l += 1
        if 2 not in levels:
            raise MinimaxError(
                f"window of family {i} ends before the forward level {K + 1}")
        pos_params.append(levels)

    star_levels = []
    for i in range(n):
        floor = Q(vals[i].numerator // vals[i].denominator)
        lvl = [l for l, p in neg_params[i].items() if p == floor]
        if len(lvl) != 1:
            raise MinimaxError(
                f"the orbit point just below the cut of family {i} is not "
                f"among its marked points")
        star_levels.append(lvl[0])

    models = []
    for i, f in enumerate(fams):
        neg_arcs: Dict[int, AttachArc] = {}
        union: List[Tuple[Pt, Pt]] = []
        for l in sorted((l for l in neg_params[i] if l < 0), reverse=True):
            lo, hi = neg_params[i][l], neg_params[i][l + 1]
            if l == -1:
                path = _span_path(f, lo, hi)
                arc = AttachArc(i, l, lo, hi, tuple(path), None)
            else:
                tcut, pcut = _first_meeting(f, lo, hi, union)
                if tcut == lo:
                    raise MinimaxError(
                        f"attachment piece of family {i} at depth {l} is "
                        f"degenerate")
                path = _span_path(f, lo, tcut)
                arc = AttachArc(i, l, lo, tcut, tuple(path), pcut)
            neg_arcs[l] = arc
            union.extend(_edges(arc.path))
        pos_arcs: Dict[int, AttachArc] = {}
        union = []
        for l in sorted(l for l in pos_params[i] if l + 1 in pos_params[i]):
            lo, hi = pos_params[i][l], pos_params[i][l + 1]
            if l == 1:
                path = _span_path(f, lo, hi)
                arc = AttachArc(i, l, lo, hi, tuple(path), None)
            else:
                tcut, pcut = _last_meeting(f, lo, hi, union)
                if tcut == hi:
                    raise MinimaxError(
                        f"forward piece of family {i} at level {l} is "
                        f"degenerate")
                path = _span_path(f, tcut, hi)
                arc = AttachArc(i, l, tcut, hi, tuple(path), pcut)
            pos_arcs[l] = arc
            union.extend(_edges(arc.path))
        models.append(FamilyModel(i, vals[i], neg_params[i], pos_params[i],
                                  star_levels[i], neg_arcs, pos_arcs))

    audits = {
        "no_swap": True,
        "deep_levels_on_orbit": True,
        "trees": _audit_trees(fams, models, vals, K, L, domain),
    }
    if strict:
        rep_t = audits["trees"]
        bad = [k for k, v in rep_t.items()
               if k not in ("witnesses", "ok") and v is False]
        if bad:
            raise MinimaxError(
                f"tree audit failed on {bad[0]}: "
                f"{rep_t['witnesses'].get(bad[0])}")
    return GraphModel(Configuration(vals), K, L, tuple(models), None, audits)


def _audit_trees(fams, models, vals, K: int, L: int,
                 domain: Optional[Sequence[Pt]]) -> dict:
    """Re-audit the seven structural facts on the attachment trees."""
    n = len(fams)
    ends = [fams[i].point_at(vals[i]) for i in range(n)]
    minus = [[list(p) for p in models[i].minus_paths()] for i in range(n)]
    plus = [[list(p) for p in models[i].plus_paths()] for i in range(n)]

    report: dict = {"witnesses": {}}

    def fail(key: str, w) -> None:
        report[key] = False
        report["witnesses"].setdefault(key, w)

    def group_meet(A, B):
        points: Set[Pt] = set()
        for pa in A:
            for pb in B:
                pts, ov = _meetings(pa, pb)
                if ov is not None:
                    return None, ov
                points.update(pts)
        return sorted(points), None

    report["plus_clear"] = True
    report["plus_clear_own"] = True
    for i in range(n):
        for j in range(n):
            if j == i:
                pts, ov = group_meet(plus[i], minus[i])
                if ov is not None or pts:
                    fail("plus_clear_own", (i, (ov or pts)[0]))
                continue
            pts, ov = group_meet(plus[i], minus[j] + plus[j])
            if ov is not None or pts:
                fail("plus_clear", (i, j, (ov or pts)[0]))

    report["ends_only"] = True
    meets: Dict[Tuple[int, int], List[Pt]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            pts, ov = group_meet(minus[i], minus[j])
            if pts is None:
                fail("ends_only", (i, j, ov[0]))
                meets[(i, j)] = []
                continue
            meets[(i, j)] = pts
            for p in pts:
                if p != ends[i] and p != ends[j]:
                    fail("ends_only", (i, j, p))

    report["deep_clear"] = True
    for i in range(n):
        deep_paths = [list(models[i].neg_arcs[l].path)
                      for l in models[i].neg_arcs if l < -L]
        for j in range(n):
            if j == i:
                continue
            pts, ov = group_meet(deep_paths, minus[j])
            if ov is not None or pts:
                fail("deep_clear", (i, j, (ov or pts)[0]))

    report["one_face"] = True
    for (i, j), pts in meets.items():
        for p in pts:
            if p != ends[i] and p != ends[j]:
                fail("one_face", (i, j, p))
                continue
            owner = i if p == ends[i] else j
            host = j if owner == i else i
            if len(_param_hits(fams[host], p)) != 1 or \
                    len(_param_hits(fams[owner], p)) != 1:
                fail("one_face", (host, owner, p))
            for k in range(n):
                if k in (i, j):
                    continue
                if any(_on_path(p, path) for path in minus[k]):
                    fail("one_face", (k, p))

    report["far_meeting"] = True
    for i in range(n):
        if not any(meets.get((min(i, j), max(i, j)))
                   for j in range(n) if j not in (i, (i - 1) % n)):
            fail("far_meeting", (i,))

    # the union per family must really be a tree: every piece beyond the
    # seed joins the earlier ones at exactly one point
    report["acyclic"] = True
    graphs = []
    for i in range(n):
        extra = [p for key, pts in meets.items() if i in key for p in pts]
        g = _TreeGraph(minus[i], extra + [ends[i]])
        graphs.append(g)
        if not g.is_tree():
            fail("acyclic", (i,))

    report["marks_on_tree"] = True
    for i in range(n):
        for l in sorted(models[i].neg_params):
            p = fams[i].point_at(models[i].neg_params[l])
            if not any(_on_path(p, path) for path in minus[i]):
                fail("marks_on_tree", (i, l, p))

    report["separations"] = True
    needed = [(i, j) for i in range(n) for j in range(n)
              if j not in (i, (i - 1) % n)
              and meets.get((min(i, j), max(i, j)))]
    if needed and domain is not None:
        conns = _mark_connectors(fams, domain)
        starts = [fams[i].polyline()[0] for i in range(n)]
        for (i, j) in needed:
            prev = (i - 1) % n
            deep_prev = [list(models[prev].neg_arcs[l].path)
                         for l in sorted(models[prev].neg_arcs) if l < -L]
            plus_prev = plus[prev]
            certified = False
            for p in meets[(min(i, j), max(i, j))]:
                try:
                    loop = _chain(
                        conns[i]["alpha"],
                        graphs[i].route(starts[i], p),
                        graphs[j].route(p, starts[j]),
                        list(reversed(conns[j]["alpha"])),
                        _boundary_walk(domain, conns[j]["alpha"][0],
                                       conns[i]["alpha"][0]),
                    )
                except MinimaxError:
                    continue
                wa = _probe_group(loop, deep_prev)
                wb = _probe_group(loop, plus_prev)
                if wa is not None and wb is not None and wa != wb:
                    certified = True
                    break
            if not certified:
                fail("separations", (i, j))
    elif needed:
        report["separations"] = None

    keys = ["plus_clear", "plus_clear_own", "ends_only", "deep_clear",
            "one_face", "far_meeting", "acyclic", "marks_on_tree",
            "separations"]
    report["ok"] = all(report[k] is not False for k in keys)
    return report


def _probe_group(loop: Sequence[Pt], paths: Sequence[Sequence[Pt]]):
    """Winding number of a connected group of paths around the loop, or
    None when the group touches the loop."""
    if not paths:
        return None
    for path in paths:
        kind, val = polyline_intersections(list(path), list(loop))
        if kind != "points" or val:
            return None
    return winding_number(paths[0][0], loop)


# ---------------------------------------------------------------------------
# security disks against the map


def build_graph_model(m: PLDiskMap, families: Sequence[ArcFamily], T=None,
                      index_order: Optional[Sequence[int]] = None,
                      strict: bool = True) -> GraphModel:
    """Full graph summary against the map: maximal cut, seven-fact audit,
    attachment trees and security disks.

    When ``T`` is omitted the maximal configuration is computed first.
    The disks are axis squares around each span between marked points,
    shrunk until the separation rules hold: disks of distinct families
    are disjoint as soon as one of them is forward, backward and forward
    disks of one family are disjoint, and the image of a disk under the
    map never meets a lower disk of the same family.  When a window tail
    region is declared, the extreme disks must sit inside it.
    """
    fams = list(families)
    cross = crossing_table(fams)
    if T is None:
        T = maximal_configuration(fams, index_order, cross)
    domain = list(m.domain)
    K = compute_K(fams)
    trunc = audit_truncations(fams, T, K, domain, cross)
    if strict and not trunc["ok"]:
        bad = [k for k, v in trunc.items()
               if k not in ("witnesses", "ok") and v is False]
        raise MinimaxError(
            f"truncation audit failed on {bad[0]}: "
            f"{trunc['witnesses'].get(bad[0])}")
    model = build_trees(fams, T, domain, K, cross, strict=strict)
    disks, disk_audit = _security_disks(m, fams, model)
    audits = dict(model.audits)
    audits["truncations"] = trunc
    audits["disks"] = disk_audit
    return replace(model, disks=disks, audits=audits)


def _disk(f: ArcFamily, lo: Q, hi: Q, r: Q) -> List[Pt]:
    box = bbox(_span_path(f, lo, hi))
    return [(box[0] - r, box[1] - r), (box[2] + r, box[1] - r),
            (box[2] + r, box[3] + r), (box[0] - r, box[3] + r)]


def _security_disks(m: PLDiskMap, fams: Sequence[ArcFamily],
                    model: GraphModel):
    """Shrink a common inflation radius until the disk rules hold."""
    spans = []  # (family, level, lo, hi)
    for F in model.families:
        for l in sorted(F.neg_arcs):
            spans.append((F.index, l, F.neg_params[l], F.neg_params[l + 1]))
        for l in sorted(F.pos_arcs):
            spans.append((F.index, l, F.pos_params[l], F.pos_params[l + 1]))
    r = Q(1, 4)
    witness = None
    for _ in range(13):
        disks = {(i, l): _disk(fams[i], lo, hi, r) for (i, l, lo, hi) in spans}
        audit = {"separated": True, "image_steps_down": True,
                 "inside_domain": True, "tails": None,
                 "radius": str(r), "witnesses": {}}

        def fail(key, w):
            audit[key] = False
            audit["witnesses"].setdefault(key, w)

        keys = sorted(disks)
        for x in range(len(keys)):
            for y in range(x + 1, len(keys)):
                (i, l), (i2, l2) = keys[x], keys[y]
                if i != i2 and (l > 0 or l2 > 0):
                    pass
                elif i == i2 and ((l < 0 < l2) or (l2 < 0 < l)):
                    pass
                else:
                    continue
                if polygons_meet(disks[keys[x]], disks[keys[y]]) is not None:
                    fail("separated", (keys[x], keys[y]))
        for (i, l) in keys:
            if not m.domain_contains_poly(disks[(i, l)]):
                fail("inside_domain", (i, l))
        images = {}
        for (i, l) in keys:
            loop = disks[(i, l)] + [disks[(i, l)][0]]
            images[(i, l)] = m.map_path(loop)[:-1]
        for (i, l) in keys:
            for (i2, l2) in keys:
                if i2 == i and l2 < l:
                    if polygons_meet(images[(i, l)], disks[(i2, l2)]) is not None:
                        fail("image_steps_down", ((i, l), (i2, l2)))
        tails_ok: Optional[bool] = None
        for F in model.families:
            o = fams[F.index].orbit
            if o.tail_alpha is not None:
                lmin = min(F.neg_arcs)
                inside = all(point_in_polygon(p, o.tail_alpha) >= 0
                             for p in disks[(F.index, lmin)])
                tails_ok = (tails_ok is not False) and inside
                if not inside:
                    fail("tails", (F.index, lmin))
            if o.tail_omega is not None:
                lmax = max(F.pos_arcs)
                inside = all(point_in_polygon(p, o.tail_omega) >= 0
                             for p in disks[(F.index, lmax)])
                tails_ok = (tails_ok is not False) and inside
                if not inside:
                    fail("tails", (F.index, lmax))
        audit["tails"] = tails_ok
        audit["ok"] = all(audit[k] is not False
                          for k in ("separated", "image_steps_down",
                                    "inside_domain", "tails"))
        if audit["ok"]:
            return disks, audit
        witness = audit
        r = r / 2
    raise MinimaxError(
        f"no inflation radius made the security disks work; last failure: "
        f"{ {k: v for k, v in witness['witnesses'].items()} }")
