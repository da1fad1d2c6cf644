"""Built-in fixture maps.

Three of the four standard scenarios live here:

  * MAP-CONTRACT: PL realization of z -> z/2 on [-1,1]^2, exact on the
    central square of radius 3/4, glued to the boundary by a one-layer
    collar that rotates the boundary one station (so only 0 is fixed).
  * MAP-NEGHALF: PL realization of z -> -z/2 on [-4,4]^2, exact on
    [-2,2]^2, with an eight-layer collar unwinding the half-turn.
  * MAP-TRANSLATE: displacement (1/4, 0) exactly on [-2,2]^2, fading
    linearly to 0 on the boundary of [-4,4]^2.

The fourth (MAP-LINK4) is synthesized in fixtures_link4.

All three are built from "square rings": the boundary of [-r,r]^2
carrying 16 stations (corners, edge midpoints, quarter points), listed
counterclockwise from (r, 0).  A fan from the origin over a ring is
exactly linear, and a collar between consecutive rings can scale and
shift stations; the PLDiskMap constructor proves the result is a
homeomorphism, so any fold in a candidate collar is caught at build
time.
"""

from __future__ import annotations

from functools import lru_cache

from .geom import pt
from .plmap import Orbit, PLDiskMap, Scenario, orbit_window, poly_to_json, region_to_json
from .rational import Q

_UNIT_STATIONS = [
    (1, 0), (1, Q(1, 2)), (1, 1), (Q(1, 2), 1),
    (0, 1), (-Q(1, 2), 1), (-1, 1), (-1, Q(1, 2)),
    (-1, 0), (-1, -Q(1, 2)), (-1, -1), (-Q(1, 2), -1),
    (0, -1), (Q(1, 2), -1), (1, -1), (1, -Q(1, 2)),
]


def ring_stations(r):
    r = Q(r)
    return [(Q(x) * r, Q(y) * r) for x, y in _UNIT_STATIONS]


def rect(x0, y0, x1, y1):
    return [pt(x0, y0), pt(x1, y0), pt(x1, y1), pt(x0, y1)]


def _fan_collar_map(rings, images, name):
    """Fan from the origin over rings[0], collar layers between
    consecutive rings.  images[k] = (radius, station shift) for ring k;
    the origin is fixed."""
    verts = [(Q(0), Q(0))]
    index = {}
    for r in rings:
        for s in ring_stations(r):
            index[s] = len(verts)
            verts.append(s)
    imgs = [(Q(0), Q(0))]
    for (rho, shift), r in zip(images, rings):
        out = ring_stations(rho)
        for i in range(16):
            imgs.append(out[(i + shift) % 16])

    def vid(ring_k, i):
        return 1 + 16 * ring_k + (i % 16)

    def img_orient_ok(t):
        from .geom import orient

        return orient(imgs[t[0]], imgs[t[1]], imgs[t[2]]) > 0

    tris = []
    for i in range(16):
        tris.append((0, vid(0, i), vid(0, i + 1)))
    for k in range(len(rings) - 1):
        for i in range(16):
            o0, o1 = vid(k + 1, i), vid(k + 1, i + 1)
            n0, n1 = vid(k, i), vid(k, i + 1)
            # the twist folds one diagonal split near corners; pick the
            # one whose image stays positively oriented
            split = [(o0, o1, n1), (o0, n1, n0)]
            if not all(img_orient_ok(t) for t in split):
                split = [(o0, o1, n0), (o1, n1, n0)]
            tris.extend(split)
    r_out = rings[-1]
    domain = rect(-r_out, -r_out, r_out, r_out)
    return PLDiskMap(domain, verts, tris, imgs, name=name)


@lru_cache(maxsize=None)
def map_contract() -> PLDiskMap:
    return _fan_collar_map(
        rings=[Q(3, 4), Q(1)],
        images=[(Q(3, 8), 0), (Q(1), 1)],
        name="MAP-CONTRACT",
    )


@lru_cache(maxsize=None)
def map_neghalf() -> PLDiskMap:
    rings = [Q(2) + Q(k, 4) for k in range(9)]
    images = [(Q(1) + Q(3 * k, 8), max(8 - k, 1)) for k in range(9)]
    return _fan_collar_map(rings, images, name="MAP-NEGHALF")


@lru_cache(maxsize=None)
def map_rotate() -> PLDiskMap:
    """Half-turn of [-2,2]^2 about the origin.  Shifting the 16 stations
    by 8 is exactly v -> -v, so every fan triangle maps by -identity and
    the centre is the only fixed point."""
    return _fan_collar_map(rings=[Q(2)], images=[(Q(2), 8)], name="MAP-ROTATE")


@lru_cache(maxsize=None)
def map_identity() -> PLDiskMap:
    """Identity on [-1,1]^2; every point is fixed."""
    return _fan_collar_map(rings=[Q(1)], images=[(Q(1), 0)], name="MAP-IDENTITY")


@lru_cache(maxsize=None)
def map_translate() -> PLDiskMap:
    """Grid map on [-4,4]^2, step 1/2; vertex displacement
    (mu(v)/4, 0) with mu = 1 on [-2,2]^2 shrinking linearly to 0 on the
    boundary, so the map is exactly z + (1/4, 0) on [-2,2]^2."""
    step = Q(1, 2)
    lo, hi = Q(-4), Q(4)
    n = int((hi - lo) / step)  # 16 cells per side
    verts = []
    vid = {}
    for j in range(n + 1):
        for i in range(n + 1):
            p = (lo + i * step, lo + j * step)
            vid[(i, j)] = len(verts)
            verts.append(p)
    imgs = []
    for p in verts:
        linf = max(abs(p[0]), abs(p[1]))
        mu = min(Q(1), (Q(4) - linf) / 2)
        imgs.append((p[0] + mu / 4, p[1]))
    tris = []
    for j in range(n):
        for i in range(n):
            v00, v10 = vid[(i, j)], vid[(i + 1, j)]
            v11, v01 = vid[(i + 1, j + 1)], vid[(i, j + 1)]
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    return PLDiskMap(rect(-4, -4, 4, 4), verts, tris, imgs, name="MAP-TRANSLATE")


# ------------------------------------------------------------- scenarios


def scenario_contract() -> Scenario:
    extras = {
        "curves": {"around_origin": poly_to_json(rect("-1/4", "-1/4", "1/4", "1/4"))},
    }
    return Scenario("MAP-CONTRACT", map_contract(), [], extras)


def scenario_translate() -> Scenario:
    extras = {
        "curves": {"in_translation_zone": poly_to_json(rect(-1, -1, 1, 1))},
        "regions": {
            "unit_square": region_to_json((rect("-1/2", "-1/2", "1/2", "1/2"), [])),
            "translation_zone": region_to_json((rect(-2, -2, 2, 2), [])),
        },
    }
    return Scenario("MAP-TRANSLATE", map_translate(), [], extras)


def scenario_neghalf() -> Scenario:
    m = map_neghalf()
    orbit = orbit_window(m, 1, pt("1/2", 0), -2, 4)
    extras = {
        "curves": {"around_origin": poly_to_json(rect("-1/4", "-1/4", "1/4", "1/4"))},
        "regions": {
            "annulus": region_to_json(
                (rect(-2, -2, 2, 2), [rect("-1/2", "-1/2", "1/2", "1/2")])
            ),
        },
    }
    return Scenario("MAP-NEGHALF", m, [orbit], extras)
