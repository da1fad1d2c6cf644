"""The linked-orbits fixture map.

MAP-LINK4 carries four finite orbit segments whose boundary limits
interleave: reading the boundary of [-8,8]^2 counterclockwise one meets

    omega1 alpha3 omega2 alpha4 omega3 alpha1 omega4 alpha2,

so consecutive orbits link and opposite ones do not.  Orbit 1 runs along
the chord y = x/2 - 7/2 with thirteen points at integer x in [-6,6]
(every step is the translation (1, 1/2)); orbit i+1 is the quarter-turn
image of orbit i.  Consecutive chords cross exactly once, away from grid
vertices and orbit points; opposite chords are parallel.

The displacement field on the step-1/2 grid interpolates the prescribed
orbit displacements harmonically, with two amendments made offline and
frozen into the table below: a fold-repair pass on the image-triangle
orientations, and, near each chord crossing, a projection of the field
into the cone spanned by the two lane directions.  The cone keeps the
field winding-free around the crossing, so no fixed point is forced onto
the chords there; a half-turn plug, the other way to resolve two
transversal streams, would pin a fixed point right on the families.

The table stores the field over denominator 512 on the quadrant
x > 0, y >= 0 only; the rest of the grid is its exact quarter-turn
orbit.  Building the PLDiskMap re-proves the homeomorphism property;
the orbit, crossing, and linking facts are re-checked in tests.
"""

from __future__ import annotations

from functools import lru_cache

from .fixtures import rect
from .geom import pt
from .plmap import BoundaryMark, Orbit, PLDiskMap, Scenario, orbit_window
from .rational import Q

_M = 16  # grid is (2*_M+1) x (2*_M+1), step 1/2, on [-8,8]^2

# mu numerators over 512 at (x, y) = ((c+1)/2, r/2), c-th entry of row r
_FIELD = """\
-1:72 -5:143 -15:213 -35:282 -70:349 -141:422 -256:512 -113:420 16:350 132:292 205:250 312:280 237:234 151:133 53:52 0:0
-72:73 -76:148 -85:225 -105:300 -137:373 -178:435 -191:446 -116:385 -32:327 47:274 102:229 132:193 131:173 75:93 37:47 0:0
-140:71 -140:153 -146:237 -162:321 -194:407 -256:512 -193:419 -134:355 -73:299 -16:249 27:205 51:163 52:122 39:81 20:40 0:0
-204:65 -198:154 -197:248 -205:342 -221:422 -227:427 -197:373 -155:316 -109:265 -65:219 -29:178 -5:140 7:104 9:69 5:34 0:0
-264:51 -250:150 -240:261 -240:375 -256:512 -237:400 -211:329 -179:273 -143:225 -106:184 -74:148 -48:115 -29:85 -16:56 -7:28 0:0
-322:23 -297:126 -270:266 -257:387 -261:394 -252:331 -233:270 -218:187 -176:179 -144:144 -112:114 -84:88 -59:64 -37:42 -18:21 0:0
-382:-62 -321:-63 -219:188 -256:512 -305:584 145:272 57:248 -123:165 -219:107 -180:99 -148:77 -116:58 -85:42 -56:27 -28:13 0:0
-526:-237 -625:-221 -673:92 -554:199 -217:409 -111:196 261:123 97:74 -66:45 -213:45 -183:36 -147:26 -110:18 -73:11 -37:5 0:0
-501:-192 -512:-256 -256:512 -533:-24 -203:176 -88:-28 374:118 208:120 25:129 -114:86 -220:-7 -179:-8 -136:-7 -91:-5 -45:-3 0:0
-363:75 -357:51 -230:395 -512:-256 -168:-44 -146:-60 -378:110 -295:118 -224:145 -187:36 -238:-34 -213:-44 -162:-34 -108:-23 -54:-11 0:0
-294:262 -256:512 -203:381 -483:-229 -623:-224 -512:-256 -447:-80 -361:-77 -320:6 -312:-69 -305:-100 -252:-82 -191:-61 -127:-40 -63:-19 0:0
-268:328 -247:354 -93:161 -230:62 -373:152 -525:-241 -551:-244 -512:-256 -416:-138 -413:-178 -356:-148 -300:-122 -223:-89 -144:-56 -71:-27 0:0
-256:512 -237:298 -183:219 -273:60 -345:104 -328:-89 -356:-133 -395:-176 -416:-192 -512:-256 -405:-190 -379:-194 -257:-116 -158:-69 -75:-32 0:0
-220:358 -178:187 -193:127 -208:55 -227:-6 -248:-55 -271:-92 -297:-124 -324:-147 -364:-175 -404:-201 -512:-256 -278:-134 -155:-72 -71:-32 0:0
-142:219 -123:119 -130:81 -141:39 -153:1 -167:-31 -182:-58 -199:-79 -217:-96 -238:-112 -253:-122 -268:-132 -188:-91 -114:-54 -53:-25 0:0
-60:71 -61:55 -66:39 -71:20 -77:2 -84:-14 -91:-28 -100:-38 -109:-47 -117:-55 -123:-59 -121:-59 -92:-44 -58:-28 -28:-13 0:0
0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0 0:0
"""


def _rot(p, j):
    x, y = Q(p[0]), Q(p[1])
    for _ in range(j % 4):
        x, y = -y, x
    return (x, y)


@lru_cache(maxsize=1)
def _quadrant_field():
    rows = []
    for line in _FIELD.strip().split("\n"):
        row = []
        for cell in line.split(" "):
            nx, ny = cell.split(":")
            row.append((Q(int(nx), 512), Q(int(ny), 512)))
        rows.append(row)
    return rows

def _mu(p):
    if p == (0, 0):
        return (Q(0), Q(0))
    field = _quadrant_field()
    for j in range(4):
        x, y = _rot(p, (4 - j) % 4)
        if x > 0 and y >= 0:
            base = field[int(2 * y)][int(2 * x) - 1]
            return _rot(base, j)
    raise AssertionError(p)


def link4_orbit_points(index: int):
    """The thirteen prescribed points of orbit `index` (1-based), keyed
    by iteration step in [-6, 6]."""
    return {
        k: _rot((Q(k), Q(k, 2) - Q(7, 2)), index - 1)
        for k in range(-6, 7)
    }


@lru_cache(maxsize=1)
def map_link4() -> PLDiskMap:
    side = 2 * _M + 1
    verts = []
    images = []
    for r in range(side):
        for c in range(side):
            p = (Q(c - _M, 2), Q(r - _M, 2))
            mx, my = _mu(p)
            verts.append(p)
            images.append((p[0] + mx, p[1] + my))
    tris = []
    for r in range(side - 1):
        for c in range(side - 1):
            v00 = r * side + c
            v10 = r * side + c + 1
            v01 = (r + 1) * side + c
            v11 = (r + 1) * side + c + 1
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    marks = []
    for i in range(1, 5):
        marks.append(BoundaryMark(_rot(pt(-8, "-15/2"), i - 1), "alpha", i))
        marks.append(BoundaryMark(_rot(pt(8, "1/2"), i - 1), "omega", i))
    return PLDiskMap(rect(-8, -8, 8, 8), verts, tris, images,
                     marks=marks, name="MAP-LINK4")


def link4_tails(index: int):
    """Tail regions of orbit `index`: closed rectangles around the first
    and last window points, reaching the boundary marks."""
    ta = [_rot(p, index - 1) for p in rect(-8, -8, "-7/2", -5)]
    to = [_rot(p, index - 1) for p in rect(5, "-3/2", 8, "3/2")]
    return ta, to


def link4_orbits(m: PLDiskMap = None):
    if m is None:
        m = map_link4()
    orbits = []
    for i in range(1, 5):
        ta, to = link4_tails(i)
        seed = _rot(pt(0, "-7/2"), i - 1)
        orbits.append(orbit_window(m, i, seed, -6, 6, ta, to))
    return orbits


def scenario_link4() -> Scenario:
    m = map_link4()
    return Scenario("MAP-LINK4", m, link4_orbits(m), {})
