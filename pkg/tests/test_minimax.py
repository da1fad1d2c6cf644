"""Truncation configurations, the maximal one, and the singularity trees.

Expected values were frozen from an independent enumeration: crossings
recomputed with plain Fraction segment intersections, the clearance
radius by direct prefix/suffix disjointness scans, and the maximal
configuration by brute force over the full candidate grid (17^4 tuples
for the pinwheel).  The brute-force search is repeated here, in-process,
so the lexicographic DFS is checked against something that cannot share
its pruning bugs.
"""

import itertools
from functools import lru_cache

import pytest

from planedyn.fixtures import rect
from planedyn.geom import segments_meet, winding_number
from planedyn.minimax import (
    Configuration,
    FullOrderNotFound,
    MinimaxError,
    audit_truncations,
    build_trees,
    candidate_parameters,
    clamp_configuration,
    compute_K,
    crossing_table,
    initial_configuration,
    maximal_configuration,
    sigma,
)
from planedyn.pinwheel import PINWHEEL_DOMAIN, pinwheel_families, quarter_turn
from planedyn.plmap import Orbit
from planedyn.rational import Q
from planedyn.transarc import ArcFamily


@lru_cache(maxsize=None)
def pinwheel():
    fams, domain = pinwheel_families()
    return fams, domain


@lru_cache(maxsize=None)
def pinwheel_crossings():
    fams, _ = pinwheel()
    return crossing_table(fams)


T0 = (Q(-9, 8), Q(1, 4), Q(-9, 8), Q(1, 4))

# Per-pair crossing parameters, as (param on i, param on j), i < j.
# Adjacent pairs are rotated copies of each other; the two diagonal
# pairs meet twice, at the half-turn-symmetric pair of points.
ADJACENT_PARAMS = {(Q(-9, 8), Q(-3, 5)), (Q(19, 20), Q(-19, 16)),
                   (Q(11, 6), Q(-7, 4))}
CLOSING_PARAMS = {(ub, ua) for ua, ub in ADJACENT_PARAMS}
DIAGONAL_PARAMS = {(Q(1, 4), Q(-37, 32)), (Q(-37, 32), Q(1, 4))}
PAIR_PARAMS = {
    (0, 1): ADJACENT_PARAMS,
    (1, 2): ADJACENT_PARAMS,
    (2, 3): ADJACENT_PARAMS,
    (0, 3): CLOSING_PARAMS,
    (0, 2): DIAGONAL_PARAMS,
    (1, 3): DIAGONAL_PARAMS,
}


def straight_orbit(idx, points, **kw):
    ks = sorted(points)
    return Orbit(index=idx, kmin=ks[0], kmax=ks[-1],
                 points={k: points[k] for k in ks}, **kw)


def straight_family(idx, points, **kw):
    orb = straight_orbit(idx, points, **kw)
    pieces = {k: [orb.points[k], orb.points[k + 1]]
              for k in range(orb.kmin, orb.kmax)}
    return ArcFamily(orbit=orb, pieces=pieces)


def chain_fixture():
    """Three families where 2 crosses 1 but never crosses 0.

    In a 3-cycle the only admissible partner of family i is i+1, so
    family 2 can never become active and no full-order configuration
    exists.  The same gap makes the greedy start at 0 impossible.
    """
    a = straight_family(0, {k: (Q(k), Q(0)) for k in range(-2, 3)})
    b = straight_family(1, {k: (Q(1, 2), Q(k) + Q(1, 4)) for k in range(-2, 3)})
    c = straight_family(2, {k: (Q(k), Q(1)) for k in range(-2, 3)})
    return [a, b, c]


# ---------------------------------------------------------------- crossings


def test_pinwheel_crossing_parameters():
    table = pinwheel_crossings()
    assert len(table) == 16
    for (i, j), want in PAIR_PARAMS.items():
        got = {c.pair(i, j) for c in table if {c.a, c.b} == {i, j}}
        assert got == want, (i, j)


def test_pinwheel_crossings_are_simple():
    table = pinwheel_crossings()
    points = [c.point for c in table]
    assert len(set(points)) == 16
    fams, _ = pinwheel()
    for c in table:
        assert fams[c.a].point_at(c.ta) == c.point
        assert fams[c.b].point_at(c.tb) == c.point


def test_pinwheel_symmetry():
    # family i is the quarter turn of family i-1, so its crossing data is too
    table = pinwheel_crossings()
    by_pair = {}
    for c in table:
        by_pair.setdefault((c.a, c.b), set()).add((c.ta, c.tb, c.point))
    for i, j in [(0, 1), (1, 2)]:
        rotated = {(ta, tb, quarter_turn(p)) for ta, tb, p in by_pair[(i, j)]}
        assert rotated == by_pair[(i + 1, j + 1)]


def test_crossing_table_rejects_overlap():
    a = straight_family(0, {k: (Q(k), Q(0)) for k in range(-1, 2)})
    b = straight_family(1, {k: (Q(k) + Q(1, 2), Q(0)) for k in range(-1, 2)})
    with pytest.raises(MinimaxError):
        crossing_table([a, b])


# ---------------------------------------------------------------- clearance


def test_pinwheel_clearance():
    fams, _ = pinwheel()
    assert compute_K(fams) == 2


def test_clearance_disjoint_families():
    a = straight_family(0, {k: (Q(k), Q(0)) for k in range(-3, 4)})
    b = straight_family(1, {k: (Q(k), Q(10)) for k in range(-3, 4)})
    assert compute_K([a, b]) == 1


def test_clearance_crossing_at_end_of_radius_two():
    # b runs through a's orbit point at parameter -2, so the closed
    # prefix at radius 2 still touches it and the scan must go to 3
    a = straight_family(0, {k: (Q(k), Q(0)) for k in range(-3, 4)})
    b = straight_family(1, {k: (Q(-2), Q(k) + Q(1, 2)) for k in range(-3, 4)})
    assert compute_K([a, b]) == 3


def test_clearance_needs_room():
    a = straight_family(0, {0: (Q(0), Q(0)), 1: (Q(1), Q(0))})
    b = straight_family(1, {0: (Q(0), Q(1)), 1: (Q(1), Q(1))})
    with pytest.raises(MinimaxError):
        compute_K([a, b])


def test_candidate_grid():
    fams, _ = pinwheel()
    cands = candidate_parameters(fams)
    for i, vals in enumerate(cands):
        assert len(vals) == 17
        assert vals[0] == -2 and vals[-1] == 2
        assert vals == sorted(set(vals))
        params = {c.param_on(i) for c in pinwheel_crossings()
                  if i in (c.a, c.b)}
        assert params <= set(vals)


# ------------------------------------------------------------------- sigma


def test_sigma_at_window_minimum():
    fams, _ = pinwheel()
    rep = sigma(fams, [Q(-7)] * 4)
    assert rep.order == 0
    assert rep.members == ()
    assert rep.prefixes_disjoint        # degenerate endpoints never meet


def test_sigma_at_window_maximum():
    fams, _ = pinwheel()
    rep = sigma(fams, [Q(4)] * 4)
    assert rep.order == 4
    assert not rep.prefixes_disjoint
    i, j, p = rep.overlap
    assert (i, j) == (0, 1) and p == (Q(1, 2), Q(-1, 2))


def test_sigma_at_maximal_configuration():
    fams, _ = pinwheel()
    rep = sigma(fams, T0)
    assert rep.members == (0, 1, 2, 3)
    assert rep.order == 4
    assert rep.prefixes_disjoint
    assert rep.witnesses == {
        0: (1, (Q(1, 2), Q(-1, 2))),
        1: (3, (Q(1, 2), Q(5, 8))),
        2: (3, (Q(-1, 2), Q(1, 2))),
        3: (1, (Q(-1, 2), Q(-5, 8))),
    }


def test_sigma_rejects_small_collections():
    fams, _ = pinwheel()
    with pytest.raises(MinimaxError):
        sigma(fams[:2], [Q(0)] * 2)


def test_clamp_preserves_active_set():
    # moving every parameter into [-K, K] never changes which backward
    # pieces meet: the clipped-away lanes are exactly the clear ones
    fams, _ = pinwheel()
    cands = candidate_parameters(fams)
    wide = [sorted(set(vals) | {Q(-7), Q(-13, 5), Q(47, 16), Q(4)})
            for vals in cands]
    import random
    rng = random.Random(20260815)
    for _ in range(60):
        t = [rng.choice(vals) for vals in wide]
        before = sigma(fams, t)
        clamped = clamp_configuration(Configuration(tuple(t)), 2)
        after = sigma(fams, clamped)
        assert all(-2 <= v <= 2 for v in clamped.values)
        assert after.members == before.members
        assert after.prefixes_disjoint == before.prefixes_disjoint


# ------------------------------------------------------------------ greedy


GREEDY = {
    0: (Q(-7, 4), Q(-37, 32), Q(-9, 8), Q(11, 6)),
    1: (Q(11, 6), Q(-7, 4), Q(-37, 32), Q(-9, 8)),
    2: (Q(-9, 8), Q(11, 6), Q(-7, 4), Q(-37, 32)),
    3: (Q(-37, 32), Q(-9, 8), Q(11, 6), Q(-7, 4)),
}


@pytest.mark.parametrize("start", [0, 1, 2, 3])
def test_initial_configuration(start):
    fams, _ = pinwheel()
    conf = initial_configuration(fams, start=start)
    assert conf.values == GREEDY[start]
    rep = sigma(fams, conf)
    assert rep.order >= 3
    assert rep.prefixes_disjoint
    assert set(rep.members) >= {(start - r) % 4 for r in range(1, 4)}


def test_initial_configuration_needs_preceding_crossing():
    with pytest.raises(MinimaxError):
        initial_configuration(chain_fixture(), start=0)


# ----------------------------------------------------------------- maximal


def brute_force_maximal(fams, significance):
    """Enumerate the full candidate grid and keep admissible tuples.

    Deliberately reimplements the active-set test from the crossing
    table alone, without the search's pruning or its sigma() helper.
    """
    n = len(fams)
    table = pinwheel_crossings() if fams is pinwheel()[0] else crossing_table(fams)
    cands = candidate_parameters(fams)

    def admissible(t):
        active = set()
        for c in table:
            ca, cb = (c.a, c.b), (c.b, c.a)
            for i, j in (ca, cb):
                ui, uj = c.param_on(i), c.param_on(j)
                if ui <= t[i] and uj <= t[j]:
                    if ui < t[i] and uj < t[j] and c.point != fams[i].point_at(t[i]) \
                            and c.point != fams[j].point_at(t[j]):
                        return None     # interior double point: not admissible
                    if j not in ((i - 1) % n, i):
                        active.add(i)
        return active

    best, count = None, 0
    for t in itertools.product(*cands):
        active = admissible(t)
        if active is None or len(active) != n:
            continue
        count += 1
        key = tuple(t[i] for i in significance)
        if best is None or key > best[0]:
            best = (key, t)
    return best[1] if best else None, count


def test_maximal_configuration_matches_brute_force():
    fams, _ = pinwheel()
    conf = maximal_configuration(fams)
    brute, count = brute_force_maximal(fams, significance=(3, 2, 1, 0))
    assert conf.values == brute == T0
    assert count == 19


def test_maximal_configuration_reversed_order():
    fams, _ = pinwheel()
    conf = maximal_configuration(fams, index_order=[3, 2, 1, 0])
    brute, _ = brute_force_maximal(fams, significance=(0, 1, 2, 3))
    assert conf.values == brute


def test_maximal_configuration_is_canonical():
    fams, _ = pinwheel()
    again = maximal_configuration(fams)
    assert again.values == T0
    # the maximum is already inside the grid, so re-clamping is a no-op
    assert clamp_configuration(again, 2).values == T0
    rep = sigma(fams, again)
    assert rep.order == 4 and rep.prefixes_disjoint


def test_maximal_configuration_unreachable():
    with pytest.raises(FullOrderNotFound):
        maximal_configuration(chain_fixture())


# ------------------------------------------------------------------ audits


def test_truncation_audit_at_maximum():
    fams, domain = pinwheel()
    report = audit_truncations(fams, T0, domain=domain)
    assert report["ok"] is True
    for key in ("plus_clear", "plus_clear_own", "ends_only", "deep_clear",
                "one_face", "far_meeting", "separations"):
        assert report[key] is True, key


def test_truncation_audit_flags_greedy_configuration():
    # the greedy configuration leaves family 0 without a far partner
    fams, domain = pinwheel()
    report = audit_truncations(fams, GREEDY[0], domain=domain)
    assert report["far_meeting"] is False
    assert report["ok"] is False


def test_truncation_audit_needs_domain_for_separations():
    # the maximal pinwheel cut does have far meetings, so the winding
    # certificate is not vacuous and the domain polygon is mandatory
    fams, _ = pinwheel()
    with pytest.raises(MinimaxError, match="domain"):
        audit_truncations(fams, T0)


# ------------------------------------------------------------------- trees


def test_tree_levels_and_depth():
    fams, domain = pinwheel()
    model = build_trees(fams, T0, domain=domain)
    assert model.L == 5
    assert model.K == 2
    for i in (0, 2):
        want = {-l: Q(-1 - l) for l in range(1, 7)}
        want[0] = Q(-9, 8)
        assert model.families[i].neg_params == want
    for i in (1, 3):
        assert model.families[i].neg_params == {
            0: Q(1, 4), -1: Q(0), -2: Q(-3, 5), -3: Q(-1), -4: Q(-37, 32),
            -5: Q(-2), -6: Q(-3), -7: Q(-4), -8: Q(-5),
            -9: Q(-6), -10: Q(-7)}
    for fm in model.families:
        assert fm.star_level == -1
        assert fm.pos_params == {1: Q(5, 2), 2: Q(3), 3: Q(4)}


def test_tree_arcs_are_untrimmed_chains():
    # no pinwheel lane doubles back onto an earlier one, so every
    # attachment arc spans its full level gap and attaches at its end
    fams, domain = pinwheel()
    model = build_trees(fams, T0, domain=domain)
    for i, fm in enumerate(model.families):
        for l, arc in fm.neg_arcs.items():
            assert (arc.lo, arc.hi) == (fm.neg_params[l], fm.neg_params[l + 1])
            if l == -1:
                assert arc.attach is None
            else:
                assert arc.attach == fams[i].point_at(arc.hi)
        assert sorted(fm.pos_arcs) == [1, 2]
        for l, arc in fm.pos_arcs.items():
            assert (arc.lo, arc.hi) == (fm.pos_params[l], fm.pos_params[l + 1])
            if l == 1:
                assert arc.attach is None
            else:
                assert arc.attach == fams[i].point_at(arc.lo)


def test_tree_audit_report():
    fams, domain = pinwheel()
    model = build_trees(fams, T0, domain=domain)
    assert model.audits["trees"]["ok"] is True
    for key in ("plus_clear", "ends_only", "deep_clear", "one_face",
                "far_meeting", "acyclic", "marks_on_tree", "separations"):
        assert model.audits["trees"][key] is True, key


def test_trees_reject_partial_order():
    fams, domain = pinwheel()
    with pytest.raises(MinimaxError):
        build_trees(fams, GREEDY[0], domain=domain)


def test_trees_need_boundary_marks():
    fams, domain = pinwheel_families()
    fams[0].orbit.alpha = None
    with pytest.raises(MinimaxError):
        build_trees(fams, T0, domain=domain)


def test_tree_summary_is_json_ready():
    import json
    fams, domain = pinwheel()
    model = build_trees(fams, T0, domain=domain)
    blob = json.dumps(model.summary(), sort_keys=True)
    assert json.loads(blob)["L"] == 5
    assert blob == json.dumps(build_trees(fams, T0, domain=domain).summary(),
                              sort_keys=True)


# ---------------------------------------------------- trimming primitives


def zigzag_family():
    return straight_family(0, {0: (Q(0), Q(0)), 1: (Q(4), Q(0)),
                               2: (Q(0), Q(2))},
                           )


def test_first_and_last_meeting():
    from planedyn.minimax import _first_meeting, _last_meeting
    f = zigzag_family()
    f.pieces[1] = [(Q(4), Q(0)), (Q(4), Q(2)), (Q(0), Q(2))]
    wall = [((Q(2), Q(-1)), (Q(2), Q(3)))]
    assert _first_meeting(f, Q(0), Q(2), wall) == (Q(1, 2), (Q(2), Q(0)))
    assert _last_meeting(f, Q(1), Q(2), wall) == (Q(7, 4), (Q(2), Q(2)))

    teeth = [((Q(1), Q(-1)), (Q(1), Q(1))), ((Q(3), Q(-1)), (Q(3), Q(1)))]
    assert _first_meeting(f, Q(0), Q(1), teeth) == (Q(1, 4), (Q(1), Q(0)))
    assert _last_meeting(f, Q(0), Q(1), teeth) == (Q(3, 4), (Q(3), Q(0)))

    with pytest.raises(MinimaxError):
        _first_meeting(f, Q(0), Q(1), [((Q(10), Q(10)), (Q(11), Q(10)))])
    with pytest.raises(MinimaxError):
        _first_meeting(f, Q(0), Q(1), [((Q(1), Q(0)), (Q(3), Q(0)))])


def test_tree_graph_certificates():
    from planedyn.minimax import _TreeGraph
    y = _TreeGraph([[(Q(0), Q(0)), (Q(2), Q(0))],
                    [(Q(1), Q(0)), (Q(1), Q(2))]])
    assert y.is_tree()
    cycle = _TreeGraph([[(Q(0), Q(0)), (Q(2), Q(0)), (Q(2), Q(2))],
                        [(Q(0), Q(0)), (Q(0), Q(2)), (Q(2), Q(2))]])
    assert not cycle.is_tree()
    route = y.route((Q(0), Q(0)), (Q(1), Q(2)))
    assert route[0] == (Q(0), Q(0)) and route[-1] == (Q(1), Q(2))
    assert (Q(1), Q(0)) in route
