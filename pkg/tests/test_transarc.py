"""Translation arcs, orbit arc families, and generic position.

Frozen paths and contact sets were derived by running the constructions
and re-checking every contact against an independent image-polyline
intersection; audits are re-verified with recomputed oracles rather
than trusted.
"""

from functools import lru_cache

import pytest

from planedyn.bricks import RecurrenceCertificate
from planedyn.fixtures import (
    map_contract,
    map_neghalf,
    map_rotate,
    map_translate,
    rect,
)
from planedyn.geom import point_in_polygon, point_in_region, polyline_intersections
from planedyn.plmap import Orbit
from planedyn.rational import Q
from planedyn.transarc import (
    ArcFamily,
    TransArcError,
    audit_family_forward,
    audit_generic,
    build_orbit_arcs,
    build_security_corridors,
    check_corridors,
    check_translation_arc,
    find_translation_arc,
    forward_violations,
    make_generic,
    recurrence_in_region,
    validate_family,
)

NEGHALF_HOLED = (rect(Q(-1, 2), Q(-1, 2), Q(1, 2), Q(1, 2)),
                 [rect(Q(-1, 8), Q(-1, 8), Q(1, 8), Q(1, 8))])
ROTATE_ANNULUS = (rect(-2, -2, 2, 2),
                  [rect(Q(-1, 2), Q(-1, 2), Q(1, 2), Q(1, 2))])


def translate_orbit(idx=0, y=Q(0), kmin=-2, kmax=2, **kw):
    return Orbit(index=idx, kmin=kmin, kmax=kmax,
                 points={k: (Q(k, 4), y) for k in range(kmin, kmax + 1)}, **kw)


@lru_cache(maxsize=None)
def translate_family():
    return build_orbit_arcs(map_translate(), translate_orbit())


def recheck_contacts(m, arc):
    kind, val = polyline_intersections(m.map_path(list(arc.path)), list(arc.path))
    assert kind == "points"
    assert tuple(val) == arc.contacts


# ------------------------------------------------------ single arcs


def test_translate_straight_arc():
    arc = find_translation_arc(map_translate(), (Q(0), Q(0)),
                               rect(Q(-1, 2), Q(-1, 2), Q(1, 2), Q(1, 2)))
    assert list(arc.path) == [(Q(0), Q(0)), (Q(1, 4), Q(0))]
    assert arc.contacts == ((Q(1, 4), Q(0)),)
    assert not arc.periodic
    recheck_contacts(map_translate(), arc)


def test_contract_straight_arc():
    arc = find_translation_arc(map_contract(), (Q(1, 2), Q(0)),
                               rect(Q(0), Q(-1, 2), Q(1), Q(1, 2)))
    assert list(arc.path) == [(Q(1, 2), Q(0)), (Q(1, 4), Q(0))]
    assert arc.contacts == ((Q(1, 4), Q(0)),)
    recheck_contacts(map_contract(), arc)


def test_neghalf_bent_arc():
    # the straight segment runs through the fixed point; the search must bend
    m = map_neghalf()
    assert check_translation_arc(m, [(Q(1, 2), Q(0)), (Q(-1, 4), Q(0))]) is None
    arc = find_translation_arc(m, (Q(1, 2), Q(0)), NEGHALF_HOLED)
    assert arc.path[0] == (Q(1, 2), Q(0))
    assert arc.path[-1] == (Q(-1, 4), Q(0))
    assert len(arc.path) > 2
    assert arc.contacts == ((Q(-1, 4), Q(0)),)
    assert not arc.periodic
    recheck_contacts(m, arc)
    # deterministic
    again = find_translation_arc(m, (Q(1, 2), Q(0)), NEGHALF_HOLED)
    assert again.path == arc.path


def test_rotate_periodic_arc():
    # half turn: f^2 = id on the core, so both endpoints are contacts
    m = map_rotate()
    arc = find_translation_arc(m, (Q(1), Q(0)), ROTATE_ANNULUS)
    assert arc.periodic
    assert arc.contacts == ((Q(-1), Q(0)), (Q(1), Q(0)))
    recheck_contacts(m, arc)


def test_fixed_point_rejected():
    with pytest.raises(TransArcError, match="fixed"):
        find_translation_arc(map_contract(), (Q(0), Q(0)),
                             rect(Q(-1, 2), Q(-1, 2), Q(1, 2), Q(1, 2)))


def test_depth_exhausted_on_tight_region():
    # the strip contains the fixed point, so no subdivision can help
    strip = rect(Q(-1, 2), Q(-1, 16), Q(1, 2), Q(1, 16))
    with pytest.raises(TransArcError, match="no free translation arc"):
        find_translation_arc(map_neghalf(), (Q(1, 2), Q(0)), strip, max_depth=3)


def test_non_simple_candidate_rejected():
    m = map_translate()
    path = [(Q(0), Q(0)), (Q(1, 8), Q(0)), (Q(1, 16), Q(0)), (Q(1, 4), Q(0))]
    assert check_translation_arc(m, path) is None


# ------------------------------------------------------- corridors


def test_translate_corridors():
    m = map_translate()
    cor = build_security_corridors(m, translate_orbit())
    assert sorted(cor) == [-2, -1, 0, 1]
    assert cor[0] == [(Q(-1, 16), Q(-1, 16)), (Q(5, 16), Q(-1, 16)),
                      (Q(5, 16), Q(1, 16)), (Q(-1, 16), Q(1, 16))]
    check_corridors(m, translate_orbit(), cor)  # independent exact recheck


def test_fat_corridors_rejected():
    m = map_translate()
    orb = translate_orbit()

    def fat(k):
        x0, x1 = Q(k, 4) - Q(1, 4), Q(k + 1, 4) + Q(1, 4)
        return [(x0, Q(-1, 4)), (x1, Q(-1, 4)), (x1, Q(1, 4)), (x0, Q(1, 4))]

    with pytest.raises(TransArcError, match="image of corridor"):
        check_corridors(m, orb, {k: fat(k) for k in range(-2, 2)})


def test_corridor_must_contain_segment():
    m = map_translate()
    off = [(Q(2), Q(2)), (Q(3), Q(2)), (Q(3), Q(3)), (Q(2), Q(3))]
    with pytest.raises(TransArcError, match="does not contain"):
        check_corridors(m, translate_orbit(), {k: off for k in range(-2, 2)})


# ------------------------------------------------------ arc families


def test_translate_family_pieces():
    fam = translate_family()
    assert fam.piece_range() == [-2, -1, 0, 1]
    for k in fam.piece_range():
        assert fam.pieces[k] == [(Q(k, 4), Q(0)), (Q(k + 1, 4), Q(0))]
    assert audit_family_forward(map_translate(), fam)
    rep = audit_generic([fam])
    assert rep["ok"]
    validate_family(map_translate(), fam)


def test_family_parameterization():
    fam = translate_family()
    assert fam.tmin == Q(-2) and fam.tmax == Q(2)
    assert fam.point_at(Q(1, 2)) == (Q(1, 8), Q(0))
    assert fam.point_at(Q(-2)) == (Q(-1, 2), Q(0))
    assert fam.point_at(Q(2)) == (Q(1, 2), Q(0))
    assert fam.prefix_path(Q(1, 2)) == [(Q(-1, 2), Q(0)), (Q(-1, 4), Q(0)),
                                        (Q(0), Q(0)), (Q(1, 8), Q(0))]
    assert fam.suffix_path(Q(3, 2)) == [(Q(3, 8), Q(0)), (Q(1, 2), Q(0))]
    assert fam.prefix_path(Q(-2)) == [(Q(-1, 2), Q(0))]
    with pytest.raises(TransArcError, match="outside"):
        fam.point_at(Q(3))


def test_orbit_preconditions():
    m = map_translate()
    bad = Orbit(index=0, kmin=0, kmax=1,
                points={0: (Q(0), Q(0)), 1: (Q(1), Q(0))})
    with pytest.raises(TransArcError, match="image-consecutive"):
        build_orbit_arcs(m, bad)
    fixed = Orbit(index=0, kmin=0, kmax=1,
                  points={0: (Q(0), Q(0)), 1: (Q(0), Q(0))})
    with pytest.raises(TransArcError, match="fixed"):
        build_orbit_arcs(map_contract(), fixed)


def test_tail_containment_enforced():
    m = map_translate()
    orb = translate_orbit(tail_alpha=rect(Q(-5, 8), Q(-1, 8), Q(-1, 8), Q(1, 8)),
                          tail_omega=rect(Q(1, 8), Q(-1, 8), Q(5, 8), Q(1, 8)))
    fam = build_orbit_arcs(m, orb)
    validate_family(m, fam)
    bad = translate_orbit(tail_alpha=rect(Q(2), Q(2), Q(3), Q(3)))
    with pytest.raises(TransArcError, match="backward tail"):
        build_orbit_arcs(m, bad)


# -------------------------------------------------- recurrence exits


def test_periodic_orbit_returns_certificate():
    m = map_rotate()
    per = Orbit(index=0, kmin=0, kmax=2,
                points={0: (Q(1), Q(0)), 1: (Q(-1), Q(0)), 2: (Q(1), Q(0))})
    cert = build_orbit_arcs(m, per)
    assert isinstance(cert, RecurrenceCertificate)
    assert cert.iterates == [2]
    assert cert.witnesses == [(Q(1), Q(0))]
    disk = cert.disks[0]
    assert point_in_region((Q(1), Q(0)), disk) >= 0
    assert m.is_free(disk[0])
    assert m.iterate((Q(1), Q(0)), 2) == (Q(1), Q(0))


def test_recurrence_in_region_neghalf():
    m = map_neghalf()
    ann = (rect(-2, -2, 2, 2), [rect(Q(-1, 2), Q(-1, 2), Q(1, 2), Q(1, 2))])
    cert = recurrence_in_region(m, ann)
    assert cert is not None
    inv = m.inverse()
    n = len(cert.disks)
    for j, w in enumerate(cert.witnesses):
        assert cert.iterates[j] == 1
        assert point_in_region(w, cert.disks[(j + 1) % n]) >= 0
        assert point_in_region(inv.evaluate(w), cert.disks[j]) >= 0


def test_blocked_family_falls_back_to_certificate():
    # the first orbit segment passes through the fixed point, so no
    # corridor can exist; the region route must produce recurrence
    m = map_neghalf()
    orb = Orbit(index=0, kmin=0, kmax=2,
                points={0: (Q(1, 2), Q(0)), 1: (Q(-1, 4), Q(0)), 2: (Q(1, 8), Q(0))})
    ann = (rect(-2, -2, 2, 2), [rect(Q(-1, 2), Q(-1, 2), Q(1, 2), Q(1, 2))])
    out = build_orbit_arcs(m, orb, recurrence_region=ann)
    assert isinstance(out, RecurrenceCertificate)
    with pytest.raises(TransArcError):
        build_orbit_arcs(m, orb)  # without the region the failure surfaces


# ------------------------------------------------------- genericity


def tall_corridors(kmin, kmax):
    out = {}
    for k in range(kmin, kmax):
        x0, x1 = Q(k, 4) - Q(1, 16), Q(k + 1, 4) + Q(1, 16)
        out[k] = [(x0, Q(-3, 8)), (x1, Q(-3, 8)), (x1, Q(3, 8)), (x0, Q(3, 8))]
    return out


def test_make_generic_idempotent():
    fam = translate_family()
    out = make_generic(map_translate(), [fam])
    assert out[0] is fam


def test_make_generic_separates_overlapping_families():
    m = map_translate()
    f1 = build_orbit_arcs(m, translate_orbit(0, Q(0)))
    orb2 = Orbit(index=1, kmin=-2, kmax=2,
                 points={k: (Q(1, 8) + Q(k, 4), Q(0)) for k in range(-2, 3)})
    f2 = build_orbit_arcs(m, orb2)
    before = audit_generic([f1, f2])
    assert not before["ok"]
    assert not before["pair_finite"] and not before["off_other_orbits"]
    gen = make_generic(m, [f1, f2], seed=7)
    after = audit_generic(gen)
    assert after["ok"]
    for fam in gen:
        validate_family(m, fam)
    # deterministic for a fixed seed
    gen2 = make_generic(m, [f1, f2], seed=7)
    assert [f.pieces for f in gen2] == [f.pieces for f in gen]


def test_make_generic_removes_triple_point():
    m = map_translate()
    cor = tall_corridors(-1, 2)

    def orb(idx, y):
        return Orbit(index=idx, kmin=-1, kmax=2,
                     points={k: (Q(k, 4), y) for k in range(-1, 3)})

    A = build_orbit_arcs(m, orb(0, Q(0)), corridors=cor)
    B = build_orbit_arcs(m, orb(1, Q(1, 8)), corridors=cor)
    C = build_orbit_arcs(m, orb(2, Q(1, 4)), corridors=cor)
    A.pieces[0] = [(Q(0), Q(0)), (Q(1, 8), Q(1, 8)), (Q(1, 4), Q(0))]
    C.pieces[0] = [(Q(0), Q(1, 4)), (Q(1, 8), Q(1, 8)), (Q(1, 4), Q(1, 4))]
    before = audit_generic([A, B, C])
    assert not before["no_triple"]
    assert before["witnesses"]["no_triple"][3] == (Q(1, 8), Q(1, 8))
    gen = make_generic(m, [A, B, C], seed=3)
    after = audit_generic(gen)
    assert after["ok"]
    for fam in gen:
        assert audit_family_forward(m, fam)


def test_forward_audit_catches_inserted_loop():
    m = map_translate()
    fam = build_orbit_arcs(m, translate_orbit(0, Q(0), kmin=-1, kmax=2))
    fam.pieces[1] = [(Q(1, 4), Q(0)), (Q(-1, 8), Q(0)), (Q(1, 2), Q(0))]
    assert not audit_family_forward(m, fam)
    pairs = sorted({(k, kp) for k, kp, _ in forward_violations(m, fam)})
    assert (1, 0) in pairs  # the image of piece 1 lands on piece 0


# --------------------------------------------- synthetic audit cases


def synth_family(idx, points, pieces):
    ks = sorted(pieces)
    orb = Orbit(index=idx, kmin=ks[0], kmax=ks[-1] + 1,
                points={k: p for k, p in enumerate(points)})
    return ArcFamily(orbit=orb, pieces=pieces)


def test_audit_orbit_point_not_simple():
    fam = synth_family(0, [(Q(0), Q(0)), (Q(1), Q(0)), (Q(2), Q(0))],
                       {0: [(Q(0), Q(0)), (Q(1), Q(0))],
                        1: [(Q(1), Q(0)), (Q(0), Q(0)), (Q(2), Q(0))]})
    rep = audit_generic([fam])
    assert not rep["orbit_simple"]


def test_audit_nonadjacent_piece_overlap():
    fam = synth_family(0, [(Q(0), Q(0)), (Q(1), Q(0)), (Q(2), Q(0)), (Q(3), Q(0))],
                       {0: [(Q(0), Q(0)), (Q(1), Q(0))],
                        1: [(Q(1), Q(0)), (Q(2), Q(0))],
                        2: [(Q(2), Q(0)), (Q(1, 2), Q(0)), (Q(3), Q(0))]})
    rep = audit_generic([fam])
    assert not rep["self_finite"]


def test_audit_self_triple_point():
    c = (Q(5), Q(5))
    fam = synth_family(0, [(Q(0), Q(0)), (Q(10), Q(0)), (Q(10), Q(10)), (Q(0), Q(10))],
                       {0: [(Q(0), Q(0)), c, (Q(10), Q(0))],
                        1: [(Q(10), Q(0)), c, (Q(10), Q(10))],
                        2: [(Q(10), Q(10)), c, (Q(0), Q(10))]})
    rep = audit_generic([fam])
    assert not rep["self_triple"]
    assert rep["witnesses"]["self_triple"] == (0, c)


def test_audit_cross_at_double_point():
    # q is a double point of the first arc; the second passes through it
    A = synth_family(0, [(Q(0), Q(0)), (Q(2), Q(0)), (Q(4), Q(0))],
                     {0: [(Q(0), Q(0)), (Q(3), Q(3)), (Q(2), Q(0))],
                      1: [(Q(2), Q(0)), (Q(1), Q(3)), (Q(4), Q(0))]})
    B = synth_family(1, [(Q(0), Q(3)), (Q(4), Q(3))],
                     {0: [(Q(0), Q(3)), (Q(3, 2), Q(3, 2)), (Q(4), Q(3))]})
    rep = audit_generic([A, B])
    assert not rep["pair_simple"]
    assert rep["witnesses"]["pair_simple"][2] == (Q(3, 2), Q(3, 2))
