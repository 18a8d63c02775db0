"""Convex bodies: constructors, containment, inradius, offsets, rolling."""

import math

import numpy as np
import pytest

from hypiso.geom import ORIGIN, Point, dist, exp_map, fermi_point, from_disk
from hypiso.spline import NonSimpleBoundaryError
from hypiso.bodies import (
    Body,
    ball,
    boundary_proximity,
    contains_body,
    contains_point,
    dist_to_boundary,
    inradius,
    inscribed_ball,
    offset,
    q_counterexample,
    rolls_freely,
    sausage,
    signed_boundary_distance,
    two_ball_hull,
)
from hypiso.steiner import ball_measures, sausage_measures

BIG_R = math.atanh(0.5)  # arccoth 2


def _random_directions(rng, n):
    th = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return np.column_stack([np.zeros(n), np.cos(th), np.sin(th)])


# --- constructors -----------------------------------------------------------

def test_ball_matches_closed_forms():
    b = ball(1.0)
    want = ball_measures(1.0)
    assert b.measure.area == pytest.approx(want.area, abs=1e-12)
    assert b.measure.perimeter == pytest.approx(want.perimeter, abs=1e-12)
    assert b.convex


def test_sausage_matches_closed_forms():
    for lam, d in ((1.5, 0.5), (2.0, 1.0), (5.0, 3.0)):
        s = sausage(lam, d)
        want = sausage_measures(lam, d)
        assert s.measure.area == pytest.approx(want.area, abs=1e-12)
        assert s.measure.perimeter == pytest.approx(want.perimeter, abs=1e-12)
        cert = s.thickness_certificate(lam)
        assert cert.ok
    with pytest.raises(ValueError):
        sausage(1.0, 1.0)


def test_sausage_kappa_values():
    s = sausage(2.0, 1.0)
    kappas = sorted({round(a.kappa, 12) for a in s.boundary.arcs})
    assert kappas == [0.5, 2.0]


def test_hull_measures_and_tangency():
    hull = two_ball_hull(BIG_R, 1.0)
    assert hull.measure.area == pytest.approx(2.7763849358988644, abs=1e-10)
    assert hull.measure.perimeter == pytest.approx(8.1052733927536131, abs=1e-10)
    # geodesic sides sit at distance exactly r from both ball centers
    centers = [fermi_point(-1.0, 0.0), fermi_point(1.0, 0.0)]
    for i, a in enumerate(hull.boundary.arcs):
        if abs(a.kappa) > 1e-12:
            continue
        f = hull.boundary.frames[i]
        for s in (0.0, a.length):
            pass  # endpoints are the tangency points
        for c in centers:
            d_end = [dist(c, Point.from_array(p, validate=False))
                     for p in (f.p, (hull.boundary.frames[i + 1]).p)]
            assert min(d_end) == pytest.approx(BIG_R, abs=1e-9)


def test_hull_degenerates_to_ball():
    tiny = two_ball_hull(0.8, 1e-6)
    want = ball_measures(0.8)
    assert tiny.measure.area == pytest.approx(want.area, abs=1e-5)
    assert tiny.measure.perimeter == pytest.approx(want.perimeter, abs=1e-5)


def test_q_counterexample_measures_and_thickness():
    q = q_counterexample(2.0, 0.1)
    assert q.measure.area == pytest.approx(3.1595852308986281, abs=1e-10)
    assert q.measure.perimeter == pytest.approx(8.212871512814985, abs=1e-10)
    cert = q.thickness_certificate(2.0)
    assert not cert.ok  # the flattened side dips below 1/lam
    assert cert.min_kappa < 0.5
    # eps = 0 recovers the sausage
    q0 = q_counterexample(2.0, 0.0)
    want = sausage_measures(2.0, 1.0)
    assert q0.measure.area == pytest.approx(want.area, abs=1e-10)


# --- containment ------------------------------------------------------------

def test_contains_point_basic():
    s = sausage(2.0, 1.0)
    assert contains_point(s, ORIGIN)
    assert contains_point(s, fermi_point(1.0, 0.0))
    assert not contains_point(s, fermi_point(3.0, 0.0))
    assert not contains_point(s, fermi_point(0.0, 2.0))


def test_contains_point_matches_signed_distance():
    rng = np.random.default_rng(31)
    body = two_ball_hull(0.9, 0.7)  # mixed curvature signs on the boundary
    dirs = _random_directions(rng, 200)
    radii = rng.uniform(0.0, 2.5, size=200)
    pts = np.array([exp_map(ORIGIN, r * u).v for r, u in zip(radii, dirs)])
    sd = signed_boundary_distance(body, pts)
    for v, s in zip(pts, sd):
        if abs(s) < 1e-7:
            continue  # too close to the boundary to trust either verdict
        inside = contains_point(body, Point.from_array(v, validate=False))
        assert inside == (s > 0.0)


def test_contains_body_nested_balls():
    assert contains_body(ball(1.0), ball(0.8))
    assert not contains_body(ball(0.8), ball(1.0))


def test_contains_body_hull_inside_sausage():
    hull = two_ball_hull(BIG_R, 1.0)
    s = sausage(2.0, 1.0)
    assert contains_body(s, hull)
    assert not contains_body(hull, s)


def test_dist_to_boundary_on_ball():
    rng = np.random.default_rng(5)
    b = ball(1.0)
    for _ in range(25):
        u = _random_directions(rng, 1)[0]
        r = rng.uniform(0.0, 2.0)
        q = exp_map(ORIGIN, r * u)
        assert dist_to_boundary(b, q) == pytest.approx(abs(r - 1.0), abs=1e-6)


def test_boundary_proximity_locates_arc():
    s = sausage(2.0, 1.0)
    dists, best_arc, best_s = boundary_proximity(
        s, np.array([fermi_point(0.0, 1.0).v]))
    assert dists.shape == (1,)
    assert 0 <= best_arc[0] < len(s.boundary.arcs)
    assert 0.0 <= best_s[0] <= s.boundary.arcs[best_arc[0]].length


# --- inradius ---------------------------------------------------------------

def test_inradius_of_ball_and_sausage():
    assert inradius(ball(1.0)) == pytest.approx(1.0, abs=1e-6)
    assert inradius(sausage(2.0, 1.0)) == pytest.approx(BIG_R, abs=1e-6)


def test_inscribed_ball_center_off_origin():
    # the deepest point of a hull is at a ball center, not the midpoint:
    # the geodesic side cuts inside the tube radius between tangencies
    hull = two_ball_hull(0.8, 1.2)
    depth, center = inscribed_ball(hull)
    assert depth == pytest.approx(0.8, abs=1e-5)
    assert min(dist(center, fermi_point(-1.2, 0.0)),
               dist(center, fermi_point(1.2, 0.0))) < 1e-2
    mid_depth = dist_to_boundary(hull, ORIGIN)
    assert mid_depth < depth - 1e-3


# --- offsets ----------------------------------------------------------------

def test_offset_matches_scalar_flow():
    from hypiso.steiner import outer_flow, inner_flow
    s = sausage(2.0, 1.0)
    for rho in (0.1, 0.25, 0.4):
        grown = offset(s, rho)
        want = outer_flow(s.measure, rho)
        assert grown.measure.area == pytest.approx(want.area, rel=1e-10)
        assert grown.measure.perimeter == pytest.approx(want.perimeter, rel=1e-10)
        shrunk = offset(s, -rho)
        want = inner_flow(s.measure, rho)
        assert shrunk.measure.area == pytest.approx(want.area, abs=1e-9)
        assert shrunk.measure.perimeter == pytest.approx(want.perimeter, abs=1e-9)


def test_offset_round_trip():
    s = sausage(2.0, 1.0)
    back = offset(offset(s, -0.3), 0.3)
    assert back.measure.area == pytest.approx(s.measure.area, abs=1e-8)
    assert back.measure.perimeter == pytest.approx(s.measure.perimeter, abs=1e-8)


def test_offset_ball_is_ball():
    grown = offset(ball(1.0), 0.5)
    want = ball_measures(1.5)
    assert grown.measure.area == pytest.approx(want.area, abs=1e-10)
    assert grown.measure.perimeter == pytest.approx(want.perimeter, abs=1e-10)


def test_erosion_to_core_segment():
    # eroding by exactly arccoth lam collapses the sausage to its core
    s = sausage(2.0, 1.0)
    core = offset(s, -BIG_R, check_simple=False)
    assert core.measure.area == pytest.approx(0.0, abs=1e-6)
    assert core.measure.perimeter == pytest.approx(4.0, abs=1e-6)


def test_erosion_of_thick_body_stays_convex():
    for body, lam in ((sausage(2.0, 1.0), 2.0), (ball(1.0), None)):
        for rho in (0.1, 0.3, 0.5):
            if lam is not None and rho >= math.atanh(1.0 / lam):
                continue
            shrunk = offset(body, -rho)
            assert min(a.kappa for a in shrunk.boundary.arcs) >= -1e-9


def test_erosion_of_hull_goes_concave():
    # geodesic sides of the hull erode to curves bending away
    hull = two_ball_hull(BIG_R, 1.0)
    shrunk = offset(hull, -0.2, check_simple=False)
    assert min(a.kappa for a in shrunk.boundary.arcs) <= -math.tanh(0.2) + 1e-9


def test_erosion_past_pinch_raises():
    hull = two_ball_hull(BIG_R, 1.0)
    with pytest.raises(NonSimpleBoundaryError):
        offset(hull, -0.4)


# --- rolling ----------------------------------------------------------------

def test_sausage_rolls_freely():
    rep = rolls_freely(sausage(2.0, 1.0), 2.0)
    assert rep.ok
    assert rep.worst_margin > -1e-6


def test_ball_at_critical_radius_rolls():
    rep = rolls_freely(ball(BIG_R), 2.0)
    assert rep.ok


def test_q_counterexample_does_not_roll():
    body = q_counterexample(2.0, 0.1)
    rep = rolls_freely(body, 2.0)
    assert not rep.ok
    assert rep.worst_margin <= -1e-3
    # the witness: the tangent ball at that center pokes out of the body
    assert dist_to_boundary(body, rep.witness_center) < rep.rho - 1e-4
    assert not contains_point(body, rep.witness_point, tol=1e-6)


def test_roll_report_json():
    rep = rolls_freely(sausage(2.0, 1.0), 2.0)
    obj = rep.to_json_dict()
    assert obj["ok"] is True
    assert "worst_margin" in obj and "witness_center" in obj


# --- serialization ----------------------------------------------------------

def test_body_json_round_trip():
    s = sausage(2.0, 1.0)
    t = Body.from_json_dict(s.to_json_dict())
    assert t.measure.area == pytest.approx(s.measure.area, abs=1e-12)
    assert t.measure.perimeter == pytest.approx(s.measure.perimeter, abs=1e-12)
    assert t.convex == s.convex
    assert t.thick_for == s.thick_for
