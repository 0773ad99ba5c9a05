import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardybounds.conditions import (
    angular_hull,
    check_cone_condition,
    check_cutdisk_condition,
    domain_samples,
    horseshoe_theta0,
    worker_count,
)
from hardybounds.errors import InvalidParameters
from hardybounds.geometry import (
    CutDiskExterior,
    CutPlane,
    Horseshoe,
    Placed,
    Placement,
    Polygon,
    Sector,
    contains,
    l_shape,
    rigid_motion,
    sample_boundary,
    unit_square,
)

from .oracles import brute_force_hull


def test_angular_hull_square_corner_and_edge():
    h = angular_hull(unit_square(), 0j)
    assert h.theta == pytest.approx(math.pi / 4, abs=1e-12)
    assert h.phi == pytest.approx(math.pi / 4, abs=1e-12)
    h = angular_hull(unit_square(), 0.5 + 0j)
    assert h.theta == pytest.approx(math.pi / 2, abs=1e-12)
    assert h.phi == pytest.approx(math.pi / 2, abs=1e-12)


def test_angular_hull_lshape_reentrant_corner():
    w = 0.5 + 0.5j
    theta = angular_hull(l_shape(), w).theta
    assert theta == pytest.approx(3 * math.pi / 4, abs=1e-12)
    assert theta == pytest.approx(brute_force_hull(l_shape(), w, 1_000_000), abs=1e-3)


def test_cone_condition_square():
    rep = check_cone_condition(unit_square())
    assert rep.satisfied
    assert abs(rep.theta_sup - math.pi / 2) <= 1e-6


def test_cone_condition_sector_vertex():
    d = Sector(3 * math.pi / 4)
    rep = check_cone_condition(d)
    assert abs(rep.theta_sup - 3 * math.pi / 4) <= 1e-6
    assert rep.theta_sup == pytest.approx(angular_hull(d, 0j).theta, abs=1e-12)


def test_cone_condition_cut_plane():
    rep = check_cone_condition(CutPlane())
    assert rep.satisfied
    assert rep.theta_sup == pytest.approx(math.pi, abs=1e-12)


def test_cone_witnesses_in_range():
    rep = check_cone_condition(l_shape(), 64)
    assert rep.n_boundary_samples == len(rep.witnesses) >= 64
    assert rep.theta_sup == max(c.theta_w for c in rep.witnesses)
    assert rep.theta_sup >= math.pi / 2
    assert all(0 < c.theta_w <= math.pi + 1e-12 for c in rep.witnesses)


def test_horseshoe_theta0():
    assert horseshoe_theta0(math.pi / 4) == 0.0
    assert horseshoe_theta0(math.pi / 2) == 0.0
    assert horseshoe_theta0(3 * math.pi / 4) == pytest.approx(math.pi / 2, abs=1e-15)
    with pytest.raises(InvalidParameters):
        horseshoe_theta0(math.pi)


def _placement_certifies(d, rep, m=10_000):
    z = domain_samples(d, m)
    for wit in rep.witnesses:
        ext = Placed(CutDiskExterior(rep.a, wit.theta_used), Placement(wit.w, wit.phi_w))
        if not np.all(contains(ext, z)):
            return False
    return True


@pytest.mark.parametrize("psi,theta0", [(math.pi / 3, 0.0), (3 * math.pi / 4, math.pi / 2)])
def test_cutdisk_horseshoe_feasible(psi, theta0):
    d = Horseshoe(1.0, 0.05, psi)
    rep = check_cutdisk_condition(d, 1.0, theta0)
    assert rep.feasible
    assert _placement_certifies(d, rep)


def test_cutdisk_square_huge_radius_feasible():
    rep = check_cutdisk_condition(unit_square(), 1e6, 0.0)
    assert rep.feasible


@pytest.mark.parametrize("d,a,theta0", [
    (Horseshoe(1.0, 0.05, 3 * math.pi / 4), 1.0, 0.0),  # slit would cross the open end
    (l_shape(), 1.0, 0.0),
])
def test_cutdisk_negative_controls(d, a, theta0):
    assert not check_cutdisk_condition(d, a, theta0).feasible


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("HARDY_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.setenv("HARDY_THREADS", "3")
    assert worker_count() <= 3


CONVEX = [unit_square(), Polygon((0j, 2 + 0j, 1 + 1j)),
          Polygon((0j, 1 + 0j, 1.5 + 0.8j, 0.5 + 1.4j, -0.4 + 0.7j))]


@pytest.mark.parametrize("d", CONVEX)
def test_convex_polygons_have_half_plane_cones(d):
    rep = check_cone_condition(d, 128)
    assert math.pi / 2 - 1e-12 <= rep.theta_sup <= math.pi / 2 + 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(-3, 3), st.floats(-3, 3))
def test_cone_rotation_invariance(phi, x, y):
    d = l_shape()
    a = check_cone_condition(d, 64).theta_sup
    b = check_cone_condition(rigid_motion(d, phi, complex(x, y)), 64).theta_sup
    assert abs(a - b) <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 1), st.booleans())
def test_hull_monotone_under_inclusion(t, bottom):
    small = l_shape()
    big = Polygon((0j, 1 + 0j, 1 + 0.5j, 0.75 + 0.5j, 0.5 + 1j, 1j))  # contains the L-shape
    w = complex(t, 0) if bottom else complex(0, t)  # shared boundary
    assert angular_hull(small, w).theta <= angular_hull(big, w).theta + 1e-9


@pytest.mark.parametrize("d", [l_shape(), Horseshoe(1.0, 0.1, 2.0), unit_square()])
def test_hull_certifies_containment(d):
    rng = np.random.default_rng(5)
    z = domain_samples(d, 10_000)
    ws = sample_boundary(d, 32)
    for w in rng.choice(ws, 8, replace=False):
        h = angular_hull(d, w)
        ang = np.angle(np.exp(-1j * h.phi) * (z - w))
        assert np.all(np.abs(ang) <= h.theta + 1e-9)
