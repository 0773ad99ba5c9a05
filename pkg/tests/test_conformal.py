import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import cKDTree

from hardybounds.bounds import cutdisk_R0
from hardybounds.conformal import (
    Bump,
    cutdisk_h,
    cutdisk_log_deriv,
    cutdisk_map,
    cutdisk_psi,
    cutdisk_samples,
    dirichlet_invariance_check,
    disk_to_cutdisk,
    gamma_remainders,
    halfplane_identity,
    halfplane_power,
    halfplane_transport_check,
    identity_map,
    koebe_check,
    koebe_map,
    koebe_sweep,
    library,
    mobius_map,
    post_compose,
    quarter_square,
    sector_log_deriv,
    sector_map,
    verify_log_derivative_bound,
)
from hardybounds.errors import BranchCutHit, DomainViolation, OutOfRange, ZeroArgument
from hardybounds.geometry import CutDiskExterior


def test_sector_map_examples():
    assert sector_map(0.3 - 0.7j, math.pi) == 0.3 - 0.7j
    assert sector_map(1 + 0j, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    t = 1.7
    assert sector_map((1 + 1j) / math.sqrt(2) * t, math.pi / 2) == pytest.approx(1j * t * t, abs=1e-14)
    with pytest.raises(DomainViolation):
        sector_map(1j, math.pi / 2)


def test_sector_log_deriv_examples():
    assert sector_log_deriv(2 + 0j, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert sector_log_deriv(1j, math.pi) == pytest.approx(-1j, abs=1e-15)
    assert sector_log_deriv(1 + 1j, 2 * math.pi / 3) == pytest.approx(0.75 - 0.75j, abs=1e-15)
    with pytest.raises(ZeroArgument):
        sector_log_deriv(0j, 1.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.3, math.pi), st.floats(1e-3, 1e3), st.floats(-0.999, 0.999))
def test_sector_log_deriv_exact_modulus(theta, r, u):
    z = r * cmath.exp(1j * u * theta)
    assert abs(sector_log_deriv(z, theta)) * abs(z) == pytest.approx(math.pi / theta, rel=1e-13)


def test_cutdisk_h_examples():
    for theta in (0.0, 0.5, 2.0):
        assert cutdisk_h(0j, theta) == 0
    assert cutdisk_h(3 + 0j, 0.0) == pytest.approx(1.5, abs=1e-15)
    assert cutdisk_h(-0.75 + 0j, 0.0) == pytest.approx(-1.5, abs=1e-15)
    with pytest.raises(BranchCutHit):
        cutdisk_h(-2 + 0j, 0.0)


def test_cutdisk_map_examples():
    assert cutdisk_map(0j, 1.0, 0.0) == 0
    assert cutdisk_map(3 + 0j, 1.0, 0.0) == pytest.approx(2.25, abs=1e-14)
    t = 1e6
    assert cutdisk_map(t + 0j, 1.0, 0.0).real == pytest.approx(t, rel=1e-5)


def test_cutdisk_root_identity():
    rng = np.random.default_rng(11)
    for theta in np.linspace(0, 0.99 * math.pi, 10):
        zeta = cutdisk_samples(1.0, theta, 3.0, 1000)[:1000]
        zeta = zeta[rng.permutation(len(zeta))]
        lhs = cutdisk_h(zeta, theta) * np.sqrt(zeta + np.exp(1j * theta))
        ref = np.array([z + cmath.exp(1j * theta) - 1 - 2j * math.sin(theta / 2) * cmath.sqrt(z + cmath.exp(1j * theta))
                        for z in zeta])
        np.testing.assert_allclose(lhs, ref, rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(cutdisk_psi(zeta, theta), ref, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("theta", [0.0, 0.7, math.pi / 2, 2.5])
def test_cutdisk_log_deriv_matches_finite_differences(theta):
    a = 1.3
    rng = np.random.default_rng(3)
    z = cutdisk_samples(a, theta, 2.0 * a, 4000)
    z = z[rng.choice(len(z), 1000, replace=False)]
    # stay away from the cut and the circle
    z = z[CutDiskExterior(a, theta).distance_to_boundary(z) > 1e-2 * np.abs(z)]
    h = 1e-6 * np.abs(z)
    g = cutdisk_map(z, a, theta)
    fd = (cutdisk_map(z + h, a, theta) - cutdisk_map(z - h, a, theta)) / (2 * h) / g
    np.testing.assert_allclose(cutdisk_log_deriv(z, a, theta), fd, rtol=1e-6)


def test_cutdisk_log_deriv_small_z_limit():
    z = 1e-9 + 0j
    assert abs(cutdisk_log_deriv(z, 1.0, 0.0)) * abs(z) == pytest.approx(2.0, abs=1e-6)


def test_gamma_remainders_examples():
    g = gamma_remainders(0j, 1.0)
    assert g.gamma1 == 0 and g.gamma2 == 0
    with pytest.raises(OutOfRange):
        gamma_remainders(0.6 + 0j, 0.0)


def test_gamma_bounds_stratified():
    nr, na = 50, 200
    rad = 0.5 * (np.arange(nr) + 0.5) / nr
    ang = 2 * math.pi * (np.arange(na) + 0.5) / na
    zeta = (rad[:, None] * np.exp(1j * ang)[None, :]).ravel()
    for theta in np.linspace(0, 0.99 * math.pi, 12):
        for z in zeta[::7]:
            g = gamma_remainders(z, theta)
            assert g.bound1_ok and g.bound2_ok


@pytest.mark.parametrize("theta,R", [(0.0, 0.25), (math.pi / 2, 0.9 * cutdisk_R0(1, math.pi / 2)),
                                     (0.0, 0.49)])
def test_log_derivative_bound_examples(theta, R):
    rep = verify_log_derivative_bound(1.0, theta, R, 10_000)
    assert rep.passed and rep.min_margin >= 0
    assert rep.n_samples >= 10_000


def test_koebe_examples():
    k = koebe_check(koebe_map(), 0.25)
    assert k.ratio == pytest.approx(0.25, abs=1e-12) and k.passed
    m = koebe_check(mobius_map(), 0.5)
    assert m.ratio == pytest.approx(0.5, abs=1e-12) and m.passed
    i = koebe_check(identity_map(), 0.5)
    assert i.ratio == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("f", library(), ids=lambda f: f.name)
def test_library_passes_certified_r(f):
    assert koebe_check(f, f.certified_r).passed
    assert koebe_sweep(f, f.certified_r, 256).passed


@pytest.mark.parametrize("f", library(), ids=lambda f: f.name)
def test_library_maps_injective_and_differentiable(f):
    rng = np.random.default_rng(1)
    r = 0.95 * np.sqrt(rng.random(10_000))
    z = r * np.exp(2j * math.pi * rng.random(10_000))
    w = np.asarray(f.eval(z))
    dist, _ = cKDTree(np.c_[w.real, w.imag]).query(np.c_[w.real, w.imag], k=2)
    assert dist[:, 1].min() > 0
    zs = z[:1000]
    h = 1e-6
    fd = (f.eval(zs + h) - f.eval(zs - h)) / (2 * h)
    np.testing.assert_allclose(np.asarray(f.deriv(zs)), fd, rtol=1e-6)


@pytest.mark.parametrize("f", [mobius_map(), disk_to_cutdisk(1.0, 0.5), disk_to_cutdisk(2.0, 2.0)],
                         ids=lambda f: f.name)
def test_library_inverse(f):
    z = np.array([0.1 + 0.2j, -0.5j, 0.7, -0.3 + 0.3j])
    np.testing.assert_allclose(f.inverse(f.eval(z)), z, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(range(len(library()))), st.floats(-math.pi, math.pi), st.floats(-5, 5),
       st.floats(-5, 5))
def test_koebe_ratio_invariant_under_post_motion(k, phi, x, y):
    f = library()[k]
    g = post_compose(f, phi, complex(x, y))
    assert koebe_check(g, 0.0).ratio == pytest.approx(koebe_check(f, 0.0).ratio, abs=1e-12)


def test_halfplane_transport_examples():
    t = halfplane_transport_check(halfplane_identity(), 1 + 0j, 0.5)
    assert t.lhs == pytest.approx(1.0) and t.rhs == pytest.approx(1.0) and t.passed and t.identities_ok
    t = halfplane_transport_check(halfplane_identity(), 2 + 3j, 0.5)
    assert t.lhs == pytest.approx(2.0) and t.rhs == pytest.approx(2.0) and t.passed
    f = halfplane_power(1.5)
    t = halfplane_transport_check(f, 1 + 0j, f.certified_r)
    assert t.rhs == pytest.approx(2 * (1 / 3) * 1.5, abs=1e-15)
    assert t.passed and t.identities_ok
    with pytest.raises(DomainViolation):
        halfplane_transport_check(f, -1 + 0j, 0.5)


def test_dirichlet_invariance():
    assert dirichlet_invariance_check(identity_map(), Bump(0.1 + 0.1j, 0.5)).rel_err < 1e-12
    assert dirichlet_invariance_check(mobius_map(), Bump(2 + 0j, 0.5)).rel_err < 1e-3
    assert dirichlet_invariance_check(quarter_square(), Bump(2 + 0j, 0.5)).rel_err < 1e-3
