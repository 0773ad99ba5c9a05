import math

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from hypothesis import given, settings
from hypothesis import strategies as st

from hardybounds.bounds import BoundCertificate, r_cutdisk
from hardybounds.errors import NoConvergence, SupportNotContained
from hardybounds.geometry import (
    CutPlane,
    Disk,
    Horseshoe,
    Polygon,
    in_radius,
    l_shape,
    rigid_motion,
    scaled,
    unit_square,
)
from hardybounds.mesh import TriMesh, triangulate
from hardybounds.variational import (
    CUT_PLANE_SHARP_R2,
    assemble,
    hardy_quotient_estimate,
    refinement_study,
    smallest_eigenvalue,
    truncated_support,
)

# calibrated from the unit-square refinement study (0.636, 0.526, 0.460 at h = 1/8, 1/16, 1/32)
SQUARE_H32_UPPER = 0.47


def test_identity_pencil():
    A = sp.identity(5, format="csr")
    res = smallest_eigenvalue(A, A)
    assert res.value == pytest.approx(1.0, abs=1e-14)
    assert res.iterations == 1


def test_diagonal_pencil():
    res = smallest_eigenvalue(sp.diags([1.0, 2.0, 3.0]).tocsr(), sp.identity(3, format="csr"))
    assert res.value == pytest.approx(1.0, rel=1e-8)
    assert res.residual <= 1e-8


def test_solver_iteration_cap():
    with pytest.raises(NoConvergence):
        smallest_eigenvalue(sp.diags([1.0, 1.0001, 3.0]).tocsr(), sp.identity(3, format="csr"),
                            tol=1e-15, max_iter=3)


@pytest.mark.parametrize("precond", ["lu", "jacobi", "none"])
def test_preconditioners_agree(precond):
    m = triangulate(unit_square(), 1 / 8)
    s = assemble(m, unit_square())
    ref = spla.eigsh(s.A, k=1, M=s.B, sigma=0, which="LM")[0][0]
    assert smallest_eigenvalue(s.A, s.B, precond=precond).value == pytest.approx(ref, rel=1e-8)


def test_reference_triangle_stiffness():
    m = TriMesh(np.array([0j, 1 + 0j, 1j]), np.array([[0, 1, 2]]), np.zeros(3, bool), 1.0)
    s = assemble(m, Disk(0.2 + 0.2j, 10.0))
    K = s.A.toarray()
    np.testing.assert_allclose(K, [[1, -0.5, -0.5], [-0.5, 0.5, 0], [-0.5, 0, 0.5]], atol=1e-15)


def test_assembly_scale_invariance():
    d = l_shape()
    m = triangulate(d, 1 / 8)
    c = 3.7
    mc = TriMesh(c * m.vertices, m.triangles, m.is_boundary, c * m.h, m.mode)
    s0, s1 = assemble(m, d), assemble(mc, scaled(d, c))
    np.testing.assert_allclose(s1.A.toarray(), s0.A.toarray(), atol=1e-12)
    np.testing.assert_allclose(s1.B.toarray(), s0.B.toarray(), rtol=1e-12, atol=1e-12)


def test_matches_scipy_shift_invert():
    d = unit_square()
    m = triangulate(d, 1 / 16)
    s = assemble(m, d)
    ref = spla.eigsh(s.A, k=1, M=s.B, sigma=0, which="LM")[0][0]
    est = hardy_quotient_estimate(d, None, 1 / 16)
    assert est.lambda_h == pytest.approx(ref, rel=1e-8)
    assert est.residual <= est.tol


def test_square_h32_bracket():
    est = hardy_quotient_estimate(unit_square(), None, 1 / 32)
    assert 0.25 <= est.lambda_h <= SQUARE_H32_UPPER


def test_cut_plane_regression():
    est = hardy_quotient_estimate(CutPlane(), None, 1 / 32)
    assert est.lambda_h >= CUT_PLANE_SHARP_R2 - 1e-3


def test_horseshoe_consistency():
    d = Horseshoe(1.0, 0.05, math.pi / 3)
    delta = in_radius(d, 1e-3).upper
    cert = BoundCertificate("cutdisk", r_cutdisk(1.0, 0.0, delta))
    est = hardy_quotient_estimate(d, None, 1 / 16, certificate=cert)
    assert est.certificate_compared[1] >= -1e-6
    assert est.lambda_h >= cert.r_squared - 1e-6


def test_square_refinement_decreasing():
    ests = refinement_study(unit_square(), None, [1 / 8, 1 / 16, 1 / 32])
    lam = [e.lambda_h for e in ests]
    assert lam[0] > lam[1] > lam[2] >= 0.25


def test_disk_refinement_decreasing():
    lam = [e.lambda_h for e in refinement_study(Disk(0j, 1.0), None, [1 / 8, 1 / 16, 1 / 32])]
    assert lam[0] > lam[1] > lam[2] >= 0.25


def test_cut_plane_radius_sweep_non_increasing():
    lam = [hardy_quotient_estimate(CutPlane(), None, 1 / 8, radius=R).lambda_h for R in (2, 4, 8)]
    assert lam[0] >= lam[1] - 1e-10 and lam[1] >= lam[2] - 1e-10


def test_refinement_requires_decreasing_h():
    with pytest.raises(ValueError):
        refinement_study(unit_square(), None, [1 / 16, 1 / 8])


def test_support_must_lie_in_domain():
    with pytest.raises(SupportNotContained):
        hardy_quotient_estimate(unit_square(), Polygon((0j, 2 + 0j, 2 + 2j, 2j)), 1 / 4)


def test_truncated_supports():
    sq = truncated_support(CutPlane(), 4.0)
    assert isinstance(sq, Polygon) and sq.area == pytest.approx(64.0)
    assert truncated_support(unit_square()) == unit_square()


def test_square_ground_mode_dihedral_symmetry():
    est = hardy_quotient_estimate(unit_square(), None, 1 / 16)
    z, u = est.mesh.vertices, est.ground_mode / np.abs(est.ground_mode).max()
    key = {(round(p.real * 16), round(p.imag * 16)): v for p, v in zip(z, u)}
    for p, v in zip(z, u):
        i, j = round(p.real * 16), round(p.imag * 16)
        for q in [(j, i), (16 - i, j), (i, 16 - j), (16 - j, 16 - i), (16 - i, 16 - j)]:
            assert abs(key[q] - v) <= 1e-6


@pytest.mark.parametrize("d,h", [(unit_square(), 1 / 16), (l_shape(), 1 / 16),
                                 (Horseshoe(1.0, 0.05, math.pi / 3), 1 / 16), (Disk(0j, 1.0), 1 / 8)])
def test_scale_invariance(d, h):
    a = hardy_quotient_estimate(d, None, h).lambda_h
    b = hardy_quotient_estimate(scaled(d, 2.5), None, 2.5 * h).lambda_h
    assert abs(a - b) <= 1e-10


@settings(max_examples=10, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_rigid_invariance_polygons(phi, x, y):
    for d in (unit_square(), l_shape()):
        a = hardy_quotient_estimate(d, None, 1 / 8).lambda_h
        b = hardy_quotient_estimate(rigid_motion(d, phi, complex(x, y)), None, 1 / 8).lambda_h
        assert abs(a - b) <= 1e-9


def test_conforming_refinement_monotone_lshape():
    lam = [e.lambda_h for e in refinement_study(l_shape(), None, [1 / 4, 1 / 8, 1 / 16, 1 / 32])]
    assert all(b <= a + 1e-10 for a, b in zip(lam, lam[1:]))
