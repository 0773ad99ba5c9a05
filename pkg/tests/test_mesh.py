import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardybounds.errors import MeshFailure
from hardybounds.geometry import (
    CutPlane,
    Disk,
    Horseshoe,
    Polygon,
    l_shape,
    rigid_motion,
    unit_square,
)
from hardybounds.mesh import triangulate


def _check_invariants(mesh, d, boundary_tol):
    assert np.all(mesh.signed_areas() > 0)
    assert mesh.is_conforming()
    dist = d.distance_to_boundary(mesh.vertices[mesh.is_boundary])
    assert dist.max() <= boundary_tol
    # every boundary edge of the mesh joins two flagged vertices
    be = mesh.boundary_edges()
    assert np.all(mesh.is_boundary[be])


def test_square_quarter_structured():
    m = triangulate(unit_square(), 0.25)
    assert m.mode == "structured"
    assert len(m.triangles) == 32
    p = m.vertices[m.triangles]
    sides = np.sort(np.abs(np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], 1)), 1)
    np.testing.assert_allclose(sides[:, 0], 0.25, atol=1e-15)
    np.testing.assert_allclose(sides[:, 1], 0.25, atol=1e-15)
    np.testing.assert_allclose(sides[:, 2], 0.25 * math.sqrt(2), atol=1e-15)
    _check_invariants(m, unit_square(), 1e-9 * 0.25)


def test_disk_boundary_nodes_on_circle():
    m = triangulate(Disk(0j, 1.0), 0.1)
    r = np.abs(m.vertices[m.is_boundary])
    assert np.max(np.abs(r - 1)) <= 1e-9
    _check_invariants(m, Disk(0j, 1.0), 1e-9 * 0.1)
    assert m.edge_lengths().max() <= 1.5 * 0.1
    assert m.min_angle() > math.radians(20)


@pytest.mark.parametrize("mode", ["structured", "delaunay"])
def test_lshape_reentrant_corner_is_vertex(mode):
    m = triangulate(l_shape(), 0.1, mode)
    assert np.min(np.abs(m.vertices - (0.5 + 0.5j))) <= 1e-12
    _check_invariants(m, l_shape(), 1e-9 * 0.1)
    assert m.signed_areas().sum() == pytest.approx(0.75, abs=1e-12)


def test_horseshoe_mesh():
    d = Horseshoe(1.0, 0.05, math.pi / 3)
    h = 0.0125
    m = triangulate(d, h)
    assert m.mode == "delaunay"
    # the concave inner arc is approximated by a circumscribed polyline
    _check_invariants(m, d, h * h / 8 + 1e-12)
    assert np.all(np.abs(m.vertices) >= 1.0 - 1e-12)


def test_structured_mode_rejects_non_aligned():
    with pytest.raises(MeshFailure):
        triangulate(Polygon((0j, 1 + 0j, 0.3 + 0.9j)), 0.1, "structured")


def test_unbounded_support_rejected():
    with pytest.raises(MeshFailure):
        triangulate(CutPlane(), 0.1)
    with pytest.raises(MeshFailure):
        triangulate(unit_square(), 0.0)


def test_structured_refinement_is_nested():
    coarse = triangulate(unit_square(), 1 / 8)
    fine = triangulate(unit_square(), 1 / 16)
    fine_set = {(round(z.real * 64), round(z.imag * 64)) for z in fine.vertices}
    assert all((round(z.real * 64), round(z.imag * 64)) in fine_set for z in coarse.vertices)


@settings(max_examples=20, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_mesh_follows_rigid_motion(phi, x, y):
    d = l_shape()
    m0 = triangulate(d, 1 / 8)
    m1 = triangulate(rigid_motion(d, phi, complex(x, y)), 1 / 8)
    assert m1.mode == m0.mode
    np.testing.assert_allclose(m1.vertices, np.exp(1j * phi) * m0.vertices + complex(x, y), atol=1e-12)
    np.testing.assert_array_equal(m1.triangles, m0.triangles)


@pytest.mark.parametrize("d", [Polygon((0j, 1 + 0j, 0.3 + 0.9j)), Disk(1 + 1j, 0.4),
                               Polygon((0j, 2 + 0j, 2 + 1j, 1 + 0.3j, 0 + 1j))])
def test_delaunay_quality(d):
    h = 0.05
    m = triangulate(d, h)
    _check_invariants(m, d, 1e-9 * h)
    assert m.edge_lengths().max() <= 1.5 * h
    assert m.signed_areas().sum() == pytest.approx(m.diagnostics["area_polyline"], rel=1e-9)
