"""Triangular P1 meshes of bounded support regions.

Two deterministic constructions:

* structured: rectilinear polygons whose vertices sit on the ``h`` lattice get
  a "Union Jack" grid (cell diagonals alternate with the parity of ``i + j``).
  Halving ``h`` yields nested meshes, and the square mesh has the full
  dihedral symmetry.
* delaunay: everything else.  Boundary nodes at spacing at most ``h`` plus
  an equilateral lattice of interior nodes, triangulated with
  ``scipy.spatial.Delaunay``; triangles whose centroid is outside are dropped.
  Concave arcs are replaced by a circumscribed polyline so the mesh never
  leaves the closed domain.

Meshing happens in a frame attached to the support itself (first polygon
vertex at the origin, first edge along +x; placed domains use their base
frame), so rigid motions of the support move the mesh rigidly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from matplotlib.path import Path
from scipy.spatial import Delaunay

from .errors import InvalidDomain, MeshFailure
from .geometry import (
    Arc,
    Polygon,
    Ray,
    Segment,
    boundary_chain,
    bounding_box,
    canonical_frame,
    cis,
    contains,
    signed_distance,
)

INTERIOR_CLEARANCE = 0.5
# node spacing relative to h; keeps the longest Delaunay edge below 1.5 h
SPACING = 1 / 1.2


@dataclass
class TriMesh:
    vertices: np.ndarray  # complex, shape (n,)
    triangles: np.ndarray  # int, shape (m, 3), counter-clockwise
    is_boundary: np.ndarray  # bool, shape (n,)
    h: float
    mode: str = "structured"
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (e1.real * e2.imag - e1.imag * e2.real)

    def edges(self) -> np.ndarray:
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.sort(e, axis=1)

    def boundary_edges(self) -> np.ndarray:
        e, counts = np.unique(self.edges(), axis=0, return_counts=True)
        return e[counts == 1]

    def edge_lengths(self) -> np.ndarray:
        e = np.unique(self.edges(), axis=0)
        return np.abs(self.vertices[e[:, 0]] - self.vertices[e[:, 1]])

    def min_angle(self) -> float:
        p = self.vertices[self.triangles]
        out = np.inf
        for k in range(3):
            a = p[:, (k + 1) % 3] - p[:, k]
            b = p[:, (k + 2) % 3] - p[:, k]
            ang = np.abs(np.angle(b / a))
            out = min(out, float(ang.min()))
        return out

    def is_conforming(self) -> bool:
        """Every edge is shared by at most two triangles and no vertex lies
        in the interior of a boundary edge."""
        _, counts = np.unique(self.edges(), axis=0, return_counts=True)
        return bool(np.all(counts <= 2))

    def transformed(self, rot: complex, shift: complex) -> "TriMesh":
        return TriMesh(rot * self.vertices + shift, self.triangles.copy(), self.is_boundary.copy(),
                       self.h, self.mode, dict(self.diagnostics))


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


def _frame(support):
    """``(base, rot, shift)`` with ``support = rot * base + shift``."""
    return canonical_frame(support)


# ---------------------------------------------------------------------------
# structured
# ---------------------------------------------------------------------------


def _lattice_aligned(poly: Polygon, h: float) -> bool:
    tol = 1e-9
    v = np.asarray(poly.vertices)
    for a, b in zip(v, np.roll(v, -1)):
        d = b - a
        if abs(d.real) > tol * h and abs(d.imag) > tol * h:
            return False
    q = v / h
    return bool(np.all(np.abs(q.real - np.round(q.real)) < tol)
                and np.all(np.abs(q.imag - np.round(q.imag)) < tol))


def _structured(poly: Polygon, h: float) -> TriMesh:
    xmin, xmax, ymin, ymax = bounding_box(poly)
    i0, j0 = int(round(xmin / h)), int(round(ymin / h))
    nx, ny = int(round(xmax / h)) - i0, int(round(ymax / h)) - j0
    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="xy")
    ii, jj = ii.ravel(), jj.ravel()
    centers = (i0 + ii + 0.5) * h + 1j * (j0 + jj + 0.5) * h
    keep = contains(poly, centers)
    ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        raise MeshFailure("no cell of the lattice lies inside the support", {"h": h})
    # node ids on the full (nx+1) x (ny+1) lattice, compressed afterwards
    def nid(i, j):
        return j * (nx + 1) + i

    v00, v10 = nid(ii, jj), nid(ii + 1, jj)
    v01, v11 = nid(ii, jj + 1), nid(ii + 1, jj + 1)
    even = ((i0 + ii + j0 + jj) % 2) == 0
    # even cells: diagonal (i,j)-(i+1,j+1); odd cells: (i+1,j)-(i,j+1)
    t1 = np.where(even[:, None], np.stack([v00, v10, v11], 1), np.stack([v00, v10, v01], 1))
    t2 = np.where(even[:, None], np.stack([v00, v11, v01], 1), np.stack([v10, v11, v01], 1))
    tris = np.concatenate([np.stack([t1, t2], 1).reshape(-1, 3)])
    used, inv = np.unique(tris, return_inverse=True)
    tris = inv.reshape(-1, 3)
    gi, gj = used % (nx + 1), used // (nx + 1)
    verts = (i0 + gi) * h + 1j * (j0 + gj) * h
    mesh = TriMesh(verts, tris, np.zeros(len(verts), dtype=bool), h, "structured")
    be = mesh.boundary_edges()
    mesh.is_boundary[np.unique(be)] = True
    return mesh


# ---------------------------------------------------------------------------
# delaunay
# ---------------------------------------------------------------------------


def _oriented_pieces(d):
    """Boundary pieces chained head to tail (closed loop)."""
    if any(isinstance(p, Ray) for p in d.pieces()):
        raise MeshFailure("support must be bounded", {})
    try:
        return boundary_chain(d)
    except InvalidDomain as exc:
        raise MeshFailure(str(exc), {}) from None


def _arc_is_concave(d, arc: Arc) -> bool:
    mid = arc.point_at(arc.length / 2)
    eps = 1e-6 * arc.radius
    toward = mid + eps * (arc.center - mid) / arc.radius
    return not bool(contains(d, toward))


def _piece_nodes(d, piece, reverse: bool, h: float) -> list[complex]:
    """Nodes along a piece excluding its final endpoint."""
    if isinstance(piece, Segment):
        a, b = (piece.b, piece.a) if reverse else (piece.a, piece.b)
        m = max(1, math.ceil(piece.length / h - 1e-9))
        return [a + (b - a) * k / m for k in range(m)]
    m = max(1 if not piece.full else 3, math.ceil(piece.length / h - 1e-9))
    dt = piece.sweep / m
    ts = [piece.start + k * dt for k in range(m + 1)]
    if reverse:
        ts = ts[::-1]
        dt = -dt
    c, r = piece.center, piece.radius
    if piece.full:
        return [c + r * cis(t) for t in ts[:-1]]
    if not _arc_is_concave(d, piece):
        return [c + r * cis(t) for t in ts[:-1]]
    rr = r / math.cos(dt / 2)
    return [c + r * cis(ts[0])] + [c + rr * cis(t + dt / 2) for t in ts[:-1]]


def boundary_polygon(d, h: float) -> np.ndarray:
    nodes = []
    for piece, rev in _oriented_pieces(d):
        nodes.extend(_piece_nodes(d, piece, rev, h))
    return np.asarray(nodes, dtype=complex)


def _tri_lattice(region, h):
    xmin, xmax, ymin, ymax = region
    dy = h * math.sqrt(3) / 2
    ny = int(math.floor((ymax - ymin) / dy)) + 1
    nx = int(math.floor((xmax - xmin) / h)) + 2
    k = np.arange(ny + 1)
    j = np.arange(nx + 1)
    X = xmin + (j[None, :] + 0.5 * (k[:, None] % 2)) * h
    Y = np.broadcast_to(ymin + k[:, None] * dy, X.shape)
    return (X + 1j * Y).ravel()


def _shoelace(z: np.ndarray) -> float:
    w = np.roll(z, -1)
    return 0.5 * float(np.sum(z.real * w.imag - w.real * z.imag))


def _delaunay(d, h: float) -> TriMesh:
    s = SPACING * h
    bpts = boundary_polygon(d, s)
    area_poly = _shoelace(bpts)
    if area_poly < 0:
        bpts, area_poly = bpts[::-1].copy(), -area_poly
    if not area_poly > 0:
        raise MeshFailure("degenerate boundary polyline", {"h": h})
    path = Path(np.column_stack([bpts.real, bpts.imag]), closed=False)
    # Hausdorff gap between the polyline and the true boundary: nodes and chord
    # midpoints are where the two curves are farthest apart.
    mids = 0.5 * (bpts + np.roll(bpts, -1))
    gap = float(np.max(d.distance_to_boundary(np.concatenate([bpts, mids]))))
    lat = _tri_lattice(bounding_box(d), s)
    keep = signed_distance(d, lat) >= INTERIOR_CLEARANCE * s + gap
    pts = np.concatenate([bpts, lat[keep]])
    xy = np.column_stack([pts.real, pts.imag])
    tri = Delaunay(xy).simplices.astype(np.int64)
    p = pts[tri]
    e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
    # qhull may return flat slivers along collinear hull nodes
    tri = tri[np.abs(e1.real * e2.imag - e1.imag * e2.real) > 1e-10 * s * s]
    cen = pts[tri].mean(axis=1)
    tri = tri[path.contains_points(np.column_stack([cen.real, cen.imag]))]
    # counter-clockwise orientation
    p = pts[tri]
    e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
    cw = (e1.real * e2.imag - e1.imag * e2.real) < 0
    tri[cw] = tri[cw][:, [0, 2, 1]]
    nb = len(bpts)
    mesh = TriMesh(pts, tri, np.zeros(len(pts), dtype=bool), h, "delaunay")
    mesh.is_boundary[:nb] = True
    area = float(mesh.signed_areas().sum())
    diag = {"h": h, "area_mesh": area, "area_polyline": area_poly, "n_boundary": nb,
            "polyline_gap": gap}
    want = {tuple(sorted((k, (k + 1) % nb))) for k in range(nb)}
    have = {tuple(e) for e in mesh.boundary_edges().tolist()}
    if abs(area - area_poly) > 1e-9 * area_poly or want != have:
        diag["missing_edges"] = len(want - have)
        raise MeshFailure("delaunay mesh does not recover the boundary", diag)
    mesh.diagnostics = diag
    return mesh


# ---------------------------------------------------------------------------


def triangulate(support, h: float, mode: str = "auto") -> TriMesh:
    """Conforming P1 mesh of a bounded support with target edge length ``h``.

    ``mode`` is "auto", "structured" or "delaunay".
    """
    if not h > 0:
        raise MeshFailure("h must be positive", {"h": h})
    if not support.bounded:
        raise MeshFailure("support must be bounded", {"h": h})
    base, rot, shift = _frame(support)
    structured = isinstance(base, Polygon) and _lattice_aligned(base, h)
    if mode == "structured" and not structured:
        raise MeshFailure("structured mode needs a lattice-aligned rectilinear polygon", {"h": h})
    if mode == "delaunay" or not structured:
        mesh = _delaunay(base, h)
    else:
        mesh = _structured(base, h)
    if rot != 1 or shift != 0:
        mesh = mesh.transformed(rot, shift)
    if np.any(mesh.signed_areas() <= 0):
        raise MeshFailure("inverted triangle", {"h": h})
    return mesh
