"""Finite-element upper bounds for the sharp Hardy constant.

For a mesh of a support region inside the domain, the smallest eigenvalue of

    A u = lambda B u,   A_ij = int grad phi_i . grad phi_j,
                        B_ij = int phi_i phi_j / delta^2,

over P1 functions vanishing on the support boundary bounds the sharp constant
``inf int |grad u|^2 / int u^2/delta^2`` from above: every discrete function,
extended by zero, is an admissible test function.  ``delta`` is always the
distance to the complement of the *distance domain*, which may be unbounded
while the support is a truncation of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    MeshFailure,
    NoConvergence,
    QuadraturePointOutsideDomain,
    SupportNotContained,
    UnboundedDomainNoRegion,
)
from .geometry import (
    HalfPlane,
    Placed,
    Polygon,
    Sector,
    cis,
    contains,
    in_radius,
)
from .mesh import TriMesh, triangulate

# barycentric coordinates of the strictly interior 3-point rule, weights area/3
QUAD_BARY = np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]])
DEFAULT_TOL = 1e-8
DEFAULT_RADIUS = 4.0

# reference values the estimates are regressed against (upper-bound direction)
CUT_PLANE_SHARP_R2 = 0.20538
CONVEX_SHARP_R2 = 0.25


class Assembled(NamedTuple):
    A: sp.csr_matrix
    B: sp.csr_matrix
    free: np.ndarray  # indices of the unknowns in the mesh numbering


def dirichlet_mask(mesh: TriMesh, distance_domain) -> np.ndarray:
    """Nodes pinned to zero: support boundary and nodes outside the domain (slits)."""
    return mesh.is_boundary | ~contains(distance_domain, mesh.vertices)


def quadrature_points(mesh: TriMesh) -> np.ndarray:
    return mesh.vertices[mesh.triangles] @ QUAD_BARY.T


def assemble(mesh: TriMesh, distance_domain) -> Assembled:
    """Stiffness (exact) and ``1/delta^2``-weighted mass matrices on free nodes."""
    p = mesh.vertices[mesh.triangles]
    x, y = p.real, p.imag
    area = mesh.signed_areas()
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], 1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], 1)
    K = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4 * area[:, None, None])

    q = quadrature_points(mesh)
    inside = contains(distance_domain, q.ravel())
    if not np.all(inside):
        raise QuadraturePointOutsideDomain(f"{int((~inside).sum())} quadrature points outside")
    delta = distance_domain.distance_to_boundary(q.ravel()).reshape(q.shape)
    w = (area[:, None] / 3) / delta**2  # (m, 3 points)
    M = np.einsum("tq,qi,qj->tij", w, QUAD_BARY, QUAD_BARY)

    n = mesh.n_vertices
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    A = sp.coo_matrix((K.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    B = sp.coo_matrix((M.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    free = np.flatnonzero(~dirichlet_mask(mesh, distance_domain))
    if len(free) == 0:
        raise MeshFailure("mesh has no free nodes", {"h": mesh.h, "n_vertices": n})
    return Assembled(A[free][:, free].tocsr(), B[free][:, free].tocsr(), free)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def make_preconditioner(A, kind: str = "lu"):
    """``None``, Jacobi or a sparse LU factorization used as ``M^{-1}``."""
    if kind == "none":
        return None
    if kind == "jacobi":
        d = A.diagonal()
        return lambda r: r / d
    if kind == "lu":
        return spla.splu(sp.csc_matrix(A)).solve
    raise ValueError(f"unknown preconditioner {kind!r}")


def pcg(A, b, precond=None, x0=None, tol: float = 1e-13, maxiter: int | None = None):
    """Preconditioned conjugate gradients; returns ``(x, iterations)``."""
    n = len(b)
    maxiter = 10 * n if maxiter is None else maxiter
    x = np.zeros(n) if x0 is None else x0.copy()
    r = b - A @ x
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return x, 0
    z = precond(r) if precond else r
    p = z.copy()
    rz = r @ z
    for k in range(1, maxiter + 1):
        Ap = A @ p
        alpha = rz / (p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        if np.linalg.norm(r) <= tol * bnorm:
            return x, k
        z = precond(r) if precond else r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise NoConvergence("inner CG did not converge", maxiter, float(np.linalg.norm(r) / bnorm))


class EigenResult(NamedTuple):
    value: float
    vector: np.ndarray
    iterations: int
    residual: float


def smallest_eigenvalue(A, B, tol: float = DEFAULT_TOL, max_iter: int = 10_000,
                        precond: str = "lu") -> EigenResult:
    """Inverse power iteration for the smallest ``lambda`` of ``A x = lambda B x``.

    Starts from the all-ones vector, solves ``A y = B x`` with PCG and stops
    once both the relative change of the Rayleigh quotient and the relative
    residual ``|A x - lambda B x| / |A x|`` are below ``tol``.
    """
    A = sp.csr_matrix(A)
    B = sp.csr_matrix(B)
    M = make_preconditioner(A, precond)
    x = np.ones(A.shape[0])
    x /= math.sqrt(x @ (B @ x))
    lam = float(x @ (A @ x))
    for k in range(1, max_iter + 1):
        y, _ = pcg(A, B @ x, M, x0=x / lam)
        x = y / math.sqrt(y @ (B @ y))
        Ax, Bx = A @ x, B @ x
        lam_new = float(x @ Ax)
        res = float(np.linalg.norm(Ax - lam_new * Bx) / np.linalg.norm(Ax))
        change = abs(lam_new - lam) / abs(lam_new)
        lam = lam_new
        if (change < tol and res < tol) or res < 1e-14:
            return EigenResult(lam, x, k, res)
    raise NoConvergence("inverse iteration did not converge", max_iter, res)


# ---------------------------------------------------------------------------
# estimates
# ---------------------------------------------------------------------------


def truncated_support(d, radius: float = DEFAULT_RADIUS):
    """Bounded support for an unbounded domain, ``radius`` times its feature scale.

    The slit plane gets the square ``[-R, R]^2`` (nodes on the slit are pinned
    by the distance domain); half-planes and sectors get polygonal truncations.
    """
    if d.bounded:
        return d
    R = radius * d.scale
    if isinstance(d, Placed):
        return Placed(truncated_support(d.base, radius), d.placement)
    if isinstance(d, Sector) and d.theta == math.pi:
        return Polygon([complex(-R, -R), complex(R, -R), complex(R, R), complex(-R, R)])
    if isinstance(d, HalfPlane):
        return Polygon([complex(0, -R), complex(R, -R), complex(R, R), complex(0, R)])
    if isinstance(d, Sector):
        m = max(8, math.ceil(64 * d.theta / math.pi))
        arc = [R * cis(-d.theta + 2 * d.theta * k / m) for k in range(m + 1)]
        return Polygon([0j] + arc)
    raise UnboundedDomainNoRegion(f"no truncation rule for {type(d).__name__}")


def check_support(distance_domain, support, m: int = 4096) -> None:
    from .conditions import domain_samples

    z = domain_samples(support, m)
    bad = ~contains(distance_domain, z)
    if np.any(bad):
        raise SupportNotContained(f"{int(bad.sum())} of {len(z)} support samples outside the domain")


@dataclass
class RayleighEstimate:
    lambda_h: float
    h: float
    iterations: int
    residual: float
    certificate_compared: tuple[float, float] | None = None
    mode: str = ""
    h_eff: float = 0.0
    n_dofs: int = 0
    tol: float = DEFAULT_TOL
    mesh: TriMesh | None = field(default=None, repr=False)
    ground_mode: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        cc = self.certificate_compared
        return {
            "lambda_h": self.lambda_h,
            "h": self.h,
            "h_eff": self.h_eff,
            "iterations": self.iterations,
            "residual": self.residual,
            "tol": self.tol,
            "mode": self.mode,
            "n_dofs": self.n_dofs,
            "certificate_compared": None if cc is None else {"r_squared": cc[0], "margin": cc[1]},
        }


def _effective_h(support, h: float, mode: str) -> float:
    if mode == "structured":
        return h
    ir = in_radius(support, min(h, support.scale / 64) / 4)
    return min(h, ir.lower / 2)


def hardy_quotient_estimate(distance_domain, support=None, h: float = 1 / 16, *,
                            tol: float = DEFAULT_TOL, radius: float = DEFAULT_RADIUS,
                            certificate=None, precond: str = "lu",
                            mesh_mode: str = "auto") -> RayleighEstimate:
    """Upper bound ``lambda_h`` for the sharp Hardy constant of ``distance_domain``.

    ``support`` defaults to the domain itself (bounded) or to
    :func:`truncated_support`.  For unstructured meshes the edge length is
    capped at half the in-radius so thin domains keep interior nodes.
    """
    if support is None:
        support = truncated_support(distance_domain, radius)
    check_support(distance_domain, support)
    mesh = triangulate(support, h, mesh_mode)
    if mesh.mode == "delaunay":
        h_eff = _effective_h(support, h, mesh.mode)
        if h_eff < h:
            mesh = triangulate(support, h_eff, mesh_mode)
    else:
        h_eff = h
    sysm = assemble(mesh, distance_domain)
    eig = smallest_eigenvalue(sysm.A, sysm.B, tol=tol, precond=precond)
    vec = np.zeros(mesh.n_vertices)
    vec[sysm.free] = eig.vector
    if vec.sum() < 0:
        vec = -vec
    cc = None
    if certificate is not None:
        r2 = certificate.r_squared
        cc = (r2, eig.value - r2)
    return RayleighEstimate(eig.value, h, eig.iterations, eig.residual, cc, mesh.mode, h_eff,
                            len(sysm.free), tol, mesh, vec)


def refinement_study(distance_domain, support, h_list, **kw) -> list[RayleighEstimate]:
    """Estimates along a list of decreasing mesh sizes."""
    hs = list(h_list)
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("h_list must be strictly decreasing")
    return [hardy_quotient_estimate(distance_domain, support, h, **kw) for h in hs]
