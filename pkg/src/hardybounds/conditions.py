"""Exterior-cone and exterior-cut-disk conditions, checked at boundary samples.

Cone condition: every boundary point ``w`` admits an infinite sector of
half-angle ``theta`` with vertex ``w`` that contains the whole domain.  For a
point ``w`` the smallest such angle is half the length of the minimal arc of
the unit circle covering all directions ``arg(z - w)``, ``z`` in the domain.

Cut-disk condition: every boundary point admits a placed copy of
``CutDiskExterior(a, theta)`` (origin moved to ``w``) containing the domain,
for some ``|theta| <= theta0``.  The checker is a sampled search, so a negative
answer only means that no placement was found at the chosen resolution.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameters, PointInsideDomain
from .geometry import (
    TWO_PI,
    Arc,
    Ray,
    Segment,
    as_complex,
    bounding_box,
    cis,
    contains,
    grid,
    normalize_angle,
    sample_boundary,
    signed_distance,
)

ARC_RESOLUTION = 2048


def worker_count() -> int:
    """Thread cap from ``HARDY_THREADS`` (default: 1)."""
    try:
        return max(1, int(os.environ.get("HARDY_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# angular hull
# ---------------------------------------------------------------------------


class AngularHull(NamedTuple):
    theta: float
    phi: float
    full_circle: bool = False


def _arc_between(da: float, db: float) -> tuple[float, float]:
    """Shorter closed arc between two directions as ``(start, length)``."""
    diff = normalize_angle(db - da)
    if diff >= 0:
        return da % TWO_PI, diff
    return db % TWO_PI, -diff


def _polyline_arcs(pts: np.ndarray, w: complex, tol: float) -> list[tuple[float, float]]:
    """Closed direction arcs subtended from ``w`` by consecutive chords."""
    pts = np.asarray(pts, dtype=complex)
    at_w = np.abs(pts - w) <= tol
    ang = np.angle(pts - w)
    p_w, q_w = at_w[:-1], at_w[1:]
    da, db = ang[:-1], ang[1:]
    diff = normalize_angle(np.atleast_1d(db - da))
    start = np.where(diff >= 0, da, db)
    length = np.abs(diff)
    # chords ending at w contribute the single direction to their far end
    start = np.where(p_w, db, np.where(q_w, da, start))
    length = np.where(p_w | q_w, 0.0, length)
    keep = ~(p_w & q_w)
    return list(zip(np.mod(start[keep], TWO_PI).tolist(), length[keep].tolist()))


def _subtended(piece, w: complex, tol: float) -> list[tuple[float, float]]:
    """Directions from ``w`` to the points of one boundary piece."""
    if isinstance(piece, Segment):
        if float(piece.distance(w)) <= tol:
            return []
        return _polyline_arcs(np.array([piece.a, piece.b]), w, tol)
    if isinstance(piece, Ray):
        if float(piece.distance(w)) <= tol:
            return []
        v = piece.origin - w
        dp = math.atan2(v.imag, v.real)
        du = math.atan2(piece.direction.imag, piece.direction.real)
        diff = normalize_angle(du - dp)
        return [(dp % TWO_PI, diff)] if diff >= 0 else [((dp + diff) % TWO_PI, -diff)]
    if isinstance(piece, Arc):
        m = max(64, int(math.ceil(ARC_RESOLUTION * piece.sweep / TWO_PI)))
        params = list(np.linspace(0.0, piece.sweep, m + 1))
        v = w - piece.center
        r = abs(v)
        gam = math.atan2(v.imag, v.real)
        extra = []
        if r > piece.radius * (1 + 1e-14):
            c = math.acos(piece.radius / r)
            extra = [gam + c, gam - c]
        elif abs(r - piece.radius) <= tol:
            extra = [gam]
        for t in extra:
            rel = (t - piece.start) % TWO_PI
            if rel <= piece.sweep:
                params.append(rel)
        params = np.unique(np.array(params))
        pts = piece.center + piece.radius * np.exp(1j * (piece.start + params))
        if piece.full:
            pts = np.append(pts, pts[0])
        if abs(r - piece.radius) <= tol:
            # snap the sample nearest to w onto w so chords emanate from it
            k = int(np.argmin(np.abs(pts - w)))
            pts[k] = w
            if piece.full:
                if k == 0:
                    pts[-1] = w
                elif k == len(pts) - 1:
                    pts[0] = w
        return _polyline_arcs(pts, w, tol)
    raise TypeError(type(piece))


def _largest_gap(intervals: list[tuple[float, float]]) -> tuple[float, float] | None:
    """Largest uncovered arc ``(start, length)``; ``None`` if the circle is covered."""
    if not intervals:
        return (0.0, TWO_PI)
    iv = sorted((s % TWO_PI, l) for s, l in intervals)
    iv = iv + [(s + TWO_PI, l) for s, l in iv]
    merged: list[list[float]] = []
    for s, l in iv:
        e = s + l
        if merged and s <= merged[-1][1] + 1e-15:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    if any(e - s >= TWO_PI - 1e-15 for s, e in merged):
        return None
    x0 = merged[0][0]
    best = None
    for (s0, e0), (s1, _) in zip(merged[:-1], merged[1:]):
        if x0 <= e0 < x0 + TWO_PI:
            g = s1 - e0
            if best is None or g > best[1]:
                best = (e0 % TWO_PI, g)
    return best


def _ray_misses(d, w: complex, direction: float) -> bool:
    t = d.scale * np.logspace(-8, 8, 4001)
    return not np.any(contains(d, w + t * cis(direction)))


def angular_hull(d, w) -> AngularHull:
    """Smallest sector ``K_theta(w, phi)`` containing the domain.

    Directions are collected from every boundary piece (exact for segments
    and rays, arcs are refined with their tangent points) and from the
    recession cone of unbounded domains; the minimal covering arc is the
    complement of the largest gap.
    """
    w = as_complex(w)
    if contains(d, w):
        raise PointInsideDomain(f"{w} lies inside the domain")
    tol = 1e-12 * max(d.scale, 1.0)
    intervals = []
    for p in d.pieces():
        intervals.extend(_subtended(p, w, tol))
    pinholes = []
    for c, hw in d.recession():
        if hw >= math.pi:
            pinholes.append(normalize_angle(c + math.pi))
            intervals.append(((c + math.pi) % TWO_PI, TWO_PI))
        else:
            intervals.append(((c - hw) % TWO_PI, 2 * hw))
    gap = _largest_gap(intervals)
    if gap is not None and gap[1] > 1e-12:
        start, length = gap
        return AngularHull(math.pi - length / 2, normalize_angle(start + length / 2 + math.pi))
    for p in pinholes:
        if _ray_misses(d, w, p):
            return AngularHull(math.pi, normalize_angle(p + math.pi))
    if gap is not None:
        start, length = gap
        if _ray_misses(d, w, start + length / 2):
            return AngularHull(math.pi, normalize_angle(start + length / 2 + math.pi))
    return AngularHull(math.pi, 0.0, True)


@dataclass
class ConeWitness:
    w: complex
    theta_w: float
    phi_w: float
    full_circle: bool = False


@dataclass
class ConeReport:
    theta_sup: float
    witnesses: list[ConeWitness]
    n_boundary_samples: int
    satisfied: bool = True

    @property
    def worst(self) -> ConeWitness:
        return max(self.witnesses, key=lambda c: c.theta_w)

    def to_dict(self) -> dict:
        return {
            "theta_sup": self.theta_sup,
            "satisfied": self.satisfied,
            "n_boundary_samples": self.n_boundary_samples,
            "witnesses": [
                {"w": [c.w.real, c.w.imag], "theta_w": c.theta_w, "phi_w": c.phi_w,
                 "full_circle": c.full_circle}
                for c in self.witnesses
            ],
        }


def check_cone_condition(d, n: int = 256, extent: float | None = None) -> ConeReport:
    """Sup of the angular hull over boundary samples (vertices always included)."""
    ws = sample_boundary(d, n, extent)

    def one(w):
        hull = angular_hull(d, w)
        return ConeWitness(complex(w), hull.theta, hull.phi, hull.full_circle)

    witnesses = _pmap(one, list(ws))
    theta_sup = max(c.theta_w for c in witnesses)
    return ConeReport(theta_sup, witnesses, len(ws), not any(c.full_circle for c in witnesses))


# ---------------------------------------------------------------------------
# cut-disk condition
# ---------------------------------------------------------------------------


def horseshoe_theta0(psi: float) -> float:
    """Cut-disk angle for the horseshoe: 0 for psi <= pi/2, else 2 psi - pi."""
    if not (0.0 < psi < math.pi):
        raise InvalidParameters(f"psi = {psi} not in (0, pi)")
    return 0.0 if psi <= math.pi / 2 else 2.0 * psi - math.pi


@dataclass
class CutDiskWitness:
    w: complex
    phi_w: float
    theta_used: float
    worst_violation_margin: float
    boundary_margin: float = 0.0

    @property
    def ok(self) -> bool:
        return self.worst_violation_margin > 0


@dataclass
class CutDiskReport:
    a: float
    theta0: float
    feasible: bool
    witnesses: list[CutDiskWitness] = field(default_factory=list)
    n_boundary_samples: int = 0
    n_domain_samples: int = 0

    @property
    def worst(self) -> CutDiskWitness:
        return min(self.witnesses, key=lambda c: c.worst_violation_margin)

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "theta0": self.theta0,
            "feasible": self.feasible,
            "n_boundary_samples": self.n_boundary_samples,
            "n_domain_samples": self.n_domain_samples,
            "witnesses": [
                {"w": [c.w.real, c.w.imag], "phi_w": c.phi_w, "theta_used": c.theta_used,
                 "worst_violation_margin": c.worst_violation_margin,
                 "boundary_margin": c.boundary_margin}
                for c in self.witnesses
            ],
        }


def cutdisk_margin(z, w: complex, phi, a: float, theta: float):
    """Signed clearance of ``z`` inside ``CutDiskExterior(a, theta)`` placed at
    ``(w, phi)``; broadcasts over ``phi`` (first axis) and ``z`` (last axis)."""
    phi = np.asarray(phi, dtype=float)[..., None]
    u = np.exp(-1j * phi) * (np.asarray(z, dtype=complex) - w) + a * cis(theta)
    r = np.abs(u)
    ray = np.where(u.real <= -a, np.abs(u.imag), np.abs(u + a))
    return np.where(r > a, np.minimum(r - a, ray), r - a)


def domain_samples(d, m: int) -> np.ndarray:
    """About ``m`` interior grid points of a bounded domain (deterministic)."""
    box = bounding_box(d)
    bw, bh = box[1] - box[0], box[3] - box[2]
    s0 = math.sqrt(bw * bh / (4 * m))
    frac = np.mean(contains(d, grid(box, s0)))
    s = math.sqrt(max(frac, 1e-6) * bw * bh / m)
    # offset by half a step so nodes avoid straight edges through the corner
    shifted = (box[0] + s / 2, box[1], box[2] + s / 2, box[3])
    z = grid(shifted, s)
    return z[contains(d, z)]


def inward_normals(d, w: complex, spread: int = 9) -> list[complex]:
    """Unit inward normals of the boundary pieces through ``w`` plus, at a
    corner, ``spread`` directions interpolating between them."""
    tol = 1e-9 * max(d.scale, 1.0)
    eps = 1e-6 * d.scale
    normals = []
    w = complex(w)
    for p in d.pieces():
        if float(p.distance(w)) > tol:
            continue
        if isinstance(p, Arc):
            n = (w - p.center) / abs(w - p.center)
            s_w = ((math.atan2(n.imag, n.real) - p.start) % TWO_PI) * p.radius
            step = eps if s_w < p.length / 2 or p.full else -eps
            base = complex(p.point_at(s_w + step))
        else:
            t = (p.b - p.a) if isinstance(p, Segment) else p.direction
            n = 1j * t / abs(t)
            mid = (p.a + p.b) / 2 if isinstance(p, Segment) else p.origin + p.direction * (abs(w - p.origin) + 1)
            # probe from a point of the piece next to w, away from any corner
            base = w if abs(mid - w) <= tol else w + eps * (mid - w) / abs(mid - w)
        if not contains(d, base + eps * 1e-2 * n) and contains(d, base - eps * 1e-2 * n):
            n = -n
        normals.append(n)
    if len(normals) >= 2:
        a0, a1 = (math.atan2(normals[0].imag, normals[0].real),
                  math.atan2(normals[1].imag, normals[1].real))
        diff = normalize_angle(a1 - a0)
        normals = [cis(a0 + diff * k / (spread - 1)) for k in range(spread)]
    return normals


def complement_samples(a: float, theta: float, reach: float, m: int = 4096) -> np.ndarray:
    """Points of the closed disk boundary and the cut of ``CutDiskExterior(a, theta)``
    (unplaced), the cut sampled up to distance ``reach`` from its start."""
    c = -a * cis(theta)
    circle = c + a * np.exp(1j * TWO_PI * np.arange(m) / m)
    cut = (c - a) - reach * np.arange(m // 2 + 1) / (m // 2)
    return np.concatenate([circle, cut])


def _penetration(d, w, phis, comp):
    """Deepest point of the placed complement inside ``d`` (signed distance)."""
    z = w + np.exp(1j * np.asarray(phis)[:, None]) * comp[None, :]
    return np.max(signed_distance(d, z), axis=1)


def _best_placement(d, w, a, thetas, interior, bnd, tol, n_phi, reach):
    best = None

    def consider(phis, theta):
        nonlocal best
        phis = np.asarray(phis, dtype=float)
        m_in = cutdisk_margin(interior, w, phis, a, theta).min(axis=1)
        m_bd = cutdisk_margin(bnd, w, phis, a, theta).min(axis=1)
        pen = np.full(len(phis), np.inf)
        cand = (m_in > 0) & (m_bd >= -tol)
        if cand.any():
            pen[cand] = _penetration(d, w, phis[cand], complement_samples(a, theta, reach))
        good = cand & (pen <= tol)
        score = np.where(good, m_in, np.minimum(np.minimum(m_in, m_bd), np.where(cand, -pen, np.inf)))
        k = int(np.argmax(score))
        c = (float(score[k]), float(normalize_angle(phis[k])), float(theta), float(m_bd[k]))
        if best is None or c[0] > best[0]:
            best = c

    normals = inward_normals(d, w)
    for theta in thetas:
        if normals:
            consider([math.atan2(nu.imag, nu.real) - theta for nu in normals], theta)
        if best is not None and best[0] > 0:
            break
    if best is None or best[0] <= 0:
        grid_phi = -math.pi + TWO_PI * (np.arange(n_phi) + 1) / n_phi
        for theta in thetas:
            consider(grid_phi, theta)
            if best[0] > 0:
                break
    return CutDiskWitness(complex(w), best[1], best[2], best[0], best[3])


def check_cutdisk_condition(d, a: float, theta0: float, n: int = 256, n_phi: int = 128,
                            n_theta: int = 16, n_inner: int = 4096) -> CutDiskReport:
    """Search placements of the cut-disk exterior at each boundary sample.

    For every boundary sample ``w`` the inward normals at ``w`` are tried
    first (tangent placements), then a uniform ``phi`` grid; ``theta`` runs
    over ``+-linspace(0, theta0, n_theta)``.  A placement is accepted when
    every interior sample has positive clearance and every boundary sample
    has clearance ``>= -tol``.
    """
    if not (a > 0 and math.isfinite(a)):
        raise InvalidParameters(f"a = {a} must be positive")
    if not (0.0 <= theta0 < math.pi):
        raise InvalidParameters(f"theta0 = {theta0} not in [0, pi)")
    if not d.bounded:
        raise InvalidParameters("cut-disk check needs a bounded domain")
    ws = sample_boundary(d, n)
    interior = domain_samples(d, n_inner)
    bnd = sample_boundary(d, 4 * n)
    tol = 1e-9 * max(a, d.scale)
    pos = np.linspace(0.0, theta0, n_theta) if theta0 > 0 else np.array([0.0])
    thetas = np.unique(np.concatenate([pos, -pos]))
    thetas = thetas[np.argsort(np.abs(thetas), kind="stable")]

    box = bounding_box(d)
    reach = 2.0 * math.hypot(box[1] - box[0], box[3] - box[2]) + 4.0 * a
    witnesses = _pmap(lambda w: _best_placement(d, complex(w), a, thetas, interior, bnd, tol,
                                                n_phi, reach), list(ws))
    feasible = all(c.ok for c in witnesses)
    return CutDiskReport(a, theta0, feasible, witnesses, len(ws), len(interior))
