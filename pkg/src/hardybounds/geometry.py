"""Planar domains: membership, distance to the boundary, in-radius, sampling.

Points are Python/numpy complex numbers (``x + iy``).  Every domain variant is
a frozen dataclass that knows its boundary as a short list of primitive pieces
(segments, rays, circular arcs).  For an interior point the distance to the
complement equals the distance to the boundary, so ``boundary_distance`` is the
minimum over the pieces and is exact for every variant.

Angles follow the principal convention ``arg z in (-pi, pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidDomain,
    PointOutsideDomain,
    SpecParseError,
    UnboundedDomainNoRegion,
)

TWO_PI = 2.0 * math.pi

# points closer than BOUNDARY_RTOL * domain.scale to the boundary are outside
BOUNDARY_RTOL = 1e-12


def normalize_angle(phi):
    """Map an angle (scalar or array) to (-pi, pi]."""
    out = np.mod(-np.asarray(phi, dtype=float) + math.pi, TWO_PI)
    out = math.pi - out
    if np.ndim(out) == 0:
        return float(out)
    return out


def as_complex(p) -> complex:
    """Accept complex, (x, y) pairs or objects with ``re``/``im``."""
    if isinstance(p, (complex, float, int, np.number)) or np.ndim(p) == 0 and isinstance(p, np.ndarray):
        return complex(p)
    if hasattr(p, "re") and hasattr(p, "im"):
        return complex(p.re, p.im)
    x, y = p
    return complex(float(x), float(y))


def cis(t: float) -> complex:
    """``e^{it}``, exact at multiples of pi/2."""
    q = t / (math.pi / 2)
    if q == round(q):
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(round(q)) % 4]
    return complex(math.cos(t), math.sin(t))


def _cross(a, b):
    return a.real * b.imag - a.imag * b.real


# ---------------------------------------------------------------------------
# boundary primitives
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    @property
    def length(self) -> float:
        return abs(self.b - self.a)

    def closest(self, z):
        z = np.asarray(z, dtype=complex)
        d = self.b - self.a
        t = np.clip(((z - self.a) * np.conj(d)).real / (abs(d) ** 2), 0.0, 1.0)
        return self.a + t * d

    def distance(self, z):
        return np.abs(np.asarray(z, dtype=complex) - self.closest(z))

    def point_at(self, s):
        return self.a + (self.b - self.a) * (np.asarray(s, dtype=float) / self.length)

    def transformed(self, rot: complex, shift: complex, scale: float = 1.0) -> "Segment":
        return Segment(scale * rot * self.a + shift, scale * rot * self.b + shift)

    def endpoints(self):
        return [self.a, self.b]


@dataclass(frozen=True)
class Ray:
    origin: complex
    direction: complex  # unit vector

    length = math.inf

    def closest(self, z):
        z = np.asarray(z, dtype=complex)
        t = np.maximum(((z - self.origin) * np.conj(self.direction)).real, 0.0)
        return self.origin + t * self.direction

    def distance(self, z):
        return np.abs(np.asarray(z, dtype=complex) - self.closest(z))

    def point_at(self, s):
        return self.origin + self.direction * np.asarray(s, dtype=float)

    def transformed(self, rot: complex, shift: complex, scale: float = 1.0) -> "Ray":
        return Ray(scale * rot * self.origin + shift, rot * self.direction)

    def truncated(self, extent: float) -> Segment:
        return Segment(self.origin, self.origin + extent * self.direction)

    def endpoints(self):
        return [self.origin]


@dataclass(frozen=True)
class Arc:
    """Counter-clockwise arc from angle ``start`` through ``sweep`` radians."""

    center: complex
    radius: float
    start: float
    sweep: float

    @property
    def length(self) -> float:
        return self.radius * self.sweep

    @property
    def full(self) -> bool:
        return self.sweep >= TWO_PI - 1e-15

    def _rel_angle(self, z):
        return np.mod(np.angle(np.asarray(z, dtype=complex) - self.center) - self.start, TWO_PI)

    def point_at(self, s):
        t = self.start + np.asarray(s, dtype=float) / self.radius
        return self.center + self.radius * np.exp(1j * t)

    def endpoints(self):
        if self.full:
            return []
        return [self.point_at(0.0), self.point_at(self.length)]

    def closest(self, z):
        z = np.asarray(z, dtype=complex)
        u = z - self.center
        radial = self.center + self.radius * np.exp(1j * np.angle(u))
        if self.full:
            return radial
        on = self._rel_angle(z) <= self.sweep
        p0, p1 = self.point_at(0.0), self.point_at(self.length)
        ends = np.where(np.abs(z - p0) <= np.abs(z - p1), p0, p1)
        return np.where(on, radial, ends)

    def distance(self, z):
        z = np.asarray(z, dtype=complex)
        return np.abs(z - self.closest(z))

    def transformed(self, rot: complex, shift: complex, scale: float = 1.0) -> "Arc":
        return Arc(scale * rot * self.center + shift, scale * self.radius,
                   float(normalize_angle(self.start + np.angle(rot))), self.sweep)

    def bbox(self):
        pts = [self.point_at(0.0), self.point_at(self.length)] if not self.full else []
        for k in range(4):
            t = k * math.pi / 2
            if self.full or (t - self.start) % TWO_PI <= self.sweep:
                pts.append(self.center + self.radius * complex(math.cos(t), math.sin(t)))
        return pts


Piece = Segment | Ray | Arc


# ---------------------------------------------------------------------------
# domain variants
# ---------------------------------------------------------------------------


class _Domain:
    """Shared behaviour; subclasses provide ``_inside``, ``pieces`` etc."""

    bounded = True

    def recession(self) -> list[tuple[float, float]]:
        """Open arcs ``(center, half_width)`` of directions escaping to infinity."""
        return []

    def corners(self) -> list[complex]:
        return []

    def distance_to_boundary(self, z):
        """Distance to the boundary set, no membership check (vectorized)."""
        z = np.asarray(z, dtype=complex)
        return np.minimum.reduce([p.distance(z) for p in self.pieces()])

    @property
    def boundary_tol(self) -> float:
        return BOUNDARY_RTOL * self.scale


@dataclass(frozen=True)
class Polygon(_Domain):
    """Simple polygon; vertices are stored counter-clockwise."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(as_complex(v) for v in self.vertices)
        if len(vs) < 3:
            raise InvalidDomain("polygon needs at least 3 vertices")
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vs):
            raise InvalidDomain("polygon vertices must be finite")
        area = _signed_area(vs)
        if abs(area) <= 1e-300:
            raise InvalidDomain("polygon has zero area")
        if area < 0:
            vs = vs[::-1]
        _check_simple(vs)
        object.__setattr__(self, "vertices", vs)

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def scale(self) -> float:
        v = np.array(self.vertices)
        return float(max(np.ptp(v.real), np.ptp(v.imag)))

    def pieces(self):
        vs = self.vertices
        return [Segment(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def corners(self):
        return list(self.vertices)

    def _inside(self, z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        inside = np.zeros(z.shape, dtype=bool)
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            crosses = (a.imag > y) != (b.imag > y)
            dy = b.imag - a.imag
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = a.real + (b.real - a.real) * (y - a.imag) / (dy if dy != 0 else 1.0)
            inside ^= crosses & (x < xint)
        return inside

    def to_dict(self):
        return {"kind": "polygon", "vertices": [[v.real, v.imag] for v in self.vertices]}


@dataclass(frozen=True)
class Sector(_Domain):
    """The open sector ``|arg z| < theta``; ``Sector(pi)`` is the slit plane."""

    theta: float

    bounded = False
    scale = 1.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise InvalidDomain(f"sector angle {self.theta} not in [0, pi]")

    def pieces(self):
        up = Ray(0j, cis(self.theta))
        if self.theta == math.pi or self.theta == 0.0:
            return [up]
        return [up, Ray(0j, up.direction.conjugate())]

    def recession(self):
        return [(0.0, self.theta)]

    def corners(self):
        return [0j]

    def _inside(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.abs(np.angle(z)) < self.theta) & (z != 0)

    def to_dict(self):
        return {"kind": "sector", "theta": self.theta}


def CutPlane() -> Sector:
    """The plane minus the closed negative real semi-axis."""
    return Sector(math.pi)


@dataclass(frozen=True)
class HalfPlane(_Domain):
    """The right half-plane ``Re z > 0``."""

    bounded = False
    scale = 1.0

    def pieces(self):
        return [Ray(0j, 1j), Ray(0j, -1j)]

    def recession(self):
        return [(0.0, math.pi / 2)]

    def corners(self):
        return [0j]

    def _inside(self, z):
        return np.asarray(z, dtype=complex).real > 0

    def to_dict(self):
        return {"kind": "halfplane"}


@dataclass(frozen=True)
class Disk(_Domain):
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", as_complex(self.center))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise InvalidDomain("disk radius must be positive")

    @property
    def scale(self) -> float:
        return self.radius

    def pieces(self):
        return [Arc(self.center, self.radius, 0.0, TWO_PI)]

    def _inside(self, z):
        return np.abs(np.asarray(z, dtype=complex) - self.center) < self.radius

    def to_dict(self):
        return {"kind": "disk", "center": [self.center.real, self.center.imag],
                "radius": self.radius}


@dataclass(frozen=True)
class CutDiskExterior(_Domain):
    """Exterior of the disk ``|z + a e^{i theta}| <= a`` minus the cut
    ``z + a e^{i theta} in (-inf, -a]``; the origin lies on the circle."""

    a: float
    theta: float

    bounded = False

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise InvalidDomain("cut-disk radius a must be positive")
        if not (-math.pi < self.theta < math.pi):
            raise InvalidDomain(f"cut-disk angle {self.theta} not in (-pi, pi)")

    @property
    def scale(self) -> float:
        return self.a

    @property
    def center(self) -> complex:
        return -self.a * cis(self.theta)

    def pieces(self):
        c = self.center
        return [Arc(c, self.a, self.theta, TWO_PI), Ray(c - self.a, -1.0 + 0j)]

    def recession(self):
        return [(0.0, math.pi)]

    def corners(self):
        return [0j, self.center - self.a]

    def _inside(self, z):
        u = np.asarray(z, dtype=complex) - self.center
        return (np.abs(u) > self.a) & (np.abs(np.angle(u)) < math.pi)

    def to_dict(self):
        return {"kind": "cutdisk_exterior", "a": self.a, "theta": self.theta}


@dataclass(frozen=True)
class Horseshoe(_Domain):
    """``rho < |z| < rho + delta, |arg z| < psi, Re z > rho cos psi``."""

    rho: float
    delta: float
    psi: float

    def __post_init__(self):
        if not (self.rho > 0 and self.delta > 0):
            raise InvalidDomain("horseshoe needs rho > 0 and delta > 0")
        if not (0.0 < self.psi < math.pi):
            raise InvalidDomain(f"horseshoe angle {self.psi} not in (0, pi)")

    @property
    def scale(self) -> float:
        return self.rho + self.delta

    @property
    def outer_angle(self) -> float:
        """Half-angle of the outer arc (the ends are vertical when psi > pi/2)."""
        if self.psi <= math.pi / 2:
            return self.psi
        x = self.rho * math.cos(self.psi)
        y = math.sqrt((self.rho + self.delta) ** 2 - x * x)
        return math.atan2(y, x)

    def pieces(self):
        r0, r1, psi = self.rho, self.rho + self.delta, self.psi
        po = self.outer_angle
        inner = Arc(0j, r0, -psi, 2 * psi)
        outer = Arc(0j, r1, -po, 2 * po)
        c_in = r0 * cis(psi)
        c_out = r1 * cis(po)
        return [inner, Segment(c_in, c_out), outer, Segment(c_out.conjugate(), c_in.conjugate())]

    def corners(self):
        out = []
        for p in self.pieces():
            if isinstance(p, Segment):
                out.extend([p.a, p.b])
        return out

    def _inside(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return ((r > self.rho) & (r < self.rho + self.delta)
                & (np.abs(np.angle(z)) < self.psi)
                & (z.real > self.rho * math.cos(self.psi)))

    def to_dict(self):
        return {"kind": "horseshoe", "rho": self.rho, "delta": self.delta, "psi": self.psi}


@dataclass(frozen=True)
class Placement:
    """Rigid motion ``z -> e^{i phi} z + w``."""

    w: complex = 0j
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "w", as_complex(self.w))
        object.__setattr__(self, "phi", normalize_angle(self.phi))

    @property
    def rot(self) -> complex:
        return cis(self.phi)

    def forward(self, z):
        return self.rot * np.asarray(z, dtype=complex) + self.w

    def inverse(self, z):
        return np.conj(self.rot) * (np.asarray(z, dtype=complex) - self.w)


@dataclass(frozen=True)
class Placed(_Domain):
    """``base`` rotated by ``placement.phi`` then translated by ``placement.w``."""

    base: object
    placement: Placement = field(default_factory=Placement)

    @property
    def bounded(self):
        return self.base.bounded

    @property
    def scale(self):
        return self.base.scale

    def pieces(self):
        pl = self.placement
        return [p.transformed(pl.rot, pl.w) for p in self.base.pieces()]

    def recession(self):
        return [(normalize_angle(c + self.placement.phi), hw) for c, hw in self.base.recession()]

    def corners(self):
        return [complex(self.placement.forward(c)) for c in self.base.corners()]

    def _inside(self, z):
        return self.base._inside(self.placement.inverse(z))

    def to_dict(self):
        w = self.placement.w
        return {"kind": "placed", "base": self.base.to_dict(), "w": [w.real, w.imag],
                "phi": self.placement.phi}


DomainSpec = Polygon | Sector | HalfPlane | Disk | CutDiskExterior | Horseshoe | Placed


@dataclass(frozen=True)
class IntervalEstimate:
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)) or self.lower > self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


# ---------------------------------------------------------------------------
# polygon helpers
# ---------------------------------------------------------------------------


def _signed_area(vs: Sequence[complex]) -> float:
    n = len(vs)
    return 0.5 * sum(_cross(vs[i], vs[(i + 1) % n]) for i in range(n))


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _cross(q2 - q1, p1 - q1)
    d2 = _cross(q2 - q1, p2 - q1)
    d3 = _cross(p2 - p1, q1 - p1)
    d4 = _cross(p2 - p1, q2 - p1)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True

    def on(a, b, c):
        return (min(a.real, b.real) <= c.real <= max(a.real, b.real)
                and min(a.imag, b.imag) <= c.imag <= max(a.imag, b.imag))

    return ((d1 == 0 and on(q1, q2, p1)) or (d2 == 0 and on(q1, q2, p2))
            or (d3 == 0 and on(p1, p2, q1)) or (d4 == 0 and on(p1, p2, q2)))


def _check_simple(vs: Sequence[complex]) -> None:
    n = len(vs)
    if len(set(vs)) != n:
        raise InvalidDomain("polygon has repeated vertices")
    for i in range(n):
        a1, a2 = vs[i], vs[(i + 1) % n]
        for j in range(i + 1, n):
            b1, b2 = vs[j], vs[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges may only share their common vertex
                shared = a2 if j == i + 1 else a1
                other_a = a1 if j == i + 1 else a2
                other_b = b2 if j == i + 1 else b1
                if _cross(other_a - shared, other_b - shared) == 0 and \
                        ((other_a - shared) * np.conj(other_b - shared)).real > 0:
                    raise InvalidDomain("polygon has overlapping adjacent edges")
                continue
            if _segments_intersect(a1, a2, b1, b2):
                raise InvalidDomain("polygon is not simple")


def is_convex(d) -> bool:
    if isinstance(d, Placed):
        return is_convex(d.base)
    if isinstance(d, Polygon):
        vs = d.vertices
        n = len(vs)
        return all(_cross(vs[(i + 1) % n] - vs[i], vs[(i + 2) % n] - vs[(i + 1) % n]) >= 0
                   for i in range(n))
    if isinstance(d, (Disk, HalfPlane)):
        return True
    if isinstance(d, Sector):
        return d.theta <= math.pi / 2
    return False


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def _prep(p):
    if isinstance(p, tuple) or np.ndim(p) == 0:
        return np.asarray(as_complex(p)), True
    return np.asarray(p, dtype=complex), False


def contains(d, p):
    """True iff ``p`` lies in the open domain; boundary points are outside.

    Accepts a scalar point (complex or ``(x, y)``) or an array of complex points.
    """
    z, scalar = _prep(p)
    ok = d._inside(z) & (d.distance_to_boundary(z) > d.boundary_tol)
    return bool(ok) if scalar else ok


def transform_contains(d, pl: Placement, p):
    return contains(Placed(d, pl), p)


def boundary_distance(d, p):
    """Distance from an interior point (or array of points) to the complement."""
    z, scalar = _prep(p)
    inside = contains(d, z)
    if not np.all(inside):
        raise PointOutsideDomain(f"point(s) not inside the domain: {z[~inside][:3] if z.ndim else z}")
    dist = d.distance_to_boundary(z)
    return float(dist) if scalar else dist


def signed_distance(d, z):
    """Positive inside, negative outside (vectorized, no checks)."""
    z = np.asarray(z, dtype=complex)
    dist = d.distance_to_boundary(z)
    return np.where(d._inside(z), dist, -dist)


def bounding_box(d) -> tuple[float, float, float, float]:
    if not d.bounded:
        raise UnboundedDomainNoRegion("unbounded domain has no bounding box")
    pts = []
    for p in d.pieces():
        if isinstance(p, Arc):
            pts.extend(p.bbox())
        else:
            pts.extend(p.endpoints())
    pts = np.array(pts)
    return (float(pts.real.min()), float(pts.real.max()),
            float(pts.imag.min()), float(pts.imag.max()))


def grid(region, s: float):
    """Nodes of a grid with spacing ``s`` anchored at the region's lower-left corner."""
    xmin, xmax, ymin, ymax = region
    nx = int(math.floor((xmax - xmin) / s + 1e-9)) + 1
    ny = int(math.floor((ymax - ymin) / s + 1e-9)) + 1
    xs = xmin + s * np.arange(nx + 1)
    ys = ymin + s * np.arange(ny + 1)
    X, Y = np.meshgrid(xs, ys)
    return (X + 1j * Y).ravel()


def canonical_frame(d):
    """``(base, rot, shift)`` with ``d = rot * base + shift``; polygons get vertex 0
    at the origin and edge 0 along +x, so the base is the same for congruent copies."""
    if isinstance(d, Placed):
        base, rot, shift = canonical_frame(d.base)
        pl = d.placement
        return base, pl.rot * rot, pl.rot * shift + pl.w
    if isinstance(d, Polygon):
        v = np.asarray(d.vertices, dtype=complex)
        e = v[1] - v[0]
        rot = e / abs(e)
        return Polygon(list(np.conj(rot) * (v - v[0]))), rot, complex(v[0])
    if isinstance(d, Disk):
        return Disk(0j, d.radius), 1 + 0j, d.center
    return d, 1 + 0j, 0j


def in_radius(d, s: float, region=None) -> IntervalEstimate:
    """Certified enclosure of ``sup delta`` from a grid of spacing ``s``.

    If the grid maximum is ``m`` then ``m <= delta_in <= m + s*sqrt(2)/2`` since
    ``delta`` is 1-Lipschitz and every point is within ``s/sqrt(2)`` of a node.
    Without an explicit region the grid lives in the canonical frame, so the
    estimate does not depend on where the domain is placed.
    """
    if s <= 0:
        raise ValueError("grid spacing must be positive")
    if region is None:
        d = canonical_frame(d)[0]
        if not d.bounded:
            raise UnboundedDomainNoRegion("in_radius of an unbounded domain needs a region")
        region = bounding_box(d)
    z = grid(region, s)
    inside = contains(d, z)
    m = float(d.distance_to_boundary(z[inside]).max()) if inside.any() else 0.0
    return IntervalEstimate(m, m + s * math.sqrt(2.0) / 2.0)


def _finite_pieces(d, extent: float | None):
    pieces = d.pieces()
    if d.bounded:
        return pieces
    ext = 4.0 * d.scale if extent is None else extent
    return [p.truncated(ext) if isinstance(p, Ray) else p for p in pieces]


def boundary_chain(d, extent: float | None = None) -> list[tuple[object, bool]]:
    """Finite boundary pieces ordered head to tail as ``(piece, reversed)`` pairs.

    Bounded boundaries form one closed loop; unbounded ones keep their native
    order with rays truncated at ``extent``.
    """
    pieces = list(_finite_pieces(d, extent))
    if not d.bounded or len(pieces) == 1:
        return [(p, False) for p in pieces]
    out = [(pieces[0], False)]
    end = pieces[0].endpoints()[1]
    rest = pieces[1:]
    while rest:
        for k, p in enumerate(rest):
            a, b = p.endpoints()
            if abs(a - end) < 1e-9 * max(1.0, abs(end)):
                out.append((p, False))
                end = b
                break
            if abs(b - end) < 1e-9 * max(1.0, abs(end)):
                out.append((p, True))
                end = a
                break
        else:
            raise InvalidDomain("boundary pieces do not form a closed chain")
        rest.pop(k)
    return out


def sample_boundary(d, n: int, extent: float | None = None) -> np.ndarray:
    """Boundary points spaced uniformly by arc length along the boundary loop,
    plus every corner.

    Uniform positions ``j * P / n`` along the chained pieces are nested under
    doubling of ``n``.  Unbounded pieces are truncated at ``extent`` (default
    four times the domain scale).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    chain = boundary_chain(d, extent)
    lengths = np.array([p.length for p, _ in chain])
    total = float(lengths.sum())
    starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    pos = total * np.arange(n) / n
    pts, keys = [], []
    for k, (p, rev) in enumerate(chain):
        sel = (pos >= starts[k]) & (pos < starts[k] + lengths[k])
        local = pos[sel] - starts[k]
        at = lengths[k] - local if rev else local
        pts.extend(np.atleast_1d(p.point_at(at)).tolist())
        keys.extend((starts[k] + local).tolist())
        ends = p.endpoints()
        if rev:
            ends = ends[::-1]
        for j, c in enumerate(ends):
            pts.append(complex(c))
            keys.append(starts[k] + (lengths[k] if j else 0.0))
    order = np.argsort(np.array(keys), kind="stable")
    tol = 1e-12 * max(d.scale, 1.0)
    out = np.empty(0, dtype=complex)
    for i in order:
        z = pts[i]
        if not np.any(np.abs(out - z) <= tol):
            out = np.append(out, z)
    return out


def perimeter(d, extent: float | None = None) -> float:
    return float(sum(p.length for p in _finite_pieces(d, extent)))


# ---------------------------------------------------------------------------
# rigid motions, scaling, serialization
# ---------------------------------------------------------------------------


def rigid_motion(d, phi: float = 0.0, shift: complex = 0j):
    """The image of ``d`` under ``z -> e^{i phi} z + shift``."""
    rot = cis(phi)
    shift = as_complex(shift)
    if isinstance(d, Polygon):
        return Polygon(tuple(rot * v + shift for v in d.vertices))
    if isinstance(d, Disk):
        return Disk(rot * d.center + shift, d.radius)
    if isinstance(d, Placed):
        pl = d.placement
        return Placed(d.base, Placement(rot * pl.w + shift, pl.phi + phi))
    return Placed(d, Placement(shift, phi))


def scaled(d, c: float):
    """The image of ``d`` under ``z -> c z`` (``c > 0``)."""
    if c <= 0:
        raise ValueError("scale factor must be positive")
    if isinstance(d, Polygon):
        return Polygon(tuple(c * v for v in d.vertices))
    if isinstance(d, Disk):
        return Disk(c * d.center, c * d.radius)
    if isinstance(d, (Sector, HalfPlane)):
        return d
    if isinstance(d, Horseshoe):
        return replace(d, rho=c * d.rho, delta=c * d.delta)
    if isinstance(d, CutDiskExterior):
        return replace(d, a=c * d.a)
    if isinstance(d, Placed):
        return Placed(scaled(d.base, c), Placement(c * d.placement.w, d.placement.phi))
    raise TypeError(f"cannot scale {type(d).__name__}")


def to_dict(d) -> dict:
    return d.to_dict()


def _num(obj, key):
    try:
        v = obj[key]
    except KeyError:
        raise SpecParseError(f"missing field '{key}'") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecParseError(f"field '{key}' must be a number")
    return float(v)


def _pt(v, key="point"):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SpecParseError(f"{key} must be an [x, y] pair")
    return complex(float(v[0]), float(v[1]))


def from_dict(obj: dict):
    """Inverse of ``to_dict``; raises :class:`SpecParseError` on bad input."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecParseError("domain spec must be an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "polygon":
            vs = obj.get("vertices")
            if not isinstance(vs, list):
                raise SpecParseError("polygon needs a 'vertices' list")
            return Polygon(tuple(_pt(v, "vertex") for v in vs))
        if kind == "sector":
            return Sector(_num(obj, "theta"))
        if kind == "cutplane":
            return CutPlane()
        if kind == "halfplane":
            return HalfPlane()
        if kind == "disk":
            return Disk(_pt(obj.get("center", [0.0, 0.0]), "center"), _num(obj, "radius"))
        if kind == "cutdisk_exterior":
            return CutDiskExterior(_num(obj, "a"), _num(obj, "theta"))
        if kind == "horseshoe":
            return Horseshoe(_num(obj, "rho"), _num(obj, "delta"), _num(obj, "psi"))
        if kind == "placed":
            return Placed(from_dict(obj["base"]),
                          Placement(_pt(obj.get("w", [0.0, 0.0]), "w"), float(obj.get("phi", 0.0))))
    except InvalidDomain as exc:
        raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"unknown domain kind '{kind}'")


def unit_square() -> Polygon:
    return Polygon((0j, 1 + 0j, 1 + 1j, 1j))


def l_shape() -> Polygon:
    """Unit square minus its open upper-right quadrant; reentrant corner (0.5, 0.5)."""
    return Polygon((0j, 1 + 0j, 1 + 0.5j, 0.5 + 0.5j, 0.5 + 1j, 1j))


def iter_points(zs: Iterable) -> np.ndarray:
    return np.array([as_complex(z) for z in zs], dtype=complex)
