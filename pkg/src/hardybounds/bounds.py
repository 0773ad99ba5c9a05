"""Closed-form Hardy constants and the log-derivative to Koebe-radius engine.

All constants ``r`` refer to the inequality

    int |grad u|^2  >=  r^2  int |u|^2 / dist(x, boundary)^2 .

The formulas are evaluated literally (same operation order as written in the
docstrings) so results agree bit-for-bit with straightforward reimplementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NoApplicableBound, OutOfRange, PreconditionViolated

SQRT2 = math.sqrt(2.0)
ANCONA_R = 0.25
CONVEX_R = 0.5
METHODS = ("cone", "cutdisk", "ancona", "convex")


@dataclass
class BoundCertificate:
    method: str
    r: float
    inputs: dict = field(default_factory=dict)
    preconditions_ok: bool = True
    notes: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def r_squared(self) -> float:
        return self.r * self.r

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "r": self.r,
            "r_squared": self.r_squared,
            "inputs": dict(self.inputs),
            "preconditions_ok": self.preconditions_ok,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundCertificate":
        return cls(data["method"], float(data["r"]), dict(data.get("inputs") or {}),
                   bool(data.get("preconditions_ok", True)), data.get("notes", ""))


def r_cone(theta: float) -> float:
    """``pi / (4 theta)`` for an exterior cone of half-angle theta in [pi/2, pi]."""
    if not (math.pi / 2 <= theta <= math.pi):
        raise OutOfRange(f"theta = {theta} outside [pi/2, pi]")
    return math.pi / (4 * theta)


def cutdisk_R0(a: float, theta: float) -> float:
    """Admissible radius ``a / (2 (sqrt2 |tan(theta/2)| + 1))``."""
    return a / (2 * (SQRT2 * abs(math.tan(theta / 2)) + 1))


def _check_cutdisk_args(a, theta):
    if not a > 0:
        raise OutOfRange(f"a = {a} must be positive")
    if not (0 <= theta < math.pi):
        raise OutOfRange(f"theta = {theta} outside [0, pi)")


def r_cutdisk(a: float, theta0: float, delta_in: float) -> float:
    """``1/2 [1 - 4 (sqrt2 |tan(theta0/2)| + 1) delta_in / a]``.

    Requires ``2 delta_in <= R0(a)``; otherwise :class:`PreconditionViolated`
    is raised with ``lhs = 2 delta_in`` and ``rhs = R0``.
    """
    _check_cutdisk_args(a, theta0)
    if not delta_in > 0:
        raise OutOfRange(f"delta_in = {delta_in} must be positive")
    lhs, rhs = 2 * delta_in, cutdisk_R0(a, theta0)
    if lhs > rhs:
        raise PreconditionViolated(f"2*delta_in = {lhs} exceeds R0 = {rhs}", lhs, rhs)
    return 0.5 * (1 - 4 * (SQRT2 * abs(math.tan(theta0 / 2)) + 1) * delta_in / a)


def beta_cutdisk(theta: float, R: float, a: float) -> float:
    """``2 [1 - 2 (sqrt2 |tan(theta/2)| + 1) R / a]`` for ``0 < R < R0``."""
    _check_cutdisk_args(a, theta)
    R0 = cutdisk_R0(a, theta)
    if not (0 < R < R0):
        raise OutOfRange(f"R = {R} outside (0, R0 = {R0})")
    return 2 * (1 - 2 * (SQRT2 * abs(math.tan(theta / 2)) + 1) * R / a)


@dataclass(frozen=True)
class BetaProfile:
    """Bound ``|g''/g'|``-type modulus ``beta(R) in (0, M]`` valid for ``R < R0``."""

    M: float
    R0: float
    beta: Callable[[float], float]
    label: str = ""

    @classmethod
    def sector(cls, theta: float) -> "BetaProfile":
        alpha = math.pi / theta
        return cls(alpha, math.inf, lambda R: alpha, f"sector(theta={theta})")

    @classmethod
    def cutdisk(cls, a: float, theta: float) -> "BetaProfile":
        _check_cutdisk_args(a, theta)
        return cls(2.0, cutdisk_R0(a, theta), lambda R: beta_cutdisk(theta, R, a),
                   f"cutdisk(a={a}, theta={theta})")

    def sample_check(self, n: int = 257) -> bool:
        """True when beta is in (0, M] and non-increasing on a sample of (0, R0)."""
        top = self.R0 if math.isfinite(self.R0) else 1e3
        Rs = top * np.linspace(0, 1, n + 2)[1:-1]
        vals = np.array([self.beta(float(R)) for R in Rs])
        return bool(np.all(vals > 0) and np.all(vals <= self.M) and np.all(np.diff(vals) <= 0))


def _infinite_grid() -> np.ndarray:
    return 10.0 ** (np.arange(-3 * 64, 3 * 64 + 1) / 64.0)


def koebe_radius_from_beta(profile: BetaProfile, delta_in: float | None = None) -> float:
    """Koebe radius ``beta(M delta_in) / 4`` (finite R0) or ``inf_R beta(R) / 4``."""
    if math.isfinite(profile.R0):
        if delta_in is None:
            raise PreconditionViolated("delta_in required when R0 is finite")
        lhs = profile.M * delta_in
        if not lhs < profile.R0:
            raise PreconditionViolated(f"M*delta_in = {lhs} not < R0 = {profile.R0}",
                                       lhs, profile.R0)
        return profile.beta(lhs) / 4
    return min(profile.beta(float(R)) for R in _infinite_grid()) / 4


def horseshoe_bounds(rho: float, psi: float, delta_in: float) -> dict:
    """Cone and cut-disk constants for a horseshoe of outer radius ``rho``.

    The cut-disk entry is None when the radius precondition fails.
    """
    from .conditions import horseshoe_theta0

    cone = r_cone((math.pi + psi) / 2)
    try:
        cut = r_cutdisk(rho, horseshoe_theta0(psi), delta_in)
    except PreconditionViolated:
        cut = None
    return {"cone": cone, "cutdisk": cut}


def best_bound(cone=None, cutdisk=None, delta_in=None, convex: bool = False) -> BoundCertificate:
    """Largest applicable constant among the supplied evidence.

    ``cone`` is a ConeReport, ``cutdisk`` a CutDiskReport used with ``delta_in``
    (an in-radius value or an interval, whose upper end is used).  Convex
    domains short-circuit to 1/2.  Any cone report also enables the 1/4 floor,
    valid for every simply connected domain.  Ties go to the cone.
    """
    if convex:
        return BoundCertificate("convex", CONVEX_R, {}, True, "convex domain")
    if cone is None and cutdisk is None:
        raise NoApplicableBound("no cone report, cut-disk report or convexity given")
    if delta_in is not None and hasattr(delta_in, "upper"):
        delta_in = float(delta_in.upper)

    cands: list[BoundCertificate] = []
    notes = []
    if cone is not None:
        theta = float(cone.theta_sup)
        if cone.satisfied and theta <= math.pi + 1e-12:
            theta_c = min(max(theta, math.pi / 2), math.pi)
            cands.append(BoundCertificate("cone", r_cone(theta_c), {"theta": theta_c}))
        else:
            notes.append("cone condition fails")
        cands.append(BoundCertificate("ancona", ANCONA_R, {}, True, "floor"))
    if cutdisk is not None:
        inputs = {"a": cutdisk.a, "theta0": cutdisk.theta0, "delta_in": delta_in}
        if not cutdisk.feasible:
            notes.append("cut-disk placement not found")
        elif delta_in is None:
            notes.append("cut-disk needs delta_in")
        else:
            try:
                r = r_cutdisk(cutdisk.a, cutdisk.theta0, delta_in)
                cands.append(BoundCertificate("cutdisk", r, inputs))
            except PreconditionViolated as exc:
                notes.append(f"cut-disk precondition: {exc}")
    if not cands:
        raise NoApplicableBound("; ".join(notes) or "nothing applies")
    order = {m: i for i, m in enumerate(METHODS)}
    best = max(cands, key=lambda c: (c.r, -order[c.method]))
    ties = [c.method for c in cands if c.r == best.r and c is not best]
    extra = [f"tie with {', '.join(ties)}"] if ties else []
    best.notes = "; ".join(filter(None, [best.notes] + extra + notes))
    return best
