"""Static figures (SVG by default) for reports.

All output is deterministic: fixed hash salt, no timestamps, text kept as text.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.tri import Triangulation  # noqa: E402

from .geometry import (  # noqa: E402
    CutDiskExterior,
    Placed,
    Placement,
    Ray,
    _finite_pieces,  # noqa: E402
    bounding_box,
    cis,
)

STYLE = {
    "svg.hashsalt": "hardybounds",
    "svg.fonttype": "none",
    "figure.figsize": (5.0, 5.0),
    "font.size": 9,
    "axes.grid": False,
    "lines.linewidth": 1.2,
}


def _save(fig, path) -> Path:
    path = Path(path)
    fmt = path.suffix.lstrip(".") or "svg"
    meta = {"Date": None} if fmt in ("svg", "pdf") else {}
    fig.savefig(path, format=fmt, metadata=meta)
    plt.close(fig)
    return path


def _piece_xy(p, n=200):
    if hasattr(p, "sweep"):
        t = p.start + p.sweep * np.linspace(0, 1, n)
        z = p.center + p.radius * np.exp(1j * t)
    else:
        z = np.array([p.a, p.b])
    return z.real, z.imag


def draw_domain(ax, d, extent: float | None = None, color="k"):
    for p in _finite_pieces(d, extent):
        x, y = _piece_xy(p)
        ax.plot(x, y, color=color)
    ax.set_aspect("equal")


def _window(ax, d):
    if not d.bounded:
        return
    xmin, xmax, ymin, ymax = bounding_box(d)
    pad = 0.1 * max(xmax - xmin, ymax - ymin)
    ax.set_xlim(xmin - pad, xmax + pad)
    ax.set_ylim(ymin - pad, ymax + pad)


def plot_cone_witness(d, report, path, extent: float | None = None):
    """Domain with the worst boundary point and its enclosing sector."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ext = extent or 4.0 * d.scale
        draw_domain(ax, d, ext)
        ws = np.array([c.w for c in report.witnesses])
        ax.plot(ws.real, ws.imag, ".", ms=2, color="0.5")
        wit = report.worst
        L = 2.0 * d.scale
        for s in (-1, 1):
            e = wit.w + L * cis(wit.phi_w + s * wit.theta_w)
            ax.plot([wit.w.real, e.real], [wit.w.imag, e.imag], color="C3")
        ax.plot([wit.w.real], [wit.w.imag], "o", color="C3")
        ax.set_title(f"sup theta = {report.theta_sup:.6f}")
        _window(ax, d)
        return _save(fig, path)


def plot_cutdisk_witness(d, report, path):
    """Domain with the placed cut disk of the tightest witness."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        draw_domain(ax, d)
        wit = report.worst
        placed = Placed(CutDiskExterior(report.a, wit.theta_used), Placement(wit.w, wit.phi_w))
        for p in placed.pieces():
            if isinstance(p, Ray):
                p = p.truncated(2.0 * d.scale)
            x, y = _piece_xy(p)
            ax.plot(x, y, color="C0", ls="--")
        ax.plot([wit.w.real], [wit.w.imag], "o", color="C3")
        ax.set_title(f"a = {report.a:g}, theta0 = {report.theta0:.4f}, feasible = {report.feasible}")
        _window(ax, d)
        return _save(fig, path)


def plot_mode(estimate, path, title: str = ""):
    """Heat map of the discrete ground state."""
    mesh = estimate.mesh
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        tri = Triangulation(mesh.vertices.real, mesh.vertices.imag, mesh.triangles)
        u = estimate.ground_mode / np.max(np.abs(estimate.ground_mode))
        pc = ax.tripcolor(tri, u, shading="gouraud", cmap="viridis", rasterized=False)
        fig.colorbar(pc, ax=ax, shrink=0.8)
        ax.set_aspect("equal")
        ax.set_title(title or f"lambda_h = {estimate.lambda_h:.6f}, h = {estimate.h_eff:.4g}")
        return _save(fig, path)


def plot_refinement(estimates, path, r_squared: float | None = None):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        hs = [e.h_eff for e in estimates]
        ax.semilogx(hs, [e.lambda_h for e in estimates], "o-", label="lambda_h")
        if r_squared is not None:
            ax.axhline(r_squared, color="C3", ls="--", label="certified r^2")
        ax.set_xlabel("h")
        ax.set_ylabel("Rayleigh quotient")
        ax.invert_xaxis()
        ax.legend()
        fig.tight_layout()
        return _save(fig, path)


def plot_koebe(f, path, n_circles: int = 6):
    """Image of concentric circles under a disk map, with the disk of radius
    ``dist(f(0))`` around ``f(0)``."""
    from .geometry import boundary_distance

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        f0 = complex(f.eval(0j))
        R = float(boundary_distance(f.image, f0))
        t = np.linspace(0, 2 * math.pi, 400)
        for k in range(1, n_circles + 1):
            z = f.eval((k / (n_circles + 1)) * np.exp(1j * t))
            ax.plot(np.real(z), np.imag(z), color="0.6", lw=0.6)
        ext = 4.0 * max(R, abs(f0), 1.0)
        draw_domain(ax, f.image, ext)
        c = f0 + R * np.exp(1j * t)
        ax.plot(c.real, c.imag, color="C3")
        ax.plot([f0.real], [f0.imag], "o", color="C3")
        ax.set_xlim(f0.real - 3 * R - 1, f0.real + 3 * R + 1)
        ax.set_ylim(f0.imag - 3 * R - 1, f0.imag + 3 * R + 1)
        ax.set_title(f"{f.name}: dist/|f'(0)| = {R / abs(complex(f.deriv(0j))):.6f}")
        return _save(fig, path)
