"""Spec in, conditions, certificate, finite-element cross-check, files out."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import plotting
from .bounds import BoundCertificate, best_bound, r_cone, r_cutdisk
from .conditions import check_cone_condition, check_cutdisk_condition, horseshoe_theta0
from .conformal import (
    MAPS,
    halfplane_identity,
    halfplane_power,
    halfplane_transport_check,
    koebe_check,
    koebe_sweep,
    library,
)
from .errors import NoApplicableBound
from .geometry import Horseshoe, Placed, in_radius, is_convex
from .report import RunReport, derive_verdicts, write_csv
from .variational import (
    DEFAULT_RADIUS,
    DEFAULT_TOL,
    hardy_quotient_estimate,
    truncated_support,
)

RAYLEIGH_COLUMNS = ["h", "h_eff", "mode", "n_dofs", "lambda_h", "iterations", "residual",
                    "r_squared", "margin"]
CONE_COLUMNS = ["index", "w_re", "w_im", "theta_w", "phi_w", "full_circle"]
CUTDISK_COLUMNS = ["index", "w_re", "w_im", "phi_w", "theta_used", "margin", "boundary_margin", "ok"]
KOEBE_COLUMNS = ["map", "check", "point_re", "point_im", "lhs", "rhs", "ratio", "r", "passed"]
BOUND_COLUMNS = ["name", "method", "r", "r_squared", "preconditions_ok", "notes"]


@dataclass
class Options:
    samples: int = 256
    h_list: tuple = (1 / 16, 1 / 32)
    radius: float | None = None
    tol: float = DEFAULT_TOL
    svg: bool = False
    method: str = "auto"
    r: float | None = None
    maps: tuple = ()
    timings: dict = field(default_factory=dict)


def cutdisk_params(spec) -> tuple[float, float] | None:
    """``(a, theta0)`` from the spec, or the built-in choice for horseshoes."""
    if spec.cutdisk is not None:
        return float(spec.cutdisk["a"]), float(spec.cutdisk["theta0"])
    d = spec.domain
    while isinstance(d, Placed):
        d = d.base
    if isinstance(d, Horseshoe):
        return d.rho, horseshoe_theta0(d.psi)
    return None


def delta_in_estimate(d, samples: int):
    return in_radius(d, d.scale / (2 * samples))


def _timed(opts, key, fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    opts.timings[key] = opts.timings.get(key, 0.0) + time.perf_counter() - t0
    return out


def evaluate_bound(spec, opts: Options):
    """Returns ``(certificate, cone_report, cutdisk_report, delta_in)``.

    ``opts.method`` forces one family: "cone" or "cutdisk" raise
    :class:`NoApplicableBound` when the condition is not found and let
    :class:`PreconditionViolated` propagate.
    """
    d = spec.domain
    if opts.method == "auto" and is_convex(d):
        return best_bound(convex=True), None, None, None
    cone = cut = delta = None
    if opts.method in ("auto", "cone"):
        cone = _timed(opts, "cone", check_cone_condition, d, opts.samples)
    params = cutdisk_params(spec)
    if opts.method in ("auto", "cutdisk") and params is not None and d.bounded:
        cut = _timed(opts, "cutdisk", check_cutdisk_condition, d, params[0], params[1], opts.samples)
        delta = _timed(opts, "delta_in", delta_in_estimate, d, opts.samples)
    if opts.method == "cone":
        if not cone.satisfied:
            raise NoApplicableBound("cone condition fails")
        theta = min(max(cone.theta_sup, math.pi / 2), math.pi)
        return BoundCertificate("cone", r_cone(theta), {"theta": theta}), cone, None, None
    if opts.method == "cutdisk":
        if cut is None:
            raise NoApplicableBound("no cut-disk parameters for this domain")
        if not cut.feasible:
            raise NoApplicableBound("no cut-disk placement found at this resolution")
        r = r_cutdisk(cut.a, cut.theta0, delta.upper)
        cert = BoundCertificate("cutdisk", r, {"a": cut.a, "theta0": cut.theta0, "delta_in": delta.upper})
        return cert, None, cut, delta
    return best_bound(cone, cut, delta), cone, cut, delta


def _cone_rows(rep):
    return [{"index": k, "w_re": c.w.real, "w_im": c.w.imag, "theta_w": c.theta_w, "phi_w": c.phi_w,
             "full_circle": c.full_circle} for k, c in enumerate(rep.witnesses)]


def _cut_rows(rep):
    return [{"index": k, "w_re": c.w.real, "w_im": c.w.imag, "phi_w": c.phi_w,
             "theta_used": c.theta_used, "margin": c.worst_violation_margin,
             "boundary_margin": c.boundary_margin, "ok": c.ok} for k, c in enumerate(rep.witnesses)]


def _base_report(command, spec, cert, cone, cut, delta) -> RunReport:
    rep = RunReport(command, spec.to_dict())
    rep.certificate = None if cert is None else cert.to_dict()
    rep.cone = None if cone is None else cone.to_dict()
    rep.cutdisk = None if cut is None else cut.to_dict()
    rep.delta_in = None if delta is None else {"lower": delta.lower, "upper": delta.upper}
    if cut is not None and not cut.feasible:
        rep.warnings.append("no cut-disk placement found at this resolution (not a proof)")
    if cone is not None and not cone.satisfied:
        rep.warnings.append("cone condition fails at some boundary sample")
    return rep


def _finish(rep: RunReport, out: Path, stem: str, opts: Options) -> RunReport:
    rep.verdicts.update(derive_verdicts(rep.to_dict()))
    path = out / f"{stem}_report.json"
    rep.files.append(path.name)
    rep.files.sort()
    rep.write(path)
    (out / f"{stem}_timings.json").write_text(
        json.dumps({k: round(v, 6) for k, v in sorted(opts.timings.items())}, indent=2) + "\n")
    return rep


def _write_bound(rep, out: Path, spec, cert) -> None:
    cpath = out / f"{spec.name}_certificate.json"
    cpath.write_text(json.dumps(cert.to_dict(), indent=2, sort_keys=True) + "\n")
    rep.files.append(cpath.name)
    row = {"name": spec.name, **{k: v for k, v in cert.to_dict().items() if k != "inputs"}}
    write_csv(out / f"{spec.name}_bound.csv", "bound", BOUND_COLUMNS, [row])
    rep.files.append(f"{spec.name}_bound.csv")


def run_bound(spec, out, opts: Options) -> RunReport:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    cert, cone, cut, delta = evaluate_bound(spec, opts)
    rep = _base_report("bound", spec, cert, cone, cut, delta)
    _write_bound(rep, out, spec, cert)
    return _finish(rep, out, spec.name, opts)


def run_conditions(spec, out, opts: Options) -> RunReport:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    d = spec.domain
    cone = _timed(opts, "cone", check_cone_condition, d, opts.samples)
    params = cutdisk_params(spec)
    cut = None
    if params is not None and d.bounded:
        cut = _timed(opts, "cutdisk", check_cutdisk_condition, d, params[0], params[1], opts.samples)
    rep = _base_report("check-conditions", spec, None, cone, cut, None)
    write_csv(out / f"{spec.name}_cone.csv", "cone-witnesses", CONE_COLUMNS, _cone_rows(cone))
    rep.files.append(f"{spec.name}_cone.csv")
    if cut is not None:
        write_csv(out / f"{spec.name}_cutdisk.csv", "cutdisk-witnesses", CUTDISK_COLUMNS, _cut_rows(cut))
        rep.files.append(f"{spec.name}_cutdisk.csv")
    rep.verdicts["cone_satisfied"] = cone.satisfied
    if cut is not None:
        rep.verdicts["cutdisk_feasible"] = cut.feasible
    if opts.svg:
        plotting.plot_cone_witness(d, cone, out / f"{spec.name}_cone.svg")
        rep.files.append(f"{spec.name}_cone.svg")
        if cut is not None:
            plotting.plot_cutdisk_witness(d, cut, out / f"{spec.name}_cutdisk.svg")
            rep.files.append(f"{spec.name}_cutdisk.svg")
    return _finish(rep, out, spec.name, opts)


def koebe_records(opts: Options) -> list[dict]:
    maps = library() if not opts.maps else [MAPS[m]() for m in opts.maps]
    recs = []
    for f in maps:
        r = f.certified_r if opts.r is None else opts.r
        res = koebe_check(f, r)
        d0 = abs(complex(f.deriv(0j)))
        recs.append({"map": f.name, "check": "koebe", "point_re": 0.0, "point_im": 0.0,
                     "lhs": res.ratio * d0, "rhs": r * d0, "ratio": res.ratio, "r": r,
                     "passed": res.passed})
        sw = koebe_sweep(f, r, opts.samples)
        recs.append({"map": f.name, "check": "sweep", "point_re": sw.worst_point.real,
                     "point_im": sw.worst_point.imag, "lhs": None, "rhs": None,
                     "ratio": sw.min_ratio, "r": r, "passed": sw.passed})
    if not opts.maps:
        for f in (halfplane_identity(), halfplane_power(1.5)):
            r = f.certified_r if opts.r is None else opts.r
            for z in (1 + 0j, 2 + 3j, 0.5 - 0.25j):
                t = halfplane_transport_check(f, z, r)
                recs.append({"map": f.name, "check": "transport", "point_re": z.real,
                             "point_im": z.imag, "lhs": t.lhs, "rhs": t.rhs,
                             "ratio": t.lhs / t.rhs * r, "r": r,
                             "passed": t.passed and t.identities_ok})
    return recs


def run_koebe(out, opts: Options) -> RunReport:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    recs = _timed(opts, "koebe", koebe_records, opts)
    rep = RunReport("koebe-verify")
    rep.koebe = recs
    write_csv(out / "koebe.csv", "koebe", KOEBE_COLUMNS, recs)
    rep.files.append("koebe.csv")
    if opts.svg:
        maps = library() if not opts.maps else [MAPS[m]() for m in opts.maps]
        for k, f in enumerate(maps):
            name = f"koebe_{k:02d}.svg"
            plotting.plot_koebe(f, out / name)
            rep.files.append(name)
    return _finish(rep, out, "koebe", opts)


def rayleigh_estimates(spec, opts: Options, cert=None):
    d = spec.domain
    radius = opts.radius if opts.radius is not None else (spec.radius or DEFAULT_RADIUS)
    support = spec.support if spec.support is not None else truncated_support(d, radius)
    return [_timed(opts, "rayleigh", hardy_quotient_estimate, d, support, h, tol=opts.tol,
                   certificate=cert) for h in opts.h_list]


def _rayleigh_rows(ests):
    rows = []
    for e in ests:
        cc = e.certificate_compared
        rows.append({"h": e.h, "h_eff": e.h_eff, "mode": e.mode, "n_dofs": e.n_dofs,
                     "lambda_h": e.lambda_h, "iterations": e.iterations, "residual": e.residual,
                     "r_squared": None if cc is None else cc[0],
                     "margin": None if cc is None else cc[1]})
    return rows


def run_rayleigh(spec, out, opts: Options, command: str = "rayleigh", rep=None, cert=None) -> RunReport:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if rep is None:
        try:
            cert, cone, cut, delta = evaluate_bound(spec, opts)
        except NoApplicableBound as exc:
            cert, cone, cut, delta = None, None, None, None
            warn = f"no certificate: {exc}"
        else:
            warn = None
        rep = _base_report(command, spec, cert, cone, cut, delta)
        if warn:
            rep.warnings.append(warn)
    ests = rayleigh_estimates(spec, opts, cert)
    rep.rayleigh = [e.to_dict() for e in ests]
    write_csv(out / f"{spec.name}_rayleigh.csv", "rayleigh", RAYLEIGH_COLUMNS, _rayleigh_rows(ests))
    rep.files.append(f"{spec.name}_rayleigh.csv")
    if opts.svg or command == "report":
        plotting.plot_mode(ests[-1], out / f"{spec.name}_mode.svg")
        rep.files.append(f"{spec.name}_mode.svg")
        if len(ests) > 1:
            plotting.plot_refinement(ests, out / f"{spec.name}_refinement.svg",
                                     None if cert is None else cert.r_squared)
            rep.files.append(f"{spec.name}_refinement.svg")
    if len(ests) > 1 and all(e.mode == "structured" for e in ests):
        rep.verdicts["refinement_monotone"] = all(
            b.lambda_h <= a.lambda_h + 1e-10 for a, b in zip(ests, ests[1:]))
    return _finish(rep, out, spec.name, opts)


def run_report(spec, out, opts: Options) -> RunReport:
    """Certificate, condition tables, finite-element check and figures."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    d = spec.domain
    cert, cone, cut, delta = evaluate_bound(spec, opts)
    if cone is None:
        cone = _timed(opts, "cone", check_cone_condition, d, opts.samples)
    params = cutdisk_params(spec)
    if cut is None and params is not None and d.bounded:
        cut = _timed(opts, "cutdisk", check_cutdisk_condition, d, params[0], params[1], opts.samples)
    rep = _base_report("report", spec, cert, cone, cut, delta)
    _write_bound(rep, out, spec, cert)
    write_csv(out / f"{spec.name}_cone.csv", "cone-witnesses", CONE_COLUMNS, _cone_rows(cone))
    plotting.plot_cone_witness(d, cone, out / f"{spec.name}_cone.svg")
    rep.files += [f"{spec.name}_cone.csv", f"{spec.name}_cone.svg"]
    if cut is not None:
        write_csv(out / f"{spec.name}_cutdisk.csv", "cutdisk-witnesses", CUTDISK_COLUMNS, _cut_rows(cut))
        plotting.plot_cutdisk_witness(d, cut, out / f"{spec.name}_cutdisk.svg")
        rep.files += [f"{spec.name}_cutdisk.csv", f"{spec.name}_cutdisk.svg"]
    return run_rayleigh(spec, out, opts, command="report", rep=rep, cert=cert)
