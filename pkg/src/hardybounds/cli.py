"""Command line interface.

Exit codes: 0 ok, 1 other error, 2 spec parse error, 3 precondition
violated, 4 no applicable bound.  ``HARDY_THREADS`` caps worker threads.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .conformal import MAPS
from .errors import HardyError, NoApplicableBound, PreconditionViolated, SpecParseError
from .pipeline import (
    Options,
    run_bound,
    run_conditions,
    run_koebe,
    run_rayleigh,
    run_report,
)
from .report import load_spec

EXIT_SPEC = 2
EXIT_PRECONDITION = 3
EXIT_NO_BOUND = 4

log = logging.getLogger("hardybounds")


def parse_h_list(text: str) -> tuple[float, ...]:
    """``"1/16, 1/32"`` or ``"0.1 0.05"`` -> floats, strictly decreasing order kept."""
    try:
        vals = [float(Fraction(t)) for t in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad h list {text!r}") from None
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("h values must be positive")
    return tuple(vals)


def _common(p, spec=True):
    if spec:
        p.add_argument("--spec", required=True, metavar="PATH", help="domain spec JSON file")
    p.add_argument("--out", default="out", metavar="DIR", help="output directory (default: out)")
    p.add_argument("--samples", type=int, default=256, metavar="N",
                   help="boundary samples / sweep points (default: 256)")
    p.add_argument("--svg", action="store_true", help="also write SVG figures")


def _fem(p):
    p.add_argument("--h", type=parse_h_list, default=(1 / 16, 1 / 32), metavar='"H1,H2,..."',
                   help='mesh sizes, e.g. "1/16,1/32"')
    p.add_argument("--radius", type=float, default=None, metavar="R",
                   help="truncation radius for unbounded domains, in units of the domain scale")
    p.add_argument("--tol", type=float, default=1e-8, metavar="T", help="eigen-solver tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardybounds",
                                 description="Hardy-inequality constants for planar domains.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="certified constant r for a domain")
    _common(p)
    p.add_argument("--method", choices=["auto", "cone", "cutdisk"], default="auto")

    p = sub.add_parser("check-conditions", help="exterior cone and cut-disk conditions")
    _common(p)

    p = sub.add_parser("koebe-verify", help="Koebe-type checks on the test-map library")
    _common(p, spec=False)
    p.add_argument("--map", dest="maps", action="append", choices=sorted(MAPS),
                   help="map to check (repeatable; default: whole library)")
    p.add_argument("--r", type=float, default=None, help="explicit r instead of the certified one")

    p = sub.add_parser("rayleigh", help="finite-element upper bound of the sharp constant")
    _common(p)
    _fem(p)

    p = sub.add_parser("report", help="full pipeline with tables and figures")
    _common(p)
    _fem(p)
    p.add_argument("--method", choices=["auto", "cone", "cutdisk"], default="auto")
    return ap


def _options(args) -> Options:
    return Options(
        samples=args.samples,
        h_list=getattr(args, "h", (1 / 16, 1 / 32)),
        radius=getattr(args, "radius", None),
        tol=getattr(args, "tol", 1e-8),
        svg=args.svg,
        method=getattr(args, "method", "auto"),
        r=getattr(args, "r", None),
        maps=tuple(getattr(args, "maps", None) or ()),
    )


def _summary(rep) -> str:
    c = rep.certificate
    if c is None:
        return f"{rep.command}: done"
    return f"{rep.spec['name']}: method={c['method']} r={c['r']!r} r^2={c['r_squared']!r}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    opts = _options(args)
    try:
        if args.command == "koebe-verify":
            rep = run_koebe(args.out, opts)
            bad = [k for k, v in rep.verdicts.items() if not v]
            print(f"koebe-verify: {len(rep.koebe)} checks, {len(bad)} failed")
        else:
            spec = load_spec(args.spec)
            run = {"bound": run_bound, "check-conditions": run_conditions,
                   "rayleigh": run_rayleigh, "report": run_report}[args.command]
            rep = run(spec, args.out, opts)
            print(_summary(rep))
            for e in rep.rayleigh:
                print(f"  h={e['h']:.6g} lambda_h={e['lambda_h']:.8f} iterations={e['iterations']}")
        for w in rep.warnings:
            log.warning(w)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except PreconditionViolated as exc:
        print(f"error: precondition violated: {exc} (lhs={exc.lhs}, rhs={exc.rhs})", file=sys.stderr)
        return EXIT_PRECONDITION
    except NoApplicableBound as exc:
        print(f"error: no applicable bound: {exc}", file=sys.stderr)
        return EXIT_NO_BOUND
    except HardyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
