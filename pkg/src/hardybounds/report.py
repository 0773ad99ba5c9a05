"""Spec files, run reports and versioned CSV tables."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import SpecParseError
from .geometry import from_dict

CSV_VERSION = 1
REPORT_FORMAT = "hardybounds/run-report"


def load_schema(name: str) -> dict:
    text = resources.files("hardybounds").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@dataclass
class DomainSpecFile:
    name: str
    domain: object
    support: object | None = None
    radius: float | None = None
    cutdisk: dict | None = None

    def to_dict(self) -> dict:
        out = {"version": 1, "name": self.name, "domain": self.domain.to_dict()}
        if self.support is not None:
            out["support"] = self.support.to_dict()
        if self.radius is not None:
            out["radius"] = self.radius
        if self.cutdisk is not None:
            out["cutdisk"] = dict(self.cutdisk)
        return out


def parse_spec(obj, name: str = "domain") -> DomainSpecFile:
    """Validate and build a spec; a bare domain object is accepted too."""
    if isinstance(obj, dict) and "kind" in obj:
        obj = {"version": 1, "name": name, "domain": obj}
    try:
        jsonschema.validate(obj, load_schema("domain_spec"))
    except jsonschema.ValidationError as exc:
        raise SpecParseError(f"spec does not match schema: {exc.message}") from None
    domain = from_dict(obj["domain"])
    support = from_dict(obj["support"]) if "support" in obj else None
    return DomainSpecFile(obj.get("name", name), domain, support, obj.get("radius"),
                          dict(obj["cutdisk"]) if "cutdisk" in obj else None)


def load_spec(path) -> DomainSpecFile:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_spec(obj, path.stem)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return str(v)


def csv_text(table: str, columns: list[str], rows) -> str:
    """CSV with a leading ``# hardybounds/<table>/v<N>`` line; floats use ``repr``
    so identical runs give identical bytes."""
    buf = io.StringIO()
    buf.write(f"# hardybounds/{table}/v{CSV_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(path, table: str, columns: list[str], rows) -> Path:
    path = Path(path)
    path.write_text(csv_text(table, columns, rows))
    return path


def read_csv(path) -> tuple[str, list[dict]]:
    """Returns ``(header tag, rows)`` for a file written by :func:`write_csv`."""
    lines = Path(path).read_text().splitlines()
    tag = lines[0][2:] if lines and lines[0].startswith("# ") else ""
    return tag, list(csv.DictReader(lines[1:]))


# ---------------------------------------------------------------------------
# run report
# ---------------------------------------------------------------------------


@dataclass
class RunReport:
    command: str
    spec: dict | None = None
    cone: dict | None = None
    cutdisk: dict | None = None
    delta_in: dict | None = None
    certificate: dict | None = None
    rayleigh: list = field(default_factory=list)
    koebe: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    files: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": 1,
            "command": self.command,
            "spec": self.spec,
            "cone": self.cone,
            "cutdisk": self.cutdisk,
            "delta_in": self.delta_in,
            "certificate": self.certificate,
            "rayleigh": list(self.rayleigh),
            "koebe": list(self.koebe),
            "verdicts": dict(self.verdicts),
            "warnings": list(self.warnings),
            "files": list(self.files),
        }

    def write(self, path) -> Path:
        data = self.to_dict()
        validate_report(data)
        path = Path(path)
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return path


def validate_report(data: dict) -> None:
    jsonschema.validate(data, load_schema("report"))


def derive_verdicts(data: dict) -> dict:
    """Recompute verdicts from the records of a report dictionary."""
    out = {}
    cert = data.get("certificate")
    if cert is not None:
        out["certificate_valid"] = 0 <= cert["r"] <= 0.5 and abs(cert["r_squared"] - cert["r"] ** 2) <= 1e-15
        for k, est in enumerate(data.get("rayleigh") or []):
            out[f"lambda_above_r2[{k}]"] = est["lambda_h"] >= cert["r_squared"] - 1e-6
    for k, rec in enumerate(data.get("koebe") or []):
        out[f"koebe[{k}]:{rec['map']}"] = bool(rec["passed"])
    return out
