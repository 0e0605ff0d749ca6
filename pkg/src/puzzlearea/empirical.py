"""Measured puzzle areas, their uncertainties, and comparison with sqrt(3)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import List, Optional

from .errors import DataError, DomainError
from .model import SQRT3

CSV_HEADER = ("n", "x_a_cm", "y_a_cm", "x_s_cm", "y_s_cm", "spread_shape")
SHAPES = ("ellipse", "rectangle")

SIGMA_ASSEMBLED = 0.2
SIGMA_SPREAD = 0.5


@dataclass(frozen=True)
class MeasurementRecord:
    pieces: int
    x_a: float
    y_a: float
    x_s: float
    y_s: float
    spread_shape: str = "ellipse"
    sigma_a: float = SIGMA_ASSEMBLED
    sigma_s: float = SIGMA_SPREAD

    def __post_init__(self):
        if self.pieces < 1:
            raise DomainError("pieces must be >= 1")
        for name in ("x_a", "y_a", "x_s", "y_s"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if self.spread_shape not in SHAPES:
            raise DomainError(f"spread_shape must be one of {SHAPES}")
        if not (self.sigma_a >= 0 and self.sigma_s >= 0):
            raise DomainError("uncertainties must be >= 0")

    def scaled(self, c):
        return MeasurementRecord(
            self.pieces,
            c * self.x_a,
            c * self.y_a,
            c * self.x_s,
            c * self.y_s,
            self.spread_shape,
            self.sigma_a,
            self.sigma_s,
        )


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    sigma: float

    @property
    def relative(self):
        return self.sigma / self.value


def product_estimate(x, y, sigma_x, sigma_y, factor=1.0) -> AreaEstimate:
    """``factor * x * y`` with independent Gaussian errors on x and y, first order."""
    value = factor * x * y
    return AreaEstimate(value, abs(value) * math.hypot(sigma_x / x, sigma_y / y))


def assembled_area(rec: MeasurementRecord) -> AreaEstimate:
    return product_estimate(rec.x_a, rec.y_a, rec.sigma_a, rec.sigma_a)


def unassembled_area_measured(rec: MeasurementRecord) -> AreaEstimate:
    factor = math.pi / 4 if rec.spread_shape == "ellipse" else 1.0
    return product_estimate(rec.x_s, rec.y_s, rec.sigma_s, rec.sigma_s, factor)


def ratio(rec: MeasurementRecord) -> AreaEstimate:
    """Measured spread over assembled area; relative errors add in quadrature."""
    a = assembled_area(rec)
    s = unassembled_area_measured(rec)
    value = s.value / a.value
    return AreaEstimate(value, value * math.hypot(a.relative, s.relative))


@dataclass(frozen=True)
class SlopeFit:
    value: float
    stderr: float


def fit_slope_origin(points) -> SlopeFit:
    """Least-squares slope of ``y = m x`` with the intercept pinned at zero.

    The standard error uses the residual variance with ``n - 1`` degrees of
    freedom.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise DomainError("need at least 2 points for a slope")
    sxx = math.fsum(x * x for x, _ in pts)
    if not sxx > 0:
        raise DomainError("all x values are zero")
    m = math.fsum(x * y for x, y in pts) / sxx
    rss = math.fsum((y - m * x) ** 2 for x, y in pts)
    return SlopeFit(m, math.sqrt(rss / (len(pts) - 1) / sxx))


@dataclass(frozen=True)
class ReportRow:
    record: MeasurementRecord
    assembled: AreaEstimate
    unassembled: AreaEstimate
    ratio: AreaEstimate
    predicted_unassembled: float
    residual: float

    def as_dict(self):
        r = self.record
        return {
            "n": r.pieces,
            "x_a_cm": r.x_a,
            "y_a_cm": r.y_a,
            "x_s_cm": r.x_s,
            "y_s_cm": r.y_s,
            "spread_shape": r.spread_shape,
            "assembled": {"value": self.assembled.value, "sigma": self.assembled.sigma},
            "unassembled": {"value": self.unassembled.value, "sigma": self.unassembled.sigma},
            "ratio": {"value": self.ratio.value, "sigma": self.ratio.sigma},
            "predicted_unassembled": self.predicted_unassembled,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ValidationReport:
    rows: List[ReportRow]
    slope: Optional[SlopeFit]  # None with fewer than two rows
    sqrt3_reference: float = SQRT3

    def as_dict(self):
        return {
            "rows": [row.as_dict() for row in self.rows],
            "slope": (
                None
                if self.slope is None
                else {"value": self.slope.value, "stderr": self.slope.stderr, "diagnostic": True}
            ),
            "sqrt3": self.sqrt3_reference,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_text(self):
        head = (
            f"{'N':>5}  {'X_a':>6}  {'Y_a':>6}  {'X_s':>6}  {'Y_s':>6}  {'shape':<9}  "
            f"{'A_a (cm2)':>15}  {'A_s (cm2)':>16}  {'sqrt3*A_a':>10}  {'residual':>9}  "
            f"{'ratio':>15}"
        )
        lines = [head, "-" * len(head)]
        for row in self.rows:
            r = row.record
            lines.append(
                f"{r.pieces:>5}  {r.x_a:>6.1f}  {r.y_a:>6.1f}  {r.x_s:>6.1f}  {r.y_s:>6.1f}  "
                f"{r.spread_shape:<9}  "
                f"{_pm(row.assembled.value, row.assembled.sigma, 1):>15}  "
                f"{_pm(row.unassembled.value, row.unassembled.sigma, 1):>16}  "
                f"{row.predicted_unassembled:>10.1f}  {row.residual:>9.1f}  "
                f"{_pm(row.ratio.value, row.ratio.sigma, 4):>15}"
            )
        lines.append("")
        lines.append(f"model ratio sqrt(3)              = {self.sqrt3_reference:.4f}")
        if self.slope is None:
            lines.append("through-origin slope (diagnostic) = n/a (needs 2 rows)")
        else:
            lines.append(
                f"through-origin slope (diagnostic) = "
                f"{_pm(self.slope.value, self.slope.stderr, 4)}"
            )
        return "\n".join(lines) + "\n"


def _pm(value, sigma, digits):
    return f"{value:.{digits}f} +/- {sigma:.{digits}f}"


def validate(records) -> ValidationReport:
    records = list(records)
    if not records:
        raise DomainError("no measurement records to validate")
    rows = []
    for rec in records:
        a = assembled_area(rec)
        s = unassembled_area_measured(rec)
        pred = SQRT3 * a.value
        rows.append(ReportRow(rec, a, s, ratio(rec), pred, s.value - pred))
    slope = None
    if len(rows) >= 2:
        slope = fit_slope_origin([(r.assembled.value, r.unassembled.value) for r in rows])
    return ValidationReport(rows=rows, slope=slope)


def _parse_positive(text, name, line):
    try:
        v = float(text)
    except ValueError:
        raise DataError(f"{name}: not a number: {text!r}", line) from None
    if not (math.isfinite(v) and v > 0):
        raise DataError(f"{name}: must be positive, got {text!r}", line)
    return v


def parse_csv(text: str) -> List[MeasurementRecord]:
    """Parse measurement CSV text. Errors carry the 1-based file line number."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty file", 1) from None
    header = [h.strip() for h in header]
    if header and header[0].startswith("\ufeff"):
        header[0] = header[0][1:]
    if tuple(header) != CSV_HEADER:
        raise DataError(f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}", 1)
    records = []
    for fields in reader:
        line = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(CSV_HEADER):
            raise DataError(f"expected {len(CSV_HEADER)} fields, got {len(fields)}", line)
        n_text = fields[0].strip()
        if not n_text.isdigit() or int(n_text) < 1:
            raise DataError(f"n: expected a positive integer, got {n_text!r}", line)
        dims = [_parse_positive(f.strip(), CSV_HEADER[k + 1], line) for k, f in enumerate(fields[1:5])]
        shape = fields[5].strip()
        if shape not in SHAPES:
            raise DataError(f"spread_shape must be ellipse or rectangle, got {shape!r}", line)
        records.append(MeasurementRecord(int(n_text), *dims, spread_shape=shape))
    return records


def load_csv(path) -> List[MeasurementRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read())


def dump_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.pieces, r.x_a, r.y_a, r.x_s, r.y_s, r.spread_shape])
    return buf.getvalue()


def builtin_dataset() -> List[MeasurementRecord]:
    """The nine measured puzzles; the two 1000-piece spreads were rectangles."""
    text = resources.files("puzzlearea").joinpath("data/measurements.csv").read_text(encoding="utf-8")
    return parse_csv(text)
