"""Sampled 1D curves (scans, predictions, measured data) and their CSV form.

File format: comma-separated, '.' decimal point, '#' comment lines, one
optional header row, then 2 or 3 numeric columns (abscissa, rate[, sigma]).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CurveFormatError

MIN_POINTS = 8


@dataclass(frozen=True)
class ScanCurve:
    """A sampled curve with a unit-tagged abscissa and nonnegative rates."""

    abscissa: np.ndarray
    rate: np.ndarray
    sigma: np.ndarray | None = None
    unit: str = ""

    def __post_init__(self):
        object.__setattr__(self, "abscissa", np.asarray(self.abscissa, dtype=float))
        object.__setattr__(self, "rate", np.asarray(self.rate, dtype=float))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        n = self.abscissa.size
        if self.rate.size != n or (self.sigma is not None and self.sigma.size != n):
            raise CurveFormatError("abscissa, rate and sigma must have equal lengths")
        if n < MIN_POINTS:
            raise CurveFormatError(f"curve needs at least {MIN_POINTS} points, got {n}")
        diffs = np.diff(self.abscissa)
        if not (np.all(diffs > 0.0) or np.all(diffs < 0.0)):
            raise CurveFormatError("abscissa must be strictly monotone")
        if not np.all(np.isfinite(self.abscissa)) or not np.all(np.isfinite(self.rate)):
            raise CurveFormatError("curve contains non-finite values")

    def __len__(self):
        return self.abscissa.size

    def effective_sigma(self) -> np.ndarray:
        """Per-point errors; Poisson default sqrt(max(rate, 1)) when absent."""
        if self.sigma is not None:
            return self.sigma
        return np.sqrt(np.maximum(self.rate, 1.0))


def read_curve_csv(path, unit: str = "") -> ScanCurve:
    """Parse a curve file, reporting offending line numbers."""
    path = Path(path)
    abscissa, rate, sigma = [], [], []
    ncols = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            fields = [f.strip() for f in text.split(",")]
            try:
                values = [float(f) for f in fields]
            except ValueError:
                if ncols is None:  # a single non-numeric row up front is a header
                    continue
                raise CurveFormatError(f"{path.name}: line {lineno}: non-numeric row")
            if len(values) not in (2, 3):
                raise CurveFormatError(
                    f"{path.name}: line {lineno}: expected 2 or 3 columns, got {len(values)}"
                )
            if ncols is None:
                ncols = len(values)
            elif len(values) != ncols:
                raise CurveFormatError(
                    f"{path.name}: line {lineno}: inconsistent column count"
                )
            if not all(np.isfinite(v) for v in values):
                raise CurveFormatError(f"{path.name}: line {lineno}: non-finite value")
            abscissa.append(values[0])
            rate.append(values[1])
            if ncols == 3:
                sigma.append(values[2])
    if ncols is None:
        raise CurveFormatError(f"{path.name}: no data rows")
    try:
        return ScanCurve(
            abscissa=np.asarray(abscissa),
            rate=np.asarray(rate),
            sigma=np.asarray(sigma) if sigma else None,
            unit=unit,
        )
    except CurveFormatError as exc:
        raise CurveFormatError(f"{path.name}: {exc}") from exc


def write_curve_csv(path, curve: ScanCurve, header_lines: list[str] | None = None) -> None:
    """Write a curve with optional '#'-prefixed header lines."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for line in header_lines or []:
            fh.write(f"# {line}\n")
        cols = "abscissa,rate" + (",sigma" if curve.sigma is not None else "")
        fh.write(cols + "\n")
        for i in range(len(curve)):
            row = f"{curve.abscissa[i]:.9g},{curve.rate[i]:.9g}"
            if curve.sigma is not None:
                row += f",{curve.sigma[i]:.9g}"
            fh.write(row + "\n")
