"""Dispersive-fiber readout: frequency offsets mapped to arrival-time delays.

A long fiber with group-velocity dispersion separates the two photons of a
pair by a delay proportional to their frequency offset, so the coincidence
histogram versus delay reproduces the spectral rate curve.  The mapping is
the stationary-phase (ray-optics) one, ``delay = 2 * gvd * length * omega``;
detector jitter enters as a Gaussian convolution kernel.

Polarization drift inside the fiber is deliberately not modeled; curves
here are the drift-free idealization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coincidence import AnalyzerSettings, rc_typeII_freq
from .curve import ScanCurve
from .dispersion import DispersionCoefficients
from .errors import ConfigurationError, ResolutionError
from .mismatch import SetupConfig

#: fused-silica group-velocity dispersion near 702 nm, s^2/m
DEFAULT_FIBER_GVD = 4.4e-26


@dataclass(frozen=True)
class FiberParams:
    """Fiber length (m), its GVD (s^2/m) and the detector jitter sigma (s)."""

    length_m: float = 1000.0
    gvd_s2_per_m: float = DEFAULT_FIBER_GVD
    jitter_sigma_s: float = 0.0

    def __post_init__(self):
        if self.length_m <= 0.0:
            raise ConfigurationError("fiber length must be > 0")
        if self.gvd_s2_per_m == 0.0:
            raise ConfigurationError("fiber gvd must be nonzero")
        if self.jitter_sigma_s < 0.0:
            raise ConfigurationError("jitter sigma must be >= 0")


def delay_of_offset(fiber: FiberParams, omega):
    """Signal-idler arrival-time difference (s) for a pair at offsets +-omega."""
    return 2.0 * fiber.gvd_s2_per_m * fiber.length_m * np.asarray(omega, dtype=float)


def offset_of_delay(fiber: FiberParams, delay):
    """Inverse of :func:`delay_of_offset`."""
    return np.asarray(delay, dtype=float) / (2.0 * fiber.gvd_s2_per_m * fiber.length_m)


def time_distribution(
    setup: SetupConfig,
    coeffs: DispersionCoefficients,
    fiber: FiberParams,
    a: AnalyzerSettings,
    delay_grid,
    single_prism: bool = False,
) -> ScanCurve:
    """Coincidence rate versus signal-idler delay after the fiber.

    The spectral rate is re-parameterized through the linear delay map (its
    Jacobian is constant and drops out of peak-normalized rates) and then
    convolved with the jitter kernel.  ``single_prism`` models one prism at
    ``a.theta1`` before the fiber and none after, which analyzes both
    photons at the same angle.
    """
    delay = np.asarray(delay_grid, dtype=float)
    if delay.ndim != 1 or delay.size < 2:
        raise ResolutionError("delay grid must be a 1D array with at least 2 points")
    steps = np.diff(delay)
    step = float(steps[0])
    if step <= 0.0 or not np.allclose(steps, step, rtol=1e-9, atol=0.0):
        raise ResolutionError("delay grid must be uniform and increasing")

    settings = AnalyzerSettings(a.theta1, a.theta1) if single_prism else a
    rate = np.asarray(
        rc_typeII_freq(setup, coeffs, offset_of_delay(fiber, delay), settings), dtype=float
    )

    sigma = fiber.jitter_sigma_s
    if sigma == 0.0:
        return ScanCurve(abscissa=delay, rate=rate, unit="s")
    if sigma / step < 4.0:
        raise ResolutionError(
            f"delay grid too coarse: {sigma / step:.2f} samples per jitter sigma, need >= 4"
        )
    half_width = int(math.ceil(6.0 * sigma / step))
    offsets = np.arange(-half_width, half_width + 1) * step
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()
    smeared = np.convolve(rate, kernel, mode="same")
    return ScanCurve(abscissa=delay, rate=smeared, unit="s")
