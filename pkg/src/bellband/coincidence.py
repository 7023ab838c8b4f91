"""Coincidence counting rates, waveplate transforms and fringe visibility.

All closed-form rates are normalized to a peak of 1; experimental scale and
accidental background enter only as fit parameters.  The half-wave-plate
Jones matrix uses the determinant -1 convention with the fast axis at the
given angle; the quarter-wave plate retards the slow axis by pi/2.

Note on analyzer conventions: the two-type-I frequency rate peaks at equal
prism angles through ``cos^2(theta1 - theta2)`` while the two-type-I
angular rate is written with ``sin^2(theta1 + theta2)``.  The two forms
describe the same generated states with the second prism referenced
differently (theta2 versus 90 degrees minus theta2); both are kept
verbatim rather than silently harmonized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .curve import ScanCurve
from .dispersion import DispersionCoefficients, Scheme
from .errors import ConfigurationError, UndefinedVisibilityError
from .mismatch import (
    ModePoint,
    SetupConfig,
    delta_z_exact_typeII,
    extraordinary_wavevector_degenerate,
    ordinary_wavevector_degenerate,
)

#: two-photon basis ordering used by PolarizationState
BASIS_ORDER = ("HH", "HV", "VH", "VV")


@dataclass(frozen=True)
class AnalyzerSettings:
    """Glan-prism angles (rad) and optional waveplates before the beamsplitter."""

    theta1: float
    theta2: float
    hwp_angle: float | None = None
    qwp_angle: float | None = None


def sinc(x):
    """sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def _tau0(setup: SetupConfig, coeffs: DispersionCoefficients) -> float:
    return coeffs.tau0(setup.crystal_length_m)


def rc_typeII_freq(setup: SetupConfig, coeffs: DispersionCoefficients, omega, a: AnalyzerSettings):
    """Type-II coincidence rate vs frequency offset (collinear selection).

    ``sinc^2(omega*tau0) * [sin^2(t1+t2) cos^2(omega*(tau0+tau))
    + sin^2(t1-t2) sin^2(omega*(tau0+tau))]`` with ``tau`` the plate delay.
    """
    if setup.scheme is not Scheme.TYPE_II:
        raise ConfigurationError("rc_typeII_freq requires a type-II setup")
    omega = np.asarray(omega, dtype=float)
    tau0 = _tau0(setup, coeffs)
    total = omega * (tau0 + setup.extra_eo_delay_s)
    return sinc(omega * tau0) ** 2 * (
        np.sin(a.theta1 + a.theta2) ** 2 * np.cos(total) ** 2
        + np.sin(a.theta1 - a.theta2) ** 2 * np.sin(total) ** 2
    )


def rc_typeI_freq(setup: SetupConfig, coeffs: DispersionCoefficients, omega, a: AnalyzerSettings):
    """Two-type-I coincidence rate vs frequency offset (collinear selection)."""
    if setup.scheme is not Scheme.TWO_TYPE_I:
        raise ConfigurationError("rc_typeI_freq requires a two-type-I setup")
    omega = np.asarray(omega, dtype=float)
    env = coeffs.gvd_o * omega**2 * setup.crystal_length_m / 2.0
    half_phase = coeffs.gvd_e * omega**2 * setup.second_length_m / 2.0
    return sinc(env) ** 2 * (
        np.cos(a.theta1 - a.theta2) ** 2 * np.cos(half_phase) ** 2
        + np.cos(a.theta1 + a.theta2) ** 2 * np.sin(half_phase) ** 2
    )


def rc_typeII_ang(
    setup: SetupConfig,
    coeffs: DispersionCoefficients,
    theta,
    a: AnalyzerSettings,
    orthogonal_plane: bool = False,
):
    """Type-II coincidence rate vs internal scattering angle at degeneracy.

    In the optic-axis plane the relative phase advances as B*theta*L and
    the Bell state changes across the angular band.  Scanning in the
    orthogonal plane leaves the two polarization orderings balanced, so the
    rate is a plain ``sin^2(t1+t2)`` fringe under the sinc^2 envelope of the
    exact (even) mismatch.
    """
    if setup.scheme is not Scheme.TYPE_II:
        raise ConfigurationError("rc_typeII_ang requires a type-II setup")
    theta = np.asarray(theta, dtype=float)
    if orthogonal_plane:
        dz = delta_z_exact_typeII(setup, ModePoint(theta=theta, omega=0.0), orthogonal_plane=True)
        return np.sin(a.theta1 + a.theta2) ** 2 * sinc(dz * setup.crystal_length_m / 2.0) ** 2
    half = coeffs.B * theta * setup.crystal_length_m / 2.0
    return sinc(half) ** 2 * (
        np.sin(a.theta1 + a.theta2) ** 2 * np.cos(half) ** 2
        + np.sin(a.theta1 - a.theta2) ** 2 * np.sin(half) ** 2
    )


def rc_typeI_ang(setup: SetupConfig, coeffs: DispersionCoefficients, theta, a: AnalyzerSettings):
    """Two-type-I coincidence rate vs internal scattering angle at degeneracy."""
    if setup.scheme is not Scheme.TWO_TYPE_I:
        raise ConfigurationError("rc_typeI_ang requires a two-type-I setup")
    theta = np.asarray(theta, dtype=float)
    env = ordinary_wavevector_degenerate(setup) * theta**2 * setup.crystal_length_m / 2.0
    half_phase = (
        extraordinary_wavevector_degenerate(setup) * theta**2 * setup.second_length_m / 2.0
    )
    return sinc(env) ** 2 * (
        np.sin(a.theta1 + a.theta2) ** 2 * np.cos(half_phase) ** 2
        + np.sin(a.theta1 - a.theta2) ** 2 * np.sin(half_phase) ** 2
    )


class PolarizationState:
    """Normalized two-photon polarization state over (HH, HV, VH, VV)."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        amp = np.asarray(amplitudes, dtype=complex).reshape(4)
        norm2 = float(np.sum(np.abs(amp) ** 2))
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |amp|^2 = {norm2!r}")
        self.amplitudes = amp

    @classmethod
    def from_components(cls, hh=0.0, hv=0.0, vh=0.0, vv=0.0):
        amp = np.array([hh, hv, vh, vv], dtype=complex)
        return cls(amp / np.linalg.norm(amp))


def jones_hwp(angle: float) -> np.ndarray:
    """Half-wave plate, fast axis at ``angle``; determinant -1."""
    c, s = math.cos(2.0 * angle), math.sin(2.0 * angle)
    return np.array([[c, s], [s, -c]], dtype=complex)


def jones_qwp(angle: float) -> np.ndarray:
    """Quarter-wave plate, fast axis at ``angle``; slow axis retarded by pi/2."""
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    return rot @ np.diag([1.0, 1.0j]) @ rot.conj().T


def apply_waveplate(
    state: PolarizationState,
    plate: Literal["HWP", "QWP"],
    angle: float,
    arm: Literal["both", 1, 2] = "both",
) -> PolarizationState:
    """Apply a retarder to one or both photons of the pair.

    Plates inserted before the beamsplitter act on both photons, which is
    the default.
    """
    jones = jones_hwp(angle) if plate == "HWP" else jones_qwp(angle)
    eye = np.eye(2, dtype=complex)
    if arm == "both":
        op = np.kron(jones, jones)
    elif arm == 1:
        op = np.kron(jones, eye)
    elif arm == 2:
        op = np.kron(eye, jones)
    else:
        raise ValueError(f"unknown arm {arm!r}")
    amp = op @ state.amplitudes
    return PolarizationState(amp / np.linalg.norm(amp))


def coincidence_projection(state: PolarizationState, a: AnalyzerSettings) -> float:
    """|<theta1, theta2|state>|^2 with linear-polarization analyzers."""
    bra1 = np.array([math.cos(a.theta1), math.sin(a.theta1)], dtype=complex)
    bra2 = np.array([math.cos(a.theta2), math.sin(a.theta2)], dtype=complex)
    amp = np.kron(bra1, bra2) @ state.amplitudes
    return float(np.abs(amp) ** 2)


def pair_state(phase: float, basis) -> PolarizationState:
    """The generated pair state: first component at phase 0, second at ``phase``."""
    from .bellstate import Basis  # local import, avoids a module cycle

    second = complex(math.cos(phase), math.sin(phase))
    if basis is Basis.HV_VH:
        return PolarizationState(np.array([0.0, 1.0, second, 0.0]) / math.sqrt(2.0))
    return PolarizationState(np.array([1.0, 0.0, 0.0, second]) / math.sqrt(2.0))


def fringe_scan(rate_fn: Callable[[float], float], theta1: float, theta2_grid) -> ScanCurve:
    """Sample ``rate_fn(theta1, theta2)`` over a grid of analyzer angles."""
    theta2 = np.asarray(theta2_grid, dtype=float)
    rate = np.array([float(rate_fn(theta1, t2)) for t2 in theta2])
    return ScanCurve(abscissa=theta2, rate=rate, unit="rad")


def visibility(curve: ScanCurve) -> float:
    """(max - min) / (max + min) over the sampled points, no interpolation."""
    if np.any(curve.rate < 0.0):
        raise ValueError("visibility requires a nonnegative curve")
    hi = float(np.max(curve.rate))
    lo = float(np.min(curve.rate))
    if hi + lo == 0.0:
        raise UndefinedVisibilityError("visibility undefined on an all-zero curve")
    return (hi - lo) / (hi + lo)
