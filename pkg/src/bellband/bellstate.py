"""Two-photon amplitudes, Bell-state classification and frequency-angular maps.

The first-written polarization component (HV for type-II, HH for
two-type-I) carries phase 0; the whole relative phase sits on the second
component.  Contours are extracted from the unreduced phase so branch cuts
of the mod-2*pi reduction cannot produce artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .dispersion import DispersionCoefficients, Scheme
from .errors import ConfigurationError
from .mismatch import (
    ModePoint,
    SetupConfig,
    check_mode_point,
    delta_z_linear_typeII,
    delta_z_typeI,
    extraordinary_wavevector_degenerate,
    ordinary_wavevector_degenerate,
    phase_typeI,
)

DEFAULT_CLASSIFY_TOL = 0.05  # rad


class Basis(str, Enum):
    HV_VH = "HV/VH"
    HH_VV = "HH/VV"


class BellKind(str, Enum):
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class TwoPhotonAmplitude:
    """Magnitude and relative phase of the two polarization components."""

    magnitude: float
    relative_phase: float  # rad, reduced to [0, 2*pi)
    basis: Basis


@dataclass(frozen=True)
class BellLabel:
    kind: BellKind
    phase: float


def two_photon_amplitude(
    setup: SetupConfig, coeffs: DispersionCoefficients, point: ModePoint
) -> TwoPhotonAmplitude:
    """Pair amplitude at a mode point, from the expansion forms.

    Type-II uses the linear mismatch for both the sinc envelope and the
    phase; plates add ``2 * extra_eo_delay * omega``.  Two-type-I uses the
    quadratic mismatch for the envelope and the second-crystal phase.
    """
    check_mode_point(setup, point)
    if setup.scheme is Scheme.TYPE_II:
        dz = delta_z_linear_typeII(coeffs, point)
        half = dz * setup.crystal_length_m / 2.0
        raw = 2.0 * half + 2.0 * setup.extra_eo_delay_s * np.asarray(point.omega, dtype=float)
        basis = Basis.HV_VH
    else:
        dz = delta_z_typeI(coeffs, setup, point)
        half = dz * setup.crystal_length_m / 2.0
        raw = phase_typeI(coeffs, setup, point)
        basis = Basis.HH_VV
    magnitude = float(np.abs(np.sinc(half / math.pi)))
    return TwoPhotonAmplitude(
        magnitude=magnitude,
        relative_phase=float(np.mod(raw, 2.0 * math.pi)),
        basis=basis,
    )


def classify(amp: TwoPhotonAmplitude, tol: float = DEFAULT_CLASSIFY_TOL) -> BellLabel:
    """Map a relative phase to the nearest maximally entangled state label."""
    if not 0.0 < tol < math.pi / 4:
        raise ValueError("classification tolerance must lie in (0, pi/4)")
    phase = math.fmod(amp.relative_phase, 2.0 * math.pi)
    if phase < 0.0:
        phase += 2.0 * math.pi
    dist0 = min(phase, 2.0 * math.pi - phase)
    dist_pi = abs(phase - math.pi)
    if amp.basis is Basis.HV_VH:
        plus, minus = BellKind.PSI_PLUS, BellKind.PSI_MINUS
    else:
        plus, minus = BellKind.PHI_PLUS, BellKind.PHI_MINUS
    if dist0 <= tol:
        return BellLabel(kind=plus, phase=phase)
    if dist_pi <= tol:
        return BellLabel(kind=minus, phase=phase)
    return BellLabel(kind=BellKind.INTERMEDIATE, phase=phase)


@dataclass(frozen=True)
class SpectrumMap:
    """Dense pair intensity and relative phase over a (theta, omega) grid.

    ``intensity[i, j]`` and the phase arrays correspond to
    ``(theta_axis[i], omega_axis[j])``.  ``phase`` is reduced to [0, 2*pi);
    ``phase_raw`` keeps the unreduced values used for contour extraction.
    """

    theta_axis: np.ndarray
    omega_axis: np.ndarray
    intensity: np.ndarray
    phase: np.ndarray
    phase_raw: np.ndarray
    scheme: Scheme


def spectrum_map(
    setup: SetupConfig,
    coeffs: DispersionCoefficients,
    theta_range: tuple[float, float],
    omega_range: tuple[float, float],
    resolution: int = 512,
) -> SpectrumMap:
    """Evaluate the two-photon amplitude on a regular grid."""
    if resolution < 16:
        raise ConfigurationError("map resolution must be at least 16 per axis")
    theta = np.linspace(theta_range[0], theta_range[1], resolution)
    omega = np.linspace(omega_range[0], omega_range[1], resolution)
    check_mode_point(setup, ModePoint(theta=theta, omega=omega))
    if setup.scheme is Scheme.TYPE_II:
        intensity, raw = kernels.amplitude_map_typeii(
            theta,
            omega,
            coeffs.D,
            coeffs.B,
            setup.crystal_length_m,
            setup.extra_eo_delay_s,
        )
    else:
        intensity, raw = kernels.amplitude_map_typei(
            theta,
            omega,
            coeffs.gvd_o,
            coeffs.gvd_e,
            ordinary_wavevector_degenerate(setup),
            extraordinary_wavevector_degenerate(setup),
            setup.crystal_length_m,
            setup.second_length_m,
        )
    return SpectrumMap(
        theta_axis=theta,
        omega_axis=omega,
        intensity=intensity,
        phase=np.mod(raw, 2.0 * math.pi),
        phase_raw=raw,
        scheme=setup.scheme,
    )


def _join_segments(segments: np.ndarray, tol: float) -> list[np.ndarray]:
    """Chain marching-squares segments into ordered polylines."""
    if segments.shape[0] == 0:
        return []

    def key(p):
        return (round(p[0] / tol), round(p[1] / tol))

    # level sets through grid nodes yield zero-length segments; drop them
    keep = [
        i
        for i in range(segments.shape[0])
        if key(segments[i, 0:2]) != key(segments[i, 2:4])
    ]
    segments = segments[keep]
    if segments.shape[0] == 0:
        return []

    adjacency: dict[tuple[int, int], list[int]] = {}
    ends = []
    for idx in range(segments.shape[0]):
        a = segments[idx, 0:2]
        b = segments[idx, 2:4]
        ends.append((a, b))
        adjacency.setdefault(key(a), []).append(idx)
        adjacency.setdefault(key(b), []).append(idx)

    used = np.zeros(segments.shape[0], dtype=bool)

    def walk(start_idx, start_point):
        chain = [np.asarray(start_point, dtype=float)]
        idx = start_idx
        point = start_point
        while True:
            used[idx] = True
            a, b = ends[idx]
            nxt = b if key(a) == key(point) else a
            chain.append(np.asarray(nxt, dtype=float))
            candidates = [
                m for m in adjacency.get(key(nxt), []) if not used[m]
            ]
            if not candidates:
                return chain
            idx = candidates[0]
            point = nxt

    polylines = []
    # open chains first: start from endpoints that belong to a single segment
    for idx in range(segments.shape[0]):
        if used[idx]:
            continue
        a, b = ends[idx]
        for p in (a, b):
            if len(adjacency[key(p)]) == 1 and not used[idx]:
                polylines.append(np.vstack(walk(idx, p)))
                break
    for idx in range(segments.shape[0]):  # remaining closed loops
        if not used[idx]:
            polylines.append(np.vstack(walk(idx, ends[idx][0])))
    return polylines


def bell_contours(smap: SpectrumMap, level: float) -> list[np.ndarray]:
    """Iso-lines of the unreduced relative phase at ``level``.

    Returns ordered polylines as (n, 2) arrays of (theta, omega) points;
    an empty list when the level is not crossed.
    """
    segments = kernels.contour_segments(
        smap.theta_axis, smap.omega_axis, smap.phase_raw, level
    )
    span = max(
        abs(smap.theta_axis[-1] - smap.theta_axis[0]),
        1e-300,
    )
    return _join_segments(segments, tol=1e-9 * span)
