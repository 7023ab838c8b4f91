"""Refractive indices, wavevectors and their frequency/angle derivatives.

Conventions used throughout the package:

* wavelengths at API boundaries are vacuum wavelengths in nm,
* ``omega`` is an angular-frequency offset in rad/s from the degenerate
  frequency ``omega0 = 2*pi*c / (2*lambda_pump)``,
* angles are in radians; ``angle_to_axis`` is measured from the crystal
  optic axis, scattering angles are measured from the pump direction,
* wavevectors are in 1/m, so the group-delay mismatch ``D`` is in s/m and
  the group-velocity dispersion terms are in s^2/m.

The frequency-offset <-> wavelength-offset conversion is the linearised
``dlam = lam0**2 * omega / (2*pi*c)`` about the degenerate wavelength; the
CLI and all reports use it consistently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError, PhaseMatchingError, WavelengthRangeError

if TYPE_CHECKING:  # pragma: no cover - only for annotations
    from .mismatch import SetupConfig

C_LIGHT = 299792458.0  # m/s

Polarization = Literal["ordinary", "extraordinary"]

#: finite-difference steps (rad/s and rad), well inside the smooth region of
#: Sellmeier curves; each derivative is cross-checked at half step.
OMEGA_STEP = 1e11
THETA_STEP = 1e-4
STEP_CHECK_RTOL = 1e-3

#: residual tolerance (1/m) for the collinear degenerate phase-matching root
MISMATCH_ROOT_TOL = 0.1


class Scheme(str, Enum):
    """Pair-generation geometry: one type-II crystal, or two crossed type-I."""

    TYPE_II = "type2"
    TWO_TYPE_I = "type1"


def angular_frequency(wavelength_nm):
    """Vacuum angular frequency (rad/s) of a wavelength in nm."""
    return 2.0 * math.pi * C_LIGHT / (np.asarray(wavelength_nm, dtype=float) * 1e-9)


def wavelength_of_frequency(omega):
    """Vacuum wavelength in nm of an angular frequency in rad/s."""
    return 2.0 * math.pi * C_LIGHT / np.asarray(omega, dtype=float) * 1e9


def wavelength_offset_nm(omega_offset, center_nm: float):
    """Linearised wavelength offset (nm) of a frequency offset (rad/s)."""
    lam0 = center_nm * 1e-9
    return np.asarray(omega_offset, dtype=float) * lam0**2 / (2.0 * math.pi * C_LIGHT) * 1e9


def frequency_offset(dlam_nm, center_nm: float):
    """Inverse of :func:`wavelength_offset_nm`."""
    lam0 = center_nm * 1e-9
    return np.asarray(dlam_nm, dtype=float) * 1e-9 * 2.0 * math.pi * C_LIGHT / lam0**2


@dataclass(frozen=True)
class DispersionModel:
    """Sellmeier description of a uniaxial crystal (or isotropic glass).

    Each branch is a 4-coefficient set ``(a, b, c, d)`` evaluated with the
    wavelength ``lam`` in micrometres:

        n**2 = a + b / (lam**2 - c) + d * lam**2

    ``name`` carries the literature source of the coefficients so every
    output file records where the dispersion data came from.
    """

    name: str
    sellmeier_o: tuple[float, float, float, float]
    sellmeier_e: tuple[float, float, float, float]
    valid_range_nm: tuple[float, float]

    def check_wavelength(self, wavelength_nm) -> None:
        lam = np.asarray(wavelength_nm, dtype=float)
        lo, hi = self.valid_range_nm
        if np.any(lam < lo) or np.any(lam > hi):
            raise WavelengthRangeError(
                f"wavelength outside the validity range "
                f"[{lo:g}, {hi:g}] nm of dispersion model '{self.name}'"
            )

    def validate(self, samples: int = 64) -> None:
        """Sanity-check a (possibly user-supplied) coefficient set.

        Verifies that both branches are real, above 1 and monotonically
        decreasing with wavelength over the validity range.
        """
        lam = np.linspace(self.valid_range_nm[0], self.valid_range_nm[1], samples)
        for pol in ("ordinary", "extraordinary"):
            with np.errstate(invalid="ignore"):
                n = refractive_index(self, pol, lam, 0.0 if pol == "ordinary" else math.pi / 2)
            if not np.all(np.isfinite(n)) or np.any(n <= 1.0):
                raise ConfigurationError(
                    f"dispersion model '{self.name}': {pol} index not real and > 1 "
                    f"over the validity range"
                )
            if np.any(np.diff(n) >= 0.0):
                raise ConfigurationError(
                    f"dispersion model '{self.name}': {pol} index is not "
                    f"monotonically decreasing (anomalous dispersion?)"
                )


#: Beta barium borate, Eimerl et al., J. Appl. Phys. 62, 1968 (1987).
BBO_EIMERL = DispersionModel(
    name="BBO Sellmeier, Eimerl et al. J. Appl. Phys. 62, 1968 (1987)",
    sellmeier_o=(2.7405, 0.0184, 0.0179, -0.0155),
    sellmeier_e=(2.3730, 0.0128, 0.0156, -0.0044),
    valid_range_nm=(220.0, 1060.0),
)

#: Beta barium borate, Kato, IEEE J. Quantum Electron. 22, 1013 (1986).
BBO_KATO = DispersionModel(
    name="BBO Sellmeier, Kato IEEE JQE 22, 1013 (1986)",
    sellmeier_o=(2.7359, 0.01878, 0.01822, -0.01354),
    sellmeier_e=(2.3753, 0.01224, 0.01667, -0.01516),
    valid_range_nm=(220.0, 1060.0),
)

BUILTIN_MODELS = {
    "bbo-eimerl": BBO_EIMERL,
    "bbo-kato": BBO_KATO,
}
DEFAULT_MODEL_KEY = "bbo-eimerl"


def _sellmeier_n2(coeffs, wavelength_nm):
    a, b, c, d = coeffs
    lam2 = (np.asarray(wavelength_nm, dtype=float) * 1e-3) ** 2  # um^2
    return a + b / (lam2 - c) + d * lam2


def refractive_index(model: DispersionModel, pol: Polarization, wavelength_nm, angle_to_axis=0.0):
    """Refractive index of a plane wave propagating at ``angle_to_axis``.

    The ordinary index does not depend on the angle.  The extraordinary
    index follows the uniaxial index ellipsoid and interpolates between the
    ordinary index (along the axis) and the principal extraordinary index
    (perpendicular to it).
    """
    model.check_wavelength(wavelength_nm)
    n2_o = _sellmeier_n2(model.sellmeier_o, wavelength_nm)
    if pol == "ordinary":
        return np.sqrt(n2_o)
    if pol == "extraordinary":
        ang = np.asarray(angle_to_axis, dtype=float)
        n2_e = _sellmeier_n2(model.sellmeier_e, wavelength_nm)
        inv = np.cos(ang) ** 2 / n2_o + np.sin(ang) ** 2 / n2_e
        return 1.0 / np.sqrt(inv)
    raise ValueError(f"unknown polarization {pol!r}")


def wavevector(model: DispersionModel, pol: Polarization, wavelength_nm, angle_to_axis=0.0):
    """Wavevector magnitude 2*pi*n/lambda in 1/m."""
    n = refractive_index(model, pol, wavelength_nm, angle_to_axis)
    return 2.0 * math.pi * n / (np.asarray(wavelength_nm, dtype=float) * 1e-9)


def _wavevector_omega(model, pol, omega, angle_to_axis=0.0):
    """Wavevector as a function of absolute angular frequency (rad/s)."""
    return wavevector(model, pol, wavelength_of_frequency(omega), angle_to_axis)


def collinear_degenerate_mismatch(
    model: DispersionModel, scheme: Scheme, pump_wavelength_nm: float, cut_angle_rad
):
    """Longitudinal mismatch (1/m) at the collinear frequency-degenerate point.

    The pump is extraordinary in both schemes; the pair is e+o for type-II
    and o+o for the two-type-I configuration.
    """
    lam0 = 2.0 * pump_wavelength_nm
    k_p = wavevector(model, "extraordinary", pump_wavelength_nm, cut_angle_rad)
    k_o = wavevector(model, "ordinary", lam0)
    if scheme is Scheme.TYPE_II:
        k_e = wavevector(model, "extraordinary", lam0, cut_angle_rad)
        return k_e + k_o - k_p
    return 2.0 * k_o - k_p


def phase_matching_angle(
    model: DispersionModel, pump_wavelength_nm: float, scheme: Scheme
) -> float:
    """Cut angle (rad) with collinear degenerate phase matching.

    Brackets a sign change of the degenerate mismatch on (0, pi/2) and
    refines it with a bracketed root solve until |mismatch| < 0.1 1/m.
    """
    model.check_wavelength(pump_wavelength_nm)
    model.check_wavelength(2.0 * pump_wavelength_nm)

    def f(angle):
        return collinear_degenerate_mismatch(model, scheme, pump_wavelength_nm, angle)

    grid = np.linspace(1e-6, math.pi / 2 - 1e-6, 512)
    values = f(grid)
    sign_change = np.nonzero(np.diff(np.sign(values)) != 0)[0]
    if sign_change.size == 0:
        raise PhaseMatchingError(
            f"no phase matching for {scheme.value} with pump "
            f"{pump_wavelength_nm:g} nm in model '{model.name}'"
        )
    i = int(sign_change[0])
    angle = brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-15)
    residual = abs(f(angle))
    if residual >= MISMATCH_ROOT_TOL:
        raise PhaseMatchingError(
            f"root refinement stalled, |mismatch| = {residual:.3e} 1/m"
        )
    return float(angle)


@dataclass(frozen=True)
class DispersionCoefficients:
    """Expansion coefficients of the longitudinal mismatch at degeneracy.

    ``D`` (s/m) is the group-delay mismatch d(k_e)/dOmega - d(k_o)/dOmega of
    the pair, ``B`` (1/(m rad)) the angular derivative d(k_e)/dtheta, and
    ``gvd_o``/``gvd_e`` (s^2/m) the second frequency derivatives of the two
    branches.  Derivatives of the extraordinary branch are taken at the cut
    angle.  Note that for BBO near 702 nm the extraordinary photon is the
    faster one, so D as defined here is negative; pair observables depend
    on it only through even functions.
    """

    D: float
    B: float
    gvd_o: float
    gvd_e: float
    evaluated_at: tuple[float, float]  # (degenerate wavelength nm, cut angle rad)

    def tau0(self, crystal_length_m: float) -> float:
        """e-o group delay D*L/2 (s) for a pair born at the crystal centre."""
        return self.D * crystal_length_m / 2.0


def _central_first(f, x0, h):
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h)


def _central_second(f, x0, h):
    return (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h)


def _checked(deriv, f, x0, h, label):
    coarse = deriv(f, x0, h)
    fine = deriv(f, x0, h / 2.0)
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        raise ConfigurationError(f"finite difference for {label} is not finite")
    if abs(fine - coarse) > STEP_CHECK_RTOL * max(abs(fine), abs(coarse)):
        raise ConfigurationError(
            f"finite difference for {label} not converged under step halving "
            f"({coarse:.6e} vs {fine:.6e})"
        )
    return fine


def dispersion_coefficients(model: DispersionModel, setup: "SetupConfig") -> DispersionCoefficients:
    """Central-difference expansion coefficients for a phase-matched setup.

    Every derivative is recomputed at half step and must agree to 0.1%.
    """
    residual = abs(
        collinear_degenerate_mismatch(
            model, setup.scheme, setup.pump_wavelength_nm, setup.cut_angle_rad
        )
    )
    if residual >= MISMATCH_ROOT_TOL:
        raise ConfigurationError(
            f"setup is not phase matched at the degenerate point "
            f"(|mismatch| = {residual:.3e} 1/m)"
        )

    lam0 = 2.0 * setup.pump_wavelength_nm
    omega0 = float(angular_frequency(lam0))
    cut = setup.cut_angle_rad

    def k_e_of_omega(w):
        return float(_wavevector_omega(model, "extraordinary", w, cut))

    def k_o_of_omega(w):
        return float(_wavevector_omega(model, "ordinary", w))

    def k_e_of_angle(a):
        return float(wavevector(model, "extraordinary", lam0, a))

    d_e = _checked(_central_first, k_e_of_omega, omega0, OMEGA_STEP, "dk_e/dOmega")
    d_o = _checked(_central_first, k_o_of_omega, omega0, OMEGA_STEP, "dk_o/dOmega")
    b = _checked(_central_first, k_e_of_angle, cut, THETA_STEP, "dk_e/dtheta")
    gvd_o = _checked(_central_second, k_o_of_omega, omega0, OMEGA_STEP, "d2k_o/dOmega2")
    gvd_e = _checked(_central_second, k_e_of_omega, omega0, OMEGA_STEP, "d2k_e/dOmega2")

    return DispersionCoefficients(
        D=d_e - d_o,
        B=b,
        gvd_o=gvd_o,
        gvd_e=gvd_e,
        evaluated_at=(lam0, cut),
    )
