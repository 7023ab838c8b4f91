"""Longitudinal phase mismatch and the two-type-I relative phase.

Exact expressions evaluate the full Sellmeier wavevectors; the expansion
forms (linear for type-II, quadratic for two-type-I) take precomputed
:class:`~bellband.dispersion.DispersionCoefficients`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dispersion as disp
from .dispersion import DispersionModel, Scheme
from .errors import ConfigurationError, ModePointError

#: expansion validity guards for emission-mode points
THETA_GUARD = 0.2       # rad
OMEGA_GUARD_FRACTION = 0.2  # fraction of the degenerate frequency


@dataclass(frozen=True)
class SetupConfig:
    """A crystal configuration for collinear frequency-degenerate operation.

    ``crystal_length_m`` is the generating crystal length L.  For the
    two-type-I scheme the second crystal (the one traversed by pairs born
    in the first) may have its own length; it defaults to L.
    ``extra_eo_delay_s`` is the e-o delay of birefringent plates placed
    after the crystal (0 when no plate is present).
    """

    model: DispersionModel
    scheme: Scheme
    crystal_length_m: float
    pump_wavelength_nm: float
    cut_angle_rad: float
    extra_eo_delay_s: float = 0.0
    second_crystal_length_m: float | None = None

    def __post_init__(self):
        if self.crystal_length_m <= 0.0:
            raise ConfigurationError("crystal_length_m must be > 0")
        if self.second_crystal_length_m is not None and self.second_crystal_length_m <= 0.0:
            raise ConfigurationError("second_crystal_length_m must be > 0")
        self.model.check_wavelength(self.pump_wavelength_nm)
        self.model.check_wavelength(self.degenerate_wavelength_nm)
        residual = abs(
            disp.collinear_degenerate_mismatch(
                self.model, self.scheme, self.pump_wavelength_nm, self.cut_angle_rad
            )
        )
        if residual >= disp.MISMATCH_ROOT_TOL:
            raise ConfigurationError(
                f"cut angle {self.cut_angle_rad:.6f} rad is not phase matched: "
                f"|mismatch(0,0)| = {residual:.3e} 1/m (tolerance "
                f"{disp.MISMATCH_ROOT_TOL} 1/m)"
            )

    @classmethod
    def collinear_degenerate(
        cls,
        model: DispersionModel,
        scheme: Scheme,
        crystal_length_m: float,
        pump_wavelength_nm: float,
        **kwargs,
    ) -> "SetupConfig":
        """Build a setup with the cut angle solved from phase matching."""
        angle = disp.phase_matching_angle(model, pump_wavelength_nm, scheme)
        return cls(
            model=model,
            scheme=scheme,
            crystal_length_m=crystal_length_m,
            pump_wavelength_nm=pump_wavelength_nm,
            cut_angle_rad=angle,
            **kwargs,
        )

    @property
    def degenerate_wavelength_nm(self) -> float:
        return 2.0 * self.pump_wavelength_nm

    @property
    def omega0(self) -> float:
        """Degenerate angular frequency (rad/s)."""
        return float(disp.angular_frequency(self.degenerate_wavelength_nm))

    @property
    def second_length_m(self) -> float:
        if self.second_crystal_length_m is None:
            return self.crystal_length_m
        return self.second_crystal_length_m


@dataclass(frozen=True)
class ModePoint:
    """A point (theta, omega) in the scattering-angle / frequency-offset plane.

    ``theta`` is the internal scattering angle of photon 1 (the
    extraordinary photon for type-II), ``omega`` its angular-frequency
    offset from degeneracy.  Fields may be scalars or equally shaped
    arrays.
    """

    theta: float | np.ndarray = 0.0
    omega: float | np.ndarray = 0.0


def check_mode_point(setup: SetupConfig, point: ModePoint) -> None:
    """Reject points outside the validity guard of the expansions."""
    if np.any(np.abs(point.theta) >= THETA_GUARD):
        raise ModePointError(
            f"|theta| must stay below {THETA_GUARD} rad for the expansions to hold"
        )
    omega_max = OMEGA_GUARD_FRACTION * setup.omega0
    if np.any(np.abs(point.omega) >= omega_max):
        raise ModePointError(
            f"|omega| must stay below {OMEGA_GUARD_FRACTION} * omega0 = {omega_max:.3e} rad/s"
        )


def ordinary_wavevector_degenerate(setup: SetupConfig) -> float:
    """k_o at the degenerate wavelength (1/m)."""
    return float(disp.wavevector(setup.model, "ordinary", setup.degenerate_wavelength_nm))


def extraordinary_wavevector_degenerate(setup: SetupConfig) -> float:
    """k_e at the degenerate wavelength and the cut angle (1/m)."""
    return float(
        disp.wavevector(
            setup.model, "extraordinary", setup.degenerate_wavelength_nm, setup.cut_angle_rad
        )
    )


def delta_z_exact_typeII(setup: SetupConfig, point: ModePoint, orthogonal_plane: bool = False):
    """Exact type-II longitudinal mismatch (1/m).

    The extraordinary photon propagates at ``theta`` from the pump axis and
    the ordinary one at ``-theta``; both contribute their longitudinal
    projections.  With ``orthogonal_plane`` the angle is taken in the plane
    perpendicular to the optic-axis plane, where the extraordinary index is
    sampled at ``arccos(cos(cut)*cos(theta))`` and the mismatch is even in
    ``theta``.
    """
    if setup.scheme is not Scheme.TYPE_II:
        raise ConfigurationError("delta_z_exact_typeII requires a type-II setup")
    check_mode_point(setup, point)
    theta = np.asarray(point.theta, dtype=float)
    omega = np.asarray(point.omega, dtype=float)
    omega0 = setup.omega0
    lam_e = disp.wavelength_of_frequency(omega0 + omega)
    lam_o = disp.wavelength_of_frequency(omega0 - omega)
    if orthogonal_plane:
        axis_angle = np.arccos(np.cos(setup.cut_angle_rad) * np.cos(theta))
    else:
        axis_angle = setup.cut_angle_rad + theta
    k_e = disp.wavevector(setup.model, "extraordinary", lam_e, axis_angle)
    k_o = disp.wavevector(setup.model, "ordinary", lam_o)
    k_p = disp.wavevector(
        setup.model, "extraordinary", setup.pump_wavelength_nm, setup.cut_angle_rad
    )
    return (k_e + k_o) * np.cos(theta) - k_p


def delta_z_linear_typeII(coeffs: disp.DispersionCoefficients, point: ModePoint):
    """Linearised type-II mismatch D*omega + B*theta (1/m)."""
    return coeffs.D * np.asarray(point.omega, dtype=float) + coeffs.B * np.asarray(
        point.theta, dtype=float
    )


def delta_z_typeI(coeffs: disp.DispersionCoefficients, setup: SetupConfig, point: ModePoint):
    """Quadratic two-type-I mismatch gvd_o*omega^2 - k_o*theta^2 (1/m)."""
    if setup.scheme is not Scheme.TWO_TYPE_I:
        raise ConfigurationError("delta_z_typeI requires a two-type-I setup")
    check_mode_point(setup, point)
    k_o = ordinary_wavevector_degenerate(setup)
    theta = np.asarray(point.theta, dtype=float)
    omega = np.asarray(point.omega, dtype=float)
    return coeffs.gvd_o * omega**2 - k_o * theta**2


def phase_typeI(coeffs: disp.DispersionCoefficients, setup: SetupConfig, point: ModePoint):
    """Relative phase (rad, unreduced) acquired in the second type-I crystal.

    Pairs born in the first crystal traverse the second one with
    extraordinary polarization and pick up ``(gvd_e*omega^2 - k_e*theta^2) * L2``
    relative to pairs born there.  The value is returned raw; reduction to
    [0, 2*pi) happens at classification time.
    """
    if setup.scheme is not Scheme.TWO_TYPE_I:
        raise ConfigurationError("phase_typeI requires a two-type-I setup")
    check_mode_point(setup, point)
    k_e = extraordinary_wavevector_degenerate(setup)
    theta = np.asarray(point.theta, dtype=float)
    omega = np.asarray(point.omega, dtype=float)
    return (coeffs.gvd_e * omega**2 - k_e * theta**2) * setup.second_length_m
