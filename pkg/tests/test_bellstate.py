import math

import numpy as np
import pytest

import bellband as bb
from bellband.bellstate import Basis, BellKind
from bellband.errors import ConfigurationError


def bilinear(smap, theta, omega, field):
    i = np.clip(np.searchsorted(smap.theta_axis, theta) - 1, 0, smap.theta_axis.size - 2)
    j = np.clip(np.searchsorted(smap.omega_axis, omega) - 1, 0, smap.omega_axis.size - 2)
    tx = (theta - smap.theta_axis[i]) / (smap.theta_axis[i + 1] - smap.theta_axis[i])
    ty = (omega - smap.omega_axis[j]) / (smap.omega_axis[j + 1] - smap.omega_axis[j])
    f = getattr(smap, field)
    return (
        f[i, j] * (1 - tx) * (1 - ty)
        + f[i + 1, j] * tx * (1 - ty)
        + f[i, j + 1] * (1 - tx) * ty
        + f[i + 1, j + 1] * tx * ty
    )


def test_amplitude_at_matched_point(type2_setup, type2_coeffs):
    amp = bb.two_photon_amplitude(type2_setup, type2_coeffs, bb.ModePoint(0.0, 0.0))
    assert amp.magnitude == 1.0
    assert amp.relative_phase == 0.0
    assert amp.basis is Basis.HV_VH


def test_amplitude_at_pi_point(type2_setup, type2_coeffs):
    L = type2_setup.crystal_length_m
    omega = math.pi / (type2_coeffs.D * L)  # dz*L = +pi exactly
    amp = bb.two_photon_amplitude(type2_setup, type2_coeffs, bb.ModePoint(0.0, omega))
    assert amp.magnitude == pytest.approx(2.0 / math.pi, abs=1e-12)
    assert amp.magnitude**2 == pytest.approx(0.405, abs=5e-4)
    assert amp.relative_phase == pytest.approx(math.pi, abs=1e-9)


def test_plate_restores_phase_zero(type2_setup, type2_coeffs):
    # with an extra plate delay equal to tau0, the point that produced the
    # singlet now carries phase 2*pi, i.e. the triplet again
    tau0 = type2_coeffs.tau0(type2_setup.crystal_length_m)
    omega = math.pi / (2.0 * tau0)
    setup = bb.SetupConfig(
        model=bb.BBO_EIMERL,
        scheme=bb.Scheme.TYPE_II,
        crystal_length_m=type2_setup.crystal_length_m,
        pump_wavelength_nm=351.0,
        cut_angle_rad=type2_setup.cut_angle_rad,
        extra_eo_delay_s=tau0,
    )
    amp = bb.two_photon_amplitude(setup, type2_coeffs, bb.ModePoint(0.0, omega))
    assert min(amp.relative_phase, 2 * math.pi - amp.relative_phase) < 1e-9


def test_typeI_amplitude_basis(type1_setup, type1_coeffs):
    amp = bb.two_photon_amplitude(type1_setup, type1_coeffs, bb.ModePoint(0.0, 0.0))
    assert amp.basis is Basis.HH_VV
    assert amp.magnitude == 1.0


@pytest.mark.parametrize(
    "phase,basis,kind",
    [
        (0.0, Basis.HV_VH, BellKind.PSI_PLUS),
        (math.pi, Basis.HV_VH, BellKind.PSI_MINUS),
        (0.0, Basis.HH_VV, BellKind.PHI_PLUS),
        (math.pi, Basis.HH_VV, BellKind.PHI_MINUS),
        (math.pi / 2, Basis.HV_VH, BellKind.INTERMEDIATE),
        (2 * math.pi - 0.01, Basis.HV_VH, BellKind.PSI_PLUS),
    ],
)
def test_classify(phase, basis, kind):
    amp = bb.TwoPhotonAmplitude(magnitude=0.7, relative_phase=phase, basis=basis)
    label = bb.classify(amp, tol=0.05)
    assert label.kind is kind
    if kind is BellKind.INTERMEDIATE:
        assert label.phase == pytest.approx(phase)


def test_classify_tol_validation():
    amp = bb.TwoPhotonAmplitude(magnitude=1.0, relative_phase=0.0, basis=Basis.HV_VH)
    with pytest.raises(ValueError):
        bb.classify(amp, tol=1.0)


def default_type2_map(setup, coeffs, resolution=513):
    omega_max = 1.2 * math.pi / abs(coeffs.D * setup.crystal_length_m)
    return bb.spectrum_map(
        setup, coeffs, (-0.008, 0.008), (-omega_max, omega_max), resolution
    )


def test_map_max_intensity_on_matched_locus(type2_setup, type2_coeffs):
    smap = default_type2_map(type2_setup, type2_coeffs)  # odd grid contains (0, 0)
    assert float(np.max(smap.intensity)) == pytest.approx(1.0, abs=1e-15)


def test_map_resolution_guard(type2_setup, type2_coeffs):
    with pytest.raises(ConfigurationError):
        bb.spectrum_map(type2_setup, type2_coeffs, (-0.01, 0.01), (-1e13, 1e13), 8)


def test_zero_phase_contour_matches_line(type2_setup, type2_coeffs):
    smap = default_type2_map(type2_setup, type2_coeffs)
    lines = bb.bell_contours(smap, 0.0)
    assert len(lines) == 1
    L = type2_setup.crystal_length_m
    d_cell = abs(np.diff(smap.omega_axis)[0])
    t_cell = abs(np.diff(smap.theta_axis)[0])
    # residual of the analytic locus, bounded by one grid cell's phase span
    cell_span = (abs(type2_coeffs.D) * d_cell + abs(type2_coeffs.B) * t_cell) * L
    for th, om in lines[0]:
        residual = abs(type2_coeffs.D * om + type2_coeffs.B * th) * L
        assert residual <= cell_span


def test_pi_contours_straddle_zero_line(type2_setup, type2_coeffs):
    smap = default_type2_map(type2_setup, type2_coeffs)
    plus = bb.bell_contours(smap, math.pi)
    minus = bb.bell_contours(smap, -math.pi)
    assert len(plus) == 1 and len(minus) == 1
    L = type2_setup.crystal_length_m
    side_plus = [type2_coeffs.D * om + type2_coeffs.B * th for th, om in plus[0]]
    side_minus = [type2_coeffs.D * om + type2_coeffs.B * th for th, om in minus[0]]
    assert all(v > 0 for v in side_plus)
    assert all(v < 0 for v in side_minus)
    for th, om in list(plus[0]) + list(minus[0]):
        assert abs(abs(type2_coeffs.D * om + type2_coeffs.B * th) * L - math.pi) < 0.05


def test_intensity_on_pi_contour(type2_setup, type2_coeffs):
    smap = default_type2_map(type2_setup, type2_coeffs)
    target = (2.0 / math.pi) ** 2
    for level in (math.pi, -math.pi):
        for line in bb.bell_contours(smap, level):
            for th, om in line[:: max(1, len(line) // 50)]:
                value = bilinear(smap, th, om, "intensity")
                assert value == pytest.approx(target, rel=0.02)


def test_typeI_pi_contour_crossing(type1_setup, type1_coeffs):
    omega_pi = math.sqrt(math.pi / (type1_coeffs.gvd_e * type1_setup.second_length_m))
    smap = bb.spectrum_map(
        type1_setup, type1_coeffs, (-0.02, 0.02), (-1.3 * omega_pi, 1.3 * omega_pi), 513
    )
    lines = bb.bell_contours(smap, math.pi)
    assert lines
    points = np.vstack(lines)
    cell = abs(np.diff(smap.omega_axis)[0]) + 1e-6 * omega_pi
    # crossings of the theta = 0 axis sit at +-sqrt(pi / (gvd_e * L2))
    near_axis = points[np.abs(points[:, 0]) < 2 * abs(np.diff(smap.theta_axis)[0])]
    assert near_axis.size > 0
    hits_plus = np.any(np.abs(near_axis[:, 1] - omega_pi) < cell)
    hits_minus = np.any(np.abs(near_axis[:, 1] + omega_pi) < cell)
    assert hits_plus and hits_minus


def test_typeI_zero_contour_symmetric(type1_setup, type1_coeffs):
    omega_max = 1.5e14
    smap = bb.spectrum_map(
        type1_setup, type1_coeffs, (-0.02, 0.02), (-omega_max, omega_max), 257
    )
    lines = bb.bell_contours(smap, 0.0)
    assert lines
    points = np.vstack(lines)
    # the zero-phase locus is even in both axes: gvd_e*om^2 = k_e*th^2
    from bellband.mismatch import extraordinary_wavevector_degenerate

    k_e = extraordinary_wavevector_degenerate(type1_setup)
    residual = type1_coeffs.gvd_e * points[:, 1] ** 2 - k_e * points[:, 0] ** 2
    scale = type1_coeffs.gvd_e * omega_max**2
    assert np.max(np.abs(residual)) < 0.02 * scale


def test_empty_contour_is_not_an_error(type2_setup, type2_coeffs):
    smap = default_type2_map(type2_setup, type2_coeffs, resolution=65)
    assert bb.bell_contours(smap, 1e6) == []


def test_classification_symmetry(type2_setup, type2_coeffs, type1_setup, type1_coeffs):
    rng = np.random.default_rng(7)
    for _ in range(20):
        th = rng.uniform(-0.005, 0.005)
        om = rng.uniform(-2e13, 2e13)
        a = bb.classify(bb.two_photon_amplitude(type2_setup, type2_coeffs, bb.ModePoint(th, om)))
        b = bb.classify(
            bb.two_photon_amplitude(type2_setup, type2_coeffs, bb.ModePoint(-th, -om))
        )
        assert a.kind is b.kind  # phase flips sign, labels are symmetric about 0/pi
    for _ in range(20):
        th = rng.uniform(-0.005, 0.005)
        om = rng.uniform(-1.5e14, 1.5e14)
        a = bb.classify(bb.two_photon_amplitude(type1_setup, type1_coeffs, bb.ModePoint(th, om)))
        b = bb.classify(bb.two_photon_amplitude(type1_setup, type1_coeffs, bb.ModePoint(th, -om)))
        assert a.kind is b.kind
        assert a.phase == pytest.approx(b.phase, abs=1e-12)


def test_phase_raw_equals_dzl_without_plates(type2_setup, type2_coeffs):
    smap = default_type2_map(type2_setup, type2_coeffs, resolution=65)
    L = type2_setup.crystal_length_m
    th, om = np.meshgrid(smap.theta_axis, smap.omega_axis, indexing="ij")
    dzl = np.asarray(bb.delta_z_linear_typeII(type2_coeffs, bb.ModePoint(th, om))) * L
    assert np.allclose(smap.phase_raw, dzl, rtol=0, atol=1e-9)
    assert np.allclose(smap.phase, np.mod(dzl, 2 * math.pi), rtol=0, atol=1e-9)
