"""bellband: entangled-pair lineshape simulation and fitting for SPDC.

Models how the generated two-photon polarization state changes across the
natural phase-matching bandwidth of collinear degenerate down-conversion,
for a single type-II crystal and for two crossed type-I crystals: phase
mismatch, pair amplitudes and Bell-state maps, coincidence-rate curves,
dispersive-fiber time distributions, and least-squares fits of the rate
formulas to measured curves.
"""

__version__ = "0.1.0"

from .bellstate import (
    Basis,
    BellKind,
    BellLabel,
    SpectrumMap,
    TwoPhotonAmplitude,
    bell_contours,
    classify,
    spectrum_map,
    two_photon_amplitude,
)
from .coincidence import (
    AnalyzerSettings,
    PolarizationState,
    apply_waveplate,
    coincidence_projection,
    fringe_scan,
    pair_state,
    rc_typeI_ang,
    rc_typeI_freq,
    rc_typeII_ang,
    rc_typeII_freq,
    visibility,
)
from .curve import ScanCurve, read_curve_csv, write_curve_csv
from .dispersion import (
    BBO_EIMERL,
    BBO_KATO,
    BUILTIN_MODELS,
    DispersionCoefficients,
    DispersionModel,
    Scheme,
    dispersion_coefficients,
    phase_matching_angle,
    refractive_index,
    wavevector,
)
from .fiber import FiberParams, delay_of_offset, time_distribution
from .fitting import FitResult, default_init, fit_curve, ingest_curve, residuals
from .mismatch import (
    ModePoint,
    SetupConfig,
    delta_z_exact_typeII,
    delta_z_linear_typeII,
    delta_z_typeI,
    phase_typeI,
)

__all__ = [name for name in dir() if not name.startswith("_")]
