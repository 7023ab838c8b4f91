"""Grid kernels with a compiled core and a pure-numpy fallback.

The compiled extension is selected at import time; setting the environment
variable ``BELLBAND_PURE_PYTHON`` forces the fallback.  ``backend()``
reports which implementation is active.
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("BELLBAND_PURE_PYTHON"):
    _impl = _fallback
    _BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        _BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        _BACKEND = "python"


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return _BACKEND


def _c1(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def amplitude_map_typeii(theta, omega, d_coeff, b_coeff, length, tau_extra):
    return _impl.amplitude_map_typeii(
        _c1(theta), _c1(omega), float(d_coeff), float(b_coeff), float(length), float(tau_extra)
    )


def amplitude_map_typei(theta, omega, gvd_o, gvd_e, k_o, k_e, length, length2):
    return _impl.amplitude_map_typei(
        _c1(theta), _c1(omega), float(gvd_o), float(gvd_e),
        float(k_o), float(k_e), float(length), float(length2),
    )


def contour_segments(x, y, field, level):
    return _impl.contour_segments(
        _c1(x), _c1(y), np.ascontiguousarray(field, dtype=np.float64), float(level)
    )
