"""Pure-numpy implementations of the grid kernels.

Used when the compiled extension is unavailable or disabled via the
``BELLBAND_PURE_PYTHON`` environment variable.  Must stay semantically
identical to ``_core.pyx``.
"""

import numpy as np


def amplitude_map_typeii(theta, omega, d_coeff, b_coeff, length, tau_extra):
    """Intensity and raw relative phase over a (theta, omega) grid, type-II."""
    th, om = np.meshgrid(theta, omega, indexing="ij")
    half = (d_coeff * om + b_coeff * th) * length / 2.0
    intensity = np.sinc(half / np.pi) ** 2
    raw_phase = 2.0 * half + 2.0 * tau_extra * om
    return intensity, raw_phase


def amplitude_map_typei(theta, omega, gvd_o, gvd_e, k_o, k_e, length, length2):
    """Intensity and raw relative phase over a (theta, omega) grid, two-type-I."""
    th, om = np.meshgrid(theta, omega, indexing="ij")
    half = (gvd_o * om**2 - k_o * th**2) * length / 2.0
    intensity = np.sinc(half / np.pi) ** 2
    raw_phase = (gvd_e * om**2 - k_e * th**2) * length2
    return intensity, raw_phase


# marching-squares lookup: case index -> list of (entry_edge, exit_edge)
# edges: 0 bottom (j fixed), 1 right, 2 top, 3 left
_CASES = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)],
    6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)], 9: [(2, 0)],
    11: [(2, 1)], 12: [(1, 3)], 13: [(1, 0)], 14: [(0, 3)],
}


def _edge_point(edge, i, j, x, y, g00, g10, g11, g01):
    if edge == 0:  # bottom: (i,j)-(i+1,j)
        t = g00 / (g00 - g10)
        return x[i] + t * (x[i + 1] - x[i]), y[j]
    if edge == 1:  # right: (i+1,j)-(i+1,j+1)
        t = g10 / (g10 - g11)
        return x[i + 1], y[j] + t * (y[j + 1] - y[j])
    if edge == 2:  # top: (i,j+1)-(i+1,j+1)
        t = g01 / (g01 - g11)
        return x[i] + t * (x[i + 1] - x[i]), y[j + 1]
    t = g00 / (g00 - g01)  # left: (i,j)-(i,j+1)
    return x[i], y[j] + t * (y[j + 1] - y[j])


def contour_segments(x, y, field, level):
    """Marching-squares segments of the iso-line ``field == level``.

    Returns an (n, 4) float array of segments (x0, y0, x1, y1).  Saddle
    cells are disambiguated with the cell-centre mean.
    """
    g = np.asarray(field, dtype=float) - level
    pos = g >= 0.0
    # cells crossed by the contour have both signs among their corners
    any_pos = pos[:-1, :-1] | pos[1:, :-1] | pos[1:, 1:] | pos[:-1, 1:]
    any_neg = (~pos[:-1, :-1]) | (~pos[1:, :-1]) | (~pos[1:, 1:]) | (~pos[:-1, 1:])
    active = np.argwhere(any_pos & any_neg)

    segments = []
    for i, j in active:
        g00, g10 = g[i, j], g[i + 1, j]
        g11, g01 = g[i + 1, j + 1], g[i, j + 1]
        case = (
            (1 if g00 >= 0 else 0)
            | (2 if g10 >= 0 else 0)
            | (4 if g11 >= 0 else 0)
            | (8 if g01 >= 0 else 0)
        )
        if case in (0, 15):
            continue
        if case == 5:
            centre = 0.25 * (g00 + g10 + g11 + g01)
            pairs = [(3, 0), (1, 2)] if centre >= 0 else [(3, 2), (1, 0)]
        elif case == 10:
            centre = 0.25 * (g00 + g10 + g11 + g01)
            pairs = [(0, 1), (2, 3)] if centre >= 0 else [(0, 3), (2, 1)]
        else:
            pairs = _CASES[case]
        for e_in, e_out in pairs:
            x0, y0 = _edge_point(e_in, i, j, x, y, g00, g10, g11, g01)
            x1, y1 = _edge_point(e_out, i, j, x, y, g00, g10, g11, g01)
            segments.append((x0, y0, x1, y1))
    if not segments:
        return np.empty((0, 4), dtype=float)
    return np.asarray(segments, dtype=float)
