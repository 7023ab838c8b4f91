"""Damped least-squares estimation of lineshape parameters from scan curves.

Five closed-form rate models are fittable.  Each exposes exactly four free
parameters: one physical coefficient, an overall amplitude, an additive
background and an abscissa center offset.  Analyzer angles and any fixed
envelope coefficient enter through a per-fit ``context``.

======================  ==================  =====================================
model (alias)           coefficient         fixed context keys
======================  ==================  =====================================
type2-freq   (eq11)     tau0 [s]            theta1, theta2
type2-freq-plate (eq12) tau0 [s]            theta1, theta2, tau_extra [s]
type1-freq   (eq13)     phase_curvature     theta1, theta2, envelope_curvature
                        [s^2]               [s^2]
type2-angle  (eq14)     angle_slope [1/rad] theta1, theta2
type1-angle  (eq15)     angle_curvature     theta1, theta2, envelope_curvature
                        [1/rad^2]           [1/rad^2]
======================  ==================  =====================================

The minimizer is a Levenberg-damped Gauss-Newton: the normal-matrix
diagonal is multiplied by (1 + lambda), lambda shrinks by 10 on accepted
steps and grows by 10 on rejected ones; accepted steps never increase
chi-square.  Bounds are enforced by clamping proposed parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coincidence import sinc
from .curve import ScanCurve, read_curve_csv
from .errors import ConfigurationError, DegenerateFitError

MAX_ITERATIONS = 200
CHI2_RTOL = 1e-8
STEP_TOL = 1e-10
LAMBDA_INIT = 1e-3
LAMBDA_FACTOR = 10.0
LAMBDA_MAX = 1e12
JACOBIAN_STEP = 1e-6  # relative step in scaled parameter space


def _fringe_bracket(phase_half, t1, t2, kind):
    if kind == "sin":
        return (
            math.sin(t1 + t2) ** 2 * np.cos(phase_half) ** 2
            + math.sin(t1 - t2) ** 2 * np.sin(phase_half) ** 2
        )
    return (
        math.cos(t1 - t2) ** 2 * np.cos(phase_half) ** 2
        + math.cos(t1 + t2) ** 2 * np.sin(phase_half) ** 2
    )


def _model_type2_freq(x, coeff, amplitude, background, center, ctx):
    dx = x - center
    total = dx * (coeff + ctx.get("tau_extra", 0.0))
    return amplitude * sinc(dx * coeff) ** 2 * _fringe_bracket(
        total, ctx["theta1"], ctx["theta2"], "sin"
    ) + background


def _model_type1_freq(x, coeff, amplitude, background, center, ctx):
    dx2 = (x - center) ** 2
    env = ctx["envelope_curvature"] * dx2 / 2.0
    return amplitude * sinc(env) ** 2 * _fringe_bracket(
        coeff * dx2 / 2.0, ctx["theta1"], ctx["theta2"], "cos"
    ) + background


def _model_type2_angle(x, coeff, amplitude, background, center, ctx):
    half = (x - center) * coeff / 2.0
    return amplitude * sinc(half) ** 2 * _fringe_bracket(
        half, ctx["theta1"], ctx["theta2"], "sin"
    ) + background


def _model_type1_angle(x, coeff, amplitude, background, center, ctx):
    dx2 = (x - center) ** 2
    env = ctx["envelope_curvature"] * dx2 / 2.0
    return amplitude * sinc(env) ** 2 * _fringe_bracket(
        coeff * dx2 / 2.0, ctx["theta1"], ctx["theta2"], "sin"
    ) + background


@dataclass(frozen=True)
class FitModel:
    name: str
    coeff_name: str
    fn: Callable
    required_context: tuple[str, ...]


MODELS = {
    "type2-freq": FitModel("type2-freq", "tau0", _model_type2_freq, ("theta1", "theta2")),
    "type2-freq-plate": FitModel(
        "type2-freq-plate", "tau0", _model_type2_freq, ("theta1", "theta2", "tau_extra")
    ),
    "type1-freq": FitModel(
        "type1-freq",
        "phase_curvature",
        _model_type1_freq,
        ("theta1", "theta2", "envelope_curvature"),
    ),
    "type2-angle": FitModel(
        "type2-angle", "angle_slope", _model_type2_angle, ("theta1", "theta2")
    ),
    "type1-angle": FitModel(
        "type1-angle",
        "angle_curvature",
        _model_type1_angle,
        ("theta1", "theta2", "envelope_curvature"),
    ),
}

#: short historical ids accepted everywhere a model name is
MODEL_ALIASES = {
    "eq11": "type2-freq",
    "eq12": "type2-freq-plate",
    "eq13": "type1-freq",
    "eq14": "type2-angle",
    "eq15": "type1-angle",
}


def resolve_model(name: str) -> FitModel:
    key = MODEL_ALIASES.get(name, name)
    if key not in MODELS:
        known = ", ".join(sorted(MODELS) + sorted(MODEL_ALIASES))
        raise ConfigurationError(f"unknown fit model '{name}' (known: {known})")
    return MODELS[key]


@dataclass
class FitResult:
    params: dict[str, float]
    covariance: np.ndarray
    chi2: float
    iterations: int
    converged: bool
    model: str
    chi2_history: list[float] = field(default_factory=list)


def param_names(model: FitModel) -> list[str]:
    return [model.coeff_name, "amplitude", "background", "center"]


def model_values(model_name: str, params: dict, data: ScanCurve, context: dict) -> np.ndarray:
    """Evaluate a named model on the curve abscissa."""
    m = resolve_model(model_name)
    p = [params[n] for n in param_names(m)]
    return m.fn(data.abscissa, *p, context)


def residuals(model_name: str, params: dict, data: ScanCurve, context: dict) -> np.ndarray:
    """(model - data) / sigma with the Poisson default sigma."""
    return (model_values(model_name, params, data, context) - data.rate) / data.effective_sigma()


def default_init(model_name: str, data: ScanCurve, context: dict) -> dict[str, float]:
    """Documented, reproducible starting values.

    amplitude = max - min of the rates, background = min, center = midpoint
    of the abscissa range.  The physical coefficient is seeded from the
    first near-zero beyond the strongest peak, read as a quarter period of
    the fringe factor; exact for peaked (equal-analyzer) curves, a factor-2
    underestimate for antisymmetric-analyzer curves, and a quarter of the
    abscissa half-span when no zero is found.  Pass an explicit init for
    curves where this is too crude.
    """
    m = resolve_model(model_name)
    x = data.abscissa
    rate = data.rate
    lo = float(np.min(rate))
    hi = float(np.max(rate))
    center = 0.5 * (float(x[0]) + float(x[-1]))
    half_span = 0.5 * abs(float(x[-1]) - float(x[0]))

    threshold = lo + 0.05 * max(hi - lo, 1e-300)
    x_peak = float(x[int(np.argmax(rate))])
    beyond = np.nonzero((x > x_peak) & (rate <= threshold))[0]
    x_zero = float(x[beyond[0]]) - center if beyond.size else half_span / 2.0
    if x_zero <= 0.0:
        x_zero = half_span / 2.0

    if m.coeff_name in ("tau0", "angle_slope"):
        coeff = math.pi / (2.0 * x_zero)
    else:  # quadratic models: half-phase pi/2 at the first zero
        coeff = math.pi / x_zero**2
    return {m.coeff_name: coeff, "amplitude": hi - lo, "background": lo, "center": center}


def numeric_jacobian(resid_fn: Callable, q: np.ndarray, step: float = JACOBIAN_STEP) -> np.ndarray:
    """Central-difference Jacobian of a residual function, column per parameter."""
    cols = []
    for j in range(q.size):
        h = step * max(abs(q[j]), 1.0)
        qp = q.copy()
        qm = q.copy()
        qp[j] += h
        qm[j] -= h
        cols.append((resid_fn(qp) - resid_fn(qm)) / (2.0 * h))
    return np.column_stack(cols)


def _scales(p0: np.ndarray, data: ScanCurve) -> np.ndarray:
    span = abs(float(data.abscissa[-1]) - float(data.abscissa[0]))
    amp_scale = max(abs(p0[1]), float(np.max(np.abs(data.rate))), 1e-300)
    return np.array(
        [
            max(abs(p0[0]), 1e-300),
            amp_scale,
            max(abs(p0[2]), 0.05 * amp_scale),
            max(abs(p0[3]), span / 20.0, 1e-300),
        ]
    )


def fit_curve(
    model_name: str,
    data: ScanCurve,
    init: dict[str, float],
    bounds: dict[str, tuple[float, float]] | None = None,
    context: dict | None = None,
) -> FitResult:
    """Levenberg-damped least squares fit of a named model to a curve.

    ``init`` must provide all four parameter values inside ``bounds``.
    Returns a result with ``converged=False`` instead of raising when the
    iteration limit is hit; a singular normal matrix raises
    :class:`DegenerateFitError`.
    """
    m = resolve_model(model_name)
    ctx = dict(context or {})
    missing = [k for k in m.required_context if k not in ctx]
    if missing:
        raise ConfigurationError(f"model '{m.name}' needs context keys {missing}")

    names = param_names(m)
    try:
        p0 = np.array([float(init[n]) for n in names])
    except KeyError as exc:
        raise ConfigurationError(f"init is missing parameter {exc}") from exc

    lo = np.full(4, -np.inf)
    hi = np.full(4, np.inf)
    for j, n in enumerate(names):
        if bounds and n in bounds:
            lo[j], hi[j] = bounds[n]
    if np.any(p0 < lo) or np.any(p0 > hi):
        raise ConfigurationError("init must lie within bounds")

    sigma = data.effective_sigma()
    x = data.abscissa
    y = data.rate
    scales = _scales(p0, data)

    def resid(q):
        p = q * scales
        return (m.fn(x, p[0], p[1], p[2], p[3], ctx) - y) / sigma

    def jacobian(q):
        return numeric_jacobian(resid, q)

    q = p0 / scales
    q_lo = lo / scales
    q_hi = hi / scales
    r = resid(q)
    chi2 = float(r @ r)
    history = [chi2]
    lam = LAMBDA_INIT
    converged = False
    iterations = 0

    while iterations < MAX_ITERATIONS:
        iterations += 1
        jac = jacobian(q)
        normal = jac.T @ jac
        gradient = jac.T @ r
        if not np.all(np.isfinite(normal)):
            raise DegenerateFitError("normal matrix contains non-finite entries")
        damped = normal.copy()
        damped[np.diag_indices_from(damped)] *= 1.0 + lam
        try:
            step = np.linalg.solve(damped, -gradient)
        except np.linalg.LinAlgError as exc:
            raise DegenerateFitError("singular normal matrix") from exc
        q_new = np.clip(q + step, q_lo, q_hi)
        r_new = resid(q_new)
        chi2_new = float(r_new @ r_new)
        if np.isfinite(chi2_new) and chi2_new <= chi2:
            step_norm = float(np.linalg.norm(q_new - q))
            drop = chi2 - chi2_new
            q, r, chi2 = q_new, r_new, chi2_new
            history.append(chi2)
            lam = max(lam / LAMBDA_FACTOR, 1e-15)
            if drop <= CHI2_RTOL * max(chi2, 1e-300) or step_norm < STEP_TOL:
                converged = True
                break
        else:
            lam *= LAMBDA_FACTOR
            if lam > LAMBDA_MAX:
                break

    jac = jacobian(q)
    normal = jac.T @ jac
    cov_scaled = np.linalg.pinv(normal)
    cov = np.diag(scales) @ cov_scaled @ np.diag(scales)
    p = q * scales
    return FitResult(
        params={n: float(v) for n, v in zip(names, p)},
        covariance=cov,
        chi2=chi2,
        iterations=iterations,
        converged=converged,
        model=m.name,
        chi2_history=history,
    )


def ingest_curve(path, unit: str = "") -> ScanCurve:
    """Load and validate a measured curve from CSV."""
    return read_curve_csv(path, unit=unit)
