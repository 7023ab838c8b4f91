"""Command-line interface: reproducible CSV curves, maps and fits.

Configuration files are line oriented, ``section.key = value`` with ``#``
comments.  Unknown keys are rejected.  Every effective setting is echoed
into a ``#``-prefixed provenance header at the top of each output, and all
floats are written with 9 significant digits so identical inputs produce
byte-identical outputs.

Exit codes: 0 success, 1 usage error, 2 domain or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import bellstate, coincidence, dispersion, fiber as fiber_mod, fitting
from .curve import ScanCurve
from .dispersion import DispersionModel, Scheme
from .errors import BellbandError, ConfigurationError, UsageError
from .mismatch import ModePoint, SetupConfig


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


# ---------------------------------------------------------------------------
# configuration

_DEG = math.pi / 180.0

#: known config keys: key -> (parser, default); None default means "derived"
_CONFIG_KEYS = {
    "dispersion.model": (str, dispersion.DEFAULT_MODEL_KEY),
    "dispersion.name": (str, None),
    "dispersion.sellmeier_o": ("floats", None),
    "dispersion.sellmeier_e": ("floats", None),
    "dispersion.valid_range_nm": ("floats", None),
    "setup.scheme": (str, None),  # required
    "setup.crystal_length_mm": (float, None),  # scheme-dependent default
    "setup.second_crystal_length_mm": (float, None),
    "setup.pump_wavelength_nm": (float, 351.0),
    "setup.cut_angle_deg": (float, None),  # auto-solved when omitted
    "setup.extra_eo_delay_fs": (float, 0.0),
    "grid.resolution": (int, 512),
    "grid.theta_max_rad": (float, 0.03),
    "grid.delta_lambda_max_nm": (float, None),  # scheme-dependent default
    "fiber.length_m": (float, 1000.0),
    "fiber.gvd_s2_per_m": (float, fiber_mod.DEFAULT_FIBER_GVD),
    "fiber.jitter_sigma_ns": (float, 0.3),
    "output.frequency_unit": (str, "nm"),
    "output.angle_unit": (str, "external"),
}

_SCHEME_LENGTH_MM = {Scheme.TYPE_II: 0.5, Scheme.TWO_TYPE_I: 1.0}
_SCHEME_DLAM_NM = {Scheme.TYPE_II: 25.0, Scheme.TWO_TYPE_I: 60.0}


def _parse_value(kind, raw: str):
    if kind is str:
        return raw
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    if kind == "floats":
        return tuple(float(part) for part in raw.split(","))
    raise AssertionError(kind)


def parse_config_file(path) -> dict:
    """Read ``section.key = value`` lines; unknown keys are errors."""
    entries: dict[str, object] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"{path}: line {lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.split("#", 1)[0].strip()
        if key not in _CONFIG_KEYS:
            raise ConfigurationError(f"{path}: line {lineno}: unknown key '{key}'")
        try:
            entries[key] = _parse_value(_CONFIG_KEYS[key][0], raw)
        except ValueError as exc:
            raise ConfigurationError(f"{path}: line {lineno}: bad value for '{key}': {exc}")
    return entries


@dataclass
class RunConfig:
    """Fully resolved run settings plus their provenance."""

    model_key: str
    model: DispersionModel
    setup: SetupConfig
    resolution: int
    theta_max_rad: float
    delta_lambda_max_nm: float
    fiber: fiber_mod.FiberParams
    frequency_unit: str
    angle_unit: str
    config_hash: str
    effective: dict

    @property
    def lam0_nm(self) -> float:
        return self.setup.degenerate_wavelength_nm

    def coefficients(self) -> dispersion.DispersionCoefficients:
        coeffs = dispersion.dispersion_coefficients(self.model, self.setup)
        # diagnostic echo at full precision; data streams stay at 9 digits
        print(
            f"coefficients: D = {coeffs.D!r} s/m, B = {coeffs.B!r} 1/(m rad), "
            f"gvd_o = {coeffs.gvd_o!r} s^2/m, gvd_e = {coeffs.gvd_e!r} s^2/m",
            file=sys.stderr,
        )
        return coeffs

    def ordinary_index_degenerate(self) -> float:
        return float(dispersion.refractive_index(self.model, "ordinary", self.lam0_nm))


def _resolve_model(entries: dict) -> tuple[str, DispersionModel]:
    custom = [k for k in entries if k.startswith("dispersion.sellmeier")]
    if custom:
        needed = ("dispersion.sellmeier_o", "dispersion.sellmeier_e", "dispersion.valid_range_nm")
        missing = [k for k in needed if k not in entries]
        if missing:
            raise ConfigurationError(f"custom dispersion model missing key '{missing[0]}'")
        for branch in ("dispersion.sellmeier_o", "dispersion.sellmeier_e"):
            if len(entries[branch]) != 4:
                raise ConfigurationError(f"'{branch}' needs 4 coefficients a,b,c,d")
        lo, hi = entries["dispersion.valid_range_nm"]
        model = DispersionModel(
            name=entries.get("dispersion.name", "custom"),
            sellmeier_o=tuple(entries["dispersion.sellmeier_o"]),
            sellmeier_e=tuple(entries["dispersion.sellmeier_e"]),
            valid_range_nm=(lo, hi),
        )
        model.validate()
        return "custom", model
    key = entries.get("dispersion.model", dispersion.DEFAULT_MODEL_KEY)
    if key not in dispersion.BUILTIN_MODELS:
        known = ", ".join(sorted(dispersion.BUILTIN_MODELS))
        raise ConfigurationError(f"unknown dispersion model '{key}' (builtin: {known})")
    return key, dispersion.BUILTIN_MODELS[key]


def build_run_config(entries: dict, config_text: str | None = None) -> RunConfig:
    """Resolve defaults, solve the cut angle if omitted, validate everything."""
    if "setup.scheme" not in entries:
        raise ConfigurationError("missing required key 'setup.scheme'")
    try:
        scheme = Scheme(entries["setup.scheme"])
    except ValueError:
        raise ConfigurationError(
            f"setup.scheme must be one of {[s.value for s in Scheme]}, "
            f"got '{entries['setup.scheme']}'"
        )

    model_key, model = _resolve_model(entries)
    length_mm = entries.get("setup.crystal_length_mm", _SCHEME_LENGTH_MM[scheme])
    second_mm = entries.get("setup.second_crystal_length_mm")
    pump_nm = entries.get("setup.pump_wavelength_nm", 351.0)
    cut_deg = entries.get("setup.cut_angle_deg")
    if cut_deg is None:
        cut_rad = dispersion.phase_matching_angle(model, pump_nm, scheme)
    else:
        cut_rad = cut_deg * _DEG
    setup = SetupConfig(
        model=model,
        scheme=scheme,
        crystal_length_m=length_mm * 1e-3,
        pump_wavelength_nm=pump_nm,
        cut_angle_rad=cut_rad,
        extra_eo_delay_s=entries.get("setup.extra_eo_delay_fs", 0.0) * 1e-15,
        second_crystal_length_m=None if second_mm is None else second_mm * 1e-3,
    )
    fib = fiber_mod.FiberParams(
        length_m=entries.get("fiber.length_m", 1000.0),
        gvd_s2_per_m=entries.get("fiber.gvd_s2_per_m", fiber_mod.DEFAULT_FIBER_GVD),
        jitter_sigma_s=entries.get("fiber.jitter_sigma_ns", 0.3) * 1e-9,
    )
    freq_unit = entries.get("output.frequency_unit", "nm")
    if freq_unit not in ("nm", "rad/s"):
        raise ConfigurationError("output.frequency_unit must be 'nm' or 'rad/s'")
    angle_unit = entries.get("output.angle_unit", "external")
    if angle_unit not in ("external", "internal"):
        raise ConfigurationError("output.angle_unit must be 'external' or 'internal'")

    effective = {
        "dispersion.model": model_key,
        "setup.scheme": scheme.value,
        "setup.crystal_length_mm": length_mm,
        "setup.second_crystal_length_mm": (
            length_mm if second_mm is None else second_mm
        ),
        "setup.pump_wavelength_nm": pump_nm,
        "setup.cut_angle_deg": cut_rad / _DEG,
        "setup.extra_eo_delay_fs": entries.get("setup.extra_eo_delay_fs", 0.0),
        "grid.resolution": entries.get("grid.resolution", 512),
        "grid.theta_max_rad": entries.get("grid.theta_max_rad", 0.03),
        "grid.delta_lambda_max_nm": entries.get(
            "grid.delta_lambda_max_nm", _SCHEME_DLAM_NM[scheme]
        ),
        "fiber.length_m": fib.length_m,
        "fiber.gvd_s2_per_m": fib.gvd_s2_per_m,
        "fiber.jitter_sigma_ns": fib.jitter_sigma_s * 1e9,
        "output.frequency_unit": freq_unit,
        "output.angle_unit": angle_unit,
    }
    digest = (
        hashlib.sha256(config_text.encode("utf-8")).hexdigest() if config_text else "defaults"
    )
    return RunConfig(
        model_key=model_key,
        model=model,
        setup=setup,
        resolution=int(effective["grid.resolution"]),
        theta_max_rad=float(effective["grid.theta_max_rad"]),
        delta_lambda_max_nm=float(effective["grid.delta_lambda_max_nm"]),
        fiber=fib,
        frequency_unit=freq_unit,
        angle_unit=angle_unit,
        config_hash=digest,
        effective=effective,
    )


def load_config(path) -> RunConfig:
    """Parse and resolve a config file."""
    text = Path(path).read_text(encoding="utf-8")
    return build_run_config(parse_config_file(path), config_text=text)


def provenance_lines(cfg: RunConfig, extra: list[str] | None = None) -> list[str]:
    lines = [
        f"tool: bellband {__version__}",
        f"config-sha256: {cfg.config_hash}",
        f"dispersion-model: {cfg.model.name}",
    ]
    lines.extend(f"{key} = {_fmt(val)}" for key, val in sorted(cfg.effective.items()))
    lines.extend(extra or [])
    return lines


# ---------------------------------------------------------------------------
# small unit helpers

def _omega_axis(cfg: RunConfig):
    dlam = cfg.delta_lambda_max_nm
    return (
        float(dispersion.frequency_offset(-dlam, cfg.lam0_nm)),
        float(dispersion.frequency_offset(dlam, cfg.lam0_nm)),
    )


def _freq_column(cfg: RunConfig, omega):
    if cfg.frequency_unit == "nm":
        return "delta_lambda_nm", dispersion.wavelength_offset_nm(omega, cfg.lam0_nm)
    return "omega_rad_s", omega


def _external_factor(cfg: RunConfig) -> float:
    """external = factor * internal (small-angle refraction at the exit face)."""
    return cfg.ordinary_index_degenerate()


# ---------------------------------------------------------------------------
# output helpers

def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _write_table(path, header_lines, columns, rows):
    fh, close = _open_out(path)
    try:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if close:
            fh.close()


# ---------------------------------------------------------------------------
# subcommands

def _cmd_map(cfg: RunConfig, args) -> int:
    coeffs = cfg.coefficients()
    lo, hi = _omega_axis(cfg)
    smap = bellstate.spectrum_map(
        cfg.setup,
        coeffs,
        theta_range=(-cfg.theta_max_rad, cfg.theta_max_rad),
        omega_range=(lo, hi),
        resolution=cfg.resolution,
    )
    unit_name, freq = _freq_column(cfg, smap.omega_axis)
    freq = np.asarray(freq)
    rows = []
    for i, th in enumerate(smap.theta_axis):
        for j in range(smap.omega_axis.size):
            rows.append((th, float(freq[j]), smap.intensity[i, j], smap.phase[i, j]))
    header = provenance_lines(cfg, ["command: map"])
    _write_table(args.output, header, ("theta_rad", unit_name, "intensity", "phase_rad"), rows)

    if args.contours:
        base = Path(args.output if args.output not in (None, "-") else "map.csv")
        for label, level in (("0", 0.0), ("pi", math.pi)):
            polylines = bellstate.bell_contours(smap, level)
            crows = []
            for pid, line in enumerate(polylines):
                _, freq = _freq_column(cfg, line[:, 1])
                for k in range(line.shape[0]):
                    crows.append((pid, line[k, 0], float(np.asarray(freq)[k])))
            cpath = base.with_name(base.stem + f".contour-{label}" + base.suffix)
            _write_table(
                cpath,
                provenance_lines(cfg, [f"command: map --contours (level {label})"]),
                ("polyline_id", "theta_rad", unit_name),
                crows,
            )
            print(f"wrote {cpath}", file=sys.stderr)
    return 0


def _scan_range(spec: str, name: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"--{name} expects start:stop:step, got '{spec}'")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--{name} expects numeric start:stop:step")
    if step <= 0 or stop <= start:
        raise UsageError(f"--{name} range must be increasing with positive step")
    n = int(round((stop - start) / step)) + 1
    return np.linspace(start, stop, n)


def _analyzers(args) -> coincidence.AnalyzerSettings:
    return coincidence.AnalyzerSettings(args.theta1 * _DEG, args.theta2 * _DEG)


def _cmd_freq_scan(cfg: RunConfig, args) -> int:
    coeffs = cfg.coefficients()
    lam = _scan_range(args.lambda_range, "lambda")
    omega = dispersion.frequency_offset(lam - cfg.lam0_nm, cfg.lam0_nm)
    a = _analyzers(args)
    if cfg.setup.scheme is Scheme.TYPE_II:
        rate = coincidence.rc_typeII_freq(cfg.setup, coeffs, omega, a)
    else:
        rate = coincidence.rc_typeI_freq(cfg.setup, coeffs, omega, a)
    header = provenance_lines(
        cfg,
        [
            f"command: freq-scan theta1={_fmt(args.theta1)} deg theta2={_fmt(args.theta2)} deg",
            "columns: wavelength in nm, normalized coincidence rate",
        ],
    )
    _write_table(args.output, header, ("wavelength_nm", "rate"), zip(lam, rate))
    return 0


def _cmd_ang_scan(cfg: RunConfig, args) -> int:
    coeffs = cfg.coefficients()
    scan = _scan_range(args.angle_range, "angle")
    factor = _external_factor(cfg)
    internal = args.internal or cfg.angle_unit == "internal"
    theta = scan if internal else scan / factor
    a = _analyzers(args)
    if cfg.setup.scheme is Scheme.TYPE_II:
        rate = coincidence.rc_typeII_ang(
            cfg.setup, coeffs, theta, a, orthogonal_plane=args.orthogonal_plane
        )
    else:
        if args.orthogonal_plane:
            raise UsageError("--orthogonal-plane applies to the type-II scheme only")
        rate = coincidence.rc_typeI_ang(cfg.setup, coeffs, theta, a)
    column = "theta_internal_rad" if internal else "theta_external_rad"
    header = provenance_lines(
        cfg,
        [
            f"command: ang-scan theta1={_fmt(args.theta1)} deg theta2={_fmt(args.theta2)} deg",
            f"external-to-internal factor: 1/{_fmt(factor)}",
        ],
    )
    _write_table(args.output, header, (column, "rate"), zip(scan, rate))
    return 0


def _point_from_args(cfg: RunConfig, args) -> ModePoint:
    omega = float(dispersion.frequency_offset(args.wavelength - cfg.lam0_nm, cfg.lam0_nm))
    theta = args.theta
    if not args.internal and cfg.angle_unit == "external":
        theta = theta / _external_factor(cfg)
    return ModePoint(theta=theta, omega=omega)


def _cmd_classify(cfg: RunConfig, args) -> int:
    coeffs = cfg.coefficients()
    point = _point_from_args(cfg, args)
    amp = bellstate.two_photon_amplitude(cfg.setup, coeffs, point)
    label = bellstate.classify(amp, tol=args.tol)
    header = provenance_lines(cfg, ["command: classify"])
    _write_table(
        args.output,
        header,
        ("kind", "phase_rad", "magnitude", "intensity"),
        [(label.kind.value, label.phase, amp.magnitude, amp.magnitude**2)],
    )
    return 0


def _cmd_fringe(cfg: RunConfig, args) -> int:
    coeffs = cfg.coefficients()
    point = _point_from_args(cfg, args)
    theta2 = _scan_range(args.theta2_range, "theta2") * _DEG

    if cfg.setup.scheme is Scheme.TYPE_II:
        def rate_fn(t1, t2):
            return coincidence.rc_typeII_freq(
                cfg.setup, coeffs, point.omega, coincidence.AnalyzerSettings(t1, t2)
            )
    else:
        def rate_fn(t1, t2):
            return coincidence.rc_typeI_freq(
                cfg.setup, coeffs, point.omega, coincidence.AnalyzerSettings(t1, t2)
            )

    curve = coincidence.fringe_scan(rate_fn, args.theta1 * _DEG, theta2)
    vis = coincidence.visibility(curve)
    header = provenance_lines(
        cfg,
        [
            f"command: fringe theta1={_fmt(args.theta1)} deg",
            f"visibility: {_fmt(vis)}",
        ],
    )
    _write_table(
        args.output, header, ("theta2_deg", "rate"), zip(curve.abscissa / _DEG, curve.rate)
    )
    return 0


def _cmd_fiber(cfg: RunConfig, args) -> int:
    coeffs = cfg.coefficients()
    delay = _scan_range(args.delay_range, "delay") * 1e-9
    a = _analyzers(args)
    curve = fiber_mod.time_distribution(
        cfg.setup, coeffs, cfg.fiber, a, delay, single_prism=args.single_prism
    )
    header = provenance_lines(
        cfg,
        [
            f"command: fiber theta1={_fmt(args.theta1)} deg theta2={_fmt(args.theta2)} deg",
            f"single-prism: {args.single_prism}",
        ],
    )
    _write_table(
        args.output, header, ("delay_ns", "rate"), zip(curve.abscissa * 1e9, curve.rate)
    )
    return 0


def _parse_assignments(pairs) -> dict[str, float]:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise UsageError(f"expected name=value, got '{pair}'")
        name, _, raw = pair.partition("=")
        try:
            out[name.strip()] = float(raw)
        except ValueError:
            raise UsageError(f"bad numeric value in '{pair}'")
    return out


def _cmd_fit(cfg: RunConfig, args) -> int:
    curve = fitting.ingest_curve(args.data, unit=args.unit)
    # convert the abscissa to the model's natural units (linear maps only,
    # so the fitted center remains meaningful in the input units)
    x = curve.abscissa
    if args.unit == "nm":
        x = dispersion.frequency_offset(x - cfg.lam0_nm, cfg.lam0_nm)
        center_note = "fitted center is a frequency offset (rad/s) from the degenerate point"
    elif args.unit == "ns":
        x = fiber_mod.offset_of_delay(cfg.fiber, x * 1e-9)
        center_note = "fitted center is a frequency offset (rad/s) mapped from delay"
    elif args.unit == "rad":
        factor = _external_factor(cfg)
        x = x / (1.0 if args.internal else factor)
        center_note = "fitted center is an internal angle (rad)"
    else:
        raise UsageError(f"unknown unit '{args.unit}' (nm, rad, ns)")
    natural = ScanCurve(abscissa=x, rate=curve.rate, sigma=curve.sigma, unit=args.unit)

    model = fitting.resolve_model(args.model)
    context = {"theta1": args.theta1 * _DEG, "theta2": args.theta2 * _DEG}
    context.update(_parse_assignments(args.context))
    init = fitting.default_init(model.name, natural, context)
    init.update(_parse_assignments(args.init))
    bounds = None
    result = fitting.fit_curve(model.name, natural, init, bounds, context)

    report = [
        ("model", result.model),
        ("converged", str(result.converged).lower()),
        ("iterations", result.iterations),
        ("chi2", result.chi2),
        ("points", len(natural)),
    ]
    for j, (name, value) in enumerate(result.params.items()):
        report.append((name, value))
        report.append((f"{name}_stderr", math.sqrt(max(result.covariance[j, j], 0.0))))
    for key, value in report:
        print(f"{key} = {_fmt(value)}")
    print(f"# {center_note}")

    if args.output:
        rows = [(n, v) for n, v in result.params.items()]
        header = provenance_lines(
            cfg,
            [
                f"command: fit model={result.model} data={args.data}",
                f"chi2: {_fmt(result.chi2)}",
                f"converged: {str(result.converged).lower()}",
            ],
        )
        _write_table(args.output, header, ("param", "value"), rows)
    return 0


def _cmd_angle_convert(cfg: RunConfig, args) -> int:
    factor = _external_factor(cfg)
    if (args.external is None) == (args.internal_angle is None):
        raise UsageError("give exactly one of --external or --internal")
    if args.external is not None:
        print(_fmt(args.external / factor))
    else:
        print(_fmt(args.internal_angle * factor))
    return 0


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 1, not argparse's 2
        raise UsageError(message)


def _add_common(sub, scheme_flag=True):
    sub.add_argument("--config", help="path to a run configuration file")
    if scheme_flag:
        sub.add_argument("--scheme", choices=[s.value for s in Scheme],
                         help="pair-generation scheme (overrides the config)")
    sub.add_argument("--output", "-o", help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellband", description=__doc__)
    parser.add_argument("--version", action="version", version=f"bellband {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("map", help="frequency-angular intensity/phase map")
    _add_common(p)
    p.add_argument("--contours", action="store_true",
                   help="also extract the phase-0 and phase-pi iso-lines")

    p = subs.add_parser("freq-scan", help="coincidence rate vs selected wavelength")
    _add_common(p)
    p.add_argument("--theta1", type=float, default=45.0, help="prism 1 angle, deg")
    p.add_argument("--theta2", type=float, default=-45.0, help="prism 2 angle, deg")
    p.add_argument("--lambda", dest="lambda_range", required=True,
                   help="wavelength range start:stop:step in nm")

    p = subs.add_parser("ang-scan", help="coincidence rate vs selected angle")
    _add_common(p)
    p.add_argument("--theta1", type=float, default=45.0)
    p.add_argument("--theta2", type=float, default=-45.0)
    p.add_argument("--angle", dest="angle_range", required=True,
                   help="angle range start:stop:step, external rad by default "
                        "(use --angle=-a:b:s when the range starts negative)")
    p.add_argument("--internal", action="store_true", help="angles are internal")
    p.add_argument("--orthogonal-plane", action="store_true",
                   help="scan in the plane orthogonal to the optic axis (type-II)")

    p = subs.add_parser("fringe", help="polarization fringe vs prism 2 angle")
    _add_common(p)
    p.add_argument("--theta1", type=float, default=45.0)
    p.add_argument("--theta2-range", default="-90:90:1", help="deg range start:stop:step")
    p.add_argument("--wavelength", type=float, default=702.0, help="selected wavelength, nm")
    p.add_argument("--theta", type=float, default=0.0, help="selected angle")
    p.add_argument("--internal", action="store_true")

    p = subs.add_parser("fiber", help="coincidence rate vs fiber arrival-time delay")
    _add_common(p)
    p.add_argument("--theta1", type=float, default=45.0)
    p.add_argument("--theta2", type=float, default=45.0)
    p.add_argument("--delay", dest="delay_range", required=True,
                   help="delay range start:stop:step in ns")
    p.add_argument("--single-prism", action="store_true",
                   help="one prism before the fiber, none after")

    p = subs.add_parser("classify", help="Bell-state label at one mode point")
    _add_common(p)
    p.add_argument("--wavelength", type=float, default=702.0, help="nm")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--internal", action="store_true")
    p.add_argument("--tol", type=float, default=bellstate.DEFAULT_CLASSIFY_TOL)

    p = subs.add_parser("fit", help="fit a rate model to a measured curve")
    _add_common(p)
    p.add_argument("--model", required=True, help="model name or alias (see docs)")
    p.add_argument("--data", required=True, help="input curve CSV")
    p.add_argument("--unit", default="nm", help="abscissa unit of the data: nm, rad, ns")
    p.add_argument("--theta1", type=float, default=45.0)
    p.add_argument("--theta2", type=float, default=-45.0)
    p.add_argument("--internal", action="store_true")
    p.add_argument("--init", nargs="*", help="override starting values, name=value")
    p.add_argument("--context", nargs="*", help="fixed model context, name=value")

    p = subs.add_parser("angle-convert", help="external <-> internal angle conversion")
    _add_common(p, scheme_flag=True)
    p.add_argument("--external", type=float, help="external angle, rad")
    p.add_argument("--internal", dest="internal_angle", type=float, help="internal angle, rad")

    return parser


_HANDLERS = {
    "map": _cmd_map,
    "freq-scan": _cmd_freq_scan,
    "ang-scan": _cmd_ang_scan,
    "fringe": _cmd_fringe,
    "fiber": _cmd_fiber,
    "classify": _cmd_classify,
    "fit": _cmd_fit,
    "angle-convert": _cmd_angle_convert,
}


def _config_for(args) -> RunConfig:
    entries: dict = {}
    text = None
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        text = path.read_text(encoding="utf-8")
        entries = parse_config_file(path)
    if getattr(args, "scheme", None):
        entries["setup.scheme"] = args.scheme
    if args.command == "angle-convert":
        # the conversion only needs the dispersion model and the degenerate
        # wavelength, so the scheme may be omitted here
        entries.setdefault("setup.scheme", Scheme.TYPE_II.value)
    return build_run_config(entries, config_text=text)


def run(argv) -> int:
    """Entry point used by tests; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_for(args)
        return _HANDLERS[args.command](cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BellbandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        code = exc.code
        return int(code) if isinstance(code, int) else 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
