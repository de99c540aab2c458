"""Command-line interface emitting deterministic CSV with '#' metadata lines.

Subcommands: ``spectrum`` (levels vs coupling, single point or sweep),
``dynamics`` (P(t) per method), ``compare`` (dynamics plus deviation metrics
against the exact signal) and ``figure`` (preset parameter sets 1-5).

Exit codes: 0 all requested computations converged; 2 configuration or usage
error (nothing computed); 3 a computation failed or did not converge
(partial results are still emitted, with error markers).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .core import FixedPointError, ModelParams, solve_displacement
from .exact import EigensolverError, evolve_exact, spectrum_exact
from .rwa import p_rwa, spectrum_rwa
from .trwa import p_trwa, spectrum_trwa

__all__ = [
    "ConfigError",
    "RunConfig",
    "FIGURE_PRESETS",
    "build_parser",
    "config_from_args",
    "validate_config",
    "run_spectrum",
    "run_dynamics",
    "run_compare",
    "parse_csv_text",
    "main",
]

METHOD_ORDER = ("exact", "trwa", "rwa")


class ConfigError(ValueError):
    """Invalid run configuration; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of one CLI run."""

    command: str                 # "spectrum", "dynamics" or "compare"
    omega_q: float
    omega: float
    g: float | None = None       # single coupling point
    g_min: float | None = None   # sweep start (spectrum only)
    g_max: float | None = None   # sweep end
    g_steps: int | None = None   # sweep point count (>= 2)
    n_max: int = 80
    t_max: float = 60.0
    dt: float = 0.02
    methods: tuple[str, ...] = METHOD_ORDER
    levels: int = 4
    normalize_trwa: bool = False
    tol: float = 1e-12
    output: str | None = None    # None writes to stdout
    figure: int | None = None    # set when resolved from a figure preset


# Preset parameter sets.  1 and 2 are level sweeps against coupling; 3-5 are
# dynamics comparisons at a fixed coupling.
FIGURE_PRESETS: dict[int, dict] = {
    1: dict(command="spectrum", omega_q=1.0, omega=0.5,
            g_min=0.0, g_max=1.0, g_steps=81, methods=("exact", "trwa")),
    2: dict(command="spectrum", omega_q=0.5, omega=1.0,
            g_min=0.0, g_max=2.0, g_steps=81, methods=("exact", "trwa")),
    3: dict(command="compare", omega_q=1.0, omega=0.5, g=0.4),
    4: dict(command="compare", omega_q=0.5, omega=1.0, g=0.5),
    5: dict(command="compare", omega_q=0.25, omega=1.0, g=1.0),
}


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _parse_methods(raw: str | tuple[str, ...]) -> tuple[str, ...]:
    if isinstance(raw, str):
        names = [part.strip() for part in raw.split(",") if part.strip()]
    else:
        names = list(raw)
    unknown = [m for m in names if m not in METHOD_ORDER]
    if unknown:
        raise ConfigError(
            f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(METHOD_ORDER)}"
        )
    if not names:
        raise ConfigError("at least one method is required")
    chosen = set(names)
    return tuple(m for m in METHOD_ORDER if m in chosen)


def validate_config(cfg: RunConfig) -> RunConfig:
    """Check every field; raises ConfigError with a usable message."""
    if cfg.command not in ("spectrum", "dynamics", "compare"):
        raise ConfigError(f"unknown command {cfg.command!r}")
    for name in ("omega_q", "omega"):
        value = getattr(cfg, name)
        if value is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required")
        if not np.isfinite(value):
            raise ConfigError(f"{name} must be finite, got {value}")
    if cfg.omega <= 0.0:
        raise ConfigError(f"omega must be positive, got {cfg.omega}")
    if cfg.omega_q < 0.0:
        raise ConfigError(f"omega_q must be non-negative, got {cfg.omega_q}")

    sweep_flags = (cfg.g_min, cfg.g_max, cfg.g_steps)
    if cfg.command == "spectrum":
        if cfg.g is None and all(f is None for f in sweep_flags):
            raise ConfigError("spectrum needs --g or the sweep trio --g-min/--g-max/--g-steps")
        if cfg.g is not None and any(f is not None for f in sweep_flags):
            raise ConfigError("--g and the sweep flags are mutually exclusive")
        if cfg.g is None:
            if any(f is None for f in sweep_flags):
                raise ConfigError("a sweep needs all of --g-min, --g-max and --g-steps")
            if cfg.g_min < 0.0:
                raise ConfigError(f"g_min must be non-negative, got {cfg.g_min}")
            if cfg.g_max <= cfg.g_min:
                raise ConfigError(f"g_max must exceed g_min, got [{cfg.g_min}, {cfg.g_max}]")
            if cfg.g_steps < 2:
                raise ConfigError(f"g_steps must be at least 2, got {cfg.g_steps}")
        if cfg.levels < 1:
            raise ConfigError(f"levels must be at least 1, got {cfg.levels}")
        if cfg.levels > 2 * (cfg.n_max + 1):
            raise ConfigError(
                f"levels={cfg.levels} exceeds the truncated dimension 2*(n_max+1)={2 * (cfg.n_max + 1)}"
            )
    else:
        if cfg.g is None:
            raise ConfigError(f"{cfg.command} needs --g")
        if cfg.t_max <= 0.0:
            raise ConfigError(f"t_max must be positive, got {cfg.t_max}")
        if cfg.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {cfg.dt}")
        if cfg.dt > cfg.t_max:
            raise ConfigError(f"dt={cfg.dt} exceeds t_max={cfg.t_max}")

    if cfg.g is not None and cfg.g < 0.0:
        raise ConfigError(f"g must be non-negative, got {cfg.g}")
    if cfg.n_max < 0:
        raise ConfigError(f"n_max must be non-negative, got {cfg.n_max}")
    if cfg.tol <= 0.0:
        raise ConfigError(f"tol must be positive, got {cfg.tol}")

    methods = _parse_methods(cfg.methods)
    if cfg.command == "compare" and "exact" not in methods:
        raise ConfigError("compare needs the exact method as reference")
    return replace(cfg, methods=methods)


def _time_grid(cfg: RunConfig) -> np.ndarray:
    # dt is honoured up to rounding t_max/dt to an integer step count.
    n_steps = int(round(cfg.t_max / cfg.dt))
    return np.linspace(0.0, cfg.t_max, n_steps + 1)


def _meta_lines(cfg: RunConfig) -> list[str]:
    lines = [f"# spinosc={__version__}"]
    if cfg.figure is not None:
        lines.append("# command=figure")
        lines.append(f"# figure={cfg.figure}")
        lines.append(f"# mode={cfg.command}")
    else:
        lines.append(f"# command={cfg.command}")
    lines.append(f"# omega_q={_fmt(cfg.omega_q)}")
    lines.append(f"# omega={_fmt(cfg.omega)}")
    if cfg.g is not None:
        lines.append(f"# g={_fmt(cfg.g)}")
    else:
        lines.append(f"# g_min={_fmt(cfg.g_min)}")
        lines.append(f"# g_max={_fmt(cfg.g_max)}")
        lines.append(f"# g_steps={cfg.g_steps}")
    lines.append(f"# n_max={cfg.n_max}")
    if cfg.command == "spectrum":
        lines.append(f"# levels={cfg.levels}")
    else:
        lines.append(f"# t_max={_fmt(cfg.t_max)}")
        lines.append(f"# dt={_fmt(cfg.dt)}")
        lines.append(f"# normalize_trwa={'true' if cfg.normalize_trwa else 'false'}")
    lines.append(f"# methods={','.join(cfg.methods)}")
    lines.append(f"# tol={_fmt(cfg.tol)}")
    return lines


def _frame_meta(frame) -> list[str]:
    return [
        f"# trwa.xi={_fmt(frame.xi)}",
        f"# trwa.eta={_fmt(frame.eta)}",
        f"# trwa.residual={_fmt(frame.residual)}",
    ]


def _render(meta: list[str], header: list[str], rows: list[list[str]]) -> list[str]:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return meta + buf.getvalue().splitlines()


def run_spectrum(cfg: RunConfig) -> tuple[list[str], int]:
    """Levels of each requested method per coupling value; one row per g."""
    code = 0
    if cfg.g is not None:
        g_values = [cfg.g]
    else:
        g_values = np.linspace(cfg.g_min, cfg.g_max, cfg.g_steps).tolist()
    # The sweep axis is emitted as the dimensionless ratio g/omega; energies
    # stay in absolute units.
    header = (
        ["g_over_omega"]
        + [f"{m}_E{i}" for m in cfg.methods for i in range(cfg.levels)]
        + ["error"]
    )
    rows: list[list[str]] = []
    last_frame = None
    for g in g_values:
        params = ModelParams(omega_q=cfg.omega_q, omega=cfg.omega, g=g)
        cells = [_fmt(g / cfg.omega)]
        errors: list[str] = []
        frame = None
        if "trwa" in cfg.methods:
            try:
                frame = solve_displacement(params, tol=cfg.tol)
                last_frame = frame
            except FixedPointError as exc:
                frame = exc
        for method in cfg.methods:
            try:
                if method == "exact":
                    spec = spectrum_exact(params, cfg.n_max, cfg.levels)
                    if not spec.converged:
                        errors.append("exact: levels not converged at this n_max")
                        code = 3
                elif method == "trwa":
                    if isinstance(frame, FixedPointError):
                        raise frame
                    spec = spectrum_trwa(params, cfg.levels, frame=frame)
                else:
                    spec = spectrum_rwa(params, cfg.levels)
                cells.extend(_fmt(e) for e in spec.levels)
            except (FixedPointError, EigensolverError) as exc:
                cells.extend([""] * cfg.levels)
                errors.append(f"{method}: {exc}")
                code = 3
        cells.append("; ".join(errors))
        rows.append(cells)

    meta = _meta_lines(cfg)
    if cfg.g is not None and last_frame is not None:
        meta.extend(_frame_meta(last_frame))
    return _render(meta, header, rows), code


def _dynamics_run(cfg: RunConfig):
    """Shared computation for dynamics and compare."""
    params = ModelParams(omega_q=cfg.omega_q, omega=cfg.omega, g=cfg.g)
    times = _time_grid(cfg)
    series = None
    frame = None
    errors: dict[str, str] = {}
    code = 0
    for method in cfg.methods:
        try:
            if method == "exact":
                ts = evolve_exact(params, cfg.n_max, times)
            elif method == "trwa":
                frame = solve_displacement(params, tol=cfg.tol)
                ts = p_trwa(params, times, frame=frame, normalize=cfg.normalize_trwa)
            else:
                ts = p_rwa(params, times)
        except (FixedPointError, EigensolverError) as exc:
            errors[method] = str(exc)
            code = 3
            continue
        series = ts if series is None else series.merged_with(ts)
    return times, series, frame, errors, code


def _dynamics_lines(cfg: RunConfig, with_metrics: bool) -> tuple[list[str], int]:
    times, series, frame, errors, code = _dynamics_run(cfg)
    meta = _meta_lines(cfg)
    if frame is not None:
        meta.extend(_frame_meta(frame))
    tail: list[str] = []    # metrics block goes after the data rows
    if with_metrics and series is not None and "exact" in series.values:
        series.metrics = series.compute_metrics("exact")
        for method in cfg.methods:
            if method == "exact" or method not in series.values:
                continue
            for name in ("max_abs_dev", "time_avg_dev"):
                key = f"{method}.{name}"
                tail.append(f"# metric.{key}={_fmt(series.metrics[key])}")
    elif with_metrics:
        errors.setdefault("metrics", "exact reference signal unavailable")
        code = 3
    for method, message in errors.items():
        meta.append(f"# error.{method}={message}")

    present = [m for m in cfg.methods if series is not None and m in series.values]
    header = ["t"] + present
    rows = []
    for j, t in enumerate(times):
        row = [_fmt(t)] + [_fmt(series.values[m][j]) for m in present]
        rows.append(row)
    return _render(meta, header, rows) + tail, code


def run_dynamics(cfg: RunConfig) -> tuple[list[str], int]:
    """P(t) per requested method; one row per time sample."""
    return _dynamics_lines(cfg, with_metrics=False)


def run_compare(cfg: RunConfig) -> tuple[list[str], int]:
    """P(t) plus max/time-averaged deviation metrics against the exact signal."""
    return _dynamics_lines(cfg, with_metrics=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinosc",
        description=(
            "Energy spectra and population dynamics of a two-level system "
            "coupled to an oscillator mode: exact diagonalization, "
            "transformed rotating-wave treatment, and the ordinary "
            "rotating-wave baseline."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p: argparse.ArgumentParser) -> None:
        p.add_argument("--omega-q", type=float, required=True, metavar="W",
                       help="two-level splitting")
        p.add_argument("--omega", type=float, required=True, metavar="W",
                       help="oscillator frequency (energy scale)")

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n-max", type=int, default=80, metavar="N",
                       help="Fock truncation for the exact method (default 80)")
        p.add_argument("--methods", default="exact,trwa,rwa", metavar="LIST",
                       help="comma-separated subset of exact,trwa,rwa")
        p.add_argument("--tol", type=float, default=1e-12, metavar="TOL",
                       help="self-consistency tolerance of the transformed frame")
        p.add_argument("--output", default=None, metavar="PATH",
                       help="write CSV to PATH instead of stdout")

    p_spec = sub.add_parser("spectrum", help="lowest energy levels vs coupling")
    add_model(p_spec)
    p_spec.add_argument("--g", type=float, default=None, metavar="G",
                        help="single coupling value")
    p_spec.add_argument("--g-min", type=float, default=None, metavar="G")
    p_spec.add_argument("--g-max", type=float, default=None, metavar="G")
    p_spec.add_argument("--g-steps", type=int, default=None, metavar="N",
                        help="number of sweep points (>= 2)")
    p_spec.add_argument("--levels", type=int, default=4, metavar="K",
                        help="number of levels per method (default 4)")
    add_common(p_spec)

    for name, help_text in (
        ("dynamics", "population difference P(t) per method"),
        ("compare", "P(t) plus deviation metrics against the exact signal"),
    ):
        p_dyn = sub.add_parser(name, help=help_text)
        add_model(p_dyn)
        p_dyn.add_argument("--g", type=float, required=True, metavar="G",
                           help="coupling value")
        p_dyn.add_argument("--t-max", type=float, default=60.0, metavar="T",
                           help="end of the time window (default 60)")
        p_dyn.add_argument("--dt", type=float, default=0.02, metavar="DT",
                           help="sample spacing (default 0.02)")
        p_dyn.add_argument("--normalize-trwa", action="store_true",
                           help="rescale the transformed-frame signal to P(0)=1")
        add_common(p_dyn)

    p_fig = sub.add_parser("figure", help="run a preset parameter set (1-5)")
    p_fig.add_argument("number", type=int, choices=sorted(FIGURE_PRESETS),
                       help="preset number")
    p_fig.add_argument("--n-max", type=int, default=None, metavar="N")
    p_fig.add_argument("--t-max", type=float, default=None, metavar="T")
    p_fig.add_argument("--dt", type=float, default=None, metavar="DT")
    p_fig.add_argument("--levels", type=int, default=None, metavar="K")
    p_fig.add_argument("--tol", type=float, default=None, metavar="TOL")
    p_fig.add_argument("--normalize-trwa", action="store_true", default=None)
    p_fig.add_argument("--output", default=None, metavar="PATH")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.command == "figure":
        preset = FIGURE_PRESETS[ns.number]
        cfg = RunConfig(figure=ns.number, **preset)
        overrides = {}
        for field_name in ("n_max", "t_max", "dt", "levels", "tol", "normalize_trwa", "output"):
            value = getattr(ns, field_name)
            if value is not None:
                overrides[field_name] = value
        if overrides:
            cfg = replace(cfg, **overrides)
        return validate_config(cfg)

    cfg = RunConfig(
        command=ns.command,
        omega_q=ns.omega_q,
        omega=ns.omega,
        g=ns.g,
        g_min=getattr(ns, "g_min", None),
        g_max=getattr(ns, "g_max", None),
        g_steps=getattr(ns, "g_steps", None),
        n_max=ns.n_max,
        t_max=getattr(ns, "t_max", 60.0),
        dt=getattr(ns, "dt", 0.02),
        methods=ns.methods,
        levels=getattr(ns, "levels", 4),
        normalize_trwa=getattr(ns, "normalize_trwa", False),
        tol=ns.tol,
        output=ns.output,
    )
    return validate_config(cfg)


def parse_csv_text(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Split CLI output into metadata dict, header row and data rows."""
    meta: dict[str, str] = {}
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            item = line[1:].strip()
            if "=" in item:
                key, value = item.split("=", 1)
                meta[key.strip()] = value
        elif line:
            body.append(line)
    parsed = list(csv.reader(body))
    if not parsed:
        return meta, [], []
    return meta, parsed[0], parsed[1:]


_RUNNERS = {
    "spectrum": run_spectrum,
    "dynamics": run_dynamics,
    "compare": run_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        cfg = config_from_args(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    lines, code = _RUNNERS[cfg.command](cfg)
    text = "\n".join(lines) + "\n"
    if cfg.output is not None:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
