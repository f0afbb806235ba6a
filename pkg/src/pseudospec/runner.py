"""Batch experiment driver: resolved configs, run directories, manifests.

Every experiment writes its outputs into a fresh directory named
``<experiment>-<UTC timestamp>-<8-char config hash>`` under a base output
directory, together with a ``manifest.json`` recording the resolved config,
per-cell wall-clock timings, the package version, and a sha256 checksum of
every emitted file. ``verify_run`` recomputes the checksums so archived runs
can be audited for drift.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .burgers import initial_condition_by_name, run_burgers, shock_time
from .diagnostics import contour_slice, energy_spectrum, enstrophy_spectrum
from .errors import ConfigError, IntegrityError, SolverError
from .euler import (
    SolverConfig,
    TubeParams,
    VorticityState,
    make_tube_initial_data,
    run_euler,
    vorticity_to_velocity,
)
from .filters import filter_by_name
from .spectral import Field, Space, SpectralGrid
from .storage import (
    DiagnosticsWriter,
    read_checkpoint,
    sha256_file,
    write_burgers_errors,
    write_checkpoint,
    write_contours,
    write_filter_profile,
    write_pointwise,
    write_shell_spectrum,
    write_spectrum,
)

MANIFEST_NAME = "manifest.json"

# output_times/spectrum_times of null mean "derive from the run" as documented
# on each experiment function.
DEFAULT_CONFIG: dict[str, Any] = {
    "filter_profile": {
        "samples": 1025,
    },
    "burgers": {
        "ic": "sine",
        "resolutions": [1024, 2048, 4096],
        "filters": ["sharp23", "smooth36"],
        "cfl": 0.5,
        "output_times": None,
        "time_fractions": [0.9, 0.95, 0.975, 0.985],
    },
    "euler": {
        "dims": [64, 64, 128],
        "t_end": 2.0,
        "filters": ["sharp23", "smooth36"],
        "cfl": math.pi / 4.0,
        "cadence": 0.5,
        "dt_floor": 1e-9,
        "dt_ceiling": 0.1,
        "checkpoint_times": [],
        "spectrum_times": None,
        "contour_levels": [0.2, 0.4, 0.6, 0.8],
        "tube": {
            "core_radius": 1.2,
            "separation": 1.6,
            "peak_vorticity": 1.0,
            "perturb_amplitude": 0.25,
            "perturb_wavelength": 4.0 * math.pi,
            "smoothness": 8,
        },
    },
}


def _merge(base: dict, override: Mapping, prefix: str = "") -> dict:
    """Deep-merge ``override`` into a copy of ``base``, rejecting unknown keys."""
    out = copy.deepcopy(base)
    for key, value in override.items():
        path = f"{prefix}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key: {path}")
        current = base[key]
        if isinstance(current, dict):
            if not isinstance(value, Mapping):
                raise ConfigError(f"config key {path} expects a mapping")
            out[key] = _merge(current, value, prefix=path + ".")
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    """Defaults overlaid with the JSON config file at ``path``, if given."""
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    return _merge(DEFAULT_CONFIG, data)


def resolve_config(
    path: str | Path | None = None, overrides: Mapping | None = None
) -> dict[str, Any]:
    """Defaults <- config file <- programmatic overrides, strictly validated."""
    config = load_config(path)
    if overrides:
        config = _merge(config, overrides)
    return config


def config_hash(config: Mapping) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:8]


def create_run_dir(base: str | Path, experiment: str, config: Mapping) -> Path:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    name = f"{experiment}-{stamp}-{config_hash(config)}"
    run_dir = Path(base) / name
    suffix = 1
    while True:
        try:
            run_dir.mkdir(parents=True, exist_ok=False)
            return run_dir
        except FileExistsError:
            # identical config launched twice within one second
            suffix += 1
            run_dir = Path(base) / f"{name}-{suffix}"


def write_manifest(
    run_dir: Path,
    experiment: str,
    config: Mapping,
    timings: Mapping[str, float],
) -> Path:
    """Checksum every file in the run directory and write manifest.json."""
    from . import __version__

    files = {}
    for p in sorted(run_dir.rglob("*")):
        if p.is_file() and p.name != MANIFEST_NAME:
            files[p.relative_to(run_dir).as_posix()] = sha256_file(p)
    manifest = {
        "experiment": experiment,
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "config": config,
        "timings_s": dict(timings),
        "files": files,
    }
    path = run_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def verify_run(run_dir: str | Path) -> list[str]:
    """Recompute checksums against the manifest; return a list of problems."""
    run_dir = Path(run_dir)
    path = run_dir / MANIFEST_NAME
    if not path.is_file():
        raise IntegrityError(f"no {MANIFEST_NAME} in {run_dir}")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IntegrityError(f"manifest in {run_dir} is not valid JSON: {exc}") from exc
    recorded = manifest.get("files")
    if not isinstance(recorded, dict):
        raise IntegrityError(f"manifest in {run_dir} lacks a files table")
    problems = []
    for rel, digest in sorted(recorded.items()):
        p = run_dir / rel
        if not p.is_file():
            problems.append(f"missing: {rel}")
        elif sha256_file(p) != digest:
            problems.append(f"checksum drift: {rel}")
    for p in sorted(run_dir.rglob("*")):
        if p.is_file() and p.name != MANIFEST_NAME:
            rel = p.relative_to(run_dir).as_posix()
            if rel not in recorded:
                problems.append(f"unmanifested: {rel}")
    return problems


def _fmt_time(t: float) -> str:
    """Compact time tag for filenames: 0.985 -> '0.985', 2.0 -> '2'."""
    return f"{t:g}"


def run_filter_profile_experiment(run_dir: Path, config: Mapping) -> dict[str, float]:
    """Tabulate both cutoff profiles on [0, 1] into filter_profile.csv."""
    cfg = config["filter_profile"]
    samples = int(cfg["samples"])
    if samples < 2:
        raise ConfigError(f"filter_profile.samples must be >= 2, got {samples}")
    start = time.perf_counter()
    x = np.linspace(0.0, 1.0, samples)
    sharp = filter_by_name("sharp23").rho(x)
    smooth = filter_by_name("smooth36").rho(x)
    write_filter_profile(run_dir / "filter_profile.csv", x, sharp, smooth)
    return {"filter_profile": time.perf_counter() - start}


def _burgers_output_times(cfg: Mapping) -> list[float]:
    """Explicit output_times, or time_fractions scaled by the shock time."""
    times = cfg["output_times"]
    if times is None:
        ic = initial_condition_by_name(cfg["ic"])
        horizon = shock_time(ic)
        times = [f * horizon for f in cfg["time_fractions"]]
    times = [float(t) for t in times]
    if not times:
        raise ConfigError("burgers needs at least one output time")
    return times


def run_burgers_experiment(run_dir: Path, config: Mapping) -> dict[str, float]:
    """Run the {filter} x {resolution} matrix and emit all comparison CSVs.

    Per cell (subdirectory ``<filter>_N<N>``): pointwise_t<t>.csv and
    spectrum_t<t>.csv at every output time. Aggregated: errors.csv with one
    row per (t, N, filter) and a fixed-width summary.txt of the same table.
    """
    cfg = config["burgers"]
    ic = initial_condition_by_name(cfg["ic"])
    resolutions = [int(n) for n in cfg["resolutions"]]
    if not resolutions:
        raise ConfigError("burgers.resolutions must not be empty")
    filters = list(cfg["filters"])
    if not filters:
        raise ConfigError("burgers.filters must not be empty")
    times = _burgers_output_times(cfg)
    timings: dict[str, float] = {}
    error_rows: list[tuple[float, int, str, float, float]] = []
    try:
        for name in filters:
            filt = filter_by_name(name)
            for n in resolutions:
                cell = f"{name}_N{n}"
                start = time.perf_counter()
                grid = SpectralGrid((n,), (2.0 * math.pi,))
                outputs = run_burgers(ic, grid, filt, times, cfl=float(cfg["cfl"]))
                cell_dir = run_dir / cell
                cell_dir.mkdir(exist_ok=True)
                x = grid.coordinates(0)
                for out in outputs:
                    tag = _fmt_time(out.report.t)
                    write_pointwise(
                        cell_dir / f"pointwise_t{tag}.csv", x, out.report.pointwise
                    )
                    write_spectrum(
                        cell_dir / f"spectrum_t{tag}.csv",
                        out.spectrum.k,
                        out.spectrum.modulus,
                        out.spectrum.oracle_modulus,
                    )
                    error_rows.append(
                        (out.report.t, n, name, out.report.l_inf, out.report.l_1)
                    )
                timings[cell] = time.perf_counter() - start
    finally:
        # partial outputs are retained on solver failure; flush what exists
        if error_rows:
            error_rows.sort(key=lambda r: (r[0], r[1], r[2]))
            write_burgers_errors(run_dir / "errors.csv", error_rows)
            _write_burgers_summary(run_dir / "summary.txt", error_rows)
    return timings


def _write_burgers_summary(path: Path, rows: Sequence[tuple]) -> None:
    lines = [f"{'t':>10}  {'N':>6}  {'filter':<10}  {'l_inf':>13}  {'l_1':>13}"]
    for t, n, name, linf, l1 in rows:
        lines.append(f"{t:>10.6g}  {n:>6d}  {name:<10}  {linf:>13.6e}  {l1:>13.6e}")
    path.write_text("\n".join(lines) + "\n")


def _write_state_spectra(outdir: Path, state: VorticityState) -> None:
    tag = _fmt_time(state.t)
    u = vorticity_to_velocity(state.omega, state.config.filt)
    write_shell_spectrum(outdir / f"energy_spectrum_t{tag}.csv", energy_spectrum(u), "E")
    write_shell_spectrum(
        outdir / f"enstrophy_spectrum_t{tag}.csv", enstrophy_spectrum(state.omega), "Z"
    )


def _write_state_contours(
    outdir: Path, state: VorticityState, level_fractions: Sequence[float]
) -> None:
    """Contour |omega| on the x = 0 plane at fractions of the slice maximum."""
    grid = state.omega.grid
    mag = Field(grid, Space.PHYSICAL, np.sqrt((state.omega.data**2).sum(axis=0)))
    index = grid.dims[0] // 2
    peak = float(np.max(mag.data[index]))
    levels = [f * peak for f in level_fractions if 0.0 < f * peak]
    lines = contour_slice(mag, 0, index, levels)
    tag = _fmt_time(state.t)
    write_contours(outdir / f"contour_t{tag}_x0.csv", lines)


def _run_euler_cell(
    outdir: Path,
    state: VorticityState,
    t_end: float,
    checkpoint_times: Sequence[float],
    spectrum_times: Sequence[float],
    contour_levels: Sequence[float],
) -> VorticityState:
    outdir.mkdir(exist_ok=True)

    def near(t: float, ts: Sequence[float]) -> bool:
        return any(abs(t - s) <= 1e-12 for s in ts)

    if near(state.t, spectrum_times):
        _write_state_spectra(outdir, state)

    def handle(s: VorticityState) -> None:
        write_checkpoint(
            outdir / f"checkpoint_t{_fmt_time(s.t)}.bin", s.t, s.step_count, s.omega
        )
        if near(s.t, spectrum_times):
            _write_state_spectra(outdir, s)

    interior = sorted(
        {t for t in [*checkpoint_times, *spectrum_times] if state.t < t < t_end}
    )
    with DiagnosticsWriter(outdir / "diagnostics.csv") as sink:
        final = run_euler(
            state,
            t_end,
            sink=sink,
            checkpoint_times=interior,
            checkpoint_writer=handle,
        )
    write_checkpoint(
        outdir / f"checkpoint_t{_fmt_time(final.t)}.bin",
        final.t,
        final.step_count,
        final.omega,
    )
    if near(final.t, spectrum_times):
        _write_state_spectra(outdir, final)
    _write_state_contours(outdir, final, contour_levels)
    return final


def _euler_solver_config(cfg: Mapping, name: str) -> SolverConfig:
    return SolverConfig(
        filter_by_name(name),
        cfl=float(cfg["cfl"]),
        cadence=float(cfg["cadence"]),
        dt_floor=float(cfg["dt_floor"]),
        dt_ceiling=float(cfg["dt_ceiling"]),
    )


def run_euler_experiment(
    run_dir: Path, config: Mapping, restart: str | Path | None = None
) -> dict[str, float]:
    """Run the vortex-tube experiment once per configured filter.

    Each filter gets its own subdirectory with diagnostics.csv, checkpoints,
    shell spectra (at spectrum_times; null means the start and end times),
    and a final-time contour slice. With ``restart`` the state is read from
    the checkpoint instead of the tube generator; exactly one filter must
    then be configured, since the checkpoint does not record one.
    """
    cfg = config["euler"]
    filters = list(cfg["filters"])
    if not filters:
        raise ConfigError("euler.filters must not be empty")
    t_end = float(cfg["t_end"])
    spectrum_times = cfg["spectrum_times"]
    dims = tuple(int(d) for d in cfg["dims"])
    timings: dict[str, float] = {}

    if restart is not None:
        if len(filters) != 1:
            raise ConfigError(
                "restart requires exactly one configured filter; "
                f"got {len(filters)}"
            )
        t0, step_count, omega = read_checkpoint(restart)
        if omega.grid.dims != dims:
            raise ConfigError(
                f"checkpoint dims {omega.grid.dims} do not match configured {dims}"
            )
        if t0 >= t_end:
            raise ConfigError(
                f"checkpoint time {t0} is not before t_end {t_end}"
            )
        states = {
            filters[0]: VorticityState(
                t0, omega, _euler_solver_config(cfg, filters[0]), step_count
            )
        }
    else:
        grid = SpectralGrid(dims, (4.0 * math.pi,) * 3)
        tube = TubeParams(**cfg["tube"])
        states = {
            name: make_tube_initial_data(tube, grid, _euler_solver_config(cfg, name))
            for name in filters
        }

    for name, state in states.items():
        if spectrum_times is None:
            cell_spectra = [state.t, t_end]
        else:
            cell_spectra = [float(t) for t in spectrum_times]
        start = time.perf_counter()
        _run_euler_cell(
            run_dir / name,
            state,
            t_end,
            [float(t) for t in cfg["checkpoint_times"]],
            cell_spectra,
            [float(f) for f in cfg["contour_levels"]],
        )
        timings[name] = time.perf_counter() - start
    return timings


_EXPERIMENTS = {
    "filter-profile": run_filter_profile_experiment,
    "burgers": run_burgers_experiment,
    "euler": run_euler_experiment,
}


def run_experiment(
    experiment: str,
    base_out: str | Path,
    config: Mapping,
    restart: str | Path | None = None,
) -> Path:
    """Create the run directory, dispatch, and always leave a manifest behind."""
    if experiment not in _EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    if restart is not None and experiment != "euler":
        raise ConfigError("--restart only applies to the euler experiment")
    run_dir = create_run_dir(base_out, experiment, config)
    timings: dict[str, float] = {}
    try:
        if experiment == "euler":
            timings = run_euler_experiment(run_dir, config, restart=restart)
        else:
            timings = _EXPERIMENTS[experiment](run_dir, config)
    finally:
        write_manifest(run_dir, experiment, config, timings)
    return run_dir
