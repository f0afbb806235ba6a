"""Pseudo-spectral solver for the 1-D inviscid Burgers equation.

The equation ``u_t + (u^2/2)_x = 0`` is marched on a 2*pi-periodic grid with a
three-stage strong-stability-preserving Runge-Kutta scheme. The nonlinear flux
is formed pointwise in physical space and differentiated with the filtered
spectral derivative; after the final stage the active dealiasing filter is
applied to the solution itself, so both the derivative filter and the per-step
solution filter act every step.

Before characteristics cross, the solution is known implicitly:

    u(x, t) = u0(x - t * u(x, t))

which this module solves per grid point by Newton iteration (the oracle), and
the first crossing time is ``T = -1 / min_x u0'(x)``. Every accuracy report in
the package compares a computed solution against this oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError, InstabilityError, NoShockError, OracleError
from .filters import FourierFilter
from .spectral import (
    Field,
    Space,
    SpectralGrid,
    apply_filter,
    forward_transform,
    inverse_transform,
    spectral_derivative,
)

NEWTON_TOL = 1e-13
NEWTON_MAX_ITER = 50


@dataclass(frozen=True)
class InitialCondition1D:
    """A periodic initial profile with its exact derivative.

    Attributes:
        name: short identifier used in file names and reports.
        u0: vectorized profile.
        du0: vectorized derivative of the profile.
    """

    name: str
    u0: Callable[[np.ndarray], np.ndarray]
    du0: Callable[[np.ndarray], np.ndarray]


def _inverse_sqrt_u0(x):
    return (0.1 + np.sin(x) ** 2) ** -0.5


def _inverse_sqrt_du0(x):
    return -np.sin(x) * np.cos(x) * (0.1 + np.sin(x) ** 2) ** -1.5


def sine_ic() -> InitialCondition1D:
    """u0(x) = sin(x); steepens into a shock at t = 1."""
    return InitialCondition1D("sine", np.sin, np.cos)


def inverse_sqrt_ic() -> InitialCondition1D:
    """u0(x) = (0.1 + sin^2 x)^(-1/2); pi-periodic, so odd modes vanish."""
    return InitialCondition1D("inverse-sqrt", _inverse_sqrt_u0, _inverse_sqrt_du0)


def initial_condition_by_name(name: str) -> InitialCondition1D:
    table = {"sine": sine_ic, "inverse-sqrt": inverse_sqrt_ic}
    if name not in table:
        raise ValueError(f"unknown initial condition {name!r}; expected one of: {', '.join(table)}")
    return table[name]()


@lru_cache(maxsize=32)
def shock_time(ic: InitialCondition1D, samples: int = 8192) -> float:
    """First characteristic-crossing time T = -1 / min u0'.

    The minimum of the derivative is located by dense sampling followed by
    bounded scalar minimization on the bracketing interval.

    Raises:
        NoShockError: if u0' is nowhere negative.
    """
    xs = np.linspace(-np.pi, np.pi, samples, endpoint=False)
    d = np.asarray(ic.du0(xs), dtype=float)
    i = int(np.argmin(d))
    if d[i] >= 0.0:
        raise NoShockError(f"profile {ic.name!r} never steepens: min u0' = {d[i]:.3e} >= 0")
    h = 2.0 * np.pi / samples
    # du0 is periodic, so the bracket may extend past the sampling window.
    res = minimize_scalar(
        lambda x: float(ic.du0(np.asarray(x))),
        bounds=(xs[i] - h, xs[i] + h),
        method="bounded",
        options={"xatol": 1e-14},
    )
    dmin = min(float(res.fun), float(d[i]))
    return -1.0 / dmin


class _NewtonFailure(Exception):
    pass


def _newton_point(ic: InitialCondition1D, t: float, x: float, u: float) -> float:
    best = np.inf
    for _ in range(NEWTON_MAX_ITER):
        f = u - float(ic.u0(x - t * u))
        af = abs(f)
        if af <= NEWTON_TOL:
            return u
        if not np.isfinite(af) or af > 1e6 * max(best, 1.0):
            raise _NewtonFailure  # residual is growing, not shrinking
        best = min(best, af)
        slope = 1.0 + t * float(ic.du0(x - t * u))
        if slope == 0.0:
            raise _NewtonFailure
        u = u - f / slope
    raise _NewtonFailure


def exact_solution(ic: InitialCondition1D, t: float, grid: SpectralGrid) -> Field:
    """Solve u = u0(x - t*u) at every node by guarded Newton iteration.

    Each point is seeded with the previous point's root (continuation along
    the grid); the first point, and any point where continuation fails, falls
    back to the seed u0(x). Residuals are driven to |F| <= 1e-13.

    Raises:
        ValueError: if t is negative or not strictly before the shock time.
        OracleError: if Newton fails from both seeds at some node.
    """
    if grid.ndim != 1:
        raise ValueError("the implicit-solution oracle is one-dimensional")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t > 0.0:
        try:
            tshock = shock_time(ic)
        except NoShockError:
            tshock = np.inf
        if t >= tshock:
            raise ValueError(f"t = {t} is not strictly before the shock time {tshock:.12g}")
    xs = grid.coordinates(0)
    u = np.empty_like(xs)
    seed = float(ic.u0(xs[0]))
    for j, x in enumerate(xs):
        try:
            root = _newton_point(ic, t, float(x), seed)
        except _NewtonFailure:
            try:
                root = _newton_point(ic, t, float(x), float(ic.u0(x)))
            except _NewtonFailure:
                raise OracleError(f"Newton iteration failed at x = {float(x):.12g}, t = {t}", float(x)) from None
        u[j] = root
        seed = root
    return Field(grid, Space.PHYSICAL, u)


@dataclass(frozen=True)
class ErrorReport:
    """Grid-norm errors of a computed solution against the oracle.

    Attributes:
        t: comparison time.
        l_inf: max absolute nodal error.
        l_1: domain-averaged absolute error, (h / 2*pi) * sum |e_j|.
        pointwise: absolute nodal errors in grid order.
    """

    t: float
    l_inf: float
    l_1: float
    pointwise: np.ndarray


@dataclass(frozen=True)
class SpectrumReport:
    """Modulus spectrum of a run and its oracle for modes k >= 0."""

    t: float
    k: np.ndarray
    modulus: np.ndarray
    oracle_modulus: np.ndarray


@dataclass(frozen=True)
class BurgersRunState:
    """Instantaneous solver state.

    ``u_hat`` caches the spectral coefficients the stepper actually holds
    (post-filter, so sharp-cutoff zeros are exact); it is recomputed from the
    samples when absent.
    """

    t: float
    u: Field
    filt: FourierFilter
    cfl: float
    step_count: int
    u_hat: Field | None = None

    def spectral(self) -> Field:
        return self.u_hat if self.u_hat is not None else forward_transform(self.u)


@dataclass(frozen=True)
class BurgersOutput:
    state: BurgersRunState
    report: ErrorReport
    spectrum: SpectrumReport


def burgers_rhs(u: Field, filt: FourierFilter) -> Field:
    """-d/dx (u^2/2) with the flux squared pointwise and differentiated spectrally."""
    if u.space is not Space.PHYSICAL:
        raise ValueError("burgers_rhs expects a physical-space field")
    flux = Field(u.grid, Space.PHYSICAL, 0.5 * u.data**2)
    return Field(u.grid, Space.PHYSICAL, -spectral_derivative(flux, filt, 0).data)


def step_rk3(state: BurgersRunState, dt: float) -> BurgersRunState:
    """One strong-stability-preserving three-stage Runge-Kutta step.

    After the final stage the solution itself is passed through the active
    filter, so high modes are re-damped every step.

    Raises:
        InstabilityError: if the updated solution contains NaN or Inf.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid, filt = state.u.grid, state.filt
    u = state.u.data

    def rhs(values: np.ndarray) -> np.ndarray:
        return burgers_rhs(Field(grid, Space.PHYSICAL, values), filt).data

    u1 = u + dt * rhs(u)
    u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1))
    unew = u / 3.0 + (2.0 / 3.0) * (u2 + dt * rhs(u2))
    hat = apply_filter(forward_transform(Field(grid, Space.PHYSICAL, unew)), filt)
    filtered = inverse_transform(hat)
    if not np.all(np.isfinite(filtered.data)):
        raise InstabilityError(
            f"solution blew up at t = {state.t + dt:.12g}", state.t + dt, state.step_count + 1
        )
    return BurgersRunState(state.t + dt, filtered, filt, state.cfl, state.step_count + 1, hat)


def _compare(ic: InitialCondition1D, state: BurgersRunState) -> BurgersOutput:
    grid = state.u.grid
    oracle = exact_solution(ic, state.t, grid)
    err = np.abs(state.u.data - oracle.data)
    h = grid.spacing[0]
    report = ErrorReport(state.t, float(err.max()), float(h / (2.0 * np.pi) * err.sum()), err)
    n_half = grid.dims[0] // 2
    khalf = np.arange(n_half + 1)  # indices 0..N; the last is the Nyquist mode
    mod = np.abs(state.spectral().data[: n_half + 1])
    omod = np.abs(forward_transform(oracle).data[: n_half + 1])
    return BurgersOutput(state, report, SpectrumReport(state.t, khalf, mod, omod))


def run_burgers(
    ic: InitialCondition1D,
    grid: SpectralGrid,
    filt: FourierFilter,
    output_times: Sequence[float],
    cfl: float = 0.5,
) -> list[BurgersOutput]:
    """March from u0 and compare against the oracle at each requested time.

    The step size follows dt = cfl * h / max(1, |u|_inf) and the final step
    before each output time is clipped to land on it exactly. Output times
    must be nondecreasing, nonnegative, and strictly before the shock time.
    """
    if grid.ndim != 1:
        raise ValueError("run_burgers expects a one-dimensional grid")
    if abs(grid.period[0] - 2.0 * np.pi) > 1e-12:
        raise ConfigError("the Burgers setup is posed on a 2*pi-periodic domain")
    if cfl <= 0.0:
        raise ConfigError(f"cfl must be positive, got {cfl}")
    times = [float(t) for t in output_times]
    if not times:
        raise ConfigError("at least one output time is required")
    if any(t < 0.0 for t in times):
        raise ConfigError("output times must be nonnegative")
    if sorted(times) != times or len(set(times)) != len(times):
        raise ConfigError("output times must be strictly increasing")
    try:
        tshock = shock_time(ic)
    except NoShockError:
        tshock = np.inf
    if times[-1] >= tshock:
        raise ConfigError(f"final output time {times[-1]} reaches the shock time {tshock:.12g}")

    u0 = Field(grid, Space.PHYSICAL, np.asarray(ic.u0(grid.coordinates(0)), dtype=float))
    state = BurgersRunState(0.0, u0, filt, cfl, 0, forward_transform(u0))
    h = grid.spacing[0]
    outputs: list[BurgersOutput] = []
    for target in times:
        while state.t < target:
            dt = cfl * h / max(1.0, float(np.max(np.abs(state.u.data))))
            landing = state.t + dt >= target - 1e-14
            if landing:
                dt = target - state.t
            state = step_rk3(state, dt)
            if landing:
                state = replace(state, t=target)
        outputs.append(_compare(ic, state))
    return outputs
