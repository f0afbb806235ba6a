"""Vorticity-form solver for the 3-D incompressible Euler equations.

State is the vorticity field on a triply periodic box (period 4*pi per
dimension by convention of the accompanying experiments). Velocity is
recovered through a vector stream function: in spectral space

    psi_hat = omega_hat / |kappa|^2        (zero mean),
    u_hat   = i * kappa x psi_hat,

followed by the active dealiasing filter applied as one tensor-product factor
per mode (Nyquist planes dropped). Because each mode's velocity is an exact
cross product with kappa, the spectral divergence of u vanishes identically in
floating point.

The dynamics ``omega_t + (u . grad) omega = (grad u) . omega`` are marched
with classical four-stage Runge-Kutta; advection and stretching terms are
formed pointwise from filtered spectral gradients, and the solution filter is
applied after each full step. A mode-wise projection keeps the vorticity
divergence-free whenever its spectral divergence residual exceeds a small
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigError, InstabilityError, StagnationError
from .filters import FourierFilter, exponential_smoothing
from .spectral import (
    Field,
    Space,
    SpectralGrid,
    apply_filter,
    derivative_symbol,
    forward_transform,
    inverse_transform,
)

DIVERGENCE_TOL = 1e-11


@dataclass(frozen=True)
class SolverConfig:
    """Time-integration controls for the vorticity solver.

    Attributes:
        filt: dealiasing filter used in every derivative and per-step.
        cfl: advective CFL number; must lie in (0, pi/4].
        cadence: interval between diagnostic records.
        dt_floor: smallest admissible step; falling below raises.
        dt_ceiling: largest admissible step.
        velocity_floor: lower bound on |u|_inf in the dt rule so a quiescent
            field yields the ceiling instead of an infinite step.
    """

    filt: FourierFilter
    cfl: float = math.pi / 4.0
    cadence: float = 0.5
    dt_floor: float = 1e-9
    dt_ceiling: float = 0.1
    velocity_floor: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.cfl <= math.pi / 4.0 + 1e-12:
            raise ConfigError(f"cfl must lie in (0, pi/4], got {self.cfl}")
        if self.cadence <= 0.0:
            raise ConfigError(f"cadence must be positive, got {self.cadence}")
        if not 0.0 < self.dt_floor <= self.dt_ceiling:
            raise ConfigError(
                f"need 0 < dt_floor <= dt_ceiling, got {self.dt_floor}, {self.dt_ceiling}"
            )
        if self.velocity_floor <= 0.0:
            raise ConfigError(f"velocity_floor must be positive, got {self.velocity_floor}")


@dataclass(frozen=True)
class VorticityState:
    t: float
    omega: Field
    config: SolverConfig
    step_count: int


@dataclass(frozen=True)
class TubeParams:
    """Geometry of a pair of antiparallel perturbed vortex tubes.

    The tubes run along the y axis at z = +/- separation with a compactly
    supported core profile (1 - (r/R)^2)^smoothness and a sinusoidal
    centerline displacement in z of the given amplitude and wavelength.
    """

    core_radius: float = 1.2
    separation: float = 1.6
    peak_vorticity: float = 1.0
    perturb_amplitude: float = 0.25
    perturb_wavelength: float = 4.0 * math.pi
    smoothness: int = 8

    def __post_init__(self):
        if self.core_radius <= 0.0:
            raise ConfigError(f"core_radius must be positive, got {self.core_radius}")
        if self.separation <= self.core_radius:
            raise ConfigError(
                f"tube separation {self.separation} must exceed the core radius {self.core_radius}"
            )
        if not 0.0 <= self.perturb_amplitude < self.core_radius:
            raise ConfigError(
                f"perturbation amplitude {self.perturb_amplitude} must be smaller "
                f"than the core radius {self.core_radius}"
            )
        if self.perturb_wavelength <= 0.0:
            raise ConfigError(f"perturbation wavelength must be positive, got {self.perturb_wavelength}")
        if self.smoothness < 2:
            raise ConfigError(f"smoothness exponent must be >= 2, got {self.smoothness}")


def _kappa_mesh(grid: SpectralGrid, ncomp_axes: int = 0) -> list[np.ndarray]:
    return [grid.axis_profile(grid.kappa(d), d, ncomp_axes) for d in range(grid.ndim)]


def _inv_ksq(grid: SpectralGrid) -> np.ndarray:
    kap = _kappa_mesh(grid)
    ksq = sum(k * k for k in kap)
    ksq[(0,) * grid.ndim] = 1.0  # zero mode handled by zeroing psi there
    inv = 1.0 / ksq
    inv[(0,) * grid.ndim] = 0.0
    return inv


def _nyquist_free_kappa(grid: SpectralGrid) -> list[np.ndarray]:
    out = []
    for d in range(grid.ndim):
        kap = grid.kappa(d).copy()
        kap[grid.dims[d] // 2] = 0.0
        out.append(grid.axis_profile(kap, d, 0))
    return out


def _velocity_mask(grid: SpectralGrid, filt: FourierFilter) -> np.ndarray:
    """Tensor-product filter profile with Nyquist planes removed entirely."""
    mask = np.ones(grid.dims)
    for d in range(grid.ndim):
        k = grid.wavenumbers(d)
        rho = filt.rho(np.abs(k) / grid.half_modes[d])
        rho = rho.copy()
        rho[grid.dims[d] // 2] = 0.0
        mask = mask * grid.axis_profile(rho, d, 0)
    return mask


def _velocity_hat(omega_hat: np.ndarray, grid: SpectralGrid, filt: FourierFilter) -> np.ndarray:
    """Spectral velocity from spectral vorticity via the vector stream function."""
    inv = _inv_ksq(grid)
    psi = omega_hat * inv
    kx, ky, kz = _nyquist_free_kappa(grid)
    u = np.empty_like(omega_hat)
    u[0] = 1j * (ky * psi[2] - kz * psi[1])
    u[1] = 1j * (kz * psi[0] - kx * psi[2])
    u[2] = 1j * (kx * psi[1] - ky * psi[0])
    u *= _velocity_mask(grid, filt)
    return u


def vorticity_to_velocity(omega: Field, filt: FourierFilter) -> Field:
    """Recover the incompressible velocity field from vorticity.

    Accepts the vorticity in either space and returns physical velocity. The
    returned field has exactly zero spectral divergence mode by mode, and its
    curl reproduces the vorticity up to the filter's attenuation of retained
    modes.
    """
    if omega.components != 3 or omega.grid.ndim != 3:
        raise ValueError("velocity recovery expects a 3-component field on a 3-d grid")
    hat = omega if omega.space is Space.SPECTRAL else forward_transform(omega)
    u_hat = _velocity_hat(hat.data, omega.grid, filt)
    return inverse_transform(Field(omega.grid, Space.SPECTRAL, u_hat))


def curl(v: Field, nyquist_free: bool = True) -> Field:
    """Spectral curl of a 3-component field, returned in the input's space."""
    if v.components != 3 or v.grid.ndim != 3:
        raise ValueError("curl expects a 3-component field on a 3-d grid")
    grid = v.grid
    hat = v if v.space is Space.SPECTRAL else forward_transform(v)
    kx, ky, kz = _nyquist_free_kappa(grid) if nyquist_free else _kappa_mesh(grid)
    out = np.empty_like(hat.data)
    out[0] = 1j * (ky * hat.data[2] - kz * hat.data[1])
    out[1] = 1j * (kz * hat.data[0] - kx * hat.data[2])
    out[2] = 1j * (kx * hat.data[1] - ky * hat.data[0])
    result = Field(grid, Space.SPECTRAL, out)
    return result if v.space is Space.SPECTRAL else inverse_transform(result)


def divergence_residual(v: Field) -> float:
    """Dimensionless spectral divergence residual of a 3-component field.

    max_k |kappa . v_hat| normalized by max_k |kappa| |v_hat|; zero for an
    exactly solenoidal field, order machine epsilon after projection.
    """
    if v.components != 3 or v.grid.ndim != 3:
        raise ValueError("divergence_residual expects a 3-component field on a 3-d grid")
    hat = v if v.space is Space.SPECTRAL else forward_transform(v)
    kap = _kappa_mesh(hat.grid)
    div = sum(k * c for k, c in zip(kap, hat.data))
    kmag = np.sqrt(sum(k * k for k in kap))
    vmag = np.sqrt(sum(np.abs(c) ** 2 for c in hat.data))
    num = float(np.max(np.abs(div)))
    den = float(np.max(kmag * vmag))
    return num / max(den, 1e-300)


def project_divergence_free(omega: Field) -> Field:
    """Remove the compressible part: omega_hat -= kappa (kappa . omega_hat) / |kappa|^2.

    Nyquist planes are zeroed first. The projection tensor is not even under
    k -> -k on those self-conjugate planes, so projecting them would break the
    conjugate symmetry of a real field; discarding them keeps the output real
    and matches the velocity recovery, which never populates them either.
    """
    if omega.components != 3 or omega.grid.ndim != 3:
        raise ValueError("projection expects a 3-component field on a 3-d grid")
    grid = omega.grid
    hat = omega if omega.space is Space.SPECTRAL else forward_transform(omega)
    data = hat.data.copy()
    for d in range(3):
        data[(slice(None),) * (1 + d) + (grid.dims[d] // 2,)] = 0.0
    kap = _kappa_mesh(grid)
    inv = _inv_ksq(grid)
    kdotw = sum(k * c for k, c in zip(kap, data)) * inv
    for d in range(3):
        data[d] -= kap[d] * kdotw
    out = Field(grid, Space.SPECTRAL, data)
    return out if omega.space is Space.SPECTRAL else inverse_transform(out)


def make_tube_initial_data(
    params: TubeParams,
    grid: SpectralGrid,
    config: SolverConfig | None = None,
) -> VorticityState:
    """Antiparallel perturbed vortex tubes, projected exactly divergence-free.

    The construction places one tube above the dividing plane z = 0 and its
    antiparallel mirror image below. Vorticity is a pseudovector, so the
    mirror pair satisfies, to rounding on the symmetric grid: under z -> -z
    the x and y components are odd and the z component is even; under
    y -> -y the x and z components are odd and the y component is even.
    The divergence projection commutes with both reflections and therefore
    preserves all four relations. With zero perturbation amplitude the field
    is independent of the coordinate along each tube's axis.
    """
    if grid.ndim != 3:
        raise ConfigError("tube initial data requires a 3-d grid")
    half_depth = 0.5 * grid.period[2]
    reach = params.separation + params.perturb_amplitude + params.core_radius
    if reach >= half_depth:
        raise ConfigError(
            f"tube support (reach {reach:.6g}) does not fit between the dividing "
            f"plane and the box edge at {half_depth:.6g}"
        )
    cycles = grid.period[1] / params.perturb_wavelength
    if abs(cycles - round(cycles)) > 1e-9:
        raise ConfigError(
            f"perturbation wavelength {params.perturb_wavelength:.6g} must divide "
            f"the y period {grid.period[1]:.6g}"
        )
    x, y, z = grid.mesh()

    def tube(zs):
        """Vorticity of the upper tube evaluated at height zs (may be -z)."""
        zc = params.separation + params.perturb_amplitude * np.cos(
            2.0 * np.pi * y / params.perturb_wavelength
        )
        slope = (
            -params.perturb_amplitude
            * (2.0 * np.pi / params.perturb_wavelength)
            * np.sin(2.0 * np.pi * y / params.perturb_wavelength)
        )
        s = 1.0 - (x**2 + (zs - zc) ** 2) / params.core_radius**2
        profile = params.peak_vorticity * np.where(s > 0.0, s, 0.0) ** params.smoothness
        norm = np.sqrt(1.0 + slope**2)
        wy = profile / norm
        wz = profile * slope / norm
        return wy, wz

    wy_up, wz_up = tube(z)
    wy_lo, wz_lo = tube(-z)
    shape = grid.dims
    data = np.zeros((3,) + shape)
    # lower tube = pseudovector mirror: (wx, wy, wz)(x,y,z) -> (-wx, -wy, +wz)(x,y,-z)
    data[1] = wy_up - wy_lo
    data[2] = wz_up + wz_lo
    omega = project_divergence_free(Field(grid, Space.PHYSICAL, data))
    return VorticityState(0.0, omega, config or SolverConfig(exponential_smoothing()), 0)


def euler_rhs(omega: Field, filt: FourierFilter) -> Field:
    """-(u . grad) omega + (grad u) . omega with filtered spectral gradients."""
    if omega.space is not Space.PHYSICAL:
        raise ValueError("euler_rhs expects a physical-space vorticity field")
    if omega.components != 3 or omega.grid.ndim != 3:
        raise ValueError("euler_rhs expects a 3-component field on a 3-d grid")
    grid = omega.grid
    what = forward_transform(omega)
    u_hat = _velocity_hat(what.data, grid, filt)
    u = inverse_transform(Field(grid, Space.SPECTRAL, u_hat))
    syms = [
        grid.axis_profile(derivative_symbol(grid, filt, d), d, 1) for d in range(3)
    ]
    # du[j][i] = d u_i / d x_j, dw[j][i] = d omega_i / d x_j
    du = [inverse_transform(Field(grid, Space.SPECTRAL, u_hat * s)).data for s in syms]
    dw = [inverse_transform(Field(grid, Space.SPECTRAL, what.data * s)).data for s in syms]
    rhs = np.zeros_like(omega.data)
    for i in range(3):
        adv = sum(u.data[j] * dw[j][i] for j in range(3))
        stretch = sum(omega.data[j] * du[j][i] for j in range(3))
        rhs[i] = stretch - adv
    return Field(grid, Space.PHYSICAL, rhs)


def step_rk4(state: VorticityState, dt: float) -> VorticityState:
    """One classical Runge-Kutta step, then the per-step solution filter.

    After filtering, the spectral divergence residual of the vorticity is
    measured; if it exceeds the tolerance the field is re-projected.

    Raises:
        InstabilityError: if the updated field contains NaN or Inf.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid, cfg = state.omega.grid, state.config
    w = state.omega.data

    def rhs(values: np.ndarray) -> np.ndarray:
        return euler_rhs(Field(grid, Space.PHYSICAL, values), cfg.filt).data

    k1 = rhs(w)
    k2 = rhs(w + 0.5 * dt * k1)
    k3 = rhs(w + 0.5 * dt * k2)
    k4 = rhs(w + dt * k3)
    wnew = w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(wnew)):
        raise InstabilityError(
            f"vorticity blew up at t = {state.t + dt:.12g}", state.t + dt, state.step_count + 1
        )
    hat = apply_filter(forward_transform(Field(grid, Space.PHYSICAL, wnew)), cfg.filt)
    if divergence_residual(hat) > DIVERGENCE_TOL:
        hat = project_divergence_free(hat)
    omega = inverse_transform(hat)
    return VorticityState(state.t + dt, omega, cfg, state.step_count + 1)


def _dt_from_velocity_max(umax: float, grid: SpectralGrid, cfg: SolverConfig) -> float:
    dt = cfg.cfl * min(grid.spacing) / max(umax, cfg.velocity_floor)
    if dt < cfg.dt_floor:
        raise StagnationError(
            f"adaptive step {dt:.3e} fell below the floor {cfg.dt_floor:.3e}"
        )
    return min(dt, cfg.dt_ceiling)


def velocity_max(u: Field) -> float:
    """Max pointwise velocity magnitude sqrt(u.u)."""
    return float(np.sqrt(np.sum(u.data**2, axis=0)).max())


def adaptive_dt(state: VorticityState) -> float:
    """CFL-limited step from the current velocity field, clipped to the guards."""
    u = vorticity_to_velocity(state.omega, state.config.filt)
    return _dt_from_velocity_max(velocity_max(u), state.omega.grid, state.config)


def _cadence_points(t0: float, t_end: float, cadence: float) -> list[float]:
    pts = []
    k = math.floor(t0 / cadence) + 1
    while k * cadence < t_end - 1e-12:
        if k * cadence > t0 + 1e-12:
            pts.append(round(k * cadence, 12))
        k += 1
    pts.append(float(t_end))
    return pts


def _near(t: float, times: Iterable[float]) -> bool:
    return any(abs(t - tc) <= 1e-12 for tc in times)


def run_euler(
    state: VorticityState,
    t_end: float,
    sink: Callable[["object"], None] | None = None,
    checkpoint_times: Sequence[float] = (),
    checkpoint_writer: Callable[[VorticityState], None] | None = None,
) -> VorticityState:
    """March the vorticity to t_end, emitting diagnostics at the cadence.

    A diagnostic record is produced at the starting time and at every cadence
    boundary (plus t_end), each computed solely from the instantaneous state,
    so a restart from a checkpoint reproduces its first record bit for bit.
    Checkpoints are written when the run lands on a requested checkpoint time;
    on instability the last healthy state is checkpointed before the error
    propagates.
    """
    from .diagnostics import compute_record  # local import keeps layering one-way

    cfg = state.config
    if t_end < state.t:
        raise ConfigError(f"t_end = {t_end} precedes the state time {state.t}")

    def emit(st: VorticityState) -> None:
        u = vorticity_to_velocity(st.omega, cfg.filt)
        dt_used = _dt_from_velocity_max(velocity_max(u), st.omega.grid, cfg)
        if sink is not None:
            sink(compute_record(st.t, st.omega, u, cfg.filt, dt_used))

    def checkpoint(st: VorticityState) -> None:
        if checkpoint_writer is not None:
            checkpoint_writer(st)

    cp_times = sorted(float(t) for t in checkpoint_times)
    emit(state)
    if _near(state.t, cp_times):
        checkpoint(state)
    if t_end <= state.t + 1e-12:
        return state

    cadence_pts = _cadence_points(state.t, t_end, cfg.cadence)
    targets = sorted(
        set(cadence_pts) | {t for t in cp_times if state.t + 1e-12 < t <= t_end + 1e-12}
    )
    for target in targets:
        while state.t < target - 1e-12:
            try:
                dt = adaptive_dt(state)
                landing = state.t + dt >= target - 1e-12
                if landing:
                    dt = target - state.t
                state = step_rk4(state, dt)
            except InstabilityError:
                checkpoint(state)  # preserve the last healthy state
                raise
            if landing:
                state = replace(state, t=target)
        if _near(state.t, cadence_pts):
            emit(state)
        if _near(state.t, cp_times):
            checkpoint(state)
    return state
