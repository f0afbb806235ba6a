"""Scalar and spectral diagnostics for the vorticity solver.

Shell spectra bin mode energies by integer radius in index space: a mode with
integer wavenumber vector k (physical wavenumber scaled by period / 2*pi)
lands in shell ``s`` when ``s - 1/2 < |k| <= s + 1/2``. Shells partition the
whole spectrum, so the summed spectrum closes the Parseval identity exactly:
``sum_s E(s) = (1/2) sum_k |u_hat|^2`` and ``sum_s Z(s) = sum_k |omega_hat|^2``.
Energy and enstrophy are reported as the matching domain-mean quantities.

The vortex-stretching diagnostic is ``max |xi . (grad u) . omega|`` with
``xi = omega / |omega|``, evaluated only where the vorticity magnitude exceeds
a small fraction of its maximum (the direction is undefined in quiet regions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from skimage import measure

from .filters import FourierFilter
from .spectral import Field, Space, derivative_symbol, forward_transform, inverse_transform

STRETCHING_MASK_FRACTION = 1e-8


@dataclass(frozen=True)
class DiagnosticRecord:
    """One row of the scalar time series written by the vorticity solver.

    ``dt_used`` is the guard-clipped adaptive step computed from this instant's
    velocity field, so the record is a pure function of (t, omega, config) and
    restarting from a checkpoint reproduces it exactly.
    """

    t: float
    max_vorticity: float
    max_velocity: float
    energy: float
    enstrophy: float
    stretching_inf: float
    dt_used: float

    @property
    def loglog_vorticity(self) -> float:
        """log log |omega|_inf; NaN when the max vorticity is <= 1."""
        if self.max_vorticity > 1.0:
            return math.log(math.log(self.max_vorticity))
        return math.nan


def _shell_index(grid) -> np.ndarray:
    radii_sq = sum(
        grid.axis_profile(grid.wavenumbers(d).astype(float) ** 2, d, 0)
        for d in range(grid.ndim)
    )
    r = np.sqrt(radii_sq)
    return np.ceil(r - 0.5).astype(np.int64)


def _shell_sum(hat: Field, weights: np.ndarray) -> np.ndarray:
    shells = _shell_index(hat.grid)
    if hat.is_vector:
        shells = np.broadcast_to(shells, weights.shape)
    return np.bincount(shells.ravel(), weights=weights.ravel())


def energy_spectrum(u: Field) -> np.ndarray:
    """Shell-binned kinetic energy E(s) = (1/2) sum_shell |u_hat|^2.

    Index into the returned array is the shell number; shells are contiguous
    from 0 to the largest occupied radius.
    """
    hat = u if u.space is Space.SPECTRAL else forward_transform(u)
    return 0.5 * _shell_sum(hat, np.abs(hat.data) ** 2)


def enstrophy_spectrum(omega: Field) -> np.ndarray:
    """Shell-binned enstrophy Z(s) = sum_shell |omega_hat|^2."""
    hat = omega if omega.space is Space.SPECTRAL else forward_transform(omega)
    return _shell_sum(hat, np.abs(hat.data) ** 2)


def stretching_diagnostic(omega: Field, u: Field, filt: FourierFilter) -> float:
    """max |xi . (grad u) . omega| over points with non-negligible vorticity."""
    if omega.space is not Space.PHYSICAL or u.space is not Space.PHYSICAL:
        raise ValueError("stretching diagnostic expects physical-space fields")
    if omega.components != 3 or u.components != 3:
        raise ValueError("stretching diagnostic expects 3-component fields")
    grid = omega.grid
    wmag = np.sqrt(np.sum(omega.data**2, axis=0))
    wmax = float(wmag.max())
    if wmax == 0.0:
        return 0.0
    mask = wmag >= STRETCHING_MASK_FRACTION * wmax
    u_hat = forward_transform(u)
    contraction = np.zeros(grid.dims)
    for j in range(3):
        sym = grid.axis_profile(derivative_symbol(grid, filt, j), j, 1)
        du_j = inverse_transform(Field(grid, Space.SPECTRAL, u_hat.data * sym)).data
        for i in range(3):
            # xi_i * (du_i/dx_j) * omega_j, with xi = omega/|omega|
            contraction += omega.data[i] * du_j[i] * omega.data[j]
    with np.errstate(invalid="ignore", divide="ignore"):
        pointwise = np.abs(contraction) / wmag
    return float(pointwise[mask].max())


def compute_record(
    t: float, omega: Field, u: Field, filt: FourierFilter, dt_used: float
) -> DiagnosticRecord:
    """Assemble the scalar diagnostics of one instant from its fields."""
    wmag = np.sqrt(np.sum(omega.data**2, axis=0))
    umag = np.sqrt(np.sum(u.data**2, axis=0))
    u_hat = forward_transform(u)
    w_hat = forward_transform(omega)
    energy = 0.5 * float(np.sum(np.abs(u_hat.data) ** 2))
    enstrophy = float(np.sum(np.abs(w_hat.data) ** 2))
    return DiagnosticRecord(
        t=t,
        max_vorticity=float(wmag.max()),
        max_velocity=float(umag.max()),
        energy=energy,
        enstrophy=enstrophy,
        stretching_inf=stretching_diagnostic(omega, u, filt),
        dt_used=dt_used,
    )


@dataclass(frozen=True)
class GrowthComparison:
    """Stretching versus two calibrated growth laws.

    Columns share the first row's value: ``loglog_bound = c1 |w| log |w|``
    and ``quadratic_bound = c2 |w|^2`` with c1, c2 chosen (unless overridden)
    so both bounds equal the measured stretching at the first sample.
    """

    t: np.ndarray
    stretching: np.ndarray
    loglog_bound: np.ndarray
    quadratic_bound: np.ndarray
    c1: float
    c2: float


def growth_comparison(
    t: Sequence[float],
    max_vorticity: Sequence[float],
    stretching: Sequence[float],
    c1: float | None = None,
    c2: float | None = None,
) -> GrowthComparison:
    """Tabulate stretching against c1*|w|*log|w| and c2*|w|^2.

    The vorticity maxima must exceed 1 so the logarithm is positive; the
    calibration anchors both comparison columns to the first stretching value.
    """
    tt = np.asarray(t, dtype=float)
    w = np.asarray(max_vorticity, dtype=float)
    s = np.asarray(stretching, dtype=float)
    if not (tt.size and tt.size == w.size == s.size):
        raise ValueError("growth comparison needs equal-length, non-empty series")
    if np.any(w <= 1.0):
        raise ValueError("growth comparison requires max vorticity > 1 throughout")
    wlogw = w * np.log(w)
    if c1 is None:
        c1 = float(s[0] / wlogw[0])
    if c2 is None:
        c2 = float(s[0] / w[0] ** 2)
    return GrowthComparison(tt, s, c1 * wlogw, c2 * w**2, float(c1), float(c2))


@dataclass(frozen=True)
class ContourLine:
    """A single marching-squares polyline at one contour level.

    Vertices are physical coordinates (columns: in-plane axes in grid order);
    closed loops repeat their first vertex at the end.
    """

    level: float
    vertices: np.ndarray

    @property
    def closed(self) -> bool:
        return bool(np.allclose(self.vertices[0], self.vertices[-1]))


def contour_slice(
    field: Field,
    axis: int,
    index: int,
    levels: Sequence[float],
    component: int | None = None,
) -> list[ContourLine]:
    """Contour an axis-aligned slice of a scalar field at the given levels.

    The slice fixes ``axis`` at node ``index``; the remaining two axes keep
    their grid order as (row, column) of the slice. Levels outside the slice's
    data range simply produce no lines. The slice is treated as non-periodic,
    so contours may terminate at the domain edge.
    """
    if field.space is not Space.PHYSICAL:
        raise ValueError("contour_slice expects a physical-space field")
    data = field.data
    if field.is_vector:
        if component is None:
            raise ValueError("a component must be selected for a vector field")
        data = data[component]
    elif component is not None:
        raise ValueError("component given for a scalar field")
    grid = field.grid
    if grid.ndim != 3:
        raise ValueError("contour_slice expects a 3-d grid")
    if not 0 <= axis < 3:
        raise ValueError(f"axis {axis} out of range")
    if not 0 <= index < grid.dims[axis]:
        raise ValueError(f"slice index {index} out of range for axis {axis}")
    plane = np.take(data, index, axis=axis)
    kept = [d for d in range(3) if d != axis]
    origins = [-0.5 * grid.period[d] for d in kept]
    steps = [grid.period[d] / grid.dims[d] for d in kept]
    out: list[ContourLine] = []
    for level in levels:
        for verts in measure.find_contours(plane, float(level)):
            coords = np.empty_like(verts)
            coords[:, 0] = origins[0] + steps[0] * verts[:, 0]
            coords[:, 1] = origins[1] + steps[1] * verts[:, 1]
            out.append(ContourLine(float(level), coords))
    return out
