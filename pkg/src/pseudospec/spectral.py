"""Grids, fields, and the discrete Fourier machinery shared by all solvers.

Conventions. Each dimension d of a grid carries an even number of samples
``n_d = 2*N_d`` on a periodic interval of length ``L_d``, with nodes
``x_j = -L_d/2 + j*h_d`` and spacing ``h_d = L_d / n_d``. The transform pair
puts the normalization on the forward side:

    u_hat(k) = (1 / prod(n_d)) * sum_j u(x_j) * exp(-i kappa . x_j)
    u(x_j)   = sum_k u_hat(k) * exp(i kappa . x_j)

where ``kappa_d = 2*pi*k_d / L_d`` and the integer indices run over
``k_d in {-N_d+1, ..., N_d}`` (a single unpaired Nyquist mode per dimension).
Spectral data is stored dense complex in standard FFT index order; because the
nodes start at -L/2 rather than 0, forward and inverse transforms carry an
alternating-sign phase per axis, handled internally.

Parseval identity under this normalization:

    sum_k |u_hat(k)|^2 = (1 / prod(n_d)) * sum_j |u(x_j)|^2

Derivatives are evaluated mode-wise as ``i * kappa * rho(|k|/N) * u_hat``
where rho is the active dealiasing filter along that axis; the unpaired
Nyquist mode is forced to zero so the symbol stays odd and real fields stay
real.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.fft as _fft

from .errors import IntegrityError
from .filters import FourierFilter


class Space(str, Enum):
    PHYSICAL = "physical"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class SpectralGrid:
    """A uniform periodic grid with per-dimension sample counts and periods.

    Attributes:
        dims: samples per dimension; each entry must be even and >= 8 so every
            dimension has a proper dealiasing band.
        period: physical period per dimension.
    """

    dims: tuple[int, ...]
    period: tuple[float, ...]

    def __init__(self, dims: Sequence[int], period: Sequence[float]):
        dims = tuple(int(n) for n in dims)
        period = tuple(float(p) for p in period)
        if len(dims) != len(period):
            raise ValueError(f"dims {dims} and period {period} must have equal length")
        if not dims:
            raise ValueError("grid needs at least one dimension")
        for n in dims:
            if n < 8 or n % 2 != 0:
                raise ValueError(f"each dimension needs an even sample count >= 8, got {n}")
        for p in period:
            if p <= 0:
                raise ValueError(f"period must be positive, got {p}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "period", period)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(p / n for p, n in zip(self.period, self.dims))

    @property
    def half_modes(self) -> tuple[int, ...]:
        """The parameter N per dimension (dims are 2N)."""
        return tuple(n // 2 for n in self.dims)

    def coordinates(self, axis: int) -> np.ndarray:
        """Node positions -L/2 + j*h along one axis."""
        n = self.dims[axis]
        h = self.period[axis] / n
        return -0.5 * self.period[axis] + h * np.arange(n)

    def mesh(self) -> list[np.ndarray]:
        """Sparse (broadcastable) coordinate arrays for all axes."""
        coords = [self.coordinates(d) for d in range(self.ndim)]
        return list(np.meshgrid(*coords, indexing="ij", sparse=True))

    def wavenumbers(self, axis: int) -> np.ndarray:
        """Integer mode indices in FFT storage order (Nyquist stored as -N)."""
        n = self.dims[axis]
        return np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)

    def kappa(self, axis: int) -> np.ndarray:
        """Physical wavenumbers 2*pi*k/L in FFT storage order."""
        return 2.0 * np.pi * self.wavenumbers(axis) / self.period[axis]

    def axis_profile(self, arr: np.ndarray, axis: int, ncomp_axes: int = 0) -> np.ndarray:
        """Reshape a per-axis 1-D array so it broadcasts over field data."""
        shape = [1] * (self.ndim + ncomp_axes)
        shape[ncomp_axes + axis] = self.dims[axis]
        return arr.reshape(shape)


@dataclass(frozen=True)
class Field:
    """Sampled data bound to a grid, tagged physical or spectral.

    Scalar fields have ``data.shape == grid.dims``; vector fields carry a
    leading component axis. Arrays are frozen on construction so fields can be
    shared safely; operations always allocate fresh arrays.
    """

    grid: SpectralGrid
    space: Space
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.space is Space.PHYSICAL:
            if np.iscomplexobj(self.data):
                raise ValueError("physical-space data must be real")
            data = np.ascontiguousarray(self.data, dtype=np.float64)
        else:
            data = np.ascontiguousarray(self.data, dtype=np.complex128)
        expected = self.grid.dims
        if data.shape == expected:
            pass
        elif data.ndim == len(expected) + 1 and data.shape[1:] == expected:
            pass
        else:
            raise ValueError(
                f"data shape {data.shape} does not match grid dims {expected} "
                "(optionally with one leading component axis)"
            )
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def components(self) -> int:
        return 1 if self.data.ndim == self.grid.ndim else self.data.shape[0]

    @property
    def is_vector(self) -> bool:
        return self.data.ndim == self.grid.ndim + 1

    def component(self, i: int) -> "Field":
        if not self.is_vector:
            raise ValueError("component() requires a vector field")
        return Field(self.grid, self.space, self.data[i].copy())


def _component_axes(f: Field) -> int:
    return 1 if f.is_vector else 0


def _grid_axes(f: Field) -> tuple[int, ...]:
    off = _component_axes(f)
    return tuple(range(off, off + f.grid.ndim))


def _phase(grid: SpectralGrid, ncomp_axes: int) -> list[np.ndarray]:
    # Nodes start at -L/2, so mode k picks up exp(i*pi*k) = (-1)^k relative to
    # an origin-based FFT; with even n this is an alternating sign in storage
    # order along each axis.
    out = []
    for d in range(grid.ndim):
        alt = np.where(np.arange(grid.dims[d]) % 2 == 0, 1.0, -1.0)
        out.append(grid.axis_profile(alt, d, ncomp_axes))
    return out


def forward_transform(f: Field) -> Field:
    """Physical samples -> normalized spectral coefficients."""
    if f.space is not Space.PHYSICAL:
        raise ValueError("forward_transform expects a physical-space field")
    axes = _grid_axes(f)
    spec = _fft.fftn(f.data.astype(np.complex128), axes=axes, workers=-1)
    spec /= float(np.prod(f.grid.dims))
    for p in _phase(f.grid, _component_axes(f)):
        spec *= p
    return Field(f.grid, Space.SPECTRAL, spec)


def inverse_transform(f: Field, imag_tol: float = 1e-12) -> Field:
    """Spectral coefficients -> physical samples.

    Raises:
        IntegrityError: if the reconstructed samples carry a relative
            imaginary residue above ``imag_tol``, i.e. the spectrum was not
            conjugate-symmetric.
    """
    if f.space is not Space.SPECTRAL:
        raise ValueError("inverse_transform expects a spectral-space field")
    spec = f.data.copy()
    for p in _phase(f.grid, _component_axes(f)):
        spec *= p
    out = _fft.ifftn(spec, axes=_grid_axes(f), workers=-1)
    out *= float(np.prod(f.grid.dims))
    scale = float(np.max(np.abs(out.real))) if out.size else 0.0
    resid = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if resid > imag_tol * max(scale, 1e-300):
        raise IntegrityError(
            f"spectrum is not conjugate-symmetric: imaginary residue {resid:.3e} "
            f"exceeds {imag_tol:.1e} relative to amplitude {scale:.3e}"
        )
    return Field(f.grid, Space.PHYSICAL, np.ascontiguousarray(out.real))


def _filter_factors(grid: SpectralGrid, filt: FourierFilter, ncomp_axes: int) -> list[np.ndarray]:
    out = []
    for d in range(grid.ndim):
        x = np.abs(grid.wavenumbers(d)) / grid.half_modes[d]
        out.append(grid.axis_profile(filt.rho(x), d, ncomp_axes))
    return out


def apply_filter(f: Field, filt: FourierFilter) -> Field:
    """Attenuate spectral data by the tensor product of per-axis profiles."""
    if f.space is not Space.SPECTRAL:
        raise ValueError("apply_filter expects a spectral-space field")
    data = f.data.copy()
    for fac in _filter_factors(f.grid, filt, _component_axes(f)):
        data *= fac
    return Field(f.grid, Space.SPECTRAL, data)


def filter_field(f: Field, filt: FourierFilter) -> Field:
    """Round-trip convenience: filter a physical field through spectral space."""
    if f.space is Space.SPECTRAL:
        return apply_filter(f, filt)
    return inverse_transform(apply_filter(forward_transform(f), filt))


def derivative_symbol(grid: SpectralGrid, filt: FourierFilter, axis: int) -> np.ndarray:
    """Mode-wise multiplier i*kappa*rho(|k|/N) with the Nyquist entry zeroed."""
    n = grid.dims[axis]
    k = grid.wavenumbers(axis)
    rho = filt.rho(np.abs(k) / grid.half_modes[axis])
    sym = 1j * grid.kappa(axis) * rho
    sym[n // 2] = 0.0  # unpaired Nyquist mode would break conjugate symmetry
    return sym


def spectral_derivative(f: Field, filt: FourierFilter, axis: int) -> Field:
    """Filtered partial derivative along one grid axis.

    The result lives in the same space as the input: physical fields are
    transformed, differentiated mode-wise, and transformed back.
    """
    if not 0 <= axis < f.grid.ndim:
        raise ValueError(f"axis {axis} out of range for a {f.grid.ndim}-d grid")
    physical = f.space is Space.PHYSICAL
    spec = forward_transform(f) if physical else f
    sym = f.grid.axis_profile(
        derivative_symbol(f.grid, filt, axis), axis, _component_axes(f)
    )
    out = Field(f.grid, Space.SPECTRAL, spec.data * sym)
    return inverse_transform(out) if physical else out
