"""Periodic grids and Fourier-coefficient fields.

Coefficients follow the Fourier-series convention
``u(x) = sum_k c_k exp(i xi_k . x)`` on the torus ``[-L, L)^dim``, so
``c = fftn(samples) / N^dim`` and ``||u||_{L^2}^2 = (2L)^dim sum |c_k|^2``.
The coefficient array is stored in numpy's FFT ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatchError

__all__ = ["GridSpec", "SpectralField", "Trajectory"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[-L, L)^dim``."""

    dim: int
    points_per_axis: int
    half_length: float = 16.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        n = self.points_per_axis
        if n < 8 or n & (n - 1):
            raise ValueError(f"points_per_axis must be a power of two >= 8, got {n}")
        if not self.half_length > 0:
            raise ValueError("half_length must be positive")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.points_per_axis

    @property
    def volume(self) -> float:
        return (2.0 * self.half_length) ** self.dim

    @property
    def axis(self) -> np.ndarray:
        """Sample coordinates along one axis."""
        return -self.half_length + self.spacing * np.arange(self.points_per_axis)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular frequencies ``pi k / L`` along one axis, FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    def coordinates(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.axis] * self.dim), indexing="ij")

    def frequencies(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.wavenumbers] * self.dim), indexing="ij")

    @cached_property
    def xi_mag(self) -> np.ndarray:
        """``|xi|`` on the full coefficient array."""
        k = self.wavenumbers
        sq = np.zeros(self.shape)
        for ax in range(self.dim):
            shape = [1] * self.dim
            shape[ax] = -1
            sq = sq + (k**2).reshape(shape)
        return np.sqrt(sq)

    @cached_property
    def xi_unique(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct ``|xi|`` values and the inverse map onto the full array."""
        vals, inv = np.unique(self.xi_mag.ravel(), return_inverse=True)
        return vals, inv.reshape(self.shape)

    def with_points(self, points_per_axis: int) -> "GridSpec":
        return GridSpec(self.dim, points_per_axis, self.half_length)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients of a function on a :class:`GridSpec`."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.shape != self.grid.shape:
            raise GridMismatchError(f"coefficient shape {arr.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_samples(cls, grid: GridSpec, values) -> "SpectralField":
        values = np.asarray(values)
        return cls(grid, np.fft.fftn(values) / values.size)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def samples(self) -> np.ndarray:
        """Complex grid samples."""
        return np.fft.ifftn(self.coeffs) * self.coeffs.size

    def real_samples(self) -> np.ndarray:
        return self.samples().real

    def hermitian_defect(self) -> float:
        """``max |c(-k) - conj(c(k))|`` relative to ``max |c|``."""
        c = self.coeffs
        flipped = np.conj(np.roll(np.flip(c), 1, axis=tuple(range(c.ndim))))
        scale = np.max(np.abs(c), initial=0.0)
        if scale == 0:
            return 0.0
        return float(np.max(np.abs(c - flipped)) / scale)

    def _check(self, other: "SpectralField") -> None:
        if other.grid != self.grid:
            raise GridMismatchError("fields live on different grids")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time samples of a field and its time derivative.

    ``values`` and ``rates`` have shape ``(len(times),) + grid.shape``.
    """

    grid: GridSpec
    times: np.ndarray
    values: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.complex128)
        rates = np.asarray(self.rates, dtype=np.complex128)
        expected = (times.size,) + self.grid.shape
        if values.shape != expected or rates.shape != expected:
            raise GridMismatchError(f"trajectory arrays must have shape {expected}")
        if np.any(times < 0):
            raise ValueError("trajectory times must be non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "rates", rates)

    def __len__(self) -> int:
        return self.times.size

    def field(self, i: int) -> SpectralField:
        return SpectralField(self.grid, self.values[i])

    def rate(self, i: int) -> SpectralField:
        return SpectralField(self.grid, self.rates[i])
