"""Regime classification and the exponential shift ``phi = e^{rt} u``.

The shift turns

    phi_tt - e^{-2t} Lap phi + n phi_t + m^2 phi = |phi|^p

into one of

    u_tt - e^{-2t} Lap u + mu u_t   = e^{(p-1) r t} |u|^p   (m < n/2)
    u_tt - e^{-2t} Lap u            = e^{(p-1) r t} |u|^p   (m = n/2)
    u_tt - e^{-2t} Lap u + mu^2 u   = e^{(p-1) r t} |u|^p   (m > n/2)

with ``u(0) = f`` and ``u_t(0) = g - r f``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError
from .fields import GridSpec, SpectralField, Trajectory

__all__ = [
    "Regime",
    "ModelParams",
    "InitialData",
    "BALANCE_TOL",
    "derive_params",
    "transform_data",
    "untransform_data",
    "untransform_solution",
]

BALANCE_TOL = 1e-12


class Regime(str, enum.Enum):
    DISSIPATION = "DissipationDominant"
    BALANCED = "Balanced"
    MASS = "MassDominant"


@dataclass(frozen=True)
class ModelParams:
    """Model constants together with the derived regime, ``mu`` and ``r``.

    ``massless`` marks the degenerate ``m = 0`` case, which is routed to the
    dissipation regime with ``mu = n`` and ``r = 0``.
    """

    n: int
    m: float
    p: float
    regime: Regime
    mu: float
    r: float
    massless: bool = False

    @property
    def source_rate(self) -> float:
        """Exponent ``(p-1) r`` of the time weight on ``|u|^p``."""
        return (self.p - 1.0) * self.r


def derive_params(n: int, m: float, p: float) -> ModelParams:
    """Classify the regime and compute ``mu`` and ``r``.

    Examples
    --------
    >>> round(derive_params(3, math.sqrt(2), 3).mu, 12)
    1.0
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    if not m >= 0:
        raise DomainError(f"mass must be non-negative, got {m}")
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    m = float(m)
    half = n / 2.0
    if abs(m - half) <= BALANCE_TOL:
        return ModelParams(n, m, float(p), Regime.BALANCED, 0.0, -half)
    if m < half:
        mu = math.sqrt((n - 2.0 * m) * (n + 2.0 * m))
        return ModelParams(n, m, float(p), Regime.DISSIPATION, mu, (-n + mu) / 2.0, massless=(m == 0.0))
    mu = math.sqrt((m - half) * (m + half))
    return ModelParams(n, m, float(p), Regime.MASS, mu, -half)


@dataclass(frozen=True, eq=False)
class InitialData:
    """Cauchy data ``phi(0) = f`` and ``phi_t(0) = g``.

    ``epsilon`` records the amplitude the data were built with; ``f`` and
    ``g`` already include it.
    """

    f: SpectralField
    g: SpectralField
    epsilon: float = 1.0

    def __post_init__(self):
        if self.f.grid != self.g.grid:
            raise GridMismatchError("f and g must share a grid")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be non-negative")

    @property
    def grid(self) -> GridSpec:
        return self.f.grid

    @classmethod
    def gaussian(
        cls,
        grid: GridSpec,
        epsilon: float,
        width: float = 1.0,
        g_width: float | None = None,
        g_scale: float = 1.0,
        center=None,
    ) -> "InitialData":
        """``f = eps exp(-|x - x0|^2 / w^2)`` and ``g`` a bump of the same kind."""
        coords = grid.coordinates()
        x0 = np.zeros(grid.dim) if center is None else np.broadcast_to(np.asarray(center, float), (grid.dim,))
        r2 = sum((x - c) ** 2 for x, c in zip(coords, x0))
        gw = width if g_width is None else g_width
        f = epsilon * np.exp(-r2 / width**2)
        g = epsilon * g_scale * np.exp(-r2 / gw**2)
        return cls(SpectralField.from_samples(grid, f), SpectralField.from_samples(grid, g), epsilon)


def transform_data(data: InitialData, params: ModelParams) -> tuple[SpectralField, SpectralField]:
    """Return ``(u0, u1) = (f, g - r f)``."""
    return data.f, data.g - params.r * data.f


def untransform_data(u0: SpectralField, u1: SpectralField, params: ModelParams, epsilon: float = 1.0) -> InitialData:
    """Inverse of :func:`transform_data`: ``f = u0``, ``g = u1 + r u0``."""
    return InitialData(u0, u1 + params.r * u0, epsilon)


def untransform_solution(traj: Trajectory, params: ModelParams) -> Trajectory:
    """Map a ``u`` trajectory to ``phi = e^{rt} u`` and ``phi_t = e^{rt}(u_t + r u)``."""
    w = np.exp(params.r * traj.times).reshape((-1,) + (1,) * traj.grid.dim)
    return Trajectory(traj.grid, traj.times, w * traj.values, w * (traj.rates + params.r * traj.values))
