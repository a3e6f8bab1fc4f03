"""Kummer's confluent hypergeometric function, its integer-parameter second
solution, and the order 0/1 Bessel functions.

Kummer's function ``Phi(b, c, z)`` is evaluated by one of three paths chosen
per point:

* ``|z| <= series_threshold``: the Maclaurin series.
* ``|z| >= asymptotic_threshold``: the large-argument expansion, used only
  where its smallest term meets the tolerance.
* otherwise: Taylor-step integration of Kummer's equation along the ray from
  a series anchor at ``|z| = series_threshold``.

The raw series on the imaginary axis loses about ``e^{|z|}`` ulps to
cancellation, which is why the series region is kept small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from . import _backend
from .errors import DomainError, InvalidParameterError, NoConvergenceError

__all__ = [
    "KummerParams",
    "EvalStrategy",
    "DEFAULT_STRATEGY",
    "BESSEL_SWITCH",
    "kummer_phi",
    "kummer_phi_deriv",
    "kummer_psi",
    "kummer_psi_deriv",
    "phi_with_derivative",
    "psi_with_derivative",
    "bessel_j0y0",
    "bessel_01",
]

BESSEL_SWITCH = 12.0
_INT_TOL = 1e-9


def _nonpositive_integer(x: complex) -> bool:
    return abs(x.imag) < _INT_TOL and x.real < 0.5 and abs(x.real - round(x.real)) < _INT_TOL


@dataclass(frozen=True)
class KummerParams:
    """Parameters ``(b, c)`` of Kummer's equation ``z w'' + (c - z) w' - b w = 0``."""

    b: complex
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "c", complex(self.c))

    @property
    def phi_admissible(self) -> bool:
        """False when ``c`` is zero or a negative integer."""
        return not _nonpositive_integer(self.c)

    def shifted(self, db: int = 1, dc: int = 1) -> "KummerParams":
        return KummerParams(self.b + db, self.c + dc)

    @classmethod
    def dissipation(cls, mu: float) -> tuple["KummerParams", "KummerParams"]:
        """``(b, c)`` of ``w1`` and of the Kummer factor inside ``w2 = z^mu Phi(...)``."""
        mu = float(mu)
        first = cls((1.0 - mu) / 2.0, 1.0 - mu)
        second = cls((1.0 + mu) / 2.0, 1.0 + mu)
        first._check_pair(second, mu)
        return first, second

    @classmethod
    def mass(cls, mu: float) -> tuple["KummerParams", "KummerParams"]:
        """Pair for the mass-dominant kernel, ``c = 1 +- 2 i mu``."""
        mu = float(mu)
        first = cls((1.0 + 2j * mu) / 2.0, 1.0 + 2j * mu)
        second = cls((1.0 - 2j * mu) / 2.0, 1.0 - 2j * mu)
        first._check_pair(second, -2j * mu)
        return first, second

    def _check_pair(self, other: "KummerParams", one_minus_c: complex) -> None:
        # w2 = z^{1-c} Phi(b - c + 1, 2 - c, z) and b = c/2
        if abs(self.b - self.c / 2) > 1e-14 * (1 + abs(self.c)):
            raise InvalidParameterError("expected b = c/2")
        if abs(other.b - (self.b - self.c + 1)) > 1e-14 * (1 + abs(self.c)):
            raise InvalidParameterError("second parameter pair is not b - c + 1")
        if abs(other.c - (2 - self.c)) > 1e-14 * (1 + abs(self.c)):
            raise InvalidParameterError("second parameter pair is not 2 - c")
        if abs((1 - self.c) - one_minus_c) > 1e-12 * (1 + abs(one_minus_c)):
            raise InvalidParameterError("1 - c does not match the regime")


@dataclass(frozen=True)
class EvalStrategy:
    """Path selection and accuracy settings for Kummer evaluations.

    Attributes
    ----------
    series_threshold : float
        Largest ``|z|`` summed by the Maclaurin series; also the radius of the
        anchor used by the ODE path.
    max_terms : int
        Cap on series terms, per Taylor step and per asymptotic sum.
    ode_tolerance : float
        Relative truncation tolerance of the ODE path.
    asymptotic_threshold : float
        Smallest ``|z|`` at which the large-argument expansion is tried.
    step_cap : float
        Longest Taylor step of the ODE path.
    """

    series_threshold: float = 8.0
    max_terms: int = 400
    ode_tolerance: float = 1e-13
    asymptotic_threshold: float = 40.0
    step_cap: float = 2.0

    def __post_init__(self):
        if not self.series_threshold > 0:
            raise ValueError("series_threshold must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if not 0 < self.ode_tolerance < 1:
            raise ValueError("ode_tolerance must lie in (0, 1)")
        if not self.asymptotic_threshold >= self.series_threshold:
            raise ValueError("asymptotic_threshold must not be below series_threshold")
        if not self.step_cap > 0:
            raise ValueError("step_cap must be positive")


DEFAULT_STRATEGY = EvalStrategy()

_SERIES_TOL = 1e-17


def _as_array(z):
    arr = np.asarray(z, dtype=np.complex128)
    return arr, arr.ndim == 0


def _asymptotic_phi(b, c, z, tol, max_terms, core):
    """Large-|z| expansion of Phi and Phi'; returns (val, der, ok)."""
    s1, d1, ok1 = core.asymptotic_sum(1 - b, c - b, z, tol, max_terms)
    s2, d2, ok2 = core.asymptotic_sum(b, b - c + 1, -z, tol, max_terms)
    sgn = np.where(z.imag >= 0, 1.0, -1.0)
    gc = sp.gamma(c)
    a1 = gc * sp.rgamma(b) * np.exp(z) * np.power(z, b - c)
    a2 = gc * sp.rgamma(c - b) * np.exp(1j * np.pi * b * sgn) * np.power(z, -b)
    inv = 1.0 / z
    val = a1 * s1 + a2 * s2
    der = a1 * (s1 + (b - c) * inv * s1 + d1) + a2 * (-b * inv * s2 - d2)
    # an identically vanishing prefactor makes its series irrelevant
    ok = (ok1 | (a1 == 0)) & (ok2 | (a2 == 0))
    return val, der, ok


def _continue_from_anchor(b, c, z, anchor_fn, strategy, core):
    r = strategy.series_threshold
    anchor = z * (r / np.abs(z))
    w0, dw0 = anchor_fn(anchor)
    w, dw, ok = core.kummer_continue(
        b, c, anchor, w0, dw0, z, strategy.step_cap, 0.01 * strategy.ode_tolerance, strategy.max_terms
    )
    if not np.all(ok):
        raise NoConvergenceError(f"Taylor continuation failed for b={b}, c={c}")
    return w, dw


def phi_with_derivative(b, c, z, strategy: EvalStrategy = DEFAULT_STRATEGY, backend=None):
    """Vectorised ``(Phi(b, c, z), Phi'(b, c, z))`` over an array ``z``."""
    b = complex(b)
    c = complex(c)
    if _nonpositive_integer(c):
        raise InvalidParameterError(f"c = {c} is zero or a negative integer")
    core = _backend.get(backend)
    z, scalar = _as_array(z)
    flat = z.ravel()
    val = np.empty_like(flat)
    der = np.empty_like(flat)
    absz = np.abs(flat)

    def series(points):
        v, d, ok = core.kummer_series(b, c, points, strategy.max_terms, _SERIES_TOL)
        if not np.all(ok):
            raise NoConvergenceError(f"Kummer series did not converge for b={b}, c={c}")
        return v, d

    small = absz <= strategy.series_threshold
    if small.any():
        val[small], der[small] = series(flat[small])
    rest = np.flatnonzero(~small)
    if rest.size:
        big = absz[rest] >= strategy.asymptotic_threshold
        todo = rest[~big]
        if big.any():
            idx = rest[big]
            v, d, ok = _asymptotic_phi(b, c, flat[idx], 0.01 * strategy.ode_tolerance, strategy.max_terms, core)
            val[idx[ok]] = v[ok]
            der[idx[ok]] = d[ok]
            todo = np.concatenate([todo, idx[~ok]])
        if todo.size:
            val[todo], der[todo] = _continue_from_anchor(b, c, flat[todo], series, strategy, core)
    val = val.reshape(z.shape)
    der = der.reshape(z.shape)
    if scalar:
        return complex(val), complex(der)
    return val, der


def kummer_phi(params: KummerParams, z, strategy: EvalStrategy = DEFAULT_STRATEGY):
    """Kummer's function ``Phi(b, c, z) = sum_k (b)_k z^k / ((c)_k k!)``.

    Parameters
    ----------
    params : KummerParams
        ``c`` must not be zero or a negative integer.
    z : complex or array_like
    strategy : EvalStrategy, optional

    Returns
    -------
    complex or ndarray
    """
    return phi_with_derivative(params.b, params.c, z, strategy)[0]


def kummer_phi_deriv(params: KummerParams, z, strategy: EvalStrategy = DEFAULT_STRATEGY):
    """``d/dz Phi(b, c, z)`` computed as ``(b/c) Phi(b+1, c+1, z)``."""
    if not params.phi_admissible:
        raise InvalidParameterError(f"c = {params.c} is zero or a negative integer")
    return params.b / params.c * kummer_phi(params.shifted(), z, strategy)


def _tricomi_small(a, n, z):
    """``U(a, n+1, z)`` for integer ``n >= 0`` from its logarithmic series."""
    z = np.asarray(z, dtype=np.complex128)
    lz = np.log(z)
    pref = (-1.0) ** (n + 1) / sp.factorial(n) * sp.rgamma(a - n)
    total = np.zeros_like(z)
    if pref != 0:
        term = np.ones_like(z)
        psi_a = sp.digamma(a)
        psi_1 = sp.digamma(1.0)
        psi_n = sp.digamma(n + 1.0)
        absz = np.abs(z)
        for k in range(400):
            inc = term * (lz + psi_a - psi_1 - psi_n)
            total = total + inc
            if k > absz.max(initial=0) and np.all(np.abs(inc) <= 1e-17 * np.abs(total)):
                break
            term = term * (a + k) / ((n + 1 + k) * (k + 1)) * z
            psi_a = psi_a + 1.0 / (a + k)
            psi_1 = psi_1 + 1.0 / (k + 1)
            psi_n = psi_n + 1.0 / (n + 1 + k)
        total = pref * total
    finite = np.zeros_like(z)
    ra = sp.rgamma(a)
    for k in range(1, n + 1):
        rising = np.prod([1 - a + k + j for j in range(n - k)]) if n > k else 1.0
        coef = sp.factorial(k - 1) * rising / sp.factorial(n - k)
        finite = finite + coef * z ** (-k)
    return total + ra * finite


def _psi_small(b, c, z):
    # Psi(b, c, z) = -z^{1-c} U(b - c + 1, 2 - c, z) for integer c <= 1
    n = int(round((1 - c).real))
    return -np.power(z, n) * _tricomi_small(b - c + 1, n, z)


def _check_psi_params(b, c):
    if not (abs(c.imag) < _INT_TOL and abs(c.real - round(c.real)) < _INT_TOL and round(c.real) <= 0):
        raise InvalidParameterError(f"Psi is only provided for c a non-positive integer, got c = {c}")
    if _nonpositive_integer(b - c + 1):
        raise InvalidParameterError("b - c + 1 must not be a non-positive integer")


def psi_with_derivative(b, c, z, strategy: EvalStrategy = DEFAULT_STRATEGY, backend=None):
    """Vectorised ``(Psi(b, c, z), Psi'(b, c, z))`` for integer ``c <= 0``.

    ``Psi = -U(b, c, z)`` with ``U`` Tricomi's function; the sign makes
    ``W(w2, Psi) = Gamma(2-c)/Gamma(b-c+1) z^{-c} e^z`` with
    ``w2 = z^{1-c} Phi(b-c+1, 2-c, z)``. The derivative obeys
    ``Psi'(b, c, z) = -b Psi(b+1, c+1, z)``.
    """
    b = complex(b)
    c = complex(round(complex(c).real))
    _check_psi_params(b, complex(c))
    core = _backend.get(backend)
    z, scalar = _as_array(z)
    flat = z.ravel()
    if np.any(flat == 0):
        raise DomainError("Psi is singular at z = 0")
    val = np.empty_like(flat)
    der = np.empty_like(flat)
    absz = np.abs(flat)

    def small_pair(points):
        return _psi_small(b, c, points), -b * _psi_small(b + 1, c + 1, points)

    small = absz <= strategy.series_threshold
    if small.any():
        val[small], der[small] = small_pair(flat[small])
    rest = np.flatnonzero(~small)
    if rest.size:
        big = absz[rest] >= strategy.asymptotic_threshold
        todo = rest[~big]
        if big.any():
            idx = rest[big]
            zz = flat[idx]
            s2, d2, ok = core.asymptotic_sum(b, b - c + 1, -zz, 0.01 * strategy.ode_tolerance, strategy.max_terms)
            zb = np.power(zz, -b)
            val[idx] = -zb * s2
            der[idx] = -zb * (-b / zz * s2 - d2)
            todo = np.concatenate([todo, idx[~ok]])
        if todo.size:
            val[todo], der[todo] = _continue_from_anchor(b, c, flat[todo], small_pair, strategy, core)
    val = val.reshape(z.shape)
    der = der.reshape(z.shape)
    if scalar:
        return complex(val), complex(der)
    return val, der


def kummer_psi(params: KummerParams, z, strategy: EvalStrategy = DEFAULT_STRATEGY):
    """Second solution of Kummer's equation for ``c`` a non-positive integer.

    Normalised so that ``W(w2, Psi)(z) = Gamma(2-c)/Gamma(b-c+1) z^{-c} e^z``
    where ``w2(z) = z^{1-c} Phi(b-c+1, 2-c, z)``. With this normalisation
    ``Psi(z) -> -Gamma(1-c)/Gamma(b-c+1)`` as ``z -> 0`` when ``Re c < 0``.
    """
    return psi_with_derivative(params.b, params.c, z, strategy)[0]


def kummer_psi_deriv(params: KummerParams, z, strategy: EvalStrategy = DEFAULT_STRATEGY):
    """``d/dz Psi(b, c, z)``."""
    return psi_with_derivative(params.b, params.c, z, strategy)[1]


def bessel_01(x, backend=None):
    """``(J0, J1, Y0, Y1)`` at positive real ``x`` (arrays)."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(~(x > 0)):
        raise DomainError("Bessel arguments must be positive")
    core = _backend.get(backend)
    flat = np.ascontiguousarray(x.ravel())
    out = core.bessel_01(flat, BESSEL_SWITCH)
    return tuple(np.asarray(o).reshape(x.shape) for o in out)


def bessel_j0y0(tau):
    """Return ``(J0, J0', Y0, Y0')`` at ``tau > 0``.

    Uses ``J0' = -J1`` and ``Y0' = -Y1``. Series below ``tau = 12``, Hankel's
    expansion above.
    """
    arr = np.asarray(tau, dtype=np.float64)
    j0, j1, y0, y1 = bessel_01(arr)
    if arr.ndim == 0:
        return float(j0), float(-j1), float(y0), float(-y1)
    return j0, -j1, y0, -y1
