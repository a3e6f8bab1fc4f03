"""Numerical audits of fractional functional inequalities on the torus.

Each check evaluates both sides of an inequality ``LHS <= C RHS`` on a set of
fields and reports the ratios ``LHS / RHS``. A bounded, ensemble-stable
maximum ratio is the expected outcome; a growing one flags a defect in the
norm operators.

Norm conventions
----------------
* ``||u||_{L^p}`` is a quadrature on a grid oversampled by ``oversample``
  (zero-padding in Fourier space), exact for trigonometric polynomials whose
  ``p``-th power is resolved.
* ``||u||_{L^inf}`` is the maximum over a 4x oversampled grid, a lower bound
  on the true supremum.
* ``||u||_{Hdot^s_p} = || |D|^s u ||_{L^p}`` with the zero mode removed.
* Nonlinear terms ``F(u)`` are formed on the oversampled grid and transformed
  there, so ``|D|^s F(u)`` sees the harmonics the oversampled grid resolves.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import HypothesisViolation, NonPositiveNormError
from .fields import GridSpec, SpectralField
from .spectral import _pad_axis

__all__ = [
    "GNParams",
    "InequalityReport",
    "band_limited_ensemble",
    "plane_wave",
    "constant_field",
    "refine_field",
    "lp_norm",
    "riesz_norm",
    "check_gagliardo_nirenberg",
    "check_fractional_leibniz",
    "check_fractional_chain_rule",
    "check_sobolev_embedding",
    "check_fractional_powers",
    "standard_suite",
    "suite_to_json",
    "suite_to_text",
]

LINF_OVERSAMPLE = 4
LP_OVERSAMPLE = 2
_REL_TOL = 1e-12
_CHUNK = 16


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class GNParams:
    """Exponents of the fractional Gagliardo-Nirenberg inequality.

    ``theta`` is derived, not stored:

        theta = (1/p0 - 1/p + s/n) / (1/p0 - 1/p1 + sigma/n)

    Construction fails with :class:`HypothesisViolation` unless
    ``s / sigma <= theta <= 1``.

    Examples
    --------
    >>> GNParams(s=0.5, sigma=1.0, p=2, p0=2, p1=2, n=2).theta
    0.5
    """

    s: float
    sigma: float
    p: float
    p0: float
    p1: float
    n: int

    def __post_init__(self):
        if not (self.s >= 0 and self.sigma > self.s):
            raise HypothesisViolation(f"need 0 <= s < sigma, got s={self.s}, sigma={self.sigma}")
        for name in ("p", "p0", "p1"):
            v = getattr(self, name)
            if not (1 < v < math.inf):
                raise HypothesisViolation(f"{name} must lie in (1, inf), got {v}")
        if self.n < 1:
            raise HypothesisViolation(f"n must be positive, got {self.n}")
        lo, th = self.s / self.sigma, self.theta
        if not (lo - _REL_TOL <= th <= 1 + _REL_TOL):
            raise HypothesisViolation(f"theta = {th:.6g} outside [s/sigma, 1] = [{lo:.6g}, 1]")

    @property
    def theta(self) -> float:
        num = 1 / self.p0 - 1 / self.p + self.s / self.n
        den = 1 / self.p0 - 1 / self.p1 + self.sigma / self.n
        return num / den

    @classmethod
    def equal_exponents(cls, s: float, sigma: float, p: float, m: float, n: int) -> "GNParams":
        """Case ``p0 = p1 = m``, where ``theta = (n/sigma)(1/m - 1/p + s/n)``."""
        return cls(s, sigma, p, m, m, n)

    def to_json(self) -> dict:
        return {"s": self.s, "sigma": self.sigma, "p": self.p, "p0": self.p0, "p1": self.p1,
                "n": self.n, "theta": self.theta}


# ---------------------------------------------------------------------------
# reports


@dataclass
class InequalityReport:
    """Ratios ``LHS / RHS`` of one inequality over a set of fields."""

    inequality_id: str
    sample_count: int
    ratios: np.ndarray
    max_ratio: float
    parameters: dict = field(default_factory=dict)
    skipped: str | None = None

    @classmethod
    def from_ratios(cls, inequality_id: str, ratios, parameters: dict) -> "InequalityReport":
        r = np.asarray(ratios, dtype=float)
        mx = float(np.max(r)) if r.size else math.nan
        return cls(inequality_id, int(r.size), r, mx, dict(parameters))

    @classmethod
    def skip(cls, inequality_id: str, reason: str, parameters: dict) -> "InequalityReport":
        return cls(inequality_id, 0, np.empty(0), math.nan, dict(parameters), reason)

    @property
    def finite(self) -> bool:
        return bool(self.ratios.size) and bool(np.all(np.isfinite(self.ratios)) and np.all(self.ratios > 0))

    def max_ratio_over(self, count: int) -> float:
        """Maximum over the first ``count`` samples."""
        if not 0 < count <= self.sample_count:
            raise ValueError(f"count must lie in [1, {self.sample_count}]")
        return float(np.max(self.ratios[:count]))

    def growth(self, base: int) -> float:
        """Relative growth of the maximum from the first ``base`` samples to all."""
        return self.max_ratio / self.max_ratio_over(base) - 1.0

    def to_json(self) -> dict:
        out = {
            "inequality_id": self.inequality_id,
            "sample_count": self.sample_count,
            "max_ratio": self.max_ratio,
            "min_ratio": float(np.min(self.ratios)) if self.ratios.size else math.nan,
            "parameters": self.parameters,
            "ratios": self.ratios.tolist(),
        }
        if self.skipped is not None:
            out["skipped"] = self.skipped
        return out

    def summary(self) -> str:
        if self.skipped is not None:
            return f"{self.inequality_id:<34s} skipped: {self.skipped}"
        lo = float(np.min(self.ratios))
        return f"{self.inequality_id:<34s} n={self.sample_count:<5d} min={lo:.6g} max={self.max_ratio:.6g}"


# ---------------------------------------------------------------------------
# fields


def band_limited_ensemble(
    grid: GridSpec,
    count: int,
    alpha: float = 0.0,
    seed: int = 0,
    cap: float = 0.5,
) -> list[SpectralField]:
    """Real random fields with spectrum ``|xi|^{-alpha}`` below ``cap`` times Nyquist.

    Coefficients are independent complex Gaussians, symmetrised to make the
    field real, with the zero mode removed and unit ``L^2`` norm. Sample ``i``
    depends only on ``(seed, alpha, i)``, so a larger ensemble extends a
    smaller one.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if not 0 < cap <= 1:
        raise ValueError("cap must lie in (0, 1]")
    xi = grid.xi_mag
    k_nyq = math.pi / grid.spacing
    band = (xi > 0) & (xi <= cap * k_nyq)
    env = np.zeros(grid.shape)
    env[band] = xi[band] ** (-float(alpha))
    axes = tuple(range(grid.dim))
    children = np.random.SeedSequence([int(seed), int(round(alpha * 1_000_000))]).spawn(count)
    out = []
    for child in children:
        rng = np.random.default_rng(child)
        c = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * env
        c = 0.5 * (c + np.conj(np.roll(np.flip(c), 1, axis=axes)))
        c /= math.sqrt(np.sum(np.abs(c) ** 2) * grid.volume)
        out.append(SpectralField(grid, c))
    return out


def plane_wave(grid: GridSpec, mode: Sequence[int], real: bool = True, amplitude: float = 1.0) -> SpectralField:
    """``cos(xi . x)`` (or ``exp(i xi . x)``) for the integer mode vector ``mode``."""
    mode = tuple(int(k) for k in mode)
    if len(mode) != grid.dim:
        raise ValueError(f"mode needs {grid.dim} components")
    if any(abs(k) >= grid.points_per_axis // 2 for k in mode):
        raise ValueError("mode must lie strictly below Nyquist")
    c = np.zeros(grid.shape, dtype=np.complex128)
    if real:
        c[mode] += 0.5 * amplitude
        c[tuple(-k for k in mode)] += 0.5 * amplitude
    else:
        c[mode] = amplitude
    return SpectralField(grid, c)


def constant_field(grid: GridSpec, value: float = 1.0) -> SpectralField:
    c = np.zeros(grid.shape, dtype=np.complex128)
    c[(0,) * grid.dim] = value
    return SpectralField(grid, c)


# ---------------------------------------------------------------------------
# batched norm operators


def refine_field(u: SpectralField, factor: int = 2) -> SpectralField:
    """The same trigonometric polynomial on a grid ``factor`` times finer."""
    if factor < 1 or factor & (factor - 1):
        raise ValueError(f"factor must be a power of two, got {factor}")
    c = u.coeffs
    for ax in range(c.ndim):
        c = _pad_axis(c, ax, factor * u.grid.points_per_axis)
    return SpectralField(u.grid.with_points(factor * u.grid.points_per_axis), c)


def _stack(fields) -> tuple[GridSpec, np.ndarray]:
    if isinstance(fields, SpectralField):
        fields = [fields]
    fields = list(fields)
    if not fields:
        raise ValueError("no fields supplied")
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise ValueError("all fields must share a grid")
    return grid, np.stack([f.coeffs for f in fields])


def _riesz_multiplier(xi: np.ndarray, s: float) -> np.ndarray:
    if s == 0:
        return np.where(xi > 0, 1.0, 0.0)
    return np.where(xi > 0, np.power(xi, s, where=xi > 0, out=np.ones_like(xi)), 0.0)


def _fine_samples(coeffs: np.ndarray, factor: int) -> np.ndarray:
    """Samples on a grid ``factor`` times finer; ``coeffs`` has a leading batch axis."""
    fine = coeffs
    for ax in range(1, coeffs.ndim):
        fine = _pad_axis(fine, ax, factor * coeffs.shape[ax])
    spatial = tuple(range(1, coeffs.ndim))
    size = int(np.prod(fine.shape[1:]))
    return np.fft.ifftn(fine, axes=spatial) * size


def _real_if_close(values: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(values), initial=0.0)
    if scale == 0 or np.max(np.abs(values.imag)) <= 1e-12 * scale:
        return values.real
    return values


def _lp_of_samples(samples: np.ndarray, p: float, volume: float) -> np.ndarray:
    axes = tuple(range(1, samples.ndim))
    a = np.abs(samples)
    if math.isinf(p):
        return np.max(a, axis=axes)
    return (np.mean(a**p, axis=axes) * volume) ** (1.0 / p)


def _lp_batch(coeffs: np.ndarray, grid: GridSpec, p: float, oversample: int | None = None) -> np.ndarray:
    if p == 2:
        # Parseval; identical to quadrature on any grid resolving the band
        return np.sqrt(np.sum(np.abs(coeffs) ** 2, axis=tuple(range(1, coeffs.ndim))) * grid.volume)
    factor = oversample or (LINF_OVERSAMPLE if math.isinf(p) else LP_OVERSAMPLE)
    return _lp_of_samples(_fine_samples(coeffs, factor), p, grid.volume)


def _riesz_batch(coeffs: np.ndarray, grid: GridSpec, s: float, p: float, oversample: int | None = None) -> np.ndarray:
    return _lp_batch(coeffs * _riesz_multiplier(grid.xi_mag, s), grid, p, oversample)


def lp_norm(u: SpectralField, p: float, oversample: int | None = None) -> float:
    """``||u||_{L^p}`` by quadrature (``p = inf`` gives the oversampled max)."""
    if not p >= 1:
        raise ValueError("p must be at least 1")
    grid, c = _stack(u)
    return float(_lp_batch(c, grid, p, oversample)[0])


def riesz_norm(u: SpectralField, s: float, p: float, oversample: int | None = None) -> float:
    """``|| |D|^s u ||_{L^p}``."""
    if s < 0:
        raise ValueError("s must be non-negative")
    grid, c = _stack(u)
    return float(_riesz_batch(c, grid, s, p, oversample)[0])


_POWERS = {
    "abs": lambda u, p: np.abs(u) ** p,
    "odd": lambda u, p: u * np.abs(u) ** (p - 1.0),
    "neg_odd": lambda u, p: -u * np.abs(u) ** (p - 1.0),
}


def _power_riesz(coeffs: np.ndarray, grid: GridSpec, s: float, r: float, p: float, kind: str,
                 factor: int) -> np.ndarray:
    """``|| |D|^s F(u) ||_{L^r}`` with ``F`` formed on the ``factor``-fine grid."""
    u = _real_if_close(_fine_samples(coeffs, factor))
    fu = _POWERS[kind](u, p)
    fine_grid = grid.with_points(factor * grid.points_per_axis)
    spatial = tuple(range(1, fu.ndim))
    fc = np.fft.fftn(fu, axes=spatial) / int(np.prod(fu.shape[1:]))
    fc = fc * _riesz_multiplier(fine_grid.xi_mag, s)
    if r == 2:
        return np.sqrt(np.sum(np.abs(fc) ** 2, axis=spatial) * grid.volume)
    vals = np.fft.ifftn(fc, axes=spatial) * int(np.prod(fu.shape[1:]))
    return _lp_of_samples(vals, r, grid.volume)


def _chunks(coeffs: np.ndarray):
    for i in range(0, coeffs.shape[0], _CHUNK):
        yield coeffs[i:i + _CHUNK]


def _ratios(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if np.any(~(rhs > 0)):
        raise NonPositiveNormError("right-hand side vanishes; supply nonzero fields")
    return lhs / rhs


def _check_dim(grid: GridSpec, n: int | None) -> int:
    if n is not None and n != grid.dim:
        raise ValueError(f"dimension {n} does not match grid dimension {grid.dim}")
    return grid.dim


def _relation(lhs: float, rhs: float, what: str) -> None:
    if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)):
        raise HypothesisViolation(f"exponent relation {what} violated: {lhs:.12g} != {rhs:.12g}")


# ---------------------------------------------------------------------------
# checks


def check_gagliardo_nirenberg(ensemble, params: GNParams, n: int | None = None) -> InequalityReport:
    """``||u||_{Hdot^s_p} <= C ||u||_{L^p0}^{1-theta} ||u||_{Hdot^sigma_p1}^theta``.

    Parameters
    ----------
    ensemble : SpectralField or iterable of SpectralField
    params : GNParams
        Validated exponents; ``params.n`` must equal the grid dimension.
    n : int, optional
        Redundant dimension check.

    Examples
    --------
    A single mode with ``p = p0 = p1 = 2`` gives ratio 1, because both sides
    reduce to ``|xi|^s ||u||_{L^2}``.
    """
    grid, c = _stack(ensemble)
    _check_dim(grid, n)
    if params.n != grid.dim:
        raise HypothesisViolation(f"params.n = {params.n} but the grid has dimension {grid.dim}")
    th = params.theta
    out = []
    for blk in _chunks(c):
        lhs = _riesz_batch(blk, grid, params.s, params.p)
        rhs = _lp_batch(blk, grid, params.p0) ** (1 - th) * _riesz_batch(blk, grid, params.sigma, params.p1) ** th
        out.append(_ratios(lhs, rhs))
    return InequalityReport.from_ratios("gagliardo_nirenberg", np.concatenate(out), params.to_json())


def check_fractional_leibniz(u, v, s: float, exponents: tuple[float, float, float, float, float]) -> InequalityReport:
    """``|| |D|^s (uv) ||_{L^r} <= C (|| |D|^s u ||_{p1} ||v||_{p2} + ||u||_{q1} || |D|^s v ||_{q2})``.

    ``exponents = (r, p1, p2, q1, q2)`` must satisfy
    ``1/r = 1/p1 + 1/p2 = 1/q1 + 1/q2``; ``math.inf`` is accepted. ``u`` and
    ``v`` are paired sample by sample. The product is formed on a 2x grid,
    where it is exactly resolved.
    """
    if not s > 0:
        raise HypothesisViolation(f"s must be positive, got {s}")
    r, p1, p2, q1, q2 = (float(e) for e in exponents)
    if min(r, p1, p2, q1, q2) < 1:
        raise HypothesisViolation("Lebesgue exponents must be at least 1")
    _relation(_inv(r), _inv(p1) + _inv(p2), "1/r = 1/p1 + 1/p2")
    _relation(_inv(r), _inv(q1) + _inv(q2), "1/r = 1/q1 + 1/q2")
    grid, cu = _stack(u)
    grid_v, cv = _stack(v)
    if grid_v != grid:
        raise ValueError("u and v must share a grid")
    if cv.shape[0] == 1 and cu.shape[0] > 1:
        cv = np.repeat(cv, cu.shape[0], axis=0)
    if cv.shape[0] != cu.shape[0]:
        raise ValueError("u and v ensembles must have equal size")
    fine_grid = grid.with_points(2 * grid.points_per_axis)
    spatial = tuple(range(1, cu.ndim))
    mult = _riesz_multiplier(fine_grid.xi_mag, s)
    out = []
    for bu, bv in zip(_chunks(cu), _chunks(cv)):
        prod = _fine_samples(bu, 2) * _fine_samples(bv, 2)
        size = int(np.prod(prod.shape[1:]))
        pc = np.fft.fftn(prod, axes=spatial) / size * mult
        if r == 2:
            lhs = np.sqrt(np.sum(np.abs(pc) ** 2, axis=spatial) * grid.volume)
        else:
            lhs = _lp_of_samples(np.fft.ifftn(pc, axes=spatial) * size, r, grid.volume)
        t1 = _riesz_batch(bu, grid, s, p1) * _lp_batch(bv, grid, p2)
        t2 = _lp_batch(bu, grid, q1) * _riesz_batch(bv, grid, s, q2)
        out.append(_ratios(lhs, t1 + t2))
    params = {"s": s, "r": r, "p1": p1, "p2": p2, "q1": q1, "q2": q2}
    return InequalityReport.from_ratios("fractional_leibniz", np.concatenate(out), params)


def check_fractional_chain_rule(u, s: float, p: float, exponents: tuple[float, float, float],
                                kind: str = "abs", oversample: int = LP_OVERSAMPLE) -> InequalityReport:
    """``|| |D|^s F(u) ||_{L^r} <= C ||u||_{L^r1}^{p-1} || |D|^s u ||_{L^r2}``.

    Requires ``p > ceil(s)`` and ``1/r = (p-1)/r1 + 1/r2``. ``kind`` selects
    ``F``: ``"abs"`` for ``|u|^p``, ``"odd"``/``"neg_odd"`` for ``+-u|u|^{p-1}``.
    """
    if not s > 0:
        raise HypothesisViolation(f"s must be positive, got {s}")
    if not p > math.ceil(s):
        raise HypothesisViolation(f"need p > ceil(s) = {math.ceil(s)}, got p = {p}")
    if kind not in _POWERS:
        raise ValueError(f"kind must be one of {sorted(_POWERS)}")
    r, r1, r2 = (float(e) for e in exponents)
    if min(r, r1, r2) < 1:
        raise HypothesisViolation("Lebesgue exponents must be at least 1")
    _relation(_inv(r), (p - 1) * _inv(r1) + _inv(r2), "1/r = (p-1)/r1 + 1/r2")
    grid, c = _stack(u)
    out = []
    for blk in _chunks(c):
        lhs = _power_riesz(blk, grid, s, r, p, kind, oversample)
        rhs = _lp_batch(blk, grid, r1) ** (p - 1) * _riesz_batch(blk, grid, s, r2)
        out.append(_ratios(lhs, rhs))
    params = {"s": s, "p": p, "r": r, "r1": r1, "r2": r2, "kind": kind}
    return InequalityReport.from_ratios("fractional_chain_rule", np.concatenate(out), params)


def check_sobolev_embedding(u, q: float, n: int | None = None) -> InequalityReport:
    """``||u||_{L^q} <= C ||u||_{Hdot^kappa}`` with ``kappa = n (1/2 - 1/q)``.

    Fields should have zero mean: on the torus the homogeneous norm does not
    see the zero mode.
    """
    if not q >= 2:
        raise HypothesisViolation(f"q must be at least 2, got {q}")
    grid, c = _stack(u)
    dim = _check_dim(grid, n)
    kappa = dim * (0.5 - _inv(q))
    out = []
    for blk in _chunks(c):
        out.append(_ratios(_lp_batch(blk, grid, q), _riesz_batch(blk, grid, kappa, 2.0)))
    return InequalityReport.from_ratios("sobolev_embedding", np.concatenate(out),
                                        {"q": q, "n": dim, "kappa": kappa})


def check_fractional_powers(u, p: float, s: float, r: float, kind: str = "abs",
                            oversample: int = LP_OVERSAMPLE) -> InequalityReport:
    """``||F(u)||_{Hdot^s_r} <= C ||u||_{Hdot^s_r} ||u||_{L^inf}^{p-1}`` for ``s`` in ``(n/r, p)``."""
    if not p > 1:
        raise HypothesisViolation(f"p must exceed 1, got {p}")
    if not 1 < r < math.inf:
        raise HypothesisViolation(f"r must lie in (1, inf), got {r}")
    if kind not in _POWERS:
        raise ValueError(f"kind must be one of {sorted(_POWERS)}")
    grid, c = _stack(u)
    lo = grid.dim / r
    if not lo < s < p:
        raise HypothesisViolation(f"need s in (n/r, p) = ({lo:.6g}, {p:.6g}), got {s}")
    out = []
    for blk in _chunks(c):
        lhs = _power_riesz(blk, grid, s, r, p, kind, oversample)
        rhs = _riesz_batch(blk, grid, s, r) * _lp_batch(blk, grid, math.inf) ** (p - 1)
        out.append(_ratios(lhs, rhs))
    params = {"p": p, "s": s, "r": r, "n": grid.dim, "kind": kind}
    return InequalityReport.from_ratios("fractional_powers", np.concatenate(out), params)


# ---------------------------------------------------------------------------
# suite


DEFAULT_ALPHAS = (0.0, 1.0, 2.0)


def _mixed_ensemble(grid: GridSpec, count: int, seed: int, alphas=DEFAULT_ALPHAS) -> list[SpectralField]:
    """Interleave the per-``alpha`` ensembles so every prefix mixes all spectra."""
    per = -(-count // len(alphas))
    pools = [band_limited_ensemble(grid, per, a, seed) for a in alphas]
    return [pools[i % len(alphas)][i // len(alphas)] for i in range(count)]


def standard_suite(grid: GridSpec, seed: int = 0, count: int = 100, alphas=DEFAULT_ALPHAS,
                   refine: int = 1) -> list[InequalityReport]:
    """All five checks on seeded ensembles, plus exact single-mode and scaling rows.

    Exponents are chosen per dimension so that every hypothesis holds; the
    ``v`` ensemble of the Leibniz check uses ``seed + 1``. With ``refine > 1``
    the fields drawn on ``grid`` are evaluated on a grid that many times finer,
    so only the quadrature changes.
    """
    n = grid.dim
    us = _mixed_ensemble(grid, count, seed, alphas)
    vs = _mixed_ensemble(grid, count, seed + 1, alphas)
    wave = plane_wave(grid, (3,) + (2,) * (n - 1))
    if refine != 1:
        us, vs = [refine_field(u, refine) for u in us], [refine_field(v, refine) for v in vs]
        wave = refine_field(wave, refine)
    checks = [
        ("gagliardo_nirenberg", lambda: check_gagliardo_nirenberg(us, GNParams(0.5, 1.0, 2.0, 2.0, 2.0, n))),
        ("gagliardo_nirenberg_p4", lambda: check_gagliardo_nirenberg(us, GNParams(0.5, 1.5, 4.0, 2.0, 2.0, n))),
        ("gagliardo_nirenberg_single_mode",
         lambda: check_gagliardo_nirenberg(wave, GNParams(0.5, 1.0, 2.0, 2.0, 2.0, n))),
        ("fractional_leibniz", lambda: check_fractional_leibniz(us, vs, 1.0, (2.0, 4.0, 4.0, 4.0, 4.0))),
        ("fractional_chain_rule", lambda: check_fractional_chain_rule(us, 1.0, 3.0, (2.0, 8.0, 4.0))),
        ("sobolev_embedding", lambda: check_sobolev_embedding(us, 4.0)),
        ("sobolev_embedding_q2", lambda: check_sobolev_embedding(us, 2.0)),
        ("fractional_powers", lambda: check_fractional_powers(us, 3.0, 0.5 * (n / 2.0 + 3.0), 2.0)),
    ]
    return [_guarded(name, fn) for name, fn in checks]


def _guarded(name: str, fn) -> InequalityReport:
    """Run one check; a failed hypothesis becomes a skipped row with its reason."""
    try:
        report = fn()
    except HypothesisViolation as exc:
        return InequalityReport.skip(name, str(exc), {})
    return _renamed(report, name)


def _renamed(report: InequalityReport, new_id: str) -> InequalityReport:
    report.inequality_id = new_id
    return report


def suite_to_json(reports: Iterable[InequalityReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def suite_to_text(reports: Iterable[InequalityReport]) -> str:
    return "\n".join(r.summary() for r in reports)
