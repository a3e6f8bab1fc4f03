"""Admissible nonlinearity exponents, linear decay rates and rate fitting.

Every global-existence result is registered under a descriptive identifier
together with its hypotheses. The registry drives three things: the exact
admissible ``p`` interval for a given model (:func:`critical_exponents`),
the union of those intervals across results at ``mu = 1``
(:func:`exponent_landscape`), and the verdicts printed by the CLI.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import HypothesisViolation, InsufficientSamplesError, NonPositiveNormError
from .transforms import ModelParams, Regime, derive_params

__all__ = [
    "ExponentBounds",
    "Interval",
    "TheoremEntry",
    "THEOREMS",
    "theorems_for",
    "critical_exponents",
    "exponent_verdict",
    "p_critical",
    "p_critical_gamma",
    "theoretical_rate",
    "g_contribution_rate",
    "DecayReport",
    "fit_decay_rate",
    "LandscapeRow",
    "Landscape",
    "exponent_landscape",
]

_MU_TOL = 1e-9


def p_critical(n: int, mu: float) -> float:
    """``1 + 2 / (n - mu)``."""
    if not 0 < mu < n:
        raise HypothesisViolation(f"need 0 < mu < n, got mu={mu}, n={n}")
    return 1.0 + 2.0 / (n - mu)


def p_critical_gamma(n: int, mu: float, gamma: float) -> float:
    """``1 + 2 gamma / (n - mu)``; equals :func:`p_critical` at ``gamma = 1``."""
    if not 0 < mu < n:
        raise HypothesisViolation(f"need 0 < mu < n, got mu={mu}, n={n}")
    return 1.0 + 2.0 * gamma / (n - mu)


BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class ExponentBounds:
    """Admissible exponents ``lower < p <= upper`` plus side conditions.

    ``upper`` is ``inf`` when unbounded; ``upper_inclusive`` is False for
    open upper ends. ``empty`` flags a hypothesis set that admits no ``p``.
    """

    lower: float
    upper: float = math.inf
    extra_conditions: tuple[str, ...] = ()
    upper_inclusive: bool = True
    theorem_id: str = ""

    def __post_init__(self):
        if not self.lower >= 1:
            raise ValueError(f"lower bound must be at least 1, got {self.lower}")

    @property
    def empty(self) -> bool:
        if self.upper < self.lower:
            return True
        return self.upper == self.lower

    def contains(self, p: float) -> bool:
        """Membership with endpoints compared to a relative ``1e-12``.

        The bounds come from floating-point ``mu``, so ``p`` equal to an
        endpoint up to rounding is treated as the endpoint itself.
        """
        tol = BOUNDARY_RTOL * max(1.0, abs(p))
        if self.empty or not p > self.lower + tol:
            return False
        return p <= self.upper + tol if self.upper_inclusive else p < self.upper - tol

    def describe(self) -> str:
        if self.empty:
            return "empty"
        hi = "inf)" if math.isinf(self.upper) else f"{self.upper:.6g}" + ("]" if self.upper_inclusive else ")")
        return f"({self.lower:.6g}, {hi}"

    def to_json(self) -> dict:
        out = asdict(self)
        out["upper"] = None if math.isinf(self.upper) else self.upper
        out["empty"] = self.empty
        return out


# ---------------------------------------------------------------------------
# registry


def _ceil(x: float) -> int:
    # ceil with a guard against 2.0000000001 style inputs
    r = round(x)
    return int(r) if abs(x - r) < 1e-12 else math.ceil(x)


@dataclass(frozen=True)
class TheoremEntry:
    """One global-existence result.

    ``param`` is ``None``, ``"gamma"`` or ``"sigma"`` and names the data
    regularity the bounds depend on. ``check`` raises
    :class:`HypothesisViolation`; ``bounds`` returns ``(lower, upper,
    conditions)``.
    """

    theorem_id: str
    regimes: tuple[str, ...]
    param: str | None
    check: Callable[[ModelParams, float | None], None] = field(repr=False)
    bounds: Callable[[ModelParams, float | None], tuple] = field(repr=False)
    summary: str = ""


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise HypothesisViolation(message)


def _threshold(params: ModelParams) -> float:
    """``p_{n,mu}`` for effective dissipation, ``(n+1)/(n-1)`` otherwise."""
    if params.regime is Regime.DISSIPATION and params.mu >= 1 - _MU_TOL:
        return p_critical(params.n, params.mu)
    return (params.n + 1) / (params.n - 1)


def _energy_upper(n: int) -> float:
    return n / (n - 2) if n >= 3 else math.inf


def _mu_effective(params, hi=None, hi_label=""):
    _need(params.regime is Regime.DISSIPATION, "requires the dissipation-dominant regime")
    _need(params.mu >= 1 - _MU_TOL, f"requires mu >= 1, got mu={params.mu}")
    if hi is not None:
        _need(params.mu < hi, f"requires mu < {hi_label}, got mu={params.mu}")


def _mu_other(regime):
    def check(params):
        _need(params.regime is regime, f"requires the {regime.value} regime")
        if regime is Regime.DISSIPATION:
            _need(0 < params.mu < 1 - _MU_TOL, f"requires mu in (0, 1), got mu={params.mu}")

    return check


def _gamma_range(gamma):
    _need(gamma is not None and 0.5 < gamma < 1, f"requires gamma in (1/2, 1), got {gamma}")


def _sigma_mid(params, sigma):
    _need(params.n >= 3, f"requires n >= 3, got n={params.n}")
    _need(sigma is not None and 1 < sigma < params.n / 2, f"requires sigma in (1, n/2), got {sigma}")


def _sigma_large(params, sigma):
    _need(params.n >= 3, f"requires n >= 3, got n={params.n}")
    _need(sigma is not None and params.n <= 2 * sigma, f"requires n <= 2 sigma, got sigma={sigma}")


def _sigma_embedded(params, sigma):
    _need(params.n >= 2, f"requires n >= 2, got n={params.n}")
    _need(sigma is not None and sigma > params.n / 2, f"requires sigma > n/2, got {sigma}")


def _sigma_low_dim(params, sigma):
    ok = (params.n == 1 and sigma is not None and abs(sigma - 1) < 1e-12) or (
        params.n == 2 and sigma is not None and 1 < sigma < 2
    )
    _need(ok, f"requires sigma = 1 for n = 1 or sigma in (1, 2) for n = 2, got n={params.n}, sigma={sigma}")


def _build_registry() -> dict[str, TheoremEntry]:
    reg: dict[str, TheoremEntry] = {}

    def add(entry):
        reg[entry.theorem_id] = entry

    # effective dissipation
    def energy_eff_check(pr, _):
        _need(pr.n >= 2, "requires n >= 2")
        _mu_effective(pr, 2.0, "2")

    add(TheoremEntry(
        "energy_effective", (Regime.DISSIPATION.value,), None, energy_eff_check,
        lambda pr, _: (p_critical(pr.n, pr.mu), _energy_upper(pr.n), ()),
        "H^1 x L^2 data, mu in [1, 2)",
    ))

    def sobolev_eff_check(pr, g):
        _need(pr.n >= 2, "requires n >= 2")
        _gamma_range(g)
        _mu_effective(pr, 2 * g, "2 gamma")

    add(TheoremEntry(
        "sobolev_effective", (Regime.DISSIPATION.value,), "gamma", sobolev_eff_check,
        lambda pr, g: (p_critical_gamma(pr.n, pr.mu, g), pr.n / (pr.n - 2 * g), ()),
        "H^gamma x L^2 data, gamma in (1/2, 1), mu in [1, 2 gamma)",
    ))

    def higher_eff_check(pr, sg):
        _sigma_mid(pr, sg)
        _mu_effective(pr, 2 * sg, "2 sigma")

    add(TheoremEntry(
        "higher_effective", (Regime.DISSIPATION.value,), "sigma", higher_eff_check,
        lambda pr, sg: (max(_threshold(pr), _ceil(sg)), 1 + 2 / (pr.n - 2 * sg), ("p > ceil(sigma)",)),
        "H^sigma x H^{sigma-1} data, sigma in (1, n/2), mu in [1, 2 sigma)",
    ))

    def large_eff_check(pr, sg):
        _sigma_large(pr, sg)
        _mu_effective(pr)

    add(TheoremEntry(
        "higher_effective_large_sigma", (Regime.DISSIPATION.value,), "sigma", large_eff_check,
        lambda pr, sg: (max(_threshold(pr), _ceil(sg)), math.inf, ("p > ceil(sigma)",)),
        "H^sigma x H^{sigma-1} data, n <= 2 sigma, mu in [1, n)",
    ))

    def embedded_eff_check(pr, sg):
        _sigma_embedded(pr, sg)
        _mu_effective(pr)

    add(TheoremEntry(
        "embedded_effective", (Regime.DISSIPATION.value,), "sigma", embedded_eff_check,
        lambda pr, sg: (max(_threshold(pr), sg, 2.0), math.inf, ("p > sigma", "p > 2")),
        "H^sigma x H^{sigma-1} data, sigma > n/2, mu in [1, n)",
    ))
    add(TheoremEntry(
        "embedded_effective_sharp", (Regime.DISSIPATION.value,), "sigma", embedded_eff_check,
        lambda pr, sg: (sg + 1.0, math.inf, ("p > sigma + 1",)),
        "H^sigma x H^{sigma-1} data, sigma > n/2, mu in [1, n)",
    ))

    # non-effective dissipation, mass and balanced share one family of bounds
    for regime, tag in ((Regime.DISSIPATION, "noneffective"), (Regime.MASS, "mass"), (Regime.BALANCED, "balanced")):
        base = _mu_other(regime)
        regs = (regime.value,)

        def energy_check(pr, _, base=base):
            base(pr)
            _need(pr.n >= 2, "requires n >= 2")

        def sobolev_check(pr, g, base=base):
            base(pr)
            _need(pr.n >= 2, "requires n >= 2")
            _gamma_range(g)

        def mid_check(pr, sg, base=base):
            base(pr)
            _sigma_mid(pr, sg)

        def large_check(pr, sg, base=base):
            base(pr)
            _sigma_large(pr, sg)

        def emb_check(pr, sg, base=base):
            base(pr)
            _sigma_embedded(pr, sg)

        def low_check(pr, sg, base=base):
            base(pr)
            _sigma_low_dim(pr, sg)

        add(TheoremEntry(
            f"energy_{tag}", regs, None, energy_check,
            lambda pr, _: ((pr.n + 1) / (pr.n - 1), _energy_upper(pr.n), ()),
            "H^1 x L^2 data",
        ))
        add(TheoremEntry(
            f"sobolev_{tag}", regs, "gamma", sobolev_check,
            lambda pr, g: (1 + 2 * g / (pr.n - 1), pr.n / (pr.n - 2 * g), ()),
            "H^gamma x L^2 data, gamma in (1/2, 1)",
        ))
        add(TheoremEntry(
            f"higher_{tag}", regs, "sigma", mid_check,
            lambda pr, sg: (max((pr.n + 1) / (pr.n - 1), _ceil(sg)), 1 + 2 / (pr.n - 2 * sg), ("p > ceil(sigma)",)),
            "H^sigma x H^{sigma-1} data, sigma in (1, n/2)",
        ))
        add(TheoremEntry(
            f"higher_{tag}_large_sigma", regs, "sigma", large_check,
            lambda pr, sg: (max((pr.n + 1) / (pr.n - 1), _ceil(sg)), math.inf, ("p > ceil(sigma)",)),
            "H^sigma x H^{sigma-1} data, n <= 2 sigma",
        ))
        add(TheoremEntry(
            f"embedded_{tag}", regs, "sigma", emb_check,
            lambda pr, sg: (max((pr.n + 1) / (pr.n - 1), sg, 2.0), math.inf, ("p > sigma", "p > 2")),
            "H^sigma x H^{sigma-1} data, sigma > n/2",
        ))
        add(TheoremEntry(
            f"low_dim_{tag}", regs, "sigma", low_check,
            lambda pr, sg: (sg + 1.0, math.inf, ("p > sigma + 1",)),
            "sigma = 1 for n = 1, sigma in (1, 2) for n = 2",
        ))
    return reg


THEOREMS: dict[str, TheoremEntry] = _build_registry()


def theorems_for(params: ModelParams) -> list[str]:
    """Identifiers whose regime (and ``mu`` range) matches ``params``."""
    effective = params.regime is Regime.DISSIPATION and params.mu >= 1 - _MU_TOL
    out = []
    for tid, entry in THEOREMS.items():
        if params.regime.value not in entry.regimes:
            continue
        if params.regime is Regime.DISSIPATION and ("noneffective" in tid) == effective:
            continue
        out.append(tid)
    return out


def critical_exponents(params: ModelParams, gamma_or_sigma: float | None, theorem_id: str) -> ExponentBounds:
    """Admissible ``p`` interval of one registered result.

    Raises
    ------
    HypothesisViolation
        If ``theorem_id`` is unknown or its hypotheses fail for ``params``.

    Examples
    --------
    >>> pr = derive_params(3, math.sqrt(8) / 2, 3)
    >>> b = critical_exponents(pr, None, "energy_effective")
    >>> round(b.lower, 12), round(b.upper, 12)
    (2.0, 3.0)
    """
    try:
        entry = THEOREMS[theorem_id]
    except KeyError:
        raise HypothesisViolation(f"unknown theorem id {theorem_id!r}") from None
    entry.check(params, gamma_or_sigma)
    lo, hi, extra = entry.bounds(params, gamma_or_sigma)
    return ExponentBounds(float(lo), float(hi), tuple(extra), True, theorem_id)


def exponent_verdict(params: ModelParams) -> tuple[str, float]:
    """``("supercritical (p > ...)" | "subcritical (p <= ...)", threshold)``.

    The threshold is ``p_{n,mu} = 1 + 2/(n - mu)`` for effective dissipation
    and ``(n+1)/(n-1)`` otherwise (``inf`` for ``n = 1``).

    Examples
    --------
    >>> exponent_verdict(derive_params(2, math.sqrt(3) / 2, 4))[0]
    'supercritical (p > p_{2,1}=3)'
    >>> exponent_verdict(derive_params(3, 2.0, 2.5))[0]
    'supercritical (p > 2)'
    """
    if params.n == 1 and not (params.regime is Regime.DISSIPATION and params.mu >= 1 - _MU_TOL):
        return "subcritical (no finite threshold for n = 1)", math.inf
    thr = _threshold(params)
    if params.regime is Regime.DISSIPATION and params.mu >= 1 - _MU_TOL:
        label = f"p_{{{params.n},{_fmt(params.mu)}}}={_fmt(thr)}"
    else:
        label = _fmt(thr)
    if params.p > thr + BOUNDARY_RTOL * max(1.0, params.p):
        return f"supercritical (p > {label})", thr
    return f"subcritical (p <= {label})", thr


def _fmt(x: float) -> str:
    r = round(x)
    return str(int(r)) if abs(x - r) < 1e-9 else f"{x:.6g}"


# ---------------------------------------------------------------------------
# decay rates

SOLUTION = "solution"
DERIVATIVE = "derivative"
G_IN_H_GAMMA_MINUS_1 = "g_in_Hgamma_minus_1"
G_IN_H_GAMMA = "g_in_Hgamma"


def theoretical_rate(
    params: ModelParams, gamma: float, channel: str = SOLUTION, data_class: str = G_IN_H_GAMMA_MINUS_1
) -> tuple[float, bool]:
    """Exponential rate of the linear a priori estimate and its log flag.

    ``channel`` is ``"solution"`` (``||phi||_{H^gamma}``) or ``"derivative"``
    (``||phi_t||_{H^{gamma-1}}``). The flag marks a ``(1 + t)`` factor.
    The extra decay of the ``g`` contribution for ``mu in (0, 1)`` and
    ``g in H^gamma`` is reported by :func:`g_contribution_rate`; the bound as
    a whole keeps the rate of the ``f`` contribution.

    Examples
    --------
    >>> theoretical_rate(derive_params(2, 1.0, 3), 1.0)
    (-0.5, True)
    """
    if channel not in (SOLUTION, DERIVATIVE):
        raise ValueError(f"unknown channel {channel!r}")
    if data_class not in (G_IN_H_GAMMA_MINUS_1, G_IN_H_GAMMA):
        raise ValueError(f"unknown data class {data_class!r}")
    if not gamma > 0.5:
        raise HypothesisViolation(f"decay estimates need gamma > 1/2, got {gamma}")
    if channel == DERIVATIVE and gamma < 1:
        raise HypothesisViolation("the derivative channel needs gamma >= 1")
    n = params.n
    base = -(n - 1) / 2.0
    if params.regime is Regime.DISSIPATION:
        if params.mu >= 1 - _MU_TOL:
            return (-n + params.mu) / 2.0, False
        return base, False
    if params.regime is Regime.MASS:
        return base, False
    return base, True


def g_contribution_rate(params: ModelParams, gamma: float, data_class: str = G_IN_H_GAMMA) -> float:
    """Rate of the ``g`` part of the solution-channel bound."""
    rate, _ = theoretical_rate(params, gamma, SOLUTION, data_class)
    if data_class == G_IN_H_GAMMA and params.regime is Regime.DISSIPATION and params.mu < 1 - _MU_TOL:
        return rate - (1.0 - params.mu) / 2.0
    return rate


@dataclass
class DecayReport:
    """Least-squares exponential rate of a norm time series."""

    times: list[float]
    norms: list[float]
    fitted_rate: float
    theoretical_rate: float
    log_correction: bool
    fit_window: tuple[float, float]
    residual: float
    intercept: float = 0.0
    channel: str = ""

    def passes(self, tol: float = 0.05) -> bool:
        return bool(abs(self.fitted_rate - self.theoretical_rate) <= tol)

    def fitted_curve(self) -> np.ndarray:
        """``log`` of the fitted norm model at every sample time."""
        t = np.asarray(self.times)
        out = self.intercept + self.fitted_rate * t
        if self.log_correction:
            out = out + np.log1p(t)
        return out

    def to_json(self) -> dict:
        return asdict(self)

    def write_csv(self, path) -> None:
        """Columns ``t, log_norm, fit`` for plotting."""
        fit = self.fitted_curve()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "log_norm", "fit"])
            for t, v, f in zip(self.times, self.norms, fit):
                w.writerow([repr(float(t)), repr(float(np.log(v))) if v > 0 else "nan", repr(float(f))])


def fit_decay_rate(
    times,
    norms,
    window: tuple[float, float] | None = None,
    log_correction: bool = False,
    theoretical: float = math.nan,
    channel: str = "",
    min_samples: int = 10,
) -> DecayReport:
    """Slope of ``log(norm)`` (or ``log(norm / (1 + t))``) against ``t``.

    The default window is ``[0.4 t_end, t_end]``.

    Raises
    ------
    InsufficientSamplesError
        Fewer than ``min_samples`` points fall in the window.
    NonPositiveNormError
        A norm inside the window is not positive.

    Examples
    --------
    >>> t = np.linspace(0, 10, 101)
    >>> round(fit_decay_rate(t, np.exp(-0.75 * t)).fitted_rate, 12)
    -0.75
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(norms, dtype=float)
    if t.shape != y.shape:
        raise ValueError("times and norms must have equal length")
    if window is None:
        window = (0.4 * t.max(), t.max())
    lo, hi = window
    if not (t.min() <= lo < hi <= t.max() + 1e-12):
        raise ValueError(f"window {window} is not inside [{t.min()}, {t.max()}]")
    sel = (t >= lo - 1e-12) & (t <= hi + 1e-12)
    if sel.sum() < min_samples:
        raise InsufficientSamplesError(f"{int(sel.sum())} samples in window, need {min_samples}")
    ts, ys = t[sel], y[sel]
    if np.any(~(ys > 0)):
        raise NonPositiveNormError("norms in the fit window must be positive")
    target = np.log(ys)
    if log_correction:
        target = target - np.log1p(ts)
    slope, intercept = np.polyfit(ts, target, 1)
    resid = float(np.sqrt(np.mean((target - (slope * ts + intercept)) ** 2)))
    return DecayReport(
        t.tolist(), y.tolist(), float(slope), float(theoretical), bool(log_correction),
        (float(lo), float(hi)), resid, float(intercept), channel,
    )


# ---------------------------------------------------------------------------
# landscape at mu = 1


@dataclass(frozen=True)
class Interval:
    """Exact interval of exponents; ``hi=None`` means unbounded."""

    lo: Fraction
    hi: Fraction | None
    lo_closed: bool = False
    hi_closed: bool = False

    @property
    def empty(self) -> bool:
        if self.hi is None:
            return False
        if self.hi < self.lo:
            return True
        return self.hi == self.lo and not (self.lo_closed and self.hi_closed)

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        if self.hi is None:
            return f"{left}{self.lo}, inf)"
        return f"{left}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"

    def contains(self, p) -> bool:
        p = Fraction(p)
        above = p >= self.lo if self.lo_closed else p > self.lo
        if self.hi is None:
            return above
        below = p <= self.hi if self.hi_closed else p < self.hi
        return above and below


def _union(intervals: list[Interval]) -> list[Interval]:
    items = sorted((iv for iv in intervals if not iv.empty), key=lambda iv: (iv.lo, not iv.lo_closed))
    out: list[Interval] = []
    for iv in items:
        if out:
            last = out[-1]
            touches = last.hi is None or iv.lo < last.hi or (iv.lo == last.hi and (iv.lo_closed or last.hi_closed))
            if touches:
                if last.hi is None or iv.hi is None:
                    hi, closed = None, False
                elif iv.hi > last.hi:
                    hi, closed = iv.hi, iv.hi_closed
                elif iv.hi == last.hi:
                    hi, closed = last.hi, last.hi_closed or iv.hi_closed
                else:
                    hi, closed = last.hi, last.hi_closed
                out[-1] = Interval(last.lo, hi, last.lo_closed, closed)
                continue
        out.append(iv)
    return out


@dataclass(frozen=True)
class LandscapeRow:
    interval: Interval
    theorem_id: str
    requirement: str

    def to_json(self) -> dict:
        return {"interval": str(self.interval), "theorem_id": self.theorem_id, "requirement": self.requirement}


@dataclass(frozen=True)
class Landscape:
    n: int
    rows: tuple[LandscapeRow, ...]
    coverage: tuple[Interval, ...]
    gaps: tuple[Interval, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mu": 1,
            "rows": [r.to_json() for r in self.rows],
            "coverage": [str(c) for c in self.coverage],
            "gaps": [str(g) for g in self.gaps],
        }

    def to_text(self) -> str:
        width = max([len(str(r.interval)) for r in self.rows] + [8])
        tid = max([len(r.theorem_id) for r in self.rows] + [7])
        lines = [f"{'interval':<{width}}  {'theorem':<{tid}}  requirement"]
        for r in self.rows:
            lines.append(f"{str(r.interval):<{width}}  {r.theorem_id:<{tid}}  {r.requirement}")
        lines.append("coverage: " + " U ".join(str(c) for c in self.coverage))
        lines.append("gaps: " + (" U ".join(str(g) for g in self.gaps) if self.gaps else "none"))
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def exponent_landscape(n: int) -> Landscape:
    """Union of admissible ``p`` over the effective-dissipation results at ``mu = 1``.

    Each result is swept over its regularity parameter in exact rational
    arithmetic. Gaps are the holes between the lowest covered exponent and
    infinity.

    Examples
    --------
    >>> [str(g) for g in exponent_landscape(5).gaps]
    ['(5/3, 2]']
    """
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    n = int(n)
    F = Fraction
    crit = F(n + 1, n - 1)
    half = F(n, 2)
    rows: list[LandscapeRow] = []

    def row(iv, tid, req):
        if not iv.empty:
            rows.append(LandscapeRow(iv, tid, req))

    row(Interval(crit, F(n, n - 2) if n >= 3 else None, False, n >= 3), "energy_effective", "gamma = 1")
    # lower 1 + 2 gamma/(n-1) and upper n/(n - 2 gamma) both increase with gamma
    row(Interval(F(n, n - 1), F(n, n - 2) if n >= 3 else None, False, False), "sobolev_effective", "gamma in (1/2, 1)")
    if n >= 3:
        k = 2
        while k - 1 < half:
            lo = max(crit, F(k))
            top = min(F(k), half)
            if top == half:
                row(Interval(lo, None), "higher_effective", f"sigma in ({k - 1}, {top})")
            else:
                row(Interval(lo, 1 + F(2) / (n - 2 * top), False, True), "higher_effective", f"sigma in ({k - 1}, {k}]")
            k += 1
        ceil_half = -(-n // 2)
        row(Interval(max(crit, F(ceil_half)), None), "higher_effective_large_sigma", f"sigma >= {half}")
    row(Interval(max(crit, half, F(2)), None), "embedded_effective", f"sigma in ({half}, p)")
    row(Interval(half + 1, None), "embedded_effective_sharp", f"sigma in ({half}, p - 1)")
    coverage = _union([r.interval for r in rows])
    gaps = []
    for a, b in zip(coverage, coverage[1:]):
        gaps.append(Interval(a.hi, b.lo, not a.hi_closed, not b.lo_closed))
    return Landscape(n, tuple(rows), tuple(coverage), tuple(g for g in gaps if not g.empty))
