"""Reading strategies for binary phase-shift keying.

Bit 0 is the identity and bit 1 a phase shifter of phase ``delta``. A probe
``|alpha, xi>`` passes the cell, then a homodyne detector of efficiency
``eta`` measures quadrature ``psi``; the outcome is classified by the
maximum-likelihood rule.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .exceptions import DomainError, UnsupportedPriorError
from .gauss_core import equal_width_error, error_probability, mle_error, mle_rule
from .homodyne import HomodyneSetup, loss_width, outcome_pdf
from .states import SqueezedCoherentState, apply_phase_shift, energy

__all__ = [
    "ReadingTask",
    "Method",
    "Strategy",
    "SearchConfig",
    "CurveRow",
    "REGIME_WARNING",
    "NOT_CONVERGED",
    "SQUEEZING_INFEASIBLE",
    "FEASIBLE_SQUEEZING",
    "REGIME_CHECK_BELOW",
    "error_for",
    "sql_strategy",
    "optimal_squeezing",
    "optimal_strategy",
    "numeric_optimal",
    "hybrid_bound",
    "tradeoff_curve",
]

REGIME_WARNING = "REGIME_WARNING"
NOT_CONVERGED = "NOT_CONVERGED"
SQUEEZING_INFEASIBLE = "SQUEEZING_INFEASIBLE"

# Largest squeezing parameter demonstrated experimentally (about 12.7 dB).
FEASIBLE_SQUEEZING = 1.5
ENERGY_SLACK = 1e-12
MEASURED_QUADRATURE = math.pi / 2
# The closed form is compared with a numeric search below this phase
# difference. Squeezed vacuum, which separates the hypotheses by variance
# alone, beats it at low energy up to roughly delta = 1.8.
REGIME_CHECK_BELOW = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class ReadingTask:
    """Phase difference, energy budget, overall efficiency and prior of bit 0."""

    delta: float
    energy: float
    eta: float = 1.0
    prior0: float = 0.5

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.delta, self.energy, self.eta, self.prior0)):
            raise DomainError("task parameters must be finite")
        if self.energy < 0.0:
            raise DomainError(f"energy budget must be >= 0, got {self.energy}")
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"efficiency must lie in (0, 1], got {self.eta}")
        if not 0.0 < self.prior0 < 1.0:
            raise DomainError(f"prior0 must lie in (0, 1), got {self.prior0}")
        if not 0.0 <= self.delta <= math.pi:
            reduced = abs(math.remainder(self.delta, 2.0 * math.pi))
            warnings.warn(
                f"phase difference {self.delta} reduced to {reduced} in [0, pi]",
                stacklevel=3,
            )
            object.__setattr__(self, "delta", reduced)


class Method(str, enum.Enum):
    SQL = "SQL"
    CLOSED_FORM = "CLOSED_FORM"
    NUMERIC = "NUMERIC"


@dataclass(frozen=True)
class Strategy:
    a: float
    phi: float
    r: float
    theta: float
    psi: float
    pe: float
    method: Method
    flags: frozenset = field(default_factory=frozenset)

    @property
    def probe(self) -> SqueezedCoherentState:
        return SqueezedCoherentState(self.a, self.phi, self.r, self.theta)

    @property
    def feasible(self) -> bool:
        return self.r <= FEASIBLE_SQUEEZING

    @property
    def energy(self) -> float:
        return self.a * self.a + math.sinh(self.r) ** 2

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "phi": self.phi,
            "r": self.r,
            "theta": self.theta,
            "psi": self.psi,
            "pe": self.pe,
            "sinh2_r": math.sinh(self.r) ** 2,
            "method": self.method.value,
            "feasible": self.feasible,
            "flags": sorted(self.flags),
        }


@dataclass(frozen=True)
class SearchConfig:
    n_r: int = 200
    n_theta: int = 200
    xtol: float = 1e-8
    max_iter: int = 4000


def _require_equal_priors(task: ReadingTask) -> None:
    if task.prior0 != 0.5:
        raise UnsupportedPriorError(
            f"closed-form strategies assume equal priors, got prior0={task.prior0}"
        )


def error_for(task: ReadingTask, probe: SqueezedCoherentState, psi: float) -> float:
    """Minimum error probability of ``probe`` measured along ``psi``.

    Handles unequal output widths through the general two-threshold rule.
    """
    if energy(probe) > task.energy + ENERGY_SLACK:
        raise DomainError(
            f"probe energy {energy(probe)} exceeds the budget {task.energy}"
        )
    setup = HomodyneSetup(psi, task.eta)
    p0 = outcome_pdf(probe, setup)
    p1 = outcome_pdf(apply_phase_shift(probe, task.delta), setup)
    return error_probability(p0, p1, task.prior0, mle_rule(p0, p1, task.prior0))


def _equal_width_pe(task, probe, psi):
    setup = HomodyneSetup(psi, task.eta)
    p0 = outcome_pdf(probe, setup)
    p1 = outcome_pdf(apply_phase_shift(probe, task.delta), setup)
    return equal_width_error(p0.x0, p1.x0, p0.width_sq)


def sql_strategy(task: ReadingTask) -> Strategy:
    """Best coherent probe with homodyne detection: a = sqrt(E), phi = -delta/2, psi = pi/2."""
    _require_equal_priors(task)
    probe = SqueezedCoherentState(math.sqrt(task.energy), -task.delta / 2.0, 0.0, 0.0)
    pe = _equal_width_pe(task, probe, MEASURED_QUADRATURE)
    return Strategy(probe.a, probe.phi, 0.0, 0.0, MEASURED_QUADRATURE, pe, Method.SQL)


def optimal_squeezing(delta: float, energy: float, eta: float) -> tuple[float, float]:
    """Closed-form optimal squeezing phase and magnitude ``(theta*, r*)``.

    ``theta* = -delta - pi * step(pi/2 - delta)`` with step(0) = 1. The
    magnitude is the unique stationary point of the separation-to-width ratio
    along the equal-width family. With ``c = cos(theta*) <= 0`` the textbook
    ratio ``(sqrt(Q) + c) / ((c + 1)(2E + 1) + n)`` is 0/0 at delta = pi and
    eta = 1, so it is rationalized to
    ``(2E + 1 + n - (2E + 1) c) / (sqrt(Q) - c)``.
    """
    theta = -delta - (math.pi if math.pi / 2 - delta >= 0.0 else 0.0)
    c = math.cos(theta)
    n = loss_width(eta)
    big = 2.0 * energy + 1.0
    q = (big + n) ** 2 - 4.0 * energy * (energy + 1.0) * c * c
    if q < 0.0:
        if q < -1e-12:
            raise DomainError(f"negative discriminant {q} in optimal squeezing")
        q = 0.0
    den = (c + 1.0) * big + n
    if abs(den) < 1e-14:
        r = math.asinh(energy / math.sqrt(big))
    elif c <= 0.0:
        r = 0.5 * math.log((big + n - big * c) / (math.sqrt(q) - c))
    else:
        r = 0.5 * math.log((math.sqrt(q) + c) / den)
    # rounding dust around the analytic zero at delta = pi/2
    if r < 1e-13:
        r = 0.0
    return theta, r


def optimal_strategy(
    task: ReadingTask,
    check_regime: bool = True,
    search: Optional[SearchConfig] = None,
) -> Strategy:
    """Closed-form optimal squeezed probe measured along psi = pi/2.

    At low energy the closed form can lose to other squeezing phases, for
    delta < pi/2 and also slightly above it. When ``check_regime`` is set and
    delta < ``REGIME_CHECK_BELOW``, the result is compared with
    :func:`numeric_optimal` and flagged ``REGIME_WARNING`` if beaten by more
    than a relative 1e-9.
    """
    _require_equal_priors(task)
    theta, r = optimal_squeezing(task.delta, task.energy, task.eta)
    a_sq = task.energy - math.sinh(r) ** 2
    if a_sq < 0.0:
        if a_sq < -ENERGY_SLACK:
            raise DomainError(f"squeezing energy exceeds the budget by {-a_sq}")
        a_sq = 0.0
    if r == 0.0:
        # squeezing phase carries no meaning without squeezing
        theta = 0.0
    probe = SqueezedCoherentState(math.sqrt(a_sq), -task.delta / 2.0, r, theta)
    pe = _equal_width_pe(task, probe, MEASURED_QUADRATURE)
    flags = set()
    if r > FEASIBLE_SQUEEZING:
        flags.add(SQUEEZING_INFEASIBLE)
    if check_regime and task.delta < REGIME_CHECK_BELOW and task.energy > 0.0:
        best = numeric_optimal(task, search or SearchConfig())
        if pe - best.pe > 1e-9 * pe:
            flags.add(REGIME_WARNING)
    return Strategy(
        probe.a, probe.phi, probe.r, probe.theta, MEASURED_QUADRATURE, pe,
        Method.CLOSED_FORM, frozenset(flags),
    )


def _grid_errors(task, rs, thetas):
    n = loss_width(task.eta)
    psi = MEASURED_QUADRATURE
    phi = -task.delta / 2.0
    r = rs[:, None]
    th = thetas[None, :]
    a = np.sqrt(np.maximum(task.energy - np.sinh(r) ** 2, 0.0))
    m0 = a * np.cos(psi - phi)
    m1 = a * np.cos(psi - phi - task.delta)
    e_minus, e_plus = np.exp(-2.0 * r), np.exp(2.0 * r)
    u0 = psi - 0.5 * th
    u1 = u0 - task.delta
    w0 = e_minus * np.cos(u0) ** 2 + e_plus * np.sin(u0) ** 2 + n
    w1 = e_minus * np.cos(u1) ** 2 + e_plus * np.sin(u1) ** 2 + n
    return mle_error(m0, w0, m1, w1, task.prior0)


def numeric_optimal(task: ReadingTask, search: SearchConfig = SearchConfig()) -> Strategy:
    """Minimize the error over (r, theta) by grid scan plus Nelder-Mead refinement.

    The displacement phase and quadrature stay at -delta/2 and pi/2 and the
    budget is saturated, a = sqrt(E - sinh^2 r); only phase differences enter
    the outcome statistics, so these constraints lose nothing.
    """
    _require_equal_priors(task)
    psi = MEASURED_QUADRATURE
    phi = -task.delta / 2.0
    r_max = math.asinh(math.sqrt(task.energy))

    def probe_at(r, theta):
        r = min(max(r, 0.0), r_max)
        a = math.sqrt(max(task.energy - math.sinh(r) ** 2, 0.0))
        return SqueezedCoherentState(a, phi, r, theta)

    if r_max == 0.0:
        probe = probe_at(0.0, 0.0)
        pe = error_for(task, probe, psi)
        return Strategy(probe.a, probe.phi, 0.0, 0.0, psi, pe, Method.NUMERIC)

    rs = np.linspace(0.0, r_max, search.n_r)
    thetas = np.linspace(-math.pi, math.pi, search.n_theta + 1)[1:]
    grid = _grid_errors(task, rs, thetas)
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    start = np.array([rs[i], thetas[j]])
    dr = rs[1] - rs[0]
    dth = thetas[1] - thetas[0]
    step_r = dr if start[0] + dr <= r_max else -dr
    simplex = np.array([start, start + [step_r, 0.0], start + [0.0, dth]])

    def objective(x):
        pe = error_for(task, probe_at(x[0], x[1]), psi)
        return math.log(max(pe, 1e-320))

    f_start = objective(start)
    res = minimize(
        objective,
        start,
        method="Nelder-Mead",
        bounds=[(0.0, r_max), (None, None)],
        options={
            "xatol": search.xtol,
            # a few ulps of log(pe): tighter is below the rounding noise
            "fatol": 1e-13 * max(1.0, abs(f_start)),
            "maxiter": search.max_iter,
            "maxfev": 2 * search.max_iter,
            "initial_simplex": simplex,
        },
    )
    best = res.x if res.fun <= f_start else start
    probe = probe_at(float(best[0]), float(best[1]))
    pe = error_for(task, probe, psi)
    flags = set()
    if not res.success:
        flags.add(NOT_CONVERGED)
    if probe.r > FEASIBLE_SQUEEZING:
        flags.add(SQUEEZING_INFEASIBLE)
    return Strategy(
        probe.a, probe.phi, probe.r, probe.theta, psi, pe, Method.NUMERIC, frozenset(flags)
    )


def hybrid_bound(energy: float) -> float:
    """Error of a Gaussian probe with unrestricted measurement at delta = pi, eta = 1.

    ``0.5 * (1 - sqrt(1 - exp(-4E(E+1))))``, rewritten to avoid cancellation.
    """
    if energy < 0.0:
        raise DomainError(f"energy must be >= 0, got {energy}")
    eps = math.exp(-4.0 * energy * (energy + 1.0))
    return 0.5 * eps / (1.0 + math.sqrt(1.0 - eps))


@dataclass(frozen=True)
class CurveRow:
    energy: float
    pe_sql: float
    pe_opt: float
    r_opt: float
    sinh2_r_opt: float
    pe_hybrid: Optional[float] = None
    flags: frozenset = field(default_factory=frozenset)


def tradeoff_curve(
    delta: float,
    eta: float,
    e_grid: Sequence[float],
    check_regime: bool = False,
) -> list[CurveRow]:
    """Energy versus error for the coherent and optimal squeezed strategies.

    ``pe_hybrid`` is filled only for delta = pi and eta = 1, where the
    unrestricted-measurement value is known. Points that fail validation come
    back as NaN rows with an ``ERROR`` flag instead of aborting the curve.
    """
    grid = [float(e) for e in e_grid]
    if not grid:
        raise DomainError("energy grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("energy grid must be strictly ascending")
    rows = []
    for e in grid:
        try:
            task = ReadingTask(delta, e, eta)
            sql = sql_strategy(task)
            opt = optimal_strategy(task, check_regime=check_regime)
        except DomainError as exc:
            nan = math.nan
            rows.append(CurveRow(e, nan, nan, nan, nan, None, frozenset({f"ERROR: {exc}"})))
            continue
        hybrid = hybrid_bound(e) if task.delta == math.pi and task.eta == 1.0 else None
        rows.append(
            CurveRow(e, sql.pe, opt.pe, opt.r, math.sinh(opt.r) ** 2, hybrid, opt.flags)
        )
    return rows
