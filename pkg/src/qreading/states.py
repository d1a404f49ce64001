"""Squeezed coherent probe states ``D(alpha) S(xi)|0>`` and their Wigner functions.

A state is stored as ``alpha = a * exp(i*phi)`` and ``xi = r * exp(i*theta)``
with ``a, r >= 0`` and both phases reduced to (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DomainError

__all__ = [
    "reduce_angle",
    "SqueezedCoherentState",
    "energy",
    "apply_phase_shift",
    "wigner",
    "wigner_grid",
]

_TWO_PI = 2.0 * math.pi


def reduce_angle(x: float) -> float:
    """Map an angle into (-pi, pi]."""
    y = math.remainder(x, _TWO_PI)
    return math.pi if y == -math.pi else y


@dataclass(frozen=True)
class SqueezedCoherentState:
    a: float = 0.0
    phi: float = 0.0
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        for name in ("a", "phi", "r", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.a < 0.0:
            raise DomainError(f"displacement magnitude a must be >= 0, got {self.a}")
        if self.r < 0.0:
            raise DomainError(f"squeezing magnitude r must be >= 0, got {self.r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "phi", reduce_angle(float(self.phi)))
        object.__setattr__(self, "theta", reduce_angle(float(self.theta)))

    @property
    def alpha(self) -> complex:
        return self.a * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def xi(self) -> complex:
        return self.r * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def energy(self) -> float:
        return energy(self)


def energy(s: SqueezedCoherentState) -> float:
    """Mean photon number ``a^2 + sinh(r)^2``."""
    return s.a * s.a + math.sinh(s.r) ** 2


def apply_phase_shift(s: SqueezedCoherentState, delta: float) -> SqueezedCoherentState:
    """Output of the phase shifter ``exp(i delta a^dag a)``: alpha -> e^{i delta} alpha, xi -> e^{2 i delta} xi."""
    return replace(s, phi=s.phi + delta, theta=s.theta + 2.0 * delta)


def _printed_transform(s, x, p):
    c = math.cos(s.theta / 2.0)
    sn = math.sin(s.theta / 2.0)
    xp = math.exp(-s.r) * c * x + sn * p - s.a * math.cos(s.phi)
    pp = -sn * x + math.exp(s.r) * c * p - s.a * math.sin(s.phi)
    return xp, pp


def _marginal_transform(s, x, p):
    # Inverse of the covariance whose projections reproduce the homodyne
    # widths exp(-2r)cos^2(psi-theta/2) + exp(2r)sin^2(psi-theta/2).
    dx = x - s.a * math.cos(s.phi)
    dp = p - s.a * math.sin(s.phi)
    c = math.cos(s.theta / 2.0)
    sn = math.sin(s.theta / 2.0)
    xp = math.exp(s.r) * (c * dx + sn * dp)
    pp = math.exp(-s.r) * (-sn * dx + c * dp)
    return xp, pp


def wigner(s: SqueezedCoherentState, x, p, convention: str = "printed"):
    """Wigner function ``exp(-(x'^2 + p'^2)) / pi`` of a squeezed coherent state.

    ``convention="printed"`` applies the affine map

        x' =  e^{-r} cos(theta/2) x + sin(theta/2) p - a cos(phi)
        p' = -sin(theta/2) x + e^{r} cos(theta/2) p - a sin(phi)

    term by term. That map has unit determinant, so the function is normalized,
    but it is not covariant under phase shifts and its marginals do not
    reproduce the homodyne statistics in :mod:`qreading.homodyne`.

    ``convention="marginal"`` is the Gaussian centred at (a cos phi, a sin phi)
    whose projection on the direction (cos psi, sin psi) has exactly the mean
    and width of ``homodyne.outcome_pdf`` at unit efficiency.
    """
    if convention == "printed":
        xp, pp = _printed_transform(s, np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    elif convention == "marginal":
        xp, pp = _marginal_transform(s, np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    else:
        raise DomainError(f"unknown Wigner convention {convention!r}")
    w = np.exp(-(xp * xp + pp * pp)) / math.pi
    return float(w) if np.ndim(w) == 0 else w


def wigner_grid(
    s: SqueezedCoherentState,
    x_range: tuple[float, float],
    p_range: tuple[float, float],
    n: int,
    convention: str = "printed",
):
    """Sample the Wigner function on an n-by-n grid.

    Returns ``(xs, ps, values)`` with ``values[i, j] = wigner(s, xs[i], ps[j])``.
    """
    if n < 2:
        raise DomainError(f"grid needs n >= 2, got {n}")
    xs = np.linspace(x_range[0], x_range[1], n)
    ps = np.linspace(p_range[0], p_range[1], n)
    xg, pg = np.meshgrid(xs, ps, indexing="ij")
    return xs, ps, wigner(s, xg, pg, convention=convention)
