"""Lossy homodyne statistics for squeezed coherent probes."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError
from .gauss_core import GaussianPdf
from .states import SqueezedCoherentState, reduce_angle

__all__ = ["HomodyneSetup", "loss_width", "loss_convolution_width", "outcome_pdf"]


@dataclass(frozen=True)
class HomodyneSetup:
    """Quadrature angle ``psi`` measured with detector efficiency ``eta``."""

    psi: float = math.pi / 2
    eta: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.psi):
            raise DomainError("psi must be finite")
        if not 0.0 < self.eta <= 1.0:
            raise DomainError(f"efficiency must lie in (0, 1], got {self.eta}")
        object.__setattr__(self, "psi", reduce_angle(float(self.psi)))


def loss_width(eta: float) -> float:
    """Width added by an inefficient detector, (1 - eta) / (4 eta)."""
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"efficiency must lie in (0, 1], got {eta}")
    return (1.0 - eta) / (4.0 * eta)


def loss_convolution_width(width_sq_ideal: float, eta: float) -> float:
    """Width after convolving an ideal outcome pdf with the detector noise."""
    if width_sq_ideal <= 0.0:
        raise DomainError(f"width_sq must be positive, got {width_sq_ideal}")
    return width_sq_ideal + loss_width(eta)


def outcome_pdf(s: SqueezedCoherentState, m: HomodyneSetup) -> GaussianPdf:
    """Gaussian outcome distribution of quadrature ``m.psi`` on state ``s``.

    Mean ``a cos(psi - phi)``; width
    ``e^{-2r} cos^2(psi - theta/2) + e^{2r} sin^2(psi - theta/2) + (1-eta)/(4 eta)``.
    """
    x0 = s.a * math.cos(m.psi - s.phi)
    u = m.psi - 0.5 * s.theta
    ideal = math.exp(-2.0 * s.r) * math.cos(u) ** 2 + math.exp(2.0 * s.r) * math.sin(u) ** 2
    return GaussianPdf(x0, loss_convolution_width(ideal, m.eta))
