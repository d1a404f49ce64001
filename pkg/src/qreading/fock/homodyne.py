"""Homodyne statistics computed directly from Fock-space density matrices.

The quadrature ``X(psi)`` is measured by rotating the state with
``exp(-i psi N)`` and projecting onto position eigenstates, whose number-basis
wavefunctions are the Hermite functions normalised so that the vacuum gives
``exp(-x^2) / sqrt(pi)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError, OracleError
from ..homodyne import HomodyneSetup, loss_width, outcome_pdf
from ..states import SqueezedCoherentState
from .density import DensityMatrix
from .operators import squeezed_coherent_vector

__all__ = [
    "NORMALIZATION_TOL",
    "KAPPA_TOL",
    "hermite_functions",
    "homodyne_pdf_fock",
    "default_grid",
    "MomentFit",
    "moment_fit",
    "ScaleFit",
    "mean_scale_fit",
]

NORMALIZATION_TOL = 1e-8
KAPPA_TOL = 1e-6


def hermite_functions(n: int, x) -> np.ndarray:
    """Rows ``phi_0 .. phi_{n-1}`` evaluated at ``x``.

    Upward three-term recurrence on the normalised functions, so nothing
    overflows for large ``n``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n,) + x.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n - 1):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def _ideal_pdf(rot: np.ndarray, x: np.ndarray) -> np.ndarray:
    h = hermite_functions(rot.shape[0], x.ravel())
    vals = np.einsum("mk,mn,nk->k", h, rot, h, optimize=True).real
    return vals.reshape(x.shape)


def homodyne_pdf_fock(rho: DensityMatrix, psi: float, x_grid, eta: float = 1.0) -> np.ndarray:
    """Outcome density of quadrature ``psi`` on a single-mode state.

    For ``eta < 1`` the ideal density is convolved with a Gaussian of
    exponent width ``(1 - eta) / (4 eta)``. The convolution uses the
    trapezoid rule on a uniform grid, which converges geometrically for
    smooth integrands on the line; the step is set by the narrower of the
    kernel and the finest oscillation the truncated basis can represent.

    Warns when the trapezoid integral over ``x_grid`` misses unit mass by
    more than ``NORMALIZATION_TOL`` (grid too narrow or truncation too small).
    """
    if rho.n_modes != 1:
        raise DomainError("homodyne_pdf_fock needs a single-mode state")
    x = np.asarray(x_grid, dtype=float)
    d = rho.dims[0]
    phase = np.exp(-1j * psi * np.arange(d))
    rot = phase[:, None] * rho.data * phase.conj()[None, :]
    if eta == 1.0:
        pdf = _ideal_pdf(rot, x)
    else:
        wl = loss_width(eta)
        scale = math.sqrt(wl)
        h = min(scale, math.pi / math.sqrt(2.0 * d + 1.0)) / 4.0
        half = math.ceil(6.5 * scale / h)
        y = h * np.arange(-half, half + 1)
        kernel = np.exp(-y * y / wl) / math.sqrt(math.pi * wl)
        shifted = _ideal_pdf(rot, x[..., None] - y)
        pdf = h * shifted @ kernel
    if x.ndim == 1 and len(x) > 2:
        mass = float(np.trapezoid(pdf, x))
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            warnings.warn(
                f"homodyne density integrates to {mass!r} on the grid; widen the grid or raise d",
                RuntimeWarning,
                stacklevel=2,
            )
    return pdf


def default_grid(half_width: float = 14.0, n: int = 1401) -> np.ndarray:
    return np.linspace(-half_width, half_width, n)


@dataclass(frozen=True)
class MomentFit:
    """Gaussian with the same first two moments, in exponent-width form."""

    mean: float
    width_sq: float
    l1_residual: float


def moment_fit(x, pdf) -> MomentFit:
    x = np.asarray(x, dtype=float)
    pdf = np.asarray(pdf, dtype=float)
    mass = np.trapezoid(pdf, x)
    mean = np.trapezoid(x * pdf, x) / mass
    var = np.trapezoid((x - mean) ** 2 * pdf, x) / mass
    width_sq = 2.0 * var
    fit = np.exp(-((x - mean) ** 2) / width_sq) / math.sqrt(math.pi * width_sq)
    return MomentFit(float(mean), float(width_sq), float(np.trapezoid(np.abs(pdf - fit), x)))


@dataclass(frozen=True)
class ScaleFit:
    """Outcome of comparing Fock-space homodyne densities with the Gaussian model.

    ``kappa`` is the average of the per-sample ratios of fitted mean to the
    model mean ``a cos(psi - phi)``; ``max_deviation`` is how far any single
    ratio strays from it. Width ratios compare fitted and model widths.
    """

    kappa: float
    max_deviation: float
    ratios: tuple[float, ...]
    width_ratios: tuple[float, ...]
    max_l1_residual: float

    @property
    def max_width_deviation(self) -> float:
        return max(abs(w - 1.0) for w in self.width_ratios)


def mean_scale_fit(samples, d: int = 40, eta: float = 1.0, grid=None) -> ScaleFit:
    """Fit the convention constant between oracle and model means.

    ``samples`` is a sequence of ``(SqueezedCoherentState, psi)`` pairs with
    ``a > 0`` and ``cos(psi - phi)`` bounded away from zero. Raises
    OracleError when the ratios disagree by more than ``KAPPA_TOL``.
    """
    x = default_grid() if grid is None else np.asarray(grid, dtype=float)
    ratios, widths, l1 = [], [], []
    for state, psi in samples:
        if not isinstance(state, SqueezedCoherentState):
            state = SqueezedCoherentState(*state)
        c = math.cos(psi - state.phi)
        if state.a <= 0.0 or abs(c) < 1e-3:
            raise DomainError("mean_scale_fit needs a > 0 and |cos(psi - phi)| >= 1e-3")
        vec = squeezed_coherent_vector(state.a, state.phi, state.r, state.theta, d)
        rho = DensityMatrix.from_vector(vec.amps / math.sqrt(vec.norm_sq))
        fit = moment_fit(x, homodyne_pdf_fock(rho, psi, x, eta))
        model = outcome_pdf(state, HomodyneSetup(psi, eta))
        ratios.append(fit.mean / model.x0)
        widths.append(fit.width_sq / model.width_sq)
        l1.append(fit.l1_residual)
    if not ratios:
        raise DomainError("mean_scale_fit needs at least one sample")
    kappa = math.fsum(ratios) / len(ratios)
    dev = max(abs(k - kappa) for k in ratios)
    report = ScaleFit(kappa, dev, tuple(ratios), tuple(widths), max(l1))
    if dev > KAPPA_TOL:
        raise OracleError(f"mean ratios disagree by {dev:.2e} (kappa {kappa!r})")
    return report
