"""Brute-force checks of the loss-channel identities used by the reading model.

Every check returns a distance that should be zero up to rounding: the
channels here conserve total photon number, so truncated matrices act
exactly on every sector the probes populate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError, TruncationError
from .density import DensityMatrix, apply_unitary, loss_channel, tensor, trace_distance
from .operators import (
    beamsplitter,
    number_sectors,
    phase_shifter,
    sector_beamsplitter,
    squeezed_coherent_vector,
)

__all__ = [
    "PhaseShifter",
    "BeamSplitter",
    "random_probe",
    "random_probes",
    "verify_composition",
    "verify_commutation",
    "decomposition_parameters",
    "verify_bs_decomposition",
]


@dataclass(frozen=True)
class PhaseShifter:
    """Single-mode ``exp(i phi N)``."""

    phi: float

    n_modes = 1

    def matrix(self, d: int) -> np.ndarray:
        return phase_shifter(self.phi, d)


@dataclass(frozen=True)
class BeamSplitter:
    """Two-mode beamsplitter with the given transmissivity."""

    transmittivity: float

    n_modes = 2

    def __post_init__(self):
        if not 0.0 <= self.transmittivity <= 1.0:
            raise DomainError(f"transmittivity must lie in [0, 1], got {self.transmittivity}")

    def matrix(self, d: int) -> np.ndarray:
        return beamsplitter(self.transmittivity, (d, d))


def random_probe(rng: np.random.Generator, d: int, max_energy: float = 1.0, max_r: float = 0.25) -> DensityMatrix:
    """Single-mode squeezed coherent state with energy at most ``max_energy``.

    Draws are rejected until the truncation tail is below ``TAIL_TOL``; the
    kept amplitudes are renormalised.
    """
    for _ in range(1000):
        r = rng.uniform(0.0, max_r)
        room = max_energy - math.sinh(r) ** 2
        if room < 0.0:
            continue
        a = math.sqrt(room) * math.sqrt(rng.uniform())
        phi, theta = rng.uniform(-math.pi, math.pi, size=2)
        try:
            vec = squeezed_coherent_vector(a, phi, r, theta, d)
        except TruncationError:
            continue
        return DensityMatrix.from_vector(vec.amps / math.sqrt(vec.norm_sq))
    raise DomainError(f"no probe with energy <= {max_energy} fits in d={d}")


def random_probes(n: int, d: int, n_modes: int = 1, max_energy: float = 1.0, seed: int = 0) -> list[DensityMatrix]:
    """Seeded product probes; ``max_energy`` bounds each mode separately."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        modes = [random_probe(rng, d, max_energy) for _ in range(n_modes)]
        out.append(tensor(*modes) if n_modes > 1 else modes[0])
    return out


def verify_composition(alpha: float, beta: float, d: int = 16, probes=None) -> float:
    """Largest trace distance between two losses in a row and one combined loss."""
    probes = random_probes(3, d) if probes is None else probes
    worst = 0.0
    for rho in probes:
        twice = loss_channel(loss_channel(rho, 0, beta), 0, alpha)
        once = loss_channel(rho, 0, alpha * beta)
        worst = max(worst, trace_distance(twice, once))
    return worst


def _pad(rho: DensityMatrix, dim: int) -> DensityMatrix:
    """Embed each mode of ``rho`` in a ``dim``-level space."""
    if all(n == dim for n in rho.dims):
        return rho
    if any(n > dim for n in rho.dims):
        raise DomainError(f"cannot pad dims {rho.dims} down to {dim}")
    m = rho.n_modes
    t = np.zeros((dim,) * (2 * m), dtype=complex)
    t[tuple(slice(0, n) for n in rho.dims * 2)] = rho.data.reshape(rho.dims * 2)
    return DensityMatrix.unchecked((dim,) * m, t.reshape(dim**m, dim**m))


def verify_commutation(spec, eta, d: int = 12, probes=None) -> float:
    """Largest trace distance between ``U`` after loss and loss after ``U``.

    ``d`` is the per-mode truncation of the probes; the comparison itself runs
    with enough extra levels that the truncated unitary is exact on them.

    ``eta`` is a single efficiency applied to every mode, or one value per
    mode; unequal values are how the need for equal loss is demonstrated.
    """
    n = spec.n_modes
    etas = tuple(float(e) for e in eta) if np.ndim(eta) else (float(eta),) * n
    if len(etas) != n:
        raise DomainError(f"need {n} efficiencies, got {len(etas)}")
    probes = random_probes(3, d, n_modes=n) if probes is None else probes
    # room for every photon of a product probe to land in one mode, so the
    # truncated unitary is exact on everything the probes populate
    big = n * (d - 1) + 1
    probes = [_pad(rho, big) for rho in probes]
    u = spec.matrix(big)
    modes = list(range(n))

    def lossy(rho):
        for k, e in enumerate(etas):
            rho = loss_channel(rho, k, e)
        return rho

    worst = 0.0
    for rho in probes:
        first = apply_unitary(lossy(rho), u, modes)
        second = lossy(apply_unitary(rho, u, modes))
        worst = max(worst, trace_distance(first, second))
    return worst


def decomposition_parameters(alpha: float, beta: float) -> tuple[float, float]:
    """``gamma = (1 - alpha) / (1 - alpha beta)`` and ``delta = gamma beta``."""
    if alpha * beta == 1.0:
        raise DomainError("alpha * beta = 1 leaves gamma undefined")
    gamma = (1.0 - alpha) / (1.0 - alpha * beta)
    return gamma, gamma * beta


def verify_bs_decomposition(alpha: float, beta: float, d: int = 12) -> float:
    """Max-norm gap in ``B02(beta) B01(alpha) = B12(gamma)^dag B01(alpha beta) B12(delta)``.

    Both sides are built on three modes of dimension ``d`` and compared block
    by block on every total-number sector up to ``d // 2`` photons.
    """
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {v}")
    if alpha == 1.0 and beta == 1.0:
        return 0.0
    gamma, delta = decomposition_parameters(alpha, beta)
    dims = (d, d, d)
    sectors = number_sectors(dims, d // 2)
    b02 = sector_beamsplitter(beta, dims, 0, 2, sectors)
    b01 = sector_beamsplitter(alpha, dims, 0, 1, sectors)
    c12 = sector_beamsplitter(gamma, dims, 1, 2, sectors)
    b01e = sector_beamsplitter(alpha * beta, dims, 0, 1, sectors)
    d12 = sector_beamsplitter(delta, dims, 1, 2, sectors)
    worst = 0.0
    for k in range(len(sectors)):
        left = b02[k] @ b01[k]
        right = c12[k].conj().T @ b01e[k] @ d12[k]
        worst = max(worst, float(np.max(np.abs(left - right))))
    return worst
