"""Dense operators and pure states on a truncated Fock space.

Operators are plain complex ``ndarray`` matrices in the number basis
``|0>, ..., |d-1>``; multimode operators use row-major (mode 0 slowest)
ordering, matching ``np.kron``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..exceptions import DomainError, TruncationError

__all__ = [
    "TAIL_TOL",
    "GUARD_LEVELS",
    "default_dim",
    "annihilation",
    "creation",
    "number_operator",
    "matrix_exp",
    "phase_shifter",
    "displacement",
    "squeezing",
    "FockVector",
    "squeezed_coherent_vector",
    "beamsplitter_generator",
    "beamsplitter",
    "number_sectors",
    "sector_generator",
    "sector_beamsplitter",
]

TAIL_TOL = 1e-10
GUARD_LEVELS = 5


def default_dim(energy: float) -> int:
    """Truncation sized for a state of the given mean photon number."""
    return max(20, math.ceil(8.0 * (energy + 1.0))) + GUARD_LEVELS


def annihilation(d: int) -> np.ndarray:
    """Lowering operator with ``a[n-1, n] = sqrt(n)``."""
    if d < 2:
        raise DomainError(f"Fock dimension must be >= 2, got {d}")
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)


def creation(d: int) -> np.ndarray:
    return annihilation(d).conj().T


def number_operator(d: int) -> np.ndarray:
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def matrix_exp(g: np.ndarray) -> np.ndarray:
    """Matrix exponential (Pade scaling and squaring)."""
    g = np.asarray(g)
    if not np.all(np.isfinite(g)):
        raise DomainError("matrix exponential of a non-finite matrix")
    out = expm(g)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("matrix exponential overflowed")
    return out


def phase_shifter(phi: float, d: int) -> np.ndarray:
    """``exp(i phi a^dag a)``."""
    return matrix_exp(1j * phi * number_operator(d))


def displacement(alpha: complex, d: int) -> np.ndarray:
    a = annihilation(d)
    return matrix_exp(alpha * a.conj().T - np.conj(alpha) * a)


def squeezing(xi: complex, d: int) -> np.ndarray:
    a = annihilation(d)
    ad = a.conj().T
    return matrix_exp(0.5 * (np.conj(xi) * a @ a - xi * ad @ ad))


@dataclass(frozen=True)
class FockVector:
    """Truncated state vector; ``tail_mass`` is the norm lost past ``dim``."""

    amps: np.ndarray
    tail_mass: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


def squeezed_coherent_vector(
    a: float,
    phi: float,
    r: float,
    theta: float,
    d: int,
    tail_tol: float = TAIL_TOL,
) -> FockVector:
    """``D(alpha) S(xi)|0>`` truncated to ``d`` levels.

    The exponentials are taken on a space twice as large and the result cut
    down, so that the boundary of the working space never touches the kept
    amplitudes. Raises TruncationError if the discarded mass reaches
    ``tail_tol``.
    """
    if d < 2:
        raise DomainError(f"Fock dimension must be >= 2, got {d}")
    work = 2 * d + GUARD_LEVELS
    alpha = a * complex(math.cos(phi), math.sin(phi))
    xi = r * complex(math.cos(theta), math.sin(theta))
    vac = np.zeros(work, dtype=complex)
    vac[0] = 1.0
    full = displacement(alpha, work) @ (squeezing(xi, work) @ vac)
    probs = np.abs(full) ** 2
    tail = float(probs[d:].sum())
    if tail >= tail_tol:
        # smallest cut leaving less than tail_tol behind, plus guard levels
        tails = np.cumsum(probs[::-1])[::-1]
        ok = np.nonzero(tails < tail_tol)[0]
        suggestion = int(ok[0]) + GUARD_LEVELS if len(ok) else 2 * work
        raise TruncationError(
            f"tail mass {tail:.2e} beyond d={d} exceeds {tail_tol:.0e}; try d >= {suggestion}",
            suggested_dim=suggestion,
        )
    return FockVector(full[:d].copy(), tail)


def beamsplitter_generator(dims: tuple[int, ...], i: int, j: int) -> np.ndarray:
    """``a_i^dag a_j - a_i a_j^dag`` on the tensor product of ``dims``."""
    if i == j:
        raise DomainError("beamsplitter needs two distinct modes")
    ops = []
    for which in (i, j):
        factors = [np.eye(n, dtype=complex) for n in dims]
        factors[which] = annihilation(dims[which])
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    ai, aj = ops
    return ai.conj().T @ aj - ai @ aj.conj().T


def _transmission_angle(eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"transmittivity must lie in [0, 1], got {eta}")
    return math.acos(math.sqrt(eta))


def beamsplitter(eta: float, dims: tuple[int, int] = (2, 2)) -> np.ndarray:
    """``exp[t (a^dag b - a b^dag)]`` with ``cos(t)^2 = eta`` on two modes.

    The truncated generator conserves total photon number, so every sector
    with fewer than ``min(dims)`` photons is reproduced exactly.
    """
    return matrix_exp(_transmission_angle(eta) * beamsplitter_generator(tuple(dims), 0, 1))


def number_sectors(dims: tuple[int, ...], n_max: int) -> list[np.ndarray]:
    """Flat indices of basis states grouped by total photon number 0..n_max."""
    groups = [[] for _ in range(n_max + 1)]
    for flat, occ in enumerate(itertools.product(*(range(n) for n in dims))):
        total = sum(occ)
        if total <= n_max:
            groups[total].append(flat)
    return [np.array(g, dtype=int) for g in groups]


def sector_generator(dims: tuple[int, ...], i: int, j: int, idx: np.ndarray) -> np.ndarray:
    """Block of ``a_i^dag a_j - a_i a_j^dag`` on the basis states ``idx``.

    ``idx`` must be closed under the generator (a full number sector); the
    block is filled from occupation numbers without forming the full matrix.
    """
    if i == j:
        raise DomainError("beamsplitter needs two distinct modes")
    occ = np.array(np.unravel_index(idx, dims)).T
    where = {int(f): k for k, f in enumerate(idx)}
    strides = np.array([math.prod(dims[m + 1 :]) for m in range(len(dims))])
    g = np.zeros((len(idx), len(idx)))
    for col, n in enumerate(occ):
        # a_i^dag a_j moves a photon j -> i; its adjoint moves i -> j
        for src, dst, sign in ((j, i, 1.0), (i, j, -1.0)):
            if n[src] == 0 or n[dst] + 1 >= dims[dst]:
                continue
            target = int(idx[col] - strides[src] + strides[dst])
            g[where[target], col] += sign * math.sqrt(n[src] * (n[dst] + 1))
    return g


def sector_beamsplitter(eta: float, dims: tuple[int, ...], i: int, j: int, sectors) -> list[np.ndarray]:
    """Blocks of the (i, j) beamsplitter on each total-number sector.

    The generator never mixes sectors, so exponentiating block by block gives
    the same matrix as exponentiating the whole space.
    """
    t = _transmission_angle(eta)
    return [matrix_exp(t * sector_generator(dims, i, j, idx)) for idx in sectors]
