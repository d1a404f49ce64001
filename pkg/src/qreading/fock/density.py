"""Density matrices on truncated multimode Fock spaces and the loss channel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError
from .operators import beamsplitter, number_operator

__all__ = [
    "HERMITIAN_TOL",
    "TRACE_TOL",
    "POSITIVITY_TOL",
    "DensityMatrix",
    "tensor",
    "apply_unitary",
    "partial_trace",
    "loss_channel",
    "number_energy",
    "trace_distance",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """State on ``dims[0] x dims[1] x ...`` with mode 0 the slowest index.

    Construction checks Hermiticity, unit trace and positivity. Channel
    outputs are built through :meth:`unchecked` and validated on demand.
    """

    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        size = math.prod(dims)
        if data.shape != (size, size):
            raise DomainError(f"matrix shape {data.shape} does not match dims {dims}")
        self.check()

    def check(self) -> None:
        herm = float(np.max(np.abs(self.data - self.data.conj().T)))
        if herm > HERMITIAN_TOL:
            raise DomainError(f"density matrix not Hermitian (deviation {herm:.2e})")
        tr = float(np.trace(self.data).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix trace {tr!r} differs from 1")
        lo = float(np.linalg.eigvalsh(self.data).min())
        if lo < -POSITIVITY_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {lo:.2e}")

    @classmethod
    def unchecked(cls, dims, data) -> "DensityMatrix":
        obj = object.__new__(cls)
        object.__setattr__(obj, "dims", tuple(int(n) for n in dims))
        object.__setattr__(obj, "data", np.asarray(data, dtype=complex))
        return obj

    @classmethod
    def from_vector(cls, amps, dims=None) -> "DensityMatrix":
        amps = np.asarray(getattr(amps, "amps", amps), dtype=complex).ravel()
        dims = (len(amps),) if dims is None else tuple(dims)
        return cls(dims, np.outer(amps, amps.conj()))

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    @property
    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.data).min())


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Product state, modes ordered as given."""
    data = states[0].data
    dims = states[0].dims
    for s in states[1:]:
        data = np.kron(data, s.data)
        dims = dims + s.dims
    return DensityMatrix.unchecked(dims, data)


def _as_tensor(rho: DensityMatrix) -> np.ndarray:
    return rho.data.reshape(rho.dims + rho.dims)


def apply_unitary(rho: DensityMatrix, u: np.ndarray, modes) -> DensityMatrix:
    """``U rho U^dag`` with ``U`` acting on the listed modes (in that order)."""
    modes = [modes] if isinstance(modes, int) else list(modes)
    m = rho.n_modes
    if len(set(modes)) != len(modes) or any(not 0 <= k < m for k in modes):
        raise DomainError(f"invalid modes {modes} for a {m}-mode state")
    sub = math.prod(rho.dims[k] for k in modes)
    if u.shape != (sub, sub):
        raise DomainError(f"operator shape {u.shape} does not fit modes {modes}")
    rest = [k for k in range(m) if k not in modes]
    order = modes + rest
    perm = order + [m + k for k in order]
    t = _as_tensor(rho).transpose(perm)
    shape = t.shape
    other = rho.data.shape[0] // sub
    mat = t.reshape(sub, other, sub, other)
    # left multiply on the row index, right multiply by U^dag on the column index
    mat = np.einsum("ij,jakb->iakb", u, mat, optimize=True)
    mat = np.einsum("iakb,lk->iabl", mat, u.conj(), optimize=True).transpose(0, 1, 3, 2)
    back = np.argsort(perm)
    data = mat.reshape(shape).transpose(back).reshape(rho.data.shape)
    return DensityMatrix.unchecked(rho.dims, data)


def partial_trace(rho: DensityMatrix, mode: int) -> DensityMatrix:
    """Trace out one mode."""
    m = rho.n_modes
    if not 0 <= mode < m:
        raise DomainError(f"mode {mode} out of range for {m} modes")
    if m == 1:
        raise DomainError("cannot trace out the only mode")
    out = np.trace(_as_tensor(rho), axis1=mode, axis2=m + mode)
    dims = rho.dims[:mode] + rho.dims[mode + 1 :]
    size = math.prod(dims)
    return DensityMatrix.unchecked(dims, out.reshape(size, size))


def loss_channel(rho: DensityMatrix, mode: int, eta: float, mode_dim: int | None = None) -> DensityMatrix:
    """Pure loss of transmissivity ``eta`` on one mode.

    The mode is mixed with a vacuum ancilla on a beamsplitter of angle
    ``arccos(sqrt(eta))`` and the ancilla is discarded. Because the ancilla
    starts in ``|0>``, only the ancilla-vacuum columns of the beamsplitter
    matter, and tracing the ancilla reduces to summing over its output level
    ``k``: the channel is evaluated as ``sum_k K_k rho K_k^dag`` with
    ``K_k = <k| B |0>``, which avoids forming the enlarged density matrix.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"transmissivity must lie in [0, 1], got {eta}")
    m = rho.n_modes
    if not 0 <= mode < m:
        raise DomainError(f"mode {mode} out of range for {m} modes")
    if eta == 1.0:
        return rho
    d = rho.dims[mode]
    da = d if mode_dim is None else int(mode_dim)
    b = beamsplitter(eta, (d, da)).reshape(d, da, d, da)
    kraus = b[:, :, :, 0].transpose(1, 0, 2)  # kraus[k] = <k|_anc B |0>_anc
    t = np.moveaxis(_as_tensor(rho), (mode, m + mode), (0, 1))
    out = np.einsum("kij,jl...,kml->im...", kraus, t, kraus.conj(), optimize=True)
    out = np.moveaxis(out, (0, 1), (mode, m + mode))
    return DensityMatrix.unchecked(rho.dims, out.reshape(rho.data.shape))


def number_energy(rho: DensityMatrix) -> float:
    """Total mean photon number summed over modes."""
    total = 0.0
    for mode in range(rho.n_modes):
        reduced = rho
        for other in reversed(range(rho.n_modes)):
            if other != mode:
                reduced = partial_trace(reduced, other)
        n = number_operator(rho.dims[mode])
        total += float(np.trace(n @ reduced.data).real)
    return total


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``0.5 * ||rho - sigma||_1`` from the eigenvalues of the difference."""
    if rho.dims != sigma.dims:
        raise DomainError(f"dimension mismatch {rho.dims} vs {sigma.dims}")
    diff = rho.data - sigma.data
    diff = 0.5 * (diff + diff.conj().T)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())
