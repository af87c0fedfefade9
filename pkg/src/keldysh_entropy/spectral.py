"""Dense eigendecomposition and single-particle propagators.

One full diagonalization per disorder realization feeds every Green's
function and every requested time; propagators are rebuilt per time from the
cached spectrum, ``U(t) = phi diag(exp(-i eps t)) phi^dag``, so there is no
time-stepping error anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiagonalizationError
from .models import Hamiltonian


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    ``modes[:, a]`` is the amplitude of eigenmode ``a`` on each site; it
    stays real float64 whenever the Hamiltonian is real, which roughly
    halves the cost of the Green's-function mode sums downstream.
    """

    energies: np.ndarray
    modes: np.ndarray
    size: int
    label: str = ""


def _fix_mode_phases(modes: np.ndarray) -> np.ndarray:
    """Make the first nonzero component of each eigenvector real-positive.

    Pins the arbitrary per-vector phase (sign, in the real case) so equal
    inputs produce bitwise-equal decompositions.
    """
    out = np.array(modes)
    scale = np.max(np.abs(out), axis=0)
    scale[scale == 0] = 1.0
    for a in range(out.shape[1]):
        col = out[:, a]
        nz = np.nonzero(np.abs(col) > 1e-12 * scale[a])[0]
        if nz.size == 0:
            continue
        pivot = col[nz[0]]
        if np.iscomplexobj(out):
            phase = pivot / abs(pivot)
            if abs(phase - 1.0) > 0:
                out[:, a] = col / phase
        elif pivot < 0:
            out[:, a] = -col
    return out


def diagonalize(h: Hamiltonian) -> SpectralDecomposition:
    """Full spectrum and eigenbasis of a Hermitian single-particle matrix."""
    try:
        energies, modes = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(h.label or "<unlabeled Hamiltonian>", exc) from exc
    if not np.iscomplexobj(h.matrix):
        modes = np.ascontiguousarray(modes.real)
    modes = _fix_mode_phases(modes)
    energies = np.ascontiguousarray(energies)
    energies.flags.writeable = False
    modes.flags.writeable = False
    return SpectralDecomposition(
        energies=energies, modes=modes, size=h.matrix.shape[0], label=h.label
    )


@dataclass(frozen=True)
class Propagator:
    """Unitary time-evolution matrix ``U(t) = exp(-i H t)``."""

    values: np.ndarray
    t: float


def propagator(d: SpectralDecomposition, t: float) -> Propagator:
    """``U(t) = phi diag(exp(-i eps t)) phi^dag`` from a cached spectrum."""
    if not np.isfinite(t):
        raise ValueError(f"propagation time must be finite, got {t}")
    kernel = np.exp(-1j * d.energies * t)
    u = (d.modes * kernel) @ d.modes.conj().T
    u.flags.writeable = False
    return Propagator(values=u, t=float(t))
