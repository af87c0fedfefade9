"""Lesser and greater Green's functions on the closed time contour.

For a non-interacting Hamiltonian with eigenmodes ``phi_a`` and energies
``eps_a`` the two components are diagonal in the mode basis,

    i G^<_a(t, t') = -n_F(eps_a) exp(-i eps_a (t - t')),
    i G^>_a(t, t') = (1 - n_F(eps_a)) exp(-i eps_a (t - t')),

with occupation ``n_F = 1/2`` (infinite temperature, operator dynamics) or
``n_F = 0`` (vacuum, state dynamics).  Site-basis blocks follow from the mode
sum ``G_ij = sum_a phi_a(i) phi_a*(j) G_a`` restricted to exactly the rows
and columns a caller needs; nothing is stored globally.

Contour bookkeeping: a point ``z = (t, s)`` lives on the forward (``+``) or
backward (``-``) branch of the contour that runs ``0+ -> +inf+ -> +inf- ->
0-``.  ``G(z1, z2)`` is the greater function when ``z1`` comes later on the
contour than ``z2`` and the lesser function otherwise; equal positions are
resolved by an integer rank standing in for infinitesimal splittings, with
exact ties ordered as lesser (annihilator to the right of the creator).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .spectral import SpectralDecomposition


class OccupationKind(Enum):
    """Mode occupation entering the Green's functions."""

    INFINITE_TEMPERATURE = "infinite_temperature"
    VACUUM = "vacuum"

    @property
    def n_f(self) -> float:
        return 0.5 if self is OccupationKind.INFINITE_TEMPERATURE else 0.0


class ContourPoint(NamedTuple):
    """Time on one contour branch; ``rank`` breaks equal-time ties."""

    time: float
    branch: str  # '+' or '-'
    rank: int = 0

    def position(self):
        # Forward branch first (time ascending), backward branch after
        # (time descending); rank orders insertions at the same instant.
        if self.branch == "+":
            return (0, self.time, self.rank)
        if self.branch == "-":
            return (1, -self.time, self.rank)
        raise ValueError(f"branch must be '+' or '-', got {self.branch!r}")


def plus(t: float, rank: int = 0) -> ContourPoint:
    return ContourPoint(t, "+", rank)


def minus(t: float, rank: int = 0) -> ContourPoint:
    return ContourPoint(t, "-", rank)


@dataclass(frozen=True)
class GreensBlock:
    """Site-basis Green's function block over requested row/column sites."""

    values: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    kind: str  # 'lesser' or 'greater'
    occupation: OccupationKind
    t: float
    t_prime: float


def _mode_sum(
    d: SpectralDecomposition,
    kernel: np.ndarray,
    rows: Optional[np.ndarray],
    cols: Optional[np.ndarray],
) -> np.ndarray:
    """``phi[rows] diag(kernel) phi[cols]^dag`` without forming full matrices."""
    if kernel.shape != (d.size,):
        raise ValueError(f"kernel must have one entry per mode ({d.size}), got {kernel.shape}")
    pr = d.modes if rows is None else d.modes[np.asarray(rows)]
    pc = d.modes if cols is None else d.modes[np.asarray(cols)]
    if not np.iscomplexobj(d.modes) and np.iscomplexobj(kernel):
        # Real eigenbasis: two real GEMMs beat one complex GEMM.
        re = (pr * kernel.real) @ pc.T
        im = (pr * kernel.imag) @ pc.T
        return re + 1j * im
    return (pr * kernel) @ pc.conj().T


def real_space_transform(
    d: SpectralDecomposition,
    kernel: np.ndarray,
    rows: Optional[np.ndarray] = None,
    cols: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Transform a mode-diagonal kernel to the site basis.

    Parameters
    ----------
    kernel : ndarray
        One (possibly complex) scalar per eigenmode.
    rows, cols : ndarray, optional
        Site subsets to restrict the output block; default is all sites.
    """
    return _mode_sum(d, np.asarray(kernel), rows, cols)


def lesser(
    d: SpectralDecomposition,
    occ: OccupationKind,
    t: float,
    t_prime: float,
    rows: Optional[np.ndarray] = None,
    cols: Optional[np.ndarray] = None,
) -> GreensBlock:
    """Lesser component ``G^<_ij(t, t')``; identically zero in vacuum."""
    nr = d.size if rows is None else len(rows)
    nc = d.size if cols is None else len(cols)
    if occ is OccupationKind.VACUUM:
        values = np.zeros((nr, nc), dtype=complex)
    else:
        kernel = 1j * occ.n_f * np.exp(-1j * d.energies * (t - t_prime))
        values = _mode_sum(d, kernel, rows, cols)
    return GreensBlock(
        values=values,
        rows=np.arange(d.size) if rows is None else np.asarray(rows),
        cols=np.arange(d.size) if cols is None else np.asarray(cols),
        kind="lesser",
        occupation=occ,
        t=t,
        t_prime=t_prime,
    )


def greater(
    d: SpectralDecomposition,
    occ: OccupationKind,
    t: float,
    t_prime: float,
    rows: Optional[np.ndarray] = None,
    cols: Optional[np.ndarray] = None,
) -> GreensBlock:
    """Greater component ``G^>_ij(t, t')`` with prefactor ``1 - n_F``."""
    kernel = -1j * (1.0 - occ.n_f) * np.exp(-1j * d.energies * (t - t_prime))
    values = _mode_sum(d, kernel, rows, cols)
    return GreensBlock(
        values=values,
        rows=np.arange(d.size) if rows is None else np.asarray(rows),
        cols=np.arange(d.size) if cols is None else np.asarray(cols),
        kind="greater",
        occupation=occ,
        t=t,
        t_prime=t_prime,
    )


def contour_block(
    d: SpectralDecomposition,
    occ: OccupationKind,
    z1: ContourPoint,
    z2: ContourPoint,
    rows: Optional[np.ndarray] = None,
    cols: Optional[np.ndarray] = None,
) -> GreensBlock:
    """``G(z1, z2)`` resolved to lesser/greater by contour ordering."""
    if z1.position() > z2.position():
        return greater(d, occ, z1.time, z2.time, rows, cols)
    return lesser(d, occ, z1.time, z2.time, rows, cols)
