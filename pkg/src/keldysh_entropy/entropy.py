"""Correlation matrices and the entropies computed from their spectra.

Two kinds of ``L_A x L_A`` correlation matrix are assembled from contour
Green's function blocks, with the pivot inverted by a dense solve:

* operator kind (infinite-temperature occupations), for the growth of the
  subsystem Renyi entropy of a Heisenberg-evolved local number operator
  ``n_l``:

      C_ij(t) = -i G_ij(t+, t^+ +)
                + i G_il(t+, 0+) [G_ll(0-, 0+)]^{-1} G_lj(0-, t^+ +)

* state kind (vacuum occupations), for entanglement entropies of an evolved
  occupation-basis product state with occupied set ``I``:

      C_ij(t) = -i G_ij(t+, t^+ +)
                + i sum_{k,l in I} G_ik(t+, 0+) [G_kl(0-, 0+)]^{-1} G_lj(0-, t^+ +)

Both matrices are Hermitian with spectrum in [0, 1].  Every entropy is a
function of the eigenvalues ``c_m`` alone:

    second Renyi     S = -sum_m ln[(1 - c_m)^2 + c_m^2]
    n-th Renyi       S = 1/(1-n) sum_m ln[(1 - c_m)^n + c_m^n]
    von Neumann      S = -sum_m [(1 - c_m) ln(1 - c_m) + c_m ln c_m]

and the many-body Schmidt values factorize over the single-particle
entanglement levels ``h_m = ln[(1 - c_m)/c_m]`` as
``Lambda = exp(-sum_m h_m n_m) / prod_m (1 + exp(-h_m))`` over occupation
patterns ``{n_m}``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import greens
from .errors import SingularPivotError
from .greens import OccupationKind, minus, plus
from .spectral import SpectralDecomposition

LN2 = math.log(2.0)
EIG_CLAMP = 1e-12  # eigenvalue clamp applied before any logarithm
HERMITICITY_TOL = 1e-9
EIG_RANGE_TOL = 1e-9


class CorrelationKind(Enum):
    OPERATOR = "operator"
    STATE = "state"


class CorrelationMatrix:
    """Hermitian correlation matrix with validated spectrum in [0, 1]."""

    def __init__(self, values: np.ndarray, kind: CorrelationKind, t: float):
        values = np.asarray(values)
        dev = np.max(np.abs(values - values.conj().T))
        if dev > HERMITICITY_TOL:
            raise ValueError(f"correlation matrix deviates from Hermiticity by {dev:.3e}")
        self.values = (values + values.conj().T) / 2.0
        self.values.flags.writeable = False
        self.kind = kind
        self.t = float(t)
        self._eigs: Optional[np.ndarray] = None

    @property
    def n_a(self) -> int:
        return self.values.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues clamped to [0, 1]; cached after the first call."""
        if self._eigs is None:
            eigs = np.linalg.eigvalsh(self.values)
            if eigs[0] < -EIG_RANGE_TOL or eigs[-1] > 1.0 + EIG_RANGE_TOL:
                raise ValueError(
                    f"correlation spectrum escapes [0, 1]: [{eigs[0]:.3e}, {eigs[-1]:.6f}]"
                )
            self._eigs = np.clip(eigs, 0.0, 1.0)
            self._eigs.flags.writeable = False
        return self._eigs


def _contour_points(t: float):
    """Contour insertions entering the correlation matrices.

    The source kicks sit at the start of each branch (rank 0); the two
    displacement-operator kicks at time t on the forward branch are
    infinitesimally ordered after them and after each other.
    """
    return {
        "t": plus(t, rank=1),
        "t_split": plus(t, rank=2),
        "zero_plus": plus(0.0, rank=0),
        "zero_minus": minus(0.0, rank=0),
    }


class OperatorCorrelationEvaluator:
    """Operator-kind correlation matrices for one spectrum at many times.

    Hoists the time-independent pieces (the equal-time A-block of the lesser
    function and the pivot) out of the time loop; each time then costs two
    thin Green's-function strips and an outer product.
    """

    def __init__(self, d: SpectralDecomposition, site: int, a_sites: np.ndarray):
        self.d = d
        self.site = int(site)
        self.a_sites = np.asarray(a_sites)
        self.occ = OccupationKind.INFINITE_TEMPERATURE
        z = _contour_points(0.0)
        # G(t+, t^+ +) on A x A: equal-time lesser block, the same matrix at
        # every t because its mode kernel carries exp(-i eps (t - t)) = 1.
        self._equal_time = greens.contour_block(
            d, self.occ, z["t"], z["t_split"], rows=self.a_sites, cols=self.a_sites
        ).values
        pivot = greens.contour_block(
            d,
            self.occ,
            z["zero_minus"],
            z["zero_plus"],
            rows=np.array([self.site]),
            cols=np.array([self.site]),
        ).values
        if abs(pivot[0, 0]) < 1e-12:
            raise SingularPivotError(
                f"equal-time pivot G_ll(0-, 0+) = {pivot[0, 0]:.3e} is singular"
            )
        assert abs(abs(pivot[0, 0]) - 0.5) < 1e-9, (
            "infinite-temperature pivot must have magnitude 1/2"
        )
        self._pivot = pivot

    def __call__(self, t: float) -> CorrelationMatrix:
        z = _contour_points(t)
        l = np.array([self.site])
        col = greens.contour_block(self.d, self.occ, z["t"], z["zero_plus"],
                                   rows=self.a_sites, cols=l).values
        row = greens.contour_block(self.d, self.occ, z["zero_minus"], z["t_split"],
                                   rows=l, cols=self.a_sites).values
        correction = 1j * col @ np.linalg.solve(self._pivot, row)
        return CorrelationMatrix(
            -1j * self._equal_time + correction, CorrelationKind.OPERATOR, t
        )


def operator_correlation_matrix(
    d: SpectralDecomposition, site: int, a_sites: np.ndarray, t: float
) -> CorrelationMatrix:
    """Correlation matrix of the evolved number operator ``n_site`` on A."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return OperatorCorrelationEvaluator(d, site, a_sites)(t)


class StateCorrelationEvaluator:
    """State-kind correlation matrices for one spectrum at many times.

    The occupied-block pivot ``G(0-, 0+)`` is time independent; it is
    factored once by a dense solve against the identity and applied per time
    with a matrix product.
    """

    def __init__(self, d: SpectralDecomposition, occupied: np.ndarray, a_sites: np.ndarray):
        if len(np.asarray(occupied)) == 0:
            raise ValueError("the occupied set must be non-empty")
        self.d = d
        self.occupied = np.asarray(occupied)
        self.a_sites = np.asarray(a_sites)
        self.occ = OccupationKind.VACUUM
        z = _contour_points(0.0)
        pivot = greens.contour_block(
            d, self.occ, z["zero_minus"], z["zero_plus"],
            rows=self.occupied, cols=self.occupied,
        ).values
        # In vacuum the pivot is -i * identity up to eigensolver round-off.
        dev = np.max(np.abs(pivot + 1j * np.eye(len(self.occupied))))
        if dev > 1e-8:
            raise SingularPivotError(
                f"occupied-block pivot deviates from -i*identity by {dev:.3e}"
            )
        try:
            self._pivot_inv = np.linalg.solve(pivot, np.eye(len(self.occupied), dtype=complex))
        except np.linalg.LinAlgError as exc:
            raise SingularPivotError(f"occupied-block pivot is singular: {exc}") from exc

    def __call__(self, t: float) -> CorrelationMatrix:
        z = _contour_points(t)
        first = greens.contour_block(self.d, self.occ, z["t"], z["t_split"],
                                     rows=self.a_sites, cols=self.a_sites).values
        left = greens.contour_block(self.d, self.occ, z["t"], z["zero_plus"],
                                    rows=self.a_sites, cols=self.occupied).values
        right = greens.contour_block(self.d, self.occ, z["zero_minus"], z["t_split"],
                                     rows=self.occupied, cols=self.a_sites).values
        values = -1j * first + 1j * (left @ (self._pivot_inv @ right))
        return CorrelationMatrix(values, CorrelationKind.STATE, t)


def state_correlation_matrix(
    d: SpectralDecomposition, occupied: np.ndarray, a_sites: np.ndarray, t: float
) -> CorrelationMatrix:
    """Correlation matrix on A of the evolved product state with occupied set."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return StateCorrelationEvaluator(d, occupied, a_sites)(t)


def renyi2_entropy(c: CorrelationMatrix) -> float:
    """Second Renyi entropy ``-sum_m ln[(1 - c_m)^2 + c_m^2]``."""
    eigs = c.eigenvalues()
    return float(-np.sum(np.log((1.0 - eigs) ** 2 + eigs**2)))


def renyi_n_entropy(c: CorrelationMatrix, n: float) -> float:
    """n-th Renyi entropy ``1/(1-n) sum_m ln[(1 - c_m)^n + c_m^n]``, n > 1."""
    if n <= 1:
        raise ValueError(f"Renyi order must exceed 1 (got {n}); use von_neumann_entropy")
    eigs = c.eigenvalues()
    return float(np.sum(np.log((1.0 - eigs) ** n + eigs**n)) / (1.0 - n))


def von_neumann_entropy(c: CorrelationMatrix) -> float:
    """Von Neumann entropy ``-sum_m [(1-c_m) ln(1-c_m) + c_m ln c_m]``.

    Eigenvalues are clamped away from {0, 1} by 1e-12; the exact limits
    contribute zero.
    """
    eigs = np.clip(c.eigenvalues(), EIG_CLAMP, 1.0 - EIG_CLAMP)
    return float(-np.sum((1.0 - eigs) * np.log(1.0 - eigs) + eigs * np.log(eigs)))


def delta_operator_entropy(
    times: np.ndarray, s_op: np.ndarray, s_op_zero: float
) -> np.ndarray:
    """Growth ``S(t) - S(0)`` of the operator entropy; exactly 0 at t = 0.

    The growth of the number-operator entropy is bounded by the local
    Hilbert-space dimension: values must not exceed ln 2 (+1e-9 slack).
    """
    times = np.asarray(times)
    delta = np.asarray(s_op, dtype=float) - float(s_op_zero)
    delta[times == 0.0] = 0.0
    exceed = np.max(delta - LN2) if delta.size else 0.0
    if exceed > 1e-9:
        raise ValueError(f"operator entropy growth exceeds ln 2 by {exceed:.3e}")
    return delta


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Top many-body Schmidt values and their single-particle levels.

    ``log_top`` carries ``ln Lambda_i`` exactly even when ``top`` underflows
    to zero at long times.
    """

    levels: np.ndarray
    top: np.ndarray
    log_top: np.ndarray
    t: float


def _k_smallest_subset_sums(weights: np.ndarray, k: int) -> np.ndarray:
    """K smallest sums over all subsets of non-negative weights (exact).

    Best-first expansion over subsets ordered by sum: from a subset whose
    largest chosen index is ``j``, either append index ``j + 1`` or swap
    ``j`` for ``j + 1``.  Every subset is reachable exactly once.
    """
    w = np.sort(weights)
    n = len(w)
    out = []
    heap = [(0.0, -1)]
    while heap and len(out) < k:
        s, j = heapq.heappop(heap)
        out.append(s)
        if j + 1 < n:
            heapq.heappush(heap, (s + w[j + 1], j + 1))
            if j >= 0:
                heapq.heappush(heap, (s - w[j] + w[j + 1], j + 1))
    return np.asarray(out)


def schmidt_spectrum(c: CorrelationMatrix, k: int = 10) -> SchmidtSpectrum:
    """Largest ``k`` many-body Schmidt values of a state correlation matrix.

    The weight of an occupation pattern ``{n_m}`` of the entanglement levels
    ``h_m`` is ``exp(-sum_m h_m n_m) / prod_m (1 + exp(-h_m))``; the search
    over patterns is an exact best-first enumeration, ordered by the excess
    ``sum |h_m|`` over the minimal-weight configuration (``n_m = 1`` exactly
    where ``h_m < 0``).
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if c.kind is not CorrelationKind.STATE:
        raise ValueError("Schmidt values are defined for state-kind correlation matrices")
    eigs = np.clip(c.eigenvalues(), EIG_CLAMP, 1.0 - EIG_CLAMP)
    levels = np.log((1.0 - eigs) / eigs)
    n_modes = len(levels)
    if n_modes < 63 and k > 2**n_modes:
        k = 2**n_modes
    # log of the normalization prod_m (1 + exp(-h_m)), overflow-safe
    log_z = float(np.sum(np.logaddexp(0.0, -levels)))
    ground = float(np.sum(levels[levels < 0.0]))
    excess = _k_smallest_subset_sums(np.abs(levels), k)
    log_top = -(ground + excess) - log_z
    with np.errstate(under="ignore"):
        top = np.exp(log_top)
    return SchmidtSpectrum(levels=levels, top=top, log_top=log_top, t=c.t)
