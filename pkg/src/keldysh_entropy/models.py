"""Single-particle lattice Hamiltonians, disorder realizations and geometry.

Supported models (hopping amplitude 1 sets the unit of energy / inverse time):

* ``AA1D``       -- chain with incommensurate cosine potential
                    ``2 V cos(2 pi b r + phi)``, site labels ``r = 1..L``.
* ``AA2D``       -- square lattice with hopping phases ``exp(i phi_mu)`` on
                    ``+mu`` bonds and potential
                    ``2 V sum_mu cos(2 pi (B r)_mu + phi_mu)``, where
                    ``B = b R(theta)`` and ``R`` is a rotation matrix.
* ``ANDERSON2D`` -- square lattice with i.i.d. uniform on-site disorder in
                    ``[-W, W]``.
* ``CLEAN_TB``   -- nearest-neighbor tight binding in 1D or 2D (the ``V = 0``
                    / ``W = 0`` limit of the above).

All lattices are periodic.  Sites carry 0-based flat indices; in 2D the flat
index is ``x * L + y`` where ``x`` is the axis split by the bipartition
("columns") and ``y`` the fast axis.  Subsystem A is always the first half of
the flat order: a contiguous block of ``L/2`` sites in 1D, the first ``L/2``
columns in 2D.  The cosine potentials are evaluated with 1-based site labels
``r = index + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigurationError

GOLDEN_RATIO_CONJUGATE = (math.sqrt(5.0) - 1.0) / 2.0


class Variant(Enum):
    """Which lattice model a parameter set describes."""

    AA1D = "aa1d"
    AA2D = "aa2d"
    ANDERSON2D = "anderson2d"
    CLEAN_TB = "clean_tb"

    @classmethod
    def parse(cls, name: "str | Variant") -> "Variant":
        if isinstance(name, Variant):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError as exc:
            raise ConfigurationError(
                f"unknown model variant {name!r}; expected one of "
                f"{[v.value for v in cls]}"
            ) from exc


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic lattice geometry with a half/half bipartition.

    Parameters
    ----------
    dimension : 1 or 2
    L : int
        Sites per linear direction; must be even.
    """

    dimension: int
    L: int

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ConfigurationError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.L < 2 or self.L % 2 != 0:
            raise ConfigurationError(f"L must be even and >= 2, got {self.L}")

    @property
    def n_sites(self) -> int:
        return self.L if self.dimension == 1 else self.L * self.L

    @property
    def n_a(self) -> int:
        return self.n_sites // 2

    def a_sites(self) -> np.ndarray:
        """Flat indices of subsystem A (first half of the flat order)."""
        return np.arange(self.n_a)

    def b_sites(self) -> np.ndarray:
        return np.arange(self.n_a, self.n_sites)

    def site_index(self, x: int, y: int = 0) -> int:
        """Flat index of 0-based coordinates (2D: column x, row y)."""
        if self.dimension == 1:
            return x % self.L
        return (x % self.L) * self.L + (y % self.L)


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; only the fields relevant to ``variant`` are read.

    ``b`` is the irrational wavenumber of the cosine potential, ``theta`` the
    rotation angle of the 2D wavevector matrix, ``tprime`` the
    next-nearest-neighbor hopping (2D only) and ``seed`` the 64-bit ensemble
    seed for disorder realizations.
    """

    variant: Variant
    V: float = 0.0
    W: float = 0.0
    b: float = GOLDEN_RATIO_CONJUGATE
    theta: float = math.pi / 7.0
    tprime: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if self.V < 0 or self.W < 0 or self.tprime < 0:
            raise ConfigurationError("V, W and tprime must be non-negative")
        if not 0.0 < self.b < 1.0:
            raise ConfigurationError(f"b must lie in (0, 1), got {self.b}")

    def n_phases(self) -> int:
        if self.variant == Variant.AA1D:
            return 1
        if self.variant == Variant.AA2D:
            return 2
        return 0


@dataclass(frozen=True)
class DisorderRealization:
    """One member of the disorder ensemble.

    ``phases`` holds the potential offsets (one per Cartesian direction for
    the 2D quasiperiodic model), ``onsite`` the uniform random potential for
    the Anderson model, both fully determined by ``(seed, index)``.
    """

    phases: Tuple[float, ...]
    onsite: Optional[np.ndarray]
    index: int


@dataclass(frozen=True)
class Hamiltonian:
    """Dense Hermitian single-particle matrix plus lattice metadata."""

    matrix: np.ndarray
    spec: LatticeSpec
    label: str = field(default="")

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0]


def _realization_rng(seed: int, index: int, stream: int) -> np.random.Generator:
    # Counter-based keyed stream: key = (seed, index), counter word = stream.
    # Same (seed, index, stream) always reproduces the same draw, independent
    # of how many realizations ran before or on which worker.
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(index)], dtype=np.uint64)
    bits = np.random.Philox(key=key, counter=[0, 0, 0, stream])
    return np.random.Generator(bits)


def draw_realization(
    params: ModelParams, index: int, n_sites: Optional[int] = None
) -> DisorderRealization:
    """Draw the disorder realization with the given ensemble index.

    Phases are uniform on ``[0, 2 pi)``; Anderson on-site energies are i.i.d.
    uniform on ``[-W, W]`` and need ``n_sites`` to know how many to draw.
    Deterministic in ``(params.seed, index)``.
    """
    if index < 0:
        raise ConfigurationError(f"realization index must be >= 0, got {index}")
    phases: Tuple[float, ...] = ()
    np_ = params.n_phases()
    if np_:
        rng = _realization_rng(params.seed, index, stream=0)
        phases = tuple(rng.uniform(0.0, 2.0 * math.pi, size=np_))
    onsite = None
    if params.variant == Variant.ANDERSON2D:
        if n_sites is None:
            raise ConfigurationError("n_sites is required to draw Anderson on-site disorder")
        rng = _realization_rng(params.seed, index, stream=1)
        onsite = rng.uniform(-params.W, params.W, size=n_sites)
        onsite.flags.writeable = False
    return DisorderRealization(phases=phases, onsite=onsite, index=index)


def _check_consistent(spec: LatticeSpec, params: ModelParams):
    v = params.variant
    if v == Variant.AA1D and spec.dimension != 1:
        raise ConfigurationError("variant aa1d requires a 1D lattice")
    if v in (Variant.AA2D, Variant.ANDERSON2D) and spec.dimension != 2:
        raise ConfigurationError(f"variant {v.value} requires a 2D lattice")
    if params.tprime > 0 and spec.dimension == 1:
        raise ConfigurationError("next-nearest-neighbor hopping is unsupported in 1D")


def _aa1d_potential(L: int, V: float, b: float, phi: float) -> np.ndarray:
    r = np.arange(1, L + 1, dtype=float)
    return 2.0 * V * np.cos(2.0 * math.pi * b * r + phi)


def _aa2d_potential(L: int, V: float, b: float, theta: float, phases) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    B = b * np.array([[c, -s], [s, c]])
    x = np.arange(1, L + 1, dtype=float)  # 1-based labels along the split axis
    y = np.arange(1, L + 1, dtype=float)
    # arg_mu(x, y) = 2 pi (B_{mu,1} x + B_{mu,2} y) + phi_mu
    eps = np.zeros((L, L))
    for mu in range(2):
        arg = 2.0 * math.pi * (B[mu, 0] * x[:, None] + B[mu, 1] * y[None, :]) + phases[mu]
        eps += 2.0 * V * np.cos(arg)
    return eps.reshape(-1)  # flat index x * L + y


def build_hamiltonian(
    spec: LatticeSpec, params: ModelParams, realization: DisorderRealization
) -> Hamiltonian:
    """Assemble the dense Hermitian matrix for one disorder realization.

    Nearest-neighbor hoppings have magnitude 1 with periodic wrap; the 2D
    quasiperiodic model additionally carries phases ``exp(i phi_mu)`` on
    ``+mu`` bonds (Hermitian conjugate on ``-mu``).  The diagonal holds the
    variant's potential, and ``tprime > 0`` adds next-nearest-neighbor
    (lattice-diagonal) hoppings of magnitude ``tprime`` in 2D.
    """
    _check_consistent(spec, params)
    v = params.variant
    L, N = spec.L, spec.n_sites

    complex_hoppings = v == Variant.AA2D
    dtype = complex if complex_hoppings else float
    H = np.zeros((N, N), dtype=dtype)

    if spec.dimension == 1:
        i = np.arange(N)
        H[i, (i + 1) % N] += 1.0
        H[(i + 1) % N, i] += 1.0
    else:
        idx = np.arange(N).reshape(L, L)  # [x, y]
        hop_x = np.exp(1j * realization.phases[0]) if complex_hoppings else 1.0
        hop_y = np.exp(1j * realization.phases[1]) if complex_hoppings else 1.0
        xp = np.roll(idx, -1, axis=0)  # neighbor at x+1
        yp = np.roll(idx, -1, axis=1)  # neighbor at y+1
        # +mu bond term: hop_mu * c^dag_{r+mu} c_r, i.e. H[r+mu, r] = hop_mu
        H[xp.reshape(-1), idx.reshape(-1)] += hop_x
        H[idx.reshape(-1), xp.reshape(-1)] += np.conj(hop_x)
        H[yp.reshape(-1), idx.reshape(-1)] += hop_y
        H[idx.reshape(-1), yp.reshape(-1)] += np.conj(hop_y)
        if params.tprime > 0:
            for dx, dy in ((1, 1), (1, -1)):
                nn = np.roll(np.roll(idx, -dx, axis=0), -dy, axis=1)
                H[nn.reshape(-1), idx.reshape(-1)] += params.tprime
                H[idx.reshape(-1), nn.reshape(-1)] += params.tprime

    if v == Variant.AA1D:
        H[np.diag_indices(N)] += _aa1d_potential(L, params.V, params.b, realization.phases[0])
    elif v == Variant.AA2D:
        H[np.diag_indices(N)] += _aa2d_potential(
            L, params.V, params.b, params.theta, realization.phases
        )
    elif v == Variant.ANDERSON2D:
        if realization.onsite is None or realization.onsite.shape != (N,):
            raise ConfigurationError(
                "Anderson realization must carry one on-site energy per site"
            )
        H[np.diag_indices(N)] += realization.onsite

    H.flags.writeable = False
    label = f"{v.value} L={L} r={realization.index}"
    return Hamiltonian(matrix=H, spec=spec, label=label)


def operator_site(spec: LatticeSpec) -> int:
    """Default site for the local number operator, well inside subsystem A.

    1D: 1-based label ``floor(L/4)``, i.e. a quarter system away from the
    A-B boundary.  2D: the center column of A and the central row (ties to
    the lower index).  Returns the 0-based flat index.
    """
    if spec.L < 8:
        raise ConfigurationError(
            f"no interior site of A at L={spec.L}; need L >= 8 to keep the "
            "operator off the A-B boundary"
        )
    if spec.dimension == 1:
        return spec.L // 4 - 1
    return spec.site_index(spec.L // 4 - 1, spec.L // 2 - 1)


def neel_occupation(spec: LatticeSpec) -> np.ndarray:
    """Occupied sites of the alternating product state |1010...> .

    Occupation alternates along the flat site order (2D: along the fast
    axis), giving exactly half filling.
    """
    if spec.n_sites % 2 != 0:
        raise ConfigurationError("alternating occupation needs an even site count")
    return np.arange(0, spec.n_sites, 2)
