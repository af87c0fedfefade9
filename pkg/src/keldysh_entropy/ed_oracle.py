"""Brute-force many-body reference for small chains.

Everything here works with dense matrices over an explicit Fock basis and
exists purely as ground truth for the correlation-matrix pipeline: operator
entropies use the full Fock space (the trace behind them runs over all
particle-number sectors), state entropies the half-filled sector.

The Jordan-Wigner site ordering follows the flat site indices, which places
all A sites before B sites.  The Fock basis then tensor-factorizes as A x B
with A occupying the low bits, and the partial trace over B of a
parity-even operator is a plain index sum with no fermionic sign
corrections.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from .errors import CapacityError
from .models import Hamiltonian

MAX_SITES = 14


@dataclass(frozen=True)
class FockSpace:
    """Occupation-bitstring basis; bit ``k`` is site ``k`` (A sites low).

    ``sector`` is ``"full"`` (dimension 2^L) or an integer particle number
    N (dimension C(L, N)).  Basis states are ordered by ascending bitstring
    value.
    """

    L: int
    sector: "str | int"
    basis: np.ndarray
    index: dict

    @classmethod
    def full(cls, L: int) -> "FockSpace":
        if L > MAX_SITES:
            raise CapacityError(f"full Fock space supports L <= {MAX_SITES}, got {L}")
        basis = np.arange(2**L, dtype=np.int64)
        return cls(L=L, sector="full", basis=basis, index={int(b): i for i, b in enumerate(basis)})

    @classmethod
    def fixed_n(cls, L: int, n: int) -> "FockSpace":
        if L > MAX_SITES:
            raise CapacityError(f"Fock space supports L <= {MAX_SITES}, got {L}")
        states = sorted(sum(1 << int(s) for s in combo) for combo in combinations(range(L), n))
        basis = np.asarray(states, dtype=np.int64)
        return cls(L=L, sector=n, basis=basis, index={int(b): i for i, b in enumerate(basis)})

    @property
    def dim(self) -> int:
        return len(self.basis)


def _jw_sign(state: int, site: int) -> int:
    """Sign picked up by moving c_site through the occupied sites below it."""
    below = state & ((1 << site) - 1)
    return -1 if (bin(below).count("1") & 1) else 1


def second_quantize(h_single: "Hamiltonian | np.ndarray", space: FockSpace) -> np.ndarray:
    """Dense matrix of ``sum_ij H_ij c^dag_i c_j`` over the Fock basis."""
    h = h_single.matrix if isinstance(h_single, Hamiltonian) else np.asarray(h_single)
    L = h.shape[0]
    if L != space.L:
        raise ValueError(f"Hamiltonian has {L} sites but the Fock space expects {space.L}")
    if L > MAX_SITES:
        raise CapacityError(f"second quantization supports L <= {MAX_SITES}, got {L}")
    dtype = complex if np.iscomplexobj(h) else float
    out = np.zeros((space.dim, space.dim), dtype=dtype)
    nonzero = [(i, j) for i in range(L) for j in range(L) if h[i, j] != 0]
    for idx, state in enumerate(space.basis):
        state = int(state)
        for i, j in nonzero:
            if not (state >> j) & 1:
                continue
            mid = state ^ (1 << j)
            if (mid >> i) & 1:
                continue
            new = mid | (1 << i)
            sign = _jw_sign(state, j) * _jw_sign(mid, i)
            out[space.index[new], idx] += sign * h[i, j]
    return out


def number_operator(space: FockSpace, site: int) -> np.ndarray:
    """Diagonal matrix reading occupation bit ``site``."""
    bits = (space.basis >> site) & 1
    return np.diag(bits.astype(float))


def evolve_operator(h_mb: np.ndarray, o_mb: np.ndarray, t: float) -> np.ndarray:
    """Heisenberg evolution ``exp(-i H t) O exp(+i H t)`` by full eigensolve."""
    if h_mb.shape != o_mb.shape:
        raise ValueError("Hamiltonian and operator live on different spaces")
    energies, vecs = np.linalg.eigh(h_mb)
    o_eig = vecs.conj().T @ o_mb @ vecs
    phases = np.exp(-1j * energies * t)
    o_t = vecs @ (np.outer(phases, phases.conj()) * o_eig) @ vecs.conj().T
    return o_t


def _parity_even(o_mb: np.ndarray, space: FockSpace, tol: float = 1e-12) -> bool:
    parity = np.array([bin(int(b)).count("1") & 1 for b in space.basis])
    odd_block = o_mb[np.ix_(parity == 0, parity == 1)]
    odd_block2 = o_mb[np.ix_(parity == 1, parity == 0)]
    scale = max(np.max(np.abs(o_mb)), 1.0)
    big = 0.0
    for blk in (odd_block, odd_block2):
        if blk.size:
            big = max(big, float(np.max(np.abs(blk))))
    return big <= tol * scale


def partial_trace_b(o_mb: np.ndarray, space: FockSpace, n_a: int) -> np.ndarray:
    """Trace out the B sites (high bits) of a parity-even full-space operator."""
    if space.sector != "full":
        raise ValueError("partial trace expects the full Fock space")
    if not _parity_even(o_mb, space):
        raise ValueError(
            "partial trace of a parity-odd fermionic operator is sign-ambiguous; unsupported"
        )
    d_a = 2**n_a
    d_b = 2 ** (space.L - n_a)
    # basis index = b * d_a + a, so row-major reshape exposes (b, a) axes
    o4 = o_mb.reshape(d_b, d_a, d_b, d_a)
    return np.einsum("iaib->ab", o4)


def operator_renyi_ed(
    h_single: "Hamiltonian | np.ndarray", site: int, n_a: int, t: float
) -> float:
    """Subsystem second Renyi entropy of the evolved number operator.

    ``-ln Tr_A[rho^2]`` with ``rho = Tr_B[n_site(t)] / Tr[n_site]`` over the
    full Fock space.
    """
    h = h_single.matrix if isinstance(h_single, Hamiltonian) else np.asarray(h_single)
    L = h.shape[0]
    if L > 10:
        raise CapacityError(f"operator entropy reference supports L <= 10, got {L}")
    space = FockSpace.full(L)
    h_mb = second_quantize(h, space)
    n_op = number_operator(space, site)
    z_norm = np.trace(n_op).real  # 2^(L-1) for a number operator
    o_t = evolve_operator(h_mb, n_op, t)
    rho_a = partial_trace_b(o_t, space, n_a) / z_norm
    purity = np.trace(rho_a @ rho_a).real
    return float(-np.log(purity))


def state_entropies_ed(
    h_single: "Hamiltonian | np.ndarray",
    occupied: np.ndarray,
    n_a: int,
    t: float,
) -> Tuple[float, float]:
    """Von Neumann and second Renyi entropies of the evolved product state.

    The state lives in the fixed particle-number sector of its occupation;
    returns ``(S_vN, S_renyi2)`` of the reduced density matrix on A.
    """
    h = h_single.matrix if isinstance(h_single, Hamiltonian) else np.asarray(h_single)
    L = h.shape[0]
    if L > 12:
        raise CapacityError(f"state entropy reference supports L <= 12, got {L}")
    occupied = np.asarray(occupied)
    space = FockSpace.fixed_n(L, L // 2)  # half-filled particle-number sector
    initial = int(np.sum(1 << occupied.astype(np.int64)))
    if initial not in space.index:
        raise ValueError("initial occupation does not lie in the half-filled sector")
    h_mb = second_quantize(h, space)
    energies, vecs = np.linalg.eigh(h_mb)
    psi0 = np.zeros(space.dim, dtype=complex)
    psi0[space.index[initial]] = 1.0
    psi_t = vecs @ (np.exp(-1j * energies * t) * (vecs.conj().T @ psi0))
    rho_a = reduced_density_matrix(psi_t, space, n_a)
    eigs = np.linalg.eigvalsh(rho_a)
    eigs = np.clip(eigs, 0.0, 1.0)
    nz = eigs[eigs > 1e-14]
    s_vn = float(-np.sum(nz * np.log(nz)))
    s_r2 = float(-np.log(np.sum(eigs**2)))
    return s_vn, s_r2


def reduced_density_matrix(psi: np.ndarray, space: FockSpace, n_a: int) -> np.ndarray:
    """Reduced density matrix on the A sites of a (sector) state vector."""
    d_a = 2**n_a
    d_b = 2 ** (space.L - n_a)
    full = np.zeros(2**space.L, dtype=complex)
    full[space.basis] = psi
    m = full.reshape(d_b, d_a)
    return np.einsum("ba,bc->ac", m, m.conj())
