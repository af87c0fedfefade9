"""Entanglement and operator-entropy growth in free-fermion lattices.

The package computes the growth of a subsystem operator Renyi entropy for a
local number operator, and of state entanglement entropies after a quench
from a product state, for non-interacting fermions on disordered and
quasiperiodic lattices.  Everything is evaluated from L_A x L_A correlation
matrices assembled out of single-particle Keldysh Green's functions, so the
cost per time point is polynomial in the number of sites.

Layout
------
models    : lattice Hamiltonians (quasiperiodic 1D/2D, random 2D, clean)
spectral  : dense eigendecomposition and unitary propagators
greens    : lesser/greater Green's functions on the closed time contour
entropy   : correlation matrices, Renyi / von Neumann entropies, Schmidt values
ed_oracle : brute-force many-body reference for small chains
ensemble  : disorder sweeps over realizations, sizes and time grids
analysis  : saturation times, power-law exponents, Schmidt decay fits
cli       : configuration, experiment runner and persistence
"""

from . import analysis, ed_oracle, ensemble, entropy, greens, models, spectral

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "ed_oracle",
    "ensemble",
    "entropy",
    "greens",
    "models",
    "spectral",
    "__version__",
]
