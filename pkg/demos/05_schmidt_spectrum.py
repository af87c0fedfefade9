"""Schmidt values of the evolving state and their decay law.

For a Gaussian state the many-body Schmidt values factorize over the
single-particle entanglement levels h_m = ln[(1 - c_m)/c_m]; the ten
largest are found by an exact best-first search over level occupations.
Their decay in time follows the transport: ln Lambda ~ -t in a clean chain,
~ -sqrt(t) at the quasiperiodic critical point.
"""

import numpy as np

from keldysh_entropy import analysis, entropy, models, spectral
from keldysh_entropy.ensemble import typical_schmidt
from keldysh_entropy.models import LatticeSpec, ModelParams, Variant

L, K, n_real = 128, 6, 10
spec = LatticeSpec(dimension=1, L=L)
occupied = models.neel_occupation(spec)
a_sites = spec.a_sites()
times = np.geomspace(0.5, 60.0, 24)

for v, beta in ((0.0, 1.0), (1.0, 0.5)):
    params = ModelParams(variant=Variant.AA1D, V=v, seed=21)
    logs = np.zeros((n_real, len(times), K))
    for r in range(n_real):
        realization = models.draw_realization(params, r)
        d = spectral.diagonalize(models.build_hamiltonian(spec, params, realization))
        ev = entropy.StateCorrelationEvaluator(d, occupied, a_sites)
        for k, t in enumerate(times):
            logs[r, k] = entropy.schmidt_spectrum(ev(t), K).log_top

    typical_log = typical_schmidt(logs, log_domain=True)
    print(f"\nV = {v}: typical ln Lambda_i (geometric mean over {n_real} realizations)")
    print(f"{'t':>7}  " + "  ".join(f"ln L_{i+1:<2}" for i in range(K)))
    for k in range(0, len(times), 6):
        row = "  ".join(f"{typical_log[k, i]:7.2f}" for i in range(K))
        print(f"{times[k]:7.2f}  {row}")

    fit = analysis.fit_schmidt_decay(times, typical_log, beta=beta, window=(3.0, 40.0))
    alt = analysis.fit_schmidt_decay(times, typical_log, beta=1.5 - beta, window=(3.0, 40.0))
    print(f"ln Lambda ~ -d t^{beta}: min R^2 = {fit.r_squared.min():.4f} "
          f"(alternative beta {1.5 - beta}: {alt.r_squared.min():.4f})")
