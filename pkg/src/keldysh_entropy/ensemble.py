"""Disorder sweeps over realizations, system sizes and time grids.

A sweep task is one (size, realization) pair: build the Hamiltonian,
diagonalize it once, then walk the full log-spaced time grid evaluating every
requested observable against the shared decomposition.  Tasks are
independent, so they may run across worker processes; results are merged in
realization-index order, which keeps every output bitwise independent of the
worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import entropy, models, spectral
from .errors import ConfigurationError, DiagonalizationError, SweepError
from .models import LatticeSpec, ModelParams, Variant

logger = logging.getLogger(__name__)

OBSERVABLES = ("dsop", "s1", "s2", "sn", "schmidt")

DEFAULT_POINTS_PER_DECADE = 16
DEFAULT_T_MIN = 0.1
BALLISTIC_T_MAX_FACTOR = 20.0  # t_max = 20 L   in the ballistic regime
DIFFUSIVE_T_MAX_FACTOR = 20.0  # t_max = 20 L^2 for critical/diffusive sweeps


@dataclass(frozen=True)
class TimeGridSpec:
    """Log-spaced grid; ``t_max = None`` picks the regime default per size."""

    t_min: float = DEFAULT_T_MIN
    t_max: Optional[float] = None
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE

    def __post_init__(self):
        if self.t_min <= 0:
            raise ConfigurationError(f"t_min must be positive, got {self.t_min}")
        if self.t_max is not None and self.t_max <= self.t_min:
            raise ConfigurationError("t_max must exceed t_min")
        if self.points_per_decade < 1:
            raise ConfigurationError("points_per_decade must be >= 1")

    def resolve_t_max(self, params: ModelParams, L: int) -> float:
        if self.t_max is not None:
            return self.t_max
        diffusive = params.variant is Variant.ANDERSON2D or (
            params.variant in (Variant.AA1D, Variant.AA2D) and params.V >= 1.0
        )
        return (DIFFUSIVE_T_MAX_FACTOR * L * L) if diffusive else (BALLISTIC_T_MAX_FACTOR * L)

    def times(self, params: ModelParams, L: int) -> np.ndarray:
        t_max = self.resolve_t_max(params, L)
        n = int(round(self.points_per_decade * math.log10(t_max / self.t_min))) + 1
        return np.geomspace(self.t_min, t_max, max(n, 2))


@dataclass(frozen=True)
class SweepConfig:
    """Everything one disorder sweep needs."""

    params: ModelParams
    sizes: Tuple[int, ...]
    observables: Tuple[str, ...]
    n_realizations: int = 100
    grid: TimeGridSpec = field(default_factory=TimeGridSpec)
    renyi_n: Optional[float] = None
    schmidt_k: int = 10
    workers: int = 1
    dimension: Optional[int] = None  # required for the clean model only

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ConfigurationError("need at least one realization")
        if not self.observables:
            raise ConfigurationError("request at least one observable")
        for obs in self.observables:
            if obs not in OBSERVABLES:
                raise ConfigurationError(
                    f"unknown observable {obs!r}; expected subset of {OBSERVABLES}"
                )
        if "sn" in self.observables and not (self.renyi_n and self.renyi_n > 1):
            raise ConfigurationError("observable 'sn' needs renyi_n > 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "observables", tuple(self.observables))

    def lattice(self, L: int) -> LatticeSpec:
        v = self.params.variant
        if v is Variant.AA1D:
            dim = 1
        elif v in (Variant.AA2D, Variant.ANDERSON2D):
            dim = 2
        elif self.dimension in (1, 2):
            dim = self.dimension
        else:
            raise ConfigurationError("the clean model needs dimension 1 or 2")
        return LatticeSpec(dimension=dim, L=L)


@dataclass(frozen=True)
class EntropySeries:
    """Times, per-realization curves, their mean and standard error."""

    times: np.ndarray
    values: np.ndarray  # shape (n_kept_realizations, n_times)
    realization_indices: Tuple[int, ...]
    mean: np.ndarray
    stderr: np.ndarray

    @classmethod
    def from_values(cls, times, values, indices) -> "EntropySeries":
        values = np.asarray(values)
        mean = values.mean(axis=0)
        if values.shape[0] > 1:
            stderr = values.std(axis=0, ddof=1) / math.sqrt(values.shape[0])
        else:
            stderr = np.zeros_like(mean)
        return cls(
            times=np.asarray(times),
            values=values,
            realization_indices=tuple(indices),
            mean=mean,
            stderr=stderr,
        )


@dataclass(frozen=True)
class SchmidtSeries:
    """Per-realization ``ln Lambda_i`` curves and their typical values."""

    times: np.ndarray
    log_values: np.ndarray  # shape (n_kept, n_times, k)
    realization_indices: Tuple[int, ...]
    typical_log: np.ndarray  # shape (n_times, k)


@dataclass
class SweepResult:
    series: Dict[Tuple[int, str], EntropySeries]
    schmidt: Dict[int, SchmidtSeries]
    skipped: List[Tuple[int, int, str]]

    def times(self, L: int) -> np.ndarray:
        for (size, _), s in self.series.items():
            if size == L:
                return s.times
        if L in self.schmidt:
            return self.schmidt[L].times
        raise KeyError(f"no series for L={L}")


def _evaluate_task(cfg: SweepConfig, L: int, index: int):
    """One (size, realization) unit: returns {observable: curve} arrays."""
    lattice = cfg.lattice(L)
    realization = models.draw_realization(cfg.params, index, n_sites=lattice.n_sites)
    h = models.build_hamiltonian(lattice, cfg.params, realization)
    d = spectral.diagonalize(h)
    times = cfg.grid.times(cfg.params, L)
    a_sites = lattice.a_sites()
    out: Dict[str, np.ndarray] = {}

    if "dsop" in cfg.observables:
        op_eval = entropy.OperatorCorrelationEvaluator(d, models.operator_site(lattice), a_sites)
        s_zero = entropy.renyi2_entropy(op_eval(0.0))
        s_op = np.array([entropy.renyi2_entropy(op_eval(t)) for t in times])
        out["dsop"] = entropy.delta_operator_entropy(times, s_op, s_zero)

    state_obs = [o for o in cfg.observables if o in ("s1", "s2", "sn", "schmidt")]
    if state_obs:
        st_eval = entropy.StateCorrelationEvaluator(
            d, models.neel_occupation(lattice), a_sites
        )
        curves = {o: np.empty(len(times)) for o in state_obs if o != "schmidt"}
        schmidt_log = (
            np.empty((len(times), cfg.schmidt_k)) if "schmidt" in state_obs else None
        )
        for i, t in enumerate(times):
            c = st_eval(t)
            if "s1" in curves:
                curves["s1"][i] = entropy.von_neumann_entropy(c)
            if "s2" in curves:
                curves["s2"][i] = entropy.renyi2_entropy(c)
            if "sn" in curves:
                curves["sn"][i] = entropy.renyi_n_entropy(c, cfg.renyi_n)
            if schmidt_log is not None:
                schmidt_log[i] = entropy.schmidt_spectrum(c, cfg.schmidt_k).log_top
        out.update(curves)
        if schmidt_log is not None:
            out["schmidt"] = schmidt_log
    return out


def _task_wrapper(cfg: SweepConfig, L: int, index: int):
    try:
        return L, index, _evaluate_task(cfg, L, index), None
    except DiagonalizationError as exc:
        return L, index, None, str(exc)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Run the full sweep; deterministic for a given seed and config.

    Realizations whose eigensolve fails are skipped and counted; more than
    10% skips abort the sweep.  Averages are taken in realization-index
    order over the surviving curves.
    """
    tasks = [(L, r) for L in cfg.sizes for r in range(cfg.n_realizations)]
    results: Dict[Tuple[int, int], Dict[str, np.ndarray]] = {}
    skipped: List[Tuple[int, int, str]] = []

    if cfg.workers == 1:
        outcomes = (_task_wrapper(cfg, L, r) for (L, r) in tasks)
        for L, r, payload, err in outcomes:
            if err is None:
                results[(L, r)] = payload
            else:
                logger.warning("skipping L=%d realization %d: %s", L, r, err)
                skipped.append((L, r, err))
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_task_wrapper, cfg, L, r) for (L, r) in tasks]
            for fut in as_completed(futures):
                L, r, payload, err = fut.result()
                if err is None:
                    results[(L, r)] = payload
                else:
                    logger.warning("skipping L=%d realization %d: %s", L, r, err)
                    skipped.append((L, r, err))

    if len(skipped) > 0.1 * len(tasks):
        raise SweepError(
            f"{len(skipped)} of {len(tasks)} realizations failed the eigensolve"
        )

    series: Dict[Tuple[int, str], EntropySeries] = {}
    schmidt: Dict[int, SchmidtSeries] = {}
    for L in cfg.sizes:
        times = cfg.grid.times(cfg.params, L)
        kept = [r for r in range(cfg.n_realizations) if (L, r) in results]
        if not kept:
            raise SweepError(f"no surviving realizations at L={L}")
        for obs in cfg.observables:
            if obs == "schmidt":
                logs = np.stack([results[(L, r)]["schmidt"] for r in kept])
                schmidt[L] = SchmidtSeries(
                    times=times,
                    log_values=logs,
                    realization_indices=tuple(kept),
                    typical_log=logs.mean(axis=0),
                )
            else:
                values = np.stack([results[(L, r)][obs] for r in kept])
                series[(L, obs)] = EntropySeries.from_values(times, values, kept)
    return SweepResult(series=series, schmidt=schmidt, skipped=sorted(skipped))


def typical_schmidt(values: np.ndarray, log_domain: bool = False) -> np.ndarray:
    """Geometric mean over realizations, per Schmidt index and time.

    ``values`` has shape (n_realizations, n_times, k).  With
    ``log_domain=True`` the input already holds ``ln Lambda`` and the result
    is ``ln Lambda_typ``; otherwise values must be positive.
    """
    values = np.asarray(values)
    if values.ndim != 3:
        raise ValueError("expected shape (n_realizations, n_times, k)")
    if log_domain:
        return values.mean(axis=0)
    if np.any(values <= 0):
        raise ValueError("Schmidt values must be positive for a geometric mean")
    return np.exp(np.log(values).mean(axis=0))
