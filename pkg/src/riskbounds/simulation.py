"""Monte Carlo conservatism studies.

A study repeatedly draws samples of size n from a known law, estimates the
risk of exceeding that law's true quantile of order q with each method, and
reports the fraction of estimates falling below the true risk 1 - q.

Replication r draws from substream (seed, r); its bootstrap seed is the next
output of that substream. Replications can therefore be farmed out to worker
processes in any grouping and reassembled by index with identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import distributions as dist
from .bootstrap import BootstrapConfig, bootstrap_bounds
from .concentration import CLOSED_FORM, Method, Provenance, closed_form_bound
from .errors import DomainError
from .estimation import Sample, sample_mean, sample_sd
from .rng import RandomStream
from .tolerance import alpha_from_kfactor

PLUGIN_METHODS = (Method.GAUSS, Method.BC, Method.CM, Method.VD)
BOOTSTRAP_METHODS = (Method.KFACTOR, Method.BC, Method.CM, Method.VD)
STUDY_BOOTSTRAP_REPLICATES = 500


@dataclass(frozen=True)
class StudyConfig:
    """Settings of one sampling study.

    `bootstrap` selects the penalization: None for plug-in moments, or a
    BootstrapConfig whose seed is ignored (each replication derives its own).
    The k-factor method is never bootstrapped; it is a tolerance bound at
    confidence `kfactor_confidence` in its own right.
    """

    spec: dist.DistributionSpec
    n: int
    replications: int = 5000
    true_quantile_order: float = 0.95
    methods: tuple = PLUGIN_METHODS
    bootstrap: Optional[BootstrapConfig] = None
    seed: int = 0
    kfactor_confidence: float = 0.95

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("need at least one replication")
        if self.n < 2:
            raise DomainError("sample size must be at least 2")
        if not 0.0 < self.true_quantile_order < 1.0:
            raise DomainError("true_quantile_order must lie in (0, 1)")
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))

    @property
    def penalization(self) -> str:
        return "plugin" if self.bootstrap is None else "bootstrap"


@dataclass
class StudyResult:
    config: StudyConfig
    threshold: float
    true_alpha: float
    estimates: dict = field(default_factory=dict)

    @property
    def proportion_nonconservative(self) -> dict:
        return {m: float(np.count_nonzero(a < self.true_alpha)) / a.size
                for m, a in self.estimates.items()}

    def standard_error(self, method: Method) -> float:
        p = self.proportion_nonconservative[method]
        return math.sqrt(p * (1.0 - p) / self.config.replications)


def _replicate_alphas(cfg: StudyConfig, threshold: float, index: int) -> list:
    stream = RandomStream.substream(cfg.seed, index)
    values = dist.sample(cfg.spec, stream, cfg.n).values
    mean = sample_mean(values)
    sd = sample_sd(values, mean)
    if sd == 0.0:
        return [1.0] * len(cfg.methods)

    out = {}
    if cfg.bootstrap is not None:
        boot_cfg = BootstrapConfig(cfg.bootstrap.replicates, cfg.bootstrap.confidence,
                                   stream.next_u64())
        boot = [m for m in cfg.methods if m in CLOSED_FORM]
        if boot:
            smp = Sample(values)
            for m, rb in zip(boot, bootstrap_bounds(smp, boot, threshold, boot_cfg)):
                out[m] = rb.alpha
    for m in cfg.methods:
        if m in out:
            continue
        if m is Method.KFACTOR:
            out[m] = alpha_from_kfactor(cfg.n, (threshold - mean) / sd, cfg.kfactor_confidence)
        else:
            out[m] = closed_form_bound(m, mean, sd, threshold, Provenance.PLUGIN_MOMENTS).alpha
    return [out[m] for m in cfg.methods]


def _run_chunk(args) -> np.ndarray:
    cfg, threshold, start, stop = args
    return np.array([_replicate_alphas(cfg, threshold, r) for r in range(start, stop)],
                    dtype=np.float64).reshape(stop - start, len(cfg.methods))


def sampling_study(cfg: StudyConfig, workers: int = 1, chunk_size: int = 250) -> StudyResult:
    """Run N replications; results are independent of `workers` and `chunk_size`."""
    threshold = dist.quantile(cfg.spec, cfg.true_quantile_order)
    true_alpha = 1.0 - cfg.true_quantile_order
    bounds = [(s, min(s + chunk_size, cfg.replications))
              for s in range(0, cfg.replications, chunk_size)]
    jobs = [(cfg, threshold, a, b) for a, b in bounds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]
    table = np.vstack(parts)
    estimates = {m: table[:, i].copy() for i, m in enumerate(cfg.methods)}
    return StudyResult(cfg, threshold, true_alpha, estimates)


@dataclass(frozen=True)
class KnownMomentsRow:
    spec: dist.DistributionSpec
    threshold: float
    true_alpha: float
    alphas: dict


def known_moments_study(specs=None, quantile_order: float = 0.95,
                        methods=CLOSED_FORM) -> list:
    """Exact-moment bounds at each law's quantile of order `quantile_order`."""
    if specs is None:
        specs = dist.reference_distributions()
    rows = []
    for spec in specs:
        s = dist.quantile(spec, quantile_order)
        alphas = {m: closed_form_bound(m, spec.mean, spec.sd, s, Provenance.EXACT_MOMENTS).alpha
                  for m in methods}
        rows.append(KnownMomentsRow(spec, s, dist.sf(spec, s), alphas))
    return rows


def wilks_nonconservative_bound(n: int, gamma_true: float) -> float:
    """Probability that a first-order Wilks limit from n draws is non-conservative.

    The sample maximum falls below the true gamma-quantile with probability gamma^n.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 0.0 <= gamma_true <= 1.0:
        raise DomainError("gamma_true must lie in [0, 1]")
    return gamma_true ** n
