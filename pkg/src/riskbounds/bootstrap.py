"""Bootstrap-penalized risk bounds.

Each of B resamples (n values drawn with replacement) yields a plug-in bound;
the penalized bound is the upper empirical beta-quantile of those B values,
taken as the ceil(beta * B)-th smallest. Resample b draws its indices from
substream (seed, b), so the result does not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng, specfun
from .concentration import Method, Provenance, RiskBound, alpha_from_score
from .errors import DataError, DomainError
from .estimation import Sample, sample_sd
from .tolerance import alpha_from_kfactor

DEFAULT_REPLICATES = 10_000
DEFAULT_CONFIDENCE = 0.95
# bounds the (chunk x n) index matrix held in memory at once
_CHUNK_CELLS = 2_000_000


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = DEFAULT_REPLICATES
    confidence: float = DEFAULT_CONFIDENCE
    seed: int = 0

    def __post_init__(self):
        if int(self.replicates) != self.replicates or self.replicates < 100:
            raise DomainError(f"need at least 100 bootstrap replicates, got {self.replicates}")
        specfun.check_probability(self.confidence, "confidence", open_interval=True)
        object.__setattr__(self, "seed", int(self.seed) & rng.MASK64)


def resample(sample: Sample, stream: rng.RandomStream) -> Sample:
    """One with-replacement resample of the same size."""
    n = sample.n
    if n < 2:
        raise DataError("resampling needs at least 2 values")
    return Sample(tuple(sample.values[stream.index(n)] for _ in range(n)), sample.unit_label)


def resample_indices(n: int, seed: int, start: int, count: int) -> np.ndarray:
    """Index matrix of resamples start .. start + count - 1, shape (count, n).

    Row b equals the indices `resample` draws from RandomStream.substream(seed, b).
    """
    states = rng.derive_seeds(seed, count, start)
    return rng.unit_to_index(rng.u64_to_unit(rng.block_u64(states, n)), n)


def resample_moments(sample: Sample, cfg: BootstrapConfig):
    """Mean and unbiased sd of every resample, as two length-B arrays."""
    values = sample.as_array()
    n = values.size
    if n < 2:
        raise DataError("bootstrap needs at least 2 values")
    means = np.empty(cfg.replicates)
    sds = np.empty(cfg.replicates)
    chunk = max(1, _CHUNK_CELLS // n)
    for start in range(0, cfg.replicates, chunk):
        count = min(chunk, cfg.replicates - start)
        draws = values[resample_indices(n, cfg.seed, start, count)]
        means[start:start + count] = draws.mean(axis=1)
        sds[start:start + count] = draws.std(axis=1, ddof=1)
        # a resample of one repeated value has sd exactly 0
        constant = (draws == draws[:, :1]).all(axis=1)
        sds[start:start + count][constant] = 0.0
    return means, sds


def _scores(sample: Sample, s: float, cfg: BootstrapConfig) -> np.ndarray:
    means, sds = resample_moments(sample, cfg)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (s - means) / sds
    z[sds == 0.0] = -np.inf
    return z


def _alpha_for_score(method: Method, z: float, n: int, beta: float) -> float:
    if z == -np.inf:
        return 1.0
    if method is Method.KFACTOR:
        return alpha_from_kfactor(n, z, beta)
    return alpha_from_score(method, z)


def _check_original(sample: Sample) -> None:
    if sample.n < 2:
        raise DataError("bootstrap needs at least 2 values")
    if sample_sd(sample.values) == 0.0 or len(set(sample.values)) == 1:
        raise DataError("bootstrap needs a sample with nonzero standard deviation")


def quantile_rank(confidence: float, replicates: int) -> int:
    """1-based rank of the upper empirical quantile: ceil(beta * B)."""
    # round away representation noise such as 0.95 * 500 = 474.99999999999994
    return max(1, min(replicates, math.ceil(round(confidence * replicates, 9))))


def bootstrap_alphas(sample: Sample, method: Method, s: float, cfg: BootstrapConfig,
                     kfactor_confidence: float = None) -> np.ndarray:
    """All B per-resample bounds, in resample order."""
    method = Method(method)
    _check_original(sample)
    beta = cfg.confidence if kfactor_confidence is None else kfactor_confidence
    z = _scores(sample, s, cfg)
    return np.array([_alpha_for_score(method, float(v), sample.n, beta) for v in z])


def _select(method: Method, z: np.ndarray, sample: Sample, s: float, cfg: BootstrapConfig,
            beta: float) -> RiskBound:
    j = quantile_rank(cfg.confidence, cfg.replicates)
    # j-th largest z == (B - j + 1)-th smallest, 0-based index B - j
    z_sel = float(np.partition(z, cfg.replicates - j)[cfg.replicates - j])
    alpha = _alpha_for_score(method, z_sel, sample.n, beta)
    mean = math.fsum(sample.values) / sample.n
    return RiskBound(method, s, alpha, Provenance.BOOTSTRAP,
                     vacuous=s <= mean, confidence=cfg.confidence)


def bootstrap_bound(sample: Sample, method: Method, s: float, cfg: BootstrapConfig,
                    kfactor_confidence: float = None) -> RiskBound:
    """Penalized bound: the ceil(beta * B)-th smallest of the B resample bounds.

    Every per-resample bound is a nonincreasing function of the standardized
    threshold z_b = (s - mean_b) / sd_b, so the selected bound is that function
    applied to the ceil(beta * B)-th largest z_b; only one bound is evaluated.
    """
    return bootstrap_bounds(sample, [method], s, cfg, kfactor_confidence)[0]


def bootstrap_bounds(sample: Sample, methods, s: float, cfg: BootstrapConfig,
                     kfactor_confidence: float = None) -> list:
    """bootstrap_bound for several methods sharing one set of resamples."""
    methods = [Method(m) for m in methods]
    _check_original(sample)
    beta = cfg.confidence if kfactor_confidence is None else kfactor_confidence
    z = _scores(sample, s, cfg)
    return [_select(m, z, sample, s, cfg, beta) for m in methods]
