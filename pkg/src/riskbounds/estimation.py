"""Measurement samples and their empirical summary statistics.

The standard deviation uses the unbiased (n - 1) denominator throughout.
Every plug-in bound in the package inherits this choice, so a bound computed
from the same data with an n-denominator sd would come out slightly smaller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DataError, DomainError


@dataclass(frozen=True)
class Sample:
    values: tuple
    unit_label: Optional[str] = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DataError("a sample needs at least one value")
        for i, v in enumerate(vals):
            if not math.isfinite(v):
                raise DataError(f"non-finite value {v!r} at position {i}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values: Iterable[float], unit_label: Optional[str] = None) -> "Sample":
        return cls(tuple(values), unit_label)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class MomentEstimates:
    n: int
    mean: float
    sd: float
    median: float
    min: float
    max: float

    def __post_init__(self):
        if self.sd < 0:
            raise DomainError(f"sd must be nonnegative, got {self.sd}")
        if not self.min <= self.median <= self.max:
            raise DomainError("expected min <= median <= max")


def sample_mean(values) -> float:
    return math.fsum(values) / len(values)


def sample_sd(values, mean: Optional[float] = None) -> float:
    """Unbiased standard deviation (n - 1 denominator)."""
    n = len(values)
    if n < 2:
        raise DataError(f"standard deviation needs at least 2 values, got {n}")
    if mean is None:
        mean = sample_mean(values)
    return math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))


def median(values) -> float:
    s = sorted(values)
    n = len(s)
    mid = n // 2
    if n % 2:
        return s[mid]
    return 0.5 * (s[mid - 1] + s[mid])


def summarize(sample: Sample) -> MomentEstimates:
    values = sample.values
    mean = sample_mean(values)
    sd = sample_sd(values, mean)
    if sd > 0 and all(v == values[0] for v in values):
        sd = 0.0
    return MomentEstimates(
        n=len(values),
        mean=mean,
        sd=sd,
        median=median(values),
        min=min(values),
        max=max(values),
    )


def order_statistic(sample: Sample, rank: int) -> float:
    """The rank-th smallest value (rank 1 is the minimum)."""
    n = sample.n
    if not 1 <= rank <= n:
        raise DomainError(f"rank must lie in [1, {n}], got {rank}")
    return sorted(sample.values)[rank - 1]
