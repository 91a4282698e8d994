"""Normal and log-normal test distributions.

Log-normal laws are parametrized by their arithmetic mean and standard
deviation. `mean_for_mode` finds the mean that places the density maximum at
a requested value for a given sd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import specfun
from .errors import DomainError, NumericalError
from .estimation import Sample
from .rng import RandomStream


class Family(str, Enum):
    NORMAL = "normal"
    LOGNORMAL = "lognormal"


@dataclass(frozen=True)
class DistributionSpec:
    family: Family
    mean: float
    sd: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (math.isfinite(self.mean) and math.isfinite(self.sd)):
            raise DomainError("mean and sd must be finite")
        if self.sd <= 0:
            raise DomainError(f"sd must be positive, got {self.sd}")
        if self.family is Family.LOGNORMAL and self.mean <= 0:
            raise DomainError(f"a log-normal mean must be positive, got {self.mean}")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse `family:mean:sd`, e.g. `lognormal:237.86:70`."""
        parts = text.strip().split(":")
        if len(parts) != 3:
            raise DomainError(f"expected family:mean:sd, got {text!r}")
        try:
            family = Family(parts[0].strip().lower())
        except ValueError:
            raise DomainError(f"unknown family {parts[0]!r}") from None
        try:
            mean, sd = float(parts[1]), float(parts[2])
        except ValueError:
            raise DomainError(f"non-numeric mean or sd in {text!r}") from None
        return cls(family, mean, sd)

    def __str__(self) -> str:
        return f"{self.family.value}:{self.mean:g}:{self.sd:g}"

    @property
    def label(self) -> str:
        prefix = "N" if self.family is Family.NORMAL else "LN"
        return f"{prefix}({self.mean:.2f},{self.sd:g})"


@dataclass(frozen=True)
class LogNormalInternal:
    log_mean: float
    log_sd: float

    @property
    def mean(self) -> float:
        return math.exp(self.log_mean + 0.5 * self.log_sd ** 2)

    @property
    def sd(self) -> float:
        s2 = self.log_sd ** 2
        return self.mean * math.sqrt(math.expm1(s2))

    @property
    def mode(self) -> float:
        return math.exp(self.log_mean - self.log_sd ** 2)


def normal(mean: float, sd: float) -> DistributionSpec:
    return DistributionSpec(Family.NORMAL, mean, sd)


def lognormal(mean: float, sd: float) -> DistributionSpec:
    return DistributionSpec(Family.LOGNORMAL, mean, sd)


def lognormal_internal(spec: DistributionSpec) -> LogNormalInternal:
    if spec.family is not Family.LOGNORMAL:
        raise DomainError("lognormal_internal needs a log-normal spec")
    s2 = math.log1p((spec.sd / spec.mean) ** 2)
    return LogNormalInternal(math.log(spec.mean) - 0.5 * s2, math.sqrt(s2))


def lognormal_mode(mean: float, sd: float) -> float:
    # exp(mu_L - sigma_L^2) = mean * (1 + sd^2 / mean^2)^(-3/2)
    return mean * (1.0 + (sd / mean) ** 2) ** -1.5


def mean_for_mode(mode: float, sd: float, rtol: float = 1e-8) -> float:
    """Mean of the log-normal with standard deviation `sd` whose mode is `mode`."""
    if not (mode > 0 and sd > 0):
        raise DomainError("mode and sd must be positive")
    lo, hi = mode, mode + 10.0 * sd
    if not lognormal_mode(lo, sd) <= mode <= lognormal_mode(hi, sd):
        raise NumericalError(f"cannot bracket the mean for mode={mode}, sd={sd}")
    while hi - lo > rtol * lo:
        mid = 0.5 * (lo + hi)
        if lognormal_mode(mid, sd) < mode:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lognormal_with_mode(mode: float, sd: float) -> DistributionSpec:
    return lognormal(mean_for_mode(mode, sd), sd)


def reference_distributions() -> list:
    """The four reference laws: N(210, 20) and log-normals with mode 210, sd 30/50/70."""
    return [normal(210.0, 20.0)] + [lognormal_with_mode(210.0, sd) for sd in (30.0, 50.0, 70.0)]


def cdf(spec: DistributionSpec, x: float) -> float:
    if spec.family is Family.NORMAL:
        return specfun.std_normal_cdf((x - spec.mean) / spec.sd)
    if x <= 0:
        return 0.0
    ln = lognormal_internal(spec)
    return specfun.std_normal_cdf((math.log(x) - ln.log_mean) / ln.log_sd)


def sf(spec: DistributionSpec, x: float) -> float:
    """P(X > x), computed on the upper tail directly."""
    if spec.family is Family.NORMAL:
        return specfun.std_normal_sf((x - spec.mean) / spec.sd)
    if x <= 0:
        return 1.0
    ln = lognormal_internal(spec)
    return specfun.std_normal_sf((math.log(x) - ln.log_mean) / ln.log_sd)


def pdf(spec: DistributionSpec, x: float) -> float:
    if spec.family is Family.NORMAL:
        return specfun.std_normal_pdf((x - spec.mean) / spec.sd) / spec.sd
    if x <= 0:
        return 0.0
    ln = lognormal_internal(spec)
    return specfun.std_normal_pdf((math.log(x) - ln.log_mean) / ln.log_sd) / (x * ln.log_sd)


def quantile(spec: DistributionSpec, p: float) -> float:
    z = specfun.std_normal_quantile(p)
    if spec.family is Family.NORMAL:
        return spec.mean + spec.sd * z
    ln = lognormal_internal(spec)
    return math.exp(ln.log_mean + ln.log_sd * z)


def mode(spec: DistributionSpec) -> float:
    if spec.family is Family.NORMAL:
        return spec.mean
    return lognormal_internal(spec).mode


def sample(spec: DistributionSpec, stream: RandomStream, n: int) -> Sample:
    """n draws by inverse transform of the stream's uniforms."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return Sample(tuple(quantile(spec, stream.uniform()) for _ in range(n)))
