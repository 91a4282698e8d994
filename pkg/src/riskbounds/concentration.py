"""Closed-form risk bounds from the first two moments.

The three concentration inequalities share the one-sided form

    P(X >= mean + t) <= 1 / (1 + t^2 / (k sd^2)),    t >= 0

with k = 1 (Bienayme-Chebyshev-Cantelli, no shape assumption), k = 4/9
(Camp-Meidell, unimodal density) and k = 3/8 (Van Dantzig, convex density
tail). The Gaussian approximation is included for comparison; it is exact
only for normal data and understates the risk for right-skewed samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from . import specfun
from .errors import DomainError


class Method(str, Enum):
    GAUSS = "gauss"
    BC = "bc"
    CM = "cm"
    VD = "vd"
    KFACTOR = "kfactor"

    @property
    def k(self) -> Optional[Fraction]:
        return _K.get(self)

    @property
    def is_inequality(self) -> bool:
        return self in _K

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def hypothesis(self) -> str:
        return _HYPOTHESES[self]


_K = {Method.BC: Fraction(1), Method.CM: Fraction(4, 9), Method.VD: Fraction(3, 8)}
_LABELS = {Method.GAUSS: "Gauss", Method.BC: "BC", Method.CM: "CM", Method.VD: "VD",
           Method.KFACTOR: "k-factor"}
_HYPOTHESES = {
    Method.GAUSS: "Gaussian distribution (non-conservative under skew)",
    Method.BC: "None",
    Method.CM: "Unimodality of the pdf",
    Method.VD: "Convexity of the pdf's tail",
    Method.KFACTOR: "Gaussian distribution (non-conservative under skew)",
}

INEQUALITIES = (Method.BC, Method.CM, Method.VD)
CLOSED_FORM = (Method.GAUSS, Method.BC, Method.CM, Method.VD)


def parse_methods(text: str) -> list:
    """Parse a comma list such as `bc,cm` or `all` into methods."""
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token == "all":
            out.extend(m for m in CLOSED_FORM if m not in out)
            continue
        try:
            m = Method(token)
        except ValueError:
            raise DomainError(f"unknown method {token!r}") from None
        if m not in out:
            out.append(m)
    if not out:
        raise DomainError("no method selected")
    return out


class Provenance(str, Enum):
    EXACT_MOMENTS = "exact_moments"
    PLUGIN_MOMENTS = "plugin_moments"
    BOOTSTRAP = "bootstrap"


@dataclass(frozen=True)
class RiskBound:
    method: Method
    threshold: float
    alpha: float
    provenance: Provenance
    vacuous: bool = False
    confidence: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha}")
        if (self.confidence is not None) != (self.provenance is Provenance.BOOTSTRAP
                                              or self.method is Method.KFACTOR):
            raise DomainError("confidence is set exactly for bootstrap and k-factor bounds")


def _check_sd(sd: float) -> None:
    if not sd > 0:
        raise DomainError(f"sd must be positive, got {sd}")


def inequality_alpha(k: float, z: float) -> float:
    """Bound as a function of the standardized threshold z = (s - mean) / sd."""
    if z <= 0:
        return 1.0
    return 1.0 / (1.0 + z * z / k)


def concentration_bound(method: Method, mean: float, sd: float, s: float,
                        provenance: Provenance = Provenance.PLUGIN_MOMENTS) -> RiskBound:
    method = Method(method)
    if not method.is_inequality:
        raise DomainError(f"{method.value} is not a concentration inequality")
    _check_sd(sd)
    t = s - mean
    alpha = inequality_alpha(float(method.k), t / sd)
    return RiskBound(method, s, alpha, provenance, vacuous=t <= 0)


def gaussian_risk(mean: float, sd: float, s: float,
                  provenance: Provenance = Provenance.PLUGIN_MOMENTS) -> RiskBound:
    _check_sd(sd)
    alpha = specfun.std_normal_sf((s - mean) / sd)
    return RiskBound(Method.GAUSS, s, alpha, provenance)


def closed_form_bound(method: Method, mean: float, sd: float, s: float,
                      provenance: Provenance = Provenance.PLUGIN_MOMENTS) -> RiskBound:
    if Method(method) is Method.GAUSS:
        return gaussian_risk(mean, sd, s, provenance)
    return concentration_bound(method, mean, sd, s, provenance)


def alpha_from_score(method: Method, z: float) -> float:
    """Closed-form alpha from z = (s - mean) / sd; nonincreasing in z."""
    if method is Method.GAUSS:
        return specfun.std_normal_sf(z)
    return inequality_alpha(float(method.k), z)


def threshold_for_risk(method: Method, mean: float, sd: float, alpha: float) -> float:
    """Threshold s whose bound equals `alpha` (inverse of the forward bound)."""
    method = Method(method)
    alpha = specfun.check_probability(alpha, "alpha", open_interval=True)
    _check_sd(sd)
    if method is Method.GAUSS:
        return mean + sd * specfun.std_normal_quantile(1.0 - alpha)
    if not method.is_inequality:
        raise DomainError(f"{method.value} has no closed-form threshold")
    return mean + sd * math.sqrt(float(method.k) * (1.0 - alpha) / alpha)


def gaussian_equivalent_k(alpha: float) -> float:
    """The k for which the generic inequality reproduces the exact Gaussian tail."""
    alpha = specfun.check_probability(alpha, "alpha", open_interval=True)
    z = specfun.std_normal_quantile(1.0 - alpha)
    return z * z * alpha / (1.0 - alpha)
