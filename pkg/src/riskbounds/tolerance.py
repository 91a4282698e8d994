"""One-sided normal tolerance factors (Owen's k-factor) and their inversion."""

from __future__ import annotations

import math

from . import specfun
from .concentration import Method, Provenance, RiskBound
from .errors import DomainError, NumericalError

ALPHA_MIN = 1e-10
ALPHA_MAX = 1.0 - 1e-10
ALPHA_TOL = 1e-10


def _check_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")


def k_factor(n: int, alpha: float, beta: float) -> float:
    """Factor k with P[P(X <= mean_n + k sd_n) >= 1 - alpha] = beta for normal X.

    k = t_{n-1, beta, delta} / sqrt(n), where t is the beta-quantile of the
    non-central t law with n - 1 degrees of freedom and delta = z_{1-alpha} sqrt(n).
    """
    _check_n(n)
    alpha = specfun.check_probability(alpha, "alpha", open_interval=True)
    beta = specfun.check_probability(beta, "beta", open_interval=True)
    root_n = math.sqrt(n)
    delta = specfun.std_normal_quantile(1.0 - alpha) * root_n
    return specfun.noncentral_t_quantile(beta, n - 1, delta) / root_n


def alpha_from_kfactor(n: int, k_obs: float, beta: float) -> float:
    """Risk alpha whose k-factor at confidence `beta` equals k_obs = (s - mean) / sd.

    Solved by bisection on alpha in [1e-10, 1 - 1e-10]; values of k_obs beyond
    that range return the nearest endpoint. k_factor(n, alpha, beta) > k_obs
    exactly when the non-central t CDF at k_obs sqrt(n) falls below beta, so
    each step costs one CDF evaluation rather than a quantile inversion.
    """
    _check_n(n)
    beta = specfun.check_probability(beta, "beta", open_interval=True)
    k_obs = float(k_obs)
    if not math.isfinite(k_obs):
        raise DomainError(f"k_obs must be finite, got {k_obs!r}")
    root_n = math.sqrt(n)
    x = k_obs * root_n
    dof = n - 1

    def excess(alpha: float) -> float:
        delta = specfun.std_normal_quantile(1.0 - alpha) * root_n
        return specfun.noncentral_t_cdf(x, dof, delta) - beta

    lo, hi = ALPHA_MIN, ALPHA_MAX
    if excess(lo) >= 0.0:
        return lo
    if excess(hi) <= 0.0:
        return hi
    for _ in range(200):
        if hi - lo <= ALPHA_TOL:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    raise NumericalError("alpha_from_kfactor bisection did not converge")


def kfactor_bound(mean: float, sd: float, n: int, s: float, beta: float,
                  provenance: Provenance = Provenance.PLUGIN_MOMENTS) -> RiskBound:
    """k-factor risk for threshold s; vacuous when s does not exceed the mean."""
    if not sd > 0:
        raise DomainError(f"sd must be positive, got {sd}")
    k_obs = (s - mean) / sd
    alpha = alpha_from_kfactor(n, k_obs, beta)
    return RiskBound(Method.KFACTOR, s, alpha, provenance, vacuous=k_obs <= 0, confidence=beta)
