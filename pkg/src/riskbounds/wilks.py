"""Order-statistic (Wilks) tolerance limits.

For an i.i.d. sample of size n, the rank-r order statistic X_(r) exceeds the
gamma-quantile with probability

    G(gamma) = sum_{i=0}^{r-1} C(n, i) gamma^i (1 - gamma)^(n-i) = P(Binomial(n, gamma) <= r - 1)

and X_(r) is accepted as an upper tolerance limit at confidence beta when
G(gamma) >= beta. For the sample maximum (r = n) this is 1 - gamma^n >= beta.
Order o counts from the top: o = 1 is the maximum and r = n - o + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

from . import specfun
from .errors import DomainError
from .estimation import Sample, order_statistic


def _check_rank(n: int, rank: int) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 1 <= rank <= n:
        raise DomainError(f"rank must lie in [1, {n}], got {rank}")


def wilks_confidence(n: int, rank: int, gamma: float) -> float:
    """Confidence that X_(rank) bounds the gamma-quantile from above."""
    _check_rank(n, rank)
    gamma = specfun.check_probability(gamma, "gamma")
    return specfun.binomial_cdf(rank - 1, n, gamma)


def wilks_confidence_direct(n: int, rank: int, gamma: float) -> float:
    """Same quantity by explicit summation of binomial terms (small n)."""
    _check_rank(n, rank)
    return math.fsum(comb(n, i) * gamma ** i * (1.0 - gamma) ** (n - i) for i in range(rank))


@dataclass(frozen=True)
class WilksPlan:
    n: int
    order: int
    rank: int
    gamma: float
    beta: float

    def __post_init__(self):
        if not 1 <= self.order <= self.n:
            raise DomainError(f"order must lie in [1, {self.n}], got {self.order}")
        if self.rank != self.n - self.order + 1:
            raise DomainError("rank must equal n - order + 1")
        if wilks_confidence(self.n, self.rank, self.gamma) < self.beta:
            raise DomainError("plan does not reach the requested confidence")

    @property
    def alpha(self) -> float:
        return 1.0 - self.gamma

    @property
    def confidence(self) -> float:
        return wilks_confidence(self.n, self.rank, self.gamma)


def wilks_min_n(gamma: float, beta: float, order: int = 1) -> int:
    """Smallest n for which the order-th largest value is a (gamma, beta) limit."""
    gamma = specfun.check_probability(gamma, "gamma", open_interval=True)
    beta = specfun.check_probability(beta, "beta", open_interval=True)
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    # first-order closed form is a lower bound for every order
    n = max(order, math.ceil(math.log1p(-beta) / math.log(gamma)) - 1, 1)
    while n > order and wilks_confidence(n - 1, n - order, gamma) >= beta:
        n -= 1
    while wilks_confidence(n, n - order + 1, gamma) < beta:
        n += 1
    return n


def wilks_gamma(n: int, rank: int, beta: float, tol: float = 1e-12) -> float:
    """Largest gamma (to `tol`) with G(gamma) >= beta.

    G is strictly decreasing in gamma, so bisection keeps the lower end of the
    bracket, where the confidence requirement holds.
    """
    _check_rank(n, rank)
    beta = specfun.check_probability(beta, "beta", open_interval=True)
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if wilks_confidence(n, rank, mid) >= beta:
            lo = mid
        else:
            hi = mid
    return lo


def wilks_plan(n: int, order: int, beta: float) -> WilksPlan:
    if not 1 <= order <= n:
        raise DomainError(f"order must lie in [1, {n}], got {order}")
    rank = n - order + 1
    return WilksPlan(n, order, rank, wilks_gamma(n, rank, beta), beta)


@dataclass(frozen=True)
class WilksAssessment:
    threshold: float
    alpha: float
    plan: WilksPlan


def wilks_assess(sample: Sample, order: int, beta: float) -> WilksAssessment:
    """Tolerance limit from the sample's order-th largest value and its risk."""
    n = sample.n
    if not 1 <= order <= n:
        raise DomainError(f"order must lie in [1, {n}], got {order}")
    plan = wilks_plan(n, order, beta)
    return WilksAssessment(order_statistic(sample, plan.rank), plan.alpha, plan)
