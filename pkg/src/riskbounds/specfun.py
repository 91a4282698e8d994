"""Scalar special functions and probability kernels.

Everything here is pure and stateless. Functions accept and return Python
floats; the statistical modules build on them.
"""

from __future__ import annotations

import math

from .errors import DomainError, NumericalError

SQRT2 = math.sqrt(2.0)
LN_SQRT_PI = 0.5 * math.log(math.pi)

BETA_CF_TOL = 1e-14
BETA_CF_MAX_ITER = 300
# Truncation bound for the Poisson-mixture series of the non-central t CDF.
NCT_SERIES_TOL = 1e-14
NCT_MAX_TERMS = 100_000
# below this the reflected series has lost relative accuracy; quadrature takes over
NCT_LOWER_TAIL_SWITCH = 1e-7
QUANTILE_MAX_EXPANSIONS = 200


def check_probability(p: float, name: str = "p", open_interval: bool = False) -> float:
    """Validate a probability and return it as a float."""
    p = float(p)
    if open_interval:
        if not 0.0 < p < 1.0:
            raise DomainError(f"{name} must lie in (0, 1), got {p!r}")
    elif not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def ln_gamma(x: float) -> float:
    """log Gamma(x) for finite x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"ln_gamma requires a finite positive argument, got {x!r}")
    return math.lgamma(x)


def ln_beta(a: float, b: float) -> float:
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirlerr(z: float) -> float:
    """ln Gamma(z) - [(z - 1/2) ln z - z + ln sqrt(2 pi)]."""
    if z >= 10.0:
        z2 = 1.0 / (z * z)
        return (1.0 / 12.0 - z2 * (1.0 / 360.0 - z2 * (1.0 / 1260.0 - z2 * (
            1.0 / 1680.0 - z2 / 1188.0)))) / z
    return math.lgamma(z) - ((z - 0.5) * math.log(z) - z + _HALF_LN_2PI)


def _log1pmx(u: float) -> float:
    """log(1 + u) - u without cancellation near 0."""
    if u == 0.0:
        return 0.0
    if abs(u) >= 0.1:
        return math.log1p(u) - u
    term = u
    total = 0.0
    k = 2
    while True:
        term *= -u
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-17 * abs(total):
            return total
        k += 1


def _ln_gamma_ratio(z: float, h: float) -> float:
    """ln Gamma(z + h) - ln Gamma(z)."""
    if z < 10.0:
        return math.lgamma(z + h) - math.lgamma(z)
    return ((z - 0.5) * math.log1p(h / z) + h * math.log(z + h) - h
            + _stirlerr(z + h) - _stirlerr(z))


def _log_poisson_pmf(k: int, lam: float) -> float:
    """ln(e^-lam lam^k / k!) in the saddle-point form, stable for large lam."""
    if k == 0:
        return -lam
    r = (k - lam) / lam
    deviance = lam * (_log1pmx(r) + r * math.log1p(r))
    return -deviance - 0.5 * math.log(2.0 * math.pi * k) - _stirlerr(float(k))


def _log_beta_front(a: float, b: float, x: float) -> float:
    """ln[x^a (1 - x)^b / B(a, b)], stable when a or b is large."""
    if a + b < 20.0:
        return a * math.log(x) + b * math.log1p(-x) - ln_beta(a, b)
    # signed distance of x from x0 = a / (a + b), scaled by a + b
    d = x * (a + b) - a
    log_x, log_y = math.log(x), math.log1p(-x)
    if a > b:
        # reflect without forming 1 - x, which underflows for tiny x
        a, b, d, log_x, log_y = b, a, -d, log_y, log_x
    # b >= 10 here; expand around x0 so the leading terms cancel exactly.
    u = d / a
    if abs(u) < 0.1:
        body = a * _log1pmx(u) + b * _log1pmx(-a * u / b)
    else:
        body = a * (log_x + math.log1p(b / a)) + b * (log_y + math.log1p(a / b))
    if a >= 10.0:
        head = 0.5 * math.log(a) - _HALF_LN_2PI - _stirlerr(a)
    else:
        head = a * math.log(a) - a - math.lgamma(a)
    return head - 0.5 * math.log1p(a / b) + _stirlerr(a + b) - _stirlerr(b) + body


def _beta_cf(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, BETA_CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < BETA_CF_TOL:
            return h
    raise NumericalError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    The continued fraction is evaluated directly when x lies below the
    transition point (a + 1) / (a + b + 2) and through the reflection
    I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
    """
    a = float(a)
    b = float(b)
    x = float(x)
    if not (math.isfinite(a) and a > 0.0 and math.isfinite(b) and b > 0.0):
        raise DomainError(f"reg_inc_beta requires a > 0 and b > 0, got a={a!r}, b={b!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = _log_beta_front(a, b, x)
    if x < (a + 1.0) / (a + b + 2.0):
        value = math.exp(log_front) * _beta_cf(a, b, x) / a
    else:
        value = 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x) / b
    return min(1.0, max(0.0, value))


def binomial_cdf(k: int, n: int, p: float) -> float:
    """P(Binomial(n, p) <= k) through the incomplete beta identity."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    p = check_probability(p)
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    return reg_inc_beta(n - k, k + 1, 1.0 - p)


def std_normal_cdf(z: float) -> float:
    z = float(z)
    if math.isnan(z):
        raise DomainError("std_normal_cdf of NaN")
    return 0.5 * math.erfc(-z / SQRT2)


def std_normal_sf(z: float) -> float:
    """Upper tail 1 - Phi(z), accurate far into the right tail."""
    z = float(z)
    if math.isnan(z):
        raise DomainError("std_normal_sf of NaN")
    return 0.5 * math.erfc(z / SQRT2)


def std_normal_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


# Acklam's rational approximation, relative error about 1.15e-9 before refinement.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def std_normal_quantile(p: float) -> float:
    """Inverse of the standard normal CDF for 0 < p < 1.

    Acklam's approximation followed by one Halley refinement step, which
    brings the error down to a few ulps.
    """
    p = check_probability(p, open_interval=True)
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    # Halley step; the residual is taken on the smaller tail to keep precision.
    if p < 0.5:
        e = std_normal_cdf(x) - p
    else:
        e = (1.0 - p) - std_normal_sf(x)
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def central_t_cdf(x: float, dof: float) -> float:
    """Student t CDF with `dof` degrees of freedom."""
    x = float(x)
    if not math.isfinite(x):
        if math.isnan(x):
            raise DomainError("central_t_cdf of NaN")
        return 1.0 if x > 0 else 0.0
    if dof <= 0:
        raise DomainError(f"dof must be positive, got {dof}")
    if x == 0.0:
        return 0.5
    tail = 0.5 * reg_inc_beta(0.5 * dof, 0.5, dof / (dof + x * x))
    return 1.0 - tail if x > 0 else tail


def _check_nct_params(dof: float, delta: float) -> None:
    if not (dof >= 1):
        raise DomainError(f"non-central t requires dof >= 1, got {dof!r}")
    if not math.isfinite(delta):
        raise DomainError(f"non-centrality must be finite, got {delta!r}")


def _nct_cdf_nonneg(t: float, dof: float, delta: float) -> float:
    """P(T <= t) for t >= 0.

    Poisson-mixture series

        Phi(-delta) + 1/2 * sum_j [P_j I_x(j + 1/2, dof/2) + Q_j I_x(j + 1, dof/2)]

    with x = t^2 / (t^2 + dof), P_j = e^{-lam} lam^j / j!, lam = delta^2 / 2 and
    Q_j = delta / sqrt(2) * e^{-lam} lam^j / Gamma(j + 3/2). Summation starts at
    the Poisson mode and walks outwards, with incomplete beta values updated by
    the recurrence I_x(a + 1, b) = I_x(a, b) - g(a). Because the Poisson ratios
    are monotone away from the mode, the omitted tail of each direction is
    bounded by a geometric series; |Q_j| <= |delta| P_j, so a direction stops
    once (1 + |delta|) times its remaining Poisson mass is below NCT_SERIES_TOL.
    """
    base = std_normal_sf(delta)
    if t == 0.0:
        return base
    x = t * t / (t * t + dof)
    if x == 0.0:
        return base
    if x >= 1.0:
        return 1.0
    lam = 0.5 * delta * delta
    b = 0.5 * dof
    k = int(lam)

    log_pois = _log_poisson_pmf(k, lam)
    p_k = math.exp(log_pois)
    q_k = delta / SQRT2 * math.exp(log_pois - _ln_gamma_ratio(k + 1.0, 0.5))
    ip_k = reg_inc_beta(k + 0.5, b, x)
    iq_k = reg_inc_beta(k + 1.0, b, x)
    # g(a) = x^a (1 - x)^b / (a B(a, b)) = I_x(a, b) - I_x(a + 1, b)
    gp_k = math.exp(_log_beta_front(k + 0.5, b, x)) / (k + 0.5)
    gq_k = math.exp(_log_beta_front(k + 1.0, b, x)) / (k + 1.0)

    total = p_k * ip_k + q_k * iq_k
    scale = 1.0 + abs(delta)

    # forward: j = k + 1, k + 2, ...
    p, q, ip, iq, gp, gq = p_k, q_k, ip_k, iq_k, gp_k, gq_k
    j = k
    while True:
        ip -= gp
        iq -= gq
        gp *= x * (j + 0.5 + b) / (j + 1.5)
        gq *= x * (j + 1.0 + b) / (j + 2.0)
        j += 1
        p *= lam / j
        q *= lam / (j + 0.5)
        total += p * max(ip, 0.0) + q * max(iq, 0.0)
        ratio = lam / (j + 1)
        if ratio < 1.0 and scale * p * ratio / (1.0 - ratio) < NCT_SERIES_TOL:
            break
        if p == 0.0 or j - k > NCT_MAX_TERMS:
            break

    # backward: j = k - 1, ..., 0
    p, q, ip, iq = p_k, q_k, ip_k, iq_k
    gp_prev = gp_k
    gq_prev = gq_k
    for j in range(k - 1, -1, -1):
        # g(j + 1/2) from g(j + 3/2), then I_x(a, b) = I_x(a + 1, b) + g(a)
        # divide by x last: (j + 1.5) / (x * ...) overflows for subnormal x;
        # once g has underflowed to 0 it is recomputed directly
        if gp_prev > 0.0:
            gp_prev = gp_prev * ((j + 1.5) / (j + 0.5 + b)) / x
        else:
            gp_prev = math.exp(_log_beta_front(j + 0.5, b, x)) / (j + 0.5)
        if gq_prev > 0.0:
            gq_prev = gq_prev * ((j + 2.0) / (j + 1.0 + b)) / x
        else:
            gq_prev = math.exp(_log_beta_front(j + 1.0, b, x)) / (j + 1.0)
        ip = min(ip + gp_prev, 1.0)
        iq = min(iq + gq_prev, 1.0)
        p *= (j + 1) / lam
        q *= (j + 1.5) / lam
        total += p * ip + q * iq
        ratio = j / lam
        if scale * p * ratio / (1.0 - ratio) < NCT_SERIES_TOL:
            break

    return min(1.0, max(0.0, base + 0.5 * total))


def noncentral_t_cdf(x: float, dof: float, delta: float) -> float:
    """CDF of the non-central t distribution with `dof` degrees of freedom."""
    x = float(x)
    delta = float(delta)
    _check_nct_params(dof, delta)
    if not math.isfinite(x):
        raise DomainError(f"noncentral_t_cdf requires finite x, got {x!r}")
    if delta == 0.0:
        return central_t_cdf(x, dof)
    if x >= 0.0:
        return _nct_cdf_nonneg(x, dof, delta)
    value = 1.0 - _nct_cdf_nonneg(-x, dof, -delta)
    if value < NCT_LOWER_TAIL_SWITCH:
        # the reflection keeps only ~1e-16 absolute accuracy; integrate instead
        return _nct_lower_tail(x, dof, delta)
    return value


def _nct_lower_tail(x: float, dof: float, delta: float) -> float:
    """P(T <= x) for x < 0 as the mixture integral E[Phi(x S - delta)].

    S = sqrt(V / dof) has a scaled chi density. The integrand is formed in log
    space and integrated around its peak, so deep tails keep relative accuracy.
    """
    from scipy import integrate, optimize, special

    half = 0.5 * dof
    log_norm = math.log(2.0) + half * math.log(half) - math.lgamma(half)

    def h(s: float) -> float:
        return (log_norm + (dof - 1.0) * math.log(s) - half * s * s
                + float(special.log_ndtr(x * s - delta)))

    peak = optimize.minimize_scalar(lambda s: -h(s), bounds=(1e-12, 10.0 + 10.0 * abs(x) + dof),
                                    method="bounded", options={"xatol": 1e-10})
    s_max, h_max = float(peak.x), -float(peak.fun)
    width = 1.0 / math.sqrt(dof + x * x)
    lo, hi = max(1e-300, s_max - 40.0 * width), s_max + 40.0 * width
    area, _ = integrate.quad(lambda s: math.exp(h(s) - h_max), lo, hi, points=[s_max],
                             epsabs=0.0, epsrel=1e-11, limit=200)
    return math.exp(h_max) * area


def _brent_root(f, lo: float, hi: float, flo: float, fhi: float, xtol: float) -> float:
    """Root of a monotone function on a sign-changing bracket (Brent's method)."""
    from scipy.optimize import brentq

    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    return brentq(f, lo, hi, xtol=xtol, maxiter=500)


def noncentral_t_quantile(p: float, dof: float, delta: float) -> float:
    """Inverse of noncentral_t_cdf in its first argument."""
    p = check_probability(p, open_interval=True)
    delta = float(delta)
    _check_nct_params(dof, delta)

    def f(t: float) -> float:
        return noncentral_t_cdf(t, dof, delta) - p

    width = 10.0 * (1.0 + abs(delta))
    lo, hi = delta - width, delta + width
    flo, fhi = f(lo), f(hi)
    expansions = 0
    while flo > 0.0:
        expansions += 1
        if expansions > QUANTILE_MAX_EXPANSIONS:
            raise NumericalError("failed to bracket the non-central t quantile")
        width *= 2.0
        hi, fhi = lo, flo
        lo = delta - width
        flo = f(lo)
    while fhi < 0.0:
        expansions += 1
        if expansions > QUANTILE_MAX_EXPANSIONS:
            raise NumericalError("failed to bracket the non-central t quantile")
        width *= 2.0
        lo, flo = hi, fhi
        hi = delta + width
        fhi = f(hi)
    return _brent_root(f, lo, hi, flo, fhi, xtol=1e-12 * max(1.0, abs(delta)))
