"""Compiled numerical kernels for the Beta family.

Everything here is scalar, allocation free and compiled eagerly with an
explicit signature so the on-disk cache is reused between processes.
Failure is reported through NaN or status codes; the Python layer in
``beta_core`` turns those into exceptions.
"""

from math import exp, inf, isfinite, lgamma, log, log1p, nan, sqrt

import numpy as np
from numba import njit, vectorize

LN_SQRT_2PI = 0.918938533204672741780329736406
TINY = 1e-300
EPS = 2.220446049250313e-16
CF_MAX_ITER = 20000

NEWTON_OK = 0
NEWTON_MAX_ITER = 1
NEWTON_BAD_CDF = 2


@njit("f8(f8)", cache=True, error_model="numpy")
def stirling_correction(x):
    # lgamma(x) - ((x - 1/2) log x - x + log sqrt(2 pi)); accurate to ~1e-18 for x >= 10
    xi = 1.0 / x
    x2 = xi * xi
    s = -3617.0 / 122400.0
    s = 1.0 / 156.0 + x2 * s
    s = -691.0 / 360360.0 + x2 * s
    s = 1.0 / 1188.0 + x2 * s
    s = -1.0 / 1680.0 + x2 * s
    s = 1.0 / 1260.0 + x2 * s
    s = -1.0 / 360.0 + x2 * s
    s = 1.0 / 12.0 + x2 * s
    return xi * s


@njit("f8(f8, f8)", cache=True, error_model="numpy")
def log_beta(a, b):
    p = min(a, b)
    q = max(a, b)
    if p >= 10.0:
        corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(p + q)
        r = p / (p + q)
        return -0.5 * log(q) + LN_SQRT_2PI + corr + (p - 0.5) * log(r) + q * log1p(-r)
    if q >= 10.0:
        corr = stirling_correction(q) - stirling_correction(p + q)
        return lgamma(p) + corr + p - p * log(p + q) + (q - 0.5) * log1p(-p / (p + q))
    return lgamma(p) + lgamma(q) - lgamma(p + q)


@njit("f8(f8, f8, f8)", cache=True, error_model="numpy")
def _betainc_cf(a, b, x):
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= EPS:
            return h
    return nan


@njit("f8(f8, f8, f8)", cache=True, error_model="numpy")
def betainc(a, b, x):
    """Regularized incomplete beta I_x(a, b); NaN when the fraction stalls."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = a * log(x) + b * log1p(-x) - log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return exp(log_front) * _betainc_cf(a, b, x) / a
    return 1.0 - exp(log_front) * _betainc_cf(b, a, 1.0 - x) / b


@njit("f8(f8, f8, f8)", cache=True, error_model="numpy")
def beta_pdf(a, b, x):
    if x == 0.0:
        if a < 1.0:
            return inf
        if a == 1.0:
            return exp(-log_beta(a, b))
        return 0.0
    if x == 1.0:
        if b < 1.0:
            return inf
        if b == 1.0:
            return exp(-log_beta(a, b))
        return 0.0
    return exp((a - 1.0) * log(x) + (b - 1.0) * log1p(-x) - log_beta(a, b))


@vectorize(["f8(f8, f8, f8)"], cache=True)
def betainc_ufunc(a, b, x):
    return betainc(a, b, x)


@vectorize(["f8(f8, f8, f8)"], cache=True)
def beta_pdf_ufunc(a, b, x):
    return beta_pdf(a, b, x)


@njit("f8(i8, i8, i8, f8, f8, f8)", cache=True, error_model="numpy")
def _binomial_terms(n, lo, hi, lu, lv, lfact_n):
    # Neumaier-compensated sum of C(n, j) u^j (1-u)^(n-j) for lo <= j <= hi
    total = 0.0
    comp = 0.0
    for j in range(lo, hi + 1):
        term = exp(lfact_n - lgamma(j + 1.0) - lgamma(n - j + 1.0) + j * lu + (n - j) * lv)
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    return total + comp


@njit("f8(i8, i8, f8)", cache=True, error_model="numpy")
def binomial_tail(n, i, u):
    """sum_{j=i}^{n} C(n, j) u^j (1-u)^(n-j), term by term in log space.

    Past the mean the complementary sum over j < i is the small one, so it is
    summed instead and subtracted from 1.  O(n) per call.
    """
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    lu = log(u)
    lv = log1p(-u)
    lfact_n = lgamma(n + 1.0)
    if u * (n + 1.0) <= i:
        return _binomial_terms(n, i, n, lu, lv, lfact_n)
    return 1.0 - _binomial_terms(n, 0, i - 1, lu, lv, lfact_n)


@njit("f8(f8, f8, f8, f8)", cache=True, error_model="numpy")
def initial_quantile_guess(a, b, p, lbeta):
    # normal-deviate based starting point in the style of Cran, Martin & Thomas
    if p <= 0.5:
        pp, qq, aa, swap = a, b, p, False
    else:
        pp, qq, aa, swap = b, a, 1.0 - p, True
    r = sqrt(-log(aa * aa))
    y = r - (2.30753 + 0.27061 * r) / (1.0 + (0.99229 + 0.04481 * r) * r)
    if pp > 1.0 and qq > 1.0:
        r = (y * y - 3.0) / 6.0
        s = 1.0 / (pp + pp - 1.0)
        t = 1.0 / (qq + qq - 1.0)
        h = 2.0 / (s + t)
        w = y * sqrt(h + r) / h - (t - s) * (r + 5.0 / 6.0 - 2.0 / (3.0 * h))
        x = pp / (pp + qq * exp(w + w))
    else:
        r = qq + qq
        t = 1.0 / (9.0 * qq)
        t = r * (1.0 - t + y * sqrt(t)) ** 3
        if t <= 0.0:
            x = 1.0 - exp((log1p(-aa) + log(qq) + lbeta) / qq)
        else:
            t = (4.0 * pp + r - 2.0) / t
            if t <= 1.0:
                x = exp((log(aa * pp) + lbeta) / pp)
            else:
                x = 1.0 - 2.0 / (t + 1.0)
    if swap:
        x = 1.0 - x
    return x


@njit("Tuple((f8, i8, f8, f8, i8))(f8, f8, f8, f8, i8)", cache=True, error_model="numpy")
def newton_quantile(a, b, p, tol, max_iter):
    """Safeguarded, damped Newton solve of I_x(a, b) = p.

    Returns (x, status, lo, hi, iterations); [lo, hi] is the bracket
    maintained from residual signs.
    """
    lbeta = log_beta(a, b)
    lo = 0.0
    hi = 1.0
    x = initial_quantile_guess(a, b, p, lbeta)
    if not (x > 0.0 and x < 1.0) or not isfinite(x):
        x = 0.5
    for it in range(1, max_iter + 1):
        f = betainc(a, b, x) - p
        if not isfinite(f):
            return x, NEWTON_BAD_CDF, lo, hi, it
        if f < 0.0:
            lo = x
        elif f > 0.0:
            hi = x
        else:
            return x, NEWTON_OK, lo, hi, it
        dens = exp((a - 1.0) * log(x) + (b - 1.0) * log1p(-x) - lbeta)
        step = f / dens
        x_new = x - step
        if abs(f) <= tol:
            # converged on the residual; keep one polishing step if it is safe
            if x_new >= lo and x_new <= hi and isfinite(x_new):
                return x_new, NEWTON_OK, lo, hi, it
            return x, NEWTON_OK, lo, hi, it
        if not (x_new > lo and x_new < hi):
            x_new = x - 0.5 * step
        if not (x_new > lo and x_new < hi) or not isfinite(x_new):
            x_new = 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if x_new == x or mid <= lo or mid >= hi:
            # bracket has shrunk to adjacent doubles
            return x, NEWTON_OK, lo, hi, it
        x = x_new
    return x, NEWTON_MAX_ITER, lo, hi, max_iter


@njit("Tuple((f8[:], i8))(f8, f8, f8[:], f8, i8)", cache=True, error_model="numpy", nogil=True)
def newton_quantile_many(a, b, ps, tol, max_iter):
    out = np.empty(ps.shape[0])
    failures = 0
    for k in range(ps.shape[0]):
        x, status, lo, hi, it = newton_quantile(a, b, ps[k], tol, max_iter)
        out[k] = x
        if status != NEWTON_OK:
            failures += 1
    return out, failures
