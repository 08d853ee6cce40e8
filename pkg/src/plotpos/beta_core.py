"""Beta distribution primitives for order statistics of a uniform sample.

The i-th order statistic of ``n`` uniforms follows Beta(i, n + 1 - i).  Its
CDF can be written either as the regularized incomplete beta function or as
the binomial tail polynomial

    H(i, n)(u) = sum_{j=i}^{n} C(n, j) u^j (1 - u)^(n - j)

and its median is the root of H(i, n)(u) = 1/2.  Two independent routes are
provided for both the CDF (continued fraction vs. direct sum) and the median
(bisection on H vs. safeguarded Newton on the incomplete beta function) so
that each can be checked against the other.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, SolverError

DIRECT_SUM_MAX_N = 50
LN2 = math.log(2.0)


def _as_int(value, name):
    try:
        return operator.index(value)
    except TypeError:
        raise DomainError(f"{name} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class OrderStatIndex:
    """Rank ``i`` within a sample of size ``n`` (1-based)."""

    n: int
    i: int

    def __post_init__(self):
        n = _as_int(self.n, "n")
        i = _as_int(self.i, "i")
        if n < 1:
            raise DomainError(f"sample size must be >= 1, got {n}")
        if not 1 <= i <= n:
            raise DomainError(f"rank must satisfy 1 <= i <= n, got i={i}, n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "i", i)

    @property
    def params(self) -> BetaParams:
        return BetaParams(float(self.i), float(self.n + 1 - self.i))

    @property
    def mean(self) -> float:
        return self.i / (self.n + 1)

    def mirror(self) -> "OrderStatIndex":
        return OrderStatIndex(self.n, self.n + 1 - self.i)


@dataclass(frozen=True)
class SolverConfig:
    abs_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (math.isfinite(self.abs_tol) and self.abs_tol > 0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if _as_int(self.max_iter, "max_iter") < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter!r}")


DEFAULT_SOLVER = SolverConfig()


def _check_unit(x, name="x"):
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def _check_unit_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def beta_pdf(x, alpha, beta):
    """Beta(alpha, beta) density.

    At the endpoints the analytic limit is returned, which is ``inf`` when
    the density diverges (alpha < 1 at 0, beta < 1 at 1).
    """
    params = BetaParams(float(alpha), float(beta))
    if np.ndim(x) == 0:
        return _kernels.beta_pdf(params.alpha, params.beta, _check_unit(x))
    return _kernels.beta_pdf_ufunc(params.alpha, params.beta, _check_unit_array(x))


def beta_cdf(x, alpha, beta):
    """Regularized incomplete beta function I_x(alpha, beta).

    Accepts a scalar or an array of ``x`` values.
    """
    params = BetaParams(float(alpha), float(beta))
    if np.ndim(x) == 0:
        value = _kernels.betainc(params.alpha, params.beta, _check_unit(x))
        if math.isnan(value):
            raise SolverError(f"incomplete beta continued fraction did not converge at x={x!r}")
        return value
    values = _kernels.betainc_ufunc(params.alpha, params.beta, _check_unit_array(x))
    if np.isnan(values).any():
        raise SolverError("incomplete beta continued fraction did not converge")
    return values


def binomial_tail_sum(n, i, u):
    """H(i, n)(u) by summing the binomial terms directly.

    Exact in exact arithmetic for every ``n`` but costs O(n) per call; kept
    mainly as an independent check of :func:`beta_cdf`.
    """
    idx = OrderStatIndex(n, i)
    return _kernels.binomial_tail(idx.n, idx.i, _check_unit(u, "u"))


def order_stat_cdf(n, i, u):
    """P(U_(i) <= u) for the i-th order statistic of ``n`` uniforms."""
    idx = OrderStatIndex(n, i)
    u = _check_unit(u, "u")
    value = _order_stat_cdf(idx.n, idx.i, u)
    if math.isnan(value):
        raise SolverError(f"order statistic CDF evaluation failed at u={u!r}")
    return value


def _order_stat_cdf(n, i, u):
    if n <= DIRECT_SUM_MAX_N:
        return _kernels.binomial_tail(n, i, u)
    return _kernels.betainc(float(i), float(n + 1 - i), u)


def beta_median_bisection(n, i, cfg: SolverConfig | None = None) -> float:
    """Median of Beta(i, n + 1 - i) by bisection on H(i, n)(u) = 1/2.

    Stops when the bracket is no wider than ``cfg.abs_tol`` and returns its
    midpoint.
    """
    cfg = cfg or DEFAULT_SOLVER
    idx = OrderStatIndex(n, i)
    lo, hi = 0.0, 1.0
    for _ in range(cfg.max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= cfg.abs_tol or mid <= lo or mid >= hi:
            return mid
        h = _order_stat_cdf(idx.n, idx.i, mid)
        if math.isnan(h):
            raise SolverError(f"H({idx.i}, {idx.n}) evaluation failed at u={mid!r}", (lo, hi))
        if h < 0.5:
            lo = mid
        elif h > 0.5:
            hi = mid
        else:
            return mid
    if hi - lo <= cfg.abs_tol:
        return 0.5 * (lo + hi)
    raise SolverError(
        f"bisection for the median of Beta({idx.i}, {idx.n + 1 - idx.i}) did not reach "
        f"width {cfg.abs_tol} in {cfg.max_iter} iterations",
        (lo, hi),
    )


def _newton_status(status, lo, hi, alpha, beta, p):
    if status == _kernels.NEWTON_OK:
        return
    reason = "did not converge" if status == _kernels.NEWTON_MAX_ITER else "hit an invalid CDF value"
    raise SolverError(f"Newton quantile of Beta({alpha}, {beta}) at p={p} {reason}", (lo, hi))


def beta_quantile_newton(p, alpha, beta, cfg: SolverConfig | None = None) -> float:
    """Quantile of Beta(alpha, beta) by safeguarded Newton iteration.

    Iterates on I_x(alpha, beta) - p from a Cran-style starting value,
    keeping every iterate inside a bracket built from residual signs.
    Convergence means a residual of at most ``cfg.abs_tol``.
    """
    cfg = cfg or DEFAULT_SOLVER
    params = BetaParams(float(alpha), float(beta))
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    x, status, lo, hi, _ = _kernels.newton_quantile(params.alpha, params.beta, p, cfg.abs_tol, cfg.max_iter)
    _newton_status(status, lo, hi, params.alpha, params.beta, p)
    return x


def beta_quantile_newton_many(ps, alpha, beta, cfg: SolverConfig | None = None) -> np.ndarray:
    """Vectorised :func:`beta_quantile_newton` over an array of probabilities."""
    cfg = cfg or DEFAULT_SOLVER
    params = BetaParams(float(alpha), float(beta))
    ps = np.ascontiguousarray(ps, dtype=float).ravel()
    if not np.all((ps > 0.0) & (ps < 1.0)):
        raise DomainError("probabilities must lie in (0, 1)")
    out, failures = _kernels.newton_quantile_many(params.alpha, params.beta, ps, cfg.abs_tol, cfg.max_iter)
    if failures:
        raise SolverError(f"{failures} Newton quantile solves of Beta({alpha}, {beta}) failed")
    return out


def tail_median_closed_form(n, which: str) -> float:
    """Exact median of the smallest (``"first"``) or largest (``"last"``) order statistic."""
    n = _as_int(n, "n")
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    if which == "first":
        return -math.expm1(-LN2 / n)
    if which == "last":
        return math.exp(-LN2 / n)
    raise DomainError(f"which must be 'first' or 'last', got {which!r}")
