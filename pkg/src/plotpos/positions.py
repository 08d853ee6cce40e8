"""Plotting positions: the probability index vector (PIV) of a QQ-plot.

Every scheme here is distribution free and symmetric, p_i = 1 - p_{n+1-i}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .beta_core import (
    DEFAULT_SOLVER,
    SolverConfig,
    _as_int,
    beta_median_bisection,
    beta_quantile_newton,
)
from .errors import DomainError

LOG_E_OVER_2 = 1.0 - math.log(2.0)


@dataclass(frozen=True, eq=False)
class PIV:
    """Strictly increasing plotting positions inside (0, 1)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("a PIV needs at least one position")
        if not np.all((values > 0.0) & (values < 1.0)):
            raise DomainError("plotting positions must lie in (0, 1)")
        if np.any(np.diff(values) <= 0.0):
            raise DomainError("plotting positions must be strictly increasing")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, k):
        return self.values[k]

    def log(self) -> np.ndarray:
        return np.log(self.values)


@dataclass(frozen=True)
class Weibull:
    label = "weibull"


@dataclass(frozen=True)
class BetaMedianExact:
    cfg: SolverConfig = DEFAULT_SOLVER
    label = "exact"


@dataclass(frozen=True)
class BetaMedianCran:
    cfg: SolverConfig = DEFAULT_SOLVER
    label = "cran"


@dataclass(frozen=True)
class ApproxConstantA:
    """p_i = (i - a) / (n + 1 - 2a) for a fixed shift ``a`` in [0, 1)."""

    a: float
    label = "constant-a"

    def __post_init__(self):
        if not (math.isfinite(self.a) and 0.0 <= self.a < 1.0):
            raise DomainError(f"shift a must satisfy 0 <= a < 1, got {self.a!r}")


@dataclass(frozen=True)
class Kerman(ApproxConstantA):
    a: float = field(default=1.0 / 3.0, init=False)
    label = "kerman"


@dataclass(frozen=True)
class LogEOver2(ApproxConstantA):
    a: float = field(default=LOG_E_OVER_2, init=False)
    label = "log-e-over-2"


@dataclass(frozen=True)
class Erto:
    label = "erto"


PositionMethod = Union[Weibull, BetaMedianExact, BetaMedianCran, ApproxConstantA, Erto]


def _check_n(n):
    n = _as_int(n, "n")
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    return n


def weibull_piv(n) -> PIV:
    n = _check_n(n)
    return PIV(np.arange(1, n + 1) / (n + 1))


def beta_median_piv(n, engine: str = "bisection", cfg: SolverConfig | None = None) -> PIV:
    """Medians of Beta(i, n + 1 - i), i = 1..n.

    Only the lower half is solved for; the upper half is its reflection and
    the centre of an odd-sized sample is exactly 1/2.
    """
    n = _check_n(n)
    cfg = cfg or DEFAULT_SOLVER
    if engine == "bisection":
        def solve(i):
            return beta_median_bisection(n, i, cfg)
    elif engine == "newton":
        def solve(i):
            return beta_quantile_newton(0.5, i, n + 1 - i, cfg)
    else:
        raise DomainError(f"unknown engine {engine!r}; expected 'bisection' or 'newton'")

    half = n // 2
    values = np.empty(n)
    for i in range(1, half + 1):
        values[i - 1] = solve(i)
    values[n - half:] = 1.0 - values[:half][::-1]
    if n % 2:
        values[half] = 0.5
    return PIV(values)


def erto_shift(n) -> float:
    """Erto's n-dependent shift a(n) = n + (n - 1) / (2^(1/n) - 2).

    Evaluated as (1 - n t) / (1 - t) with t = 2^(1/n) - 1, which avoids the
    cancellation between two terms of size n.  Undefined (0/0) at n = 1.
    """
    n = _check_n(n)
    if n == 1:
        raise DomainError("Erto's shift is 0/0 at n = 1")
    t = math.expm1(math.log(2.0) / n)
    return (1.0 - n * t) / (1.0 - t)


def _constant_a_values(n, a):
    denom = n + 1 - 2.0 * a
    if denom <= 0.0:
        raise DomainError(f"shift a={a!r} makes n + 1 - 2a non-positive for n={n}")
    return (np.arange(1, n + 1) - a) / denom


def approx_piv(n, method) -> PIV:
    """Closed-form approximations (i - a) / (n + 1 - 2a) to the Beta medians."""
    n = _check_n(n)
    if isinstance(method, Erto):
        if n == 1:
            return PIV([0.5])
        return PIV(_constant_a_values(n, erto_shift(n)))
    if isinstance(method, ApproxConstantA):
        return PIV(_constant_a_values(n, method.a))
    raise DomainError(f"{method!r} is not a closed-form approximation")


def piv_for(n, method: PositionMethod) -> PIV:
    if isinstance(method, Weibull):
        return weibull_piv(n)
    if isinstance(method, BetaMedianExact):
        return beta_median_piv(n, "bisection", method.cfg)
    if isinstance(method, BetaMedianCran):
        return beta_median_piv(n, "newton", method.cfg)
    return approx_piv(n, method)


METHOD_NAMES = ("weibull", "beta-median", "beta-median-exact", "erto", "kerman", "log-e-over-2", "constant-a")


def method_from_name(name: str, a: float | None = None, cfg: SolverConfig | None = None) -> PositionMethod:
    """Look up a method by its command-line name."""
    cfg = cfg or DEFAULT_SOLVER
    if name == "weibull":
        return Weibull()
    if name in ("beta-median", "cran"):
        return BetaMedianCran(cfg)
    if name in ("beta-median-exact", "exact"):
        return BetaMedianExact(cfg)
    if name == "erto":
        return Erto()
    if name == "kerman":
        return Kerman()
    if name == "log-e-over-2":
        return LogEOver2()
    if name == "constant-a":
        if a is None:
            raise DomainError("method 'constant-a' needs a shift value")
        return ApproxConstantA(a)
    raise DomainError(f"unknown method {name!r}; expected one of {', '.join(METHOD_NAMES)}")
