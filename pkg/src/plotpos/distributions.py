"""Continuous distributions used for losses and QQ-plot quantiles.

Each family exposes ``cdf``, ``ppf`` and ``mean``.  ``Transformed`` builds the
law of phi(X) from X and a strictly increasing map phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Union

from .beta_core import BetaParams, beta_cdf, beta_quantile_newton
from .errors import DomainError


def _check_prob(p):
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    return p


def _check_finite(x):
    x = float(x)
    if math.isnan(x):
        raise DomainError("argument is NaN")
    return x


@dataclass(frozen=True)
class Uniform:
    low: float = 0.0
    high: float = 1.0
    tag = "uniform"

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high) and self.low < self.high):
            raise DomainError(f"uniform needs finite low < high, got ({self.low}, {self.high})")

    def cdf(self, x):
        x = _check_finite(x)
        return min(1.0, max(0.0, (x - self.low) / (self.high - self.low)))

    def ppf(self, p):
        return self.low + _check_prob(p) * (self.high - self.low)

    @property
    def mean(self):
        return 0.5 * (self.low + self.high)


@dataclass(frozen=True)
class Normal:
    mu: float = 0.0
    sigma: float = 1.0
    tag = "normal"

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"normal needs finite mu and sigma > 0, got ({self.mu}, {self.sigma})")

    def cdf(self, x):
        z = (_check_finite(x) - self.mu) / self.sigma
        return 0.5 * math.erfc(-z / math.sqrt(2.0))

    def ppf(self, p):
        return NormalDist(self.mu, self.sigma).inv_cdf(_check_prob(p))

    @property
    def mean(self):
        return self.mu


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0
    tag = "exponential"

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"exponential needs rate > 0, got {self.rate}")

    def cdf(self, x):
        x = _check_finite(x)
        if x <= 0.0:
            return 0.0
        return -math.expm1(-self.rate * x)

    def ppf(self, p):
        return -math.log1p(-_check_prob(p)) / self.rate

    @property
    def mean(self):
        return 1.0 / self.rate


@dataclass(frozen=True)
class Beta:
    alpha: float
    beta: float
    tag = "beta"

    def __post_init__(self):
        BetaParams(self.alpha, self.beta)

    def cdf(self, x):
        x = _check_finite(x)
        return beta_cdf(min(1.0, max(0.0, x)), self.alpha, self.beta)

    def ppf(self, p):
        return beta_quantile_newton(_check_prob(p), self.alpha, self.beta)

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class MonotoneMap:
    """A strictly increasing map of the real line together with its inverse."""

    name: str
    forward: Callable[[float], float]
    inverse: Callable[[float], float]

    def __call__(self, x):
        return self.forward(x)


def _logit(y):
    if y <= 0.0:
        return -math.inf
    if y >= 1.0:
        return math.inf
    return math.log(y / (1.0 - y))


def _expit(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _safe_log(y):
    return math.log(y) if y > 0.0 else -math.inf


def monotone_map(tag: str, slope: float = 1.0, intercept: float = 0.0) -> MonotoneMap:
    """Catalogue of strictly increasing maps: ``affine``, ``exp`` and ``expit``."""
    if tag == "affine":
        if not (math.isfinite(slope) and slope > 0 and math.isfinite(intercept)):
            raise DomainError(f"affine map needs a positive finite slope, got {slope!r}")
        return MonotoneMap(
            f"affine({slope}, {intercept})",
            lambda x: slope * x + intercept,
            lambda y: (y - intercept) / slope,
        )
    if tag == "exp":
        return MonotoneMap("exp", math.exp, _safe_log)
    if tag == "expit":
        return MonotoneMap("expit", _expit, _logit)
    raise DomainError(f"{tag!r} is not a strictly monotone map in the catalogue")


@dataclass(frozen=True)
class Transformed:
    """Law of phi(X) given the law of X and an increasing map phi."""

    base: "Distribution"
    phi: MonotoneMap

    @property
    def tag(self):
        return f"{self.phi.name}({self.base.tag})"

    def cdf(self, y):
        return self.base.cdf(self.phi.inverse(_check_finite(y)))

    def ppf(self, p):
        return self.phi(self.base.ppf(p))


Distribution = Union[Uniform, Normal, Exponential, Beta, Transformed]


def parse_dist(text: str) -> Distribution:
    """Parse ``family[:p1,p2]``, e.g. ``normal:0,1`` or ``exponential:2``."""
    family, _, rest = text.partition(":")
    try:
        params = [float(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise DomainError(f"bad distribution parameters in {text!r}") from None
    family = family.strip().lower()
    expected = {"uniform": (0, 2), "normal": (0, 2), "exponential": (0, 1)}
    if family not in expected:
        raise DomainError(f"unknown distribution family {family!r}")
    if len(params) not in expected[family]:
        raise DomainError(f"{family} takes {expected[family][1]} parameters, got {len(params)}")
    if family == "uniform":
        return Uniform(*params)
    if family == "normal":
        return Normal(*params)
    return Exponential(*params)
