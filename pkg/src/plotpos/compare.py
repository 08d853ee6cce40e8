"""Weibull (mean) versus Beta-median plotting positions.

Covers the mean/median gap bound for Beta(alpha, beta), a sweep of the
ordering, difference and ratio inequalities between the two position
vectors, the tail-ratio limit log 2, and the data behind the small-n table
and the large-n figure comparing the closed-form approximations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .beta_core import (
    DEFAULT_SOLVER,
    LN2,
    BetaParams,
    SolverConfig,
    _as_int,
    beta_median_bisection,
    beta_quantile_newton,
    tail_median_closed_form,
)
from .distributions import Exponential, Uniform
from .errors import DomainError
from .positions import LOG_E_OVER_2, beta_median_piv, erto_shift, weibull_piv

ITEMS = tuple("abcdefghij")
CENTER_TOL = 1e-12
TABLE_METHODS = ("exact", "cran", "erto", "log-e-over-2", "kerman")
FIRST = "1/n"
DEFAULT_FRACTIONS = (FIRST, Fraction(1, 10), Fraction(2, 10), Fraction(4, 10))


class GapSign(str, enum.Enum):
    MEAN_ABOVE = "mean_above"
    MEDIAN_ABOVE = "median_above"
    EQUAL = "equal"


def payton_gap_bound(params: BetaParams) -> tuple[GapSign, float]:
    """Which of mean and median of Beta(alpha, beta) is larger, and a bound on
    their distance: |alpha - beta| / ((alpha + beta)(alpha + beta - 2)).

    The inequality needs alpha, beta > 1; the symmetric case is exact for any
    shapes.
    """
    a, b = params.alpha, params.beta
    if a == b:
        return GapSign.EQUAL, 0.0
    if a <= 1.0 or b <= 1.0:
        raise DomainError(f"gap bound needs alpha, beta > 1 unless they are equal, got ({a}, {b})")
    bound = abs(a - b) / ((a + b) * (a + b - 2.0))
    return (GapSign.MEAN_ABOVE if a < b else GapSign.MEDIAN_ABOVE), bound


# -- the Weibull / Beta-median sweep -------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    i: int
    p_w: float
    p_b: float
    diff: float
    bound_diff: float
    ratio: float
    one_minus_ratio: float


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one inequality family.

    ``margin`` is the smallest slack (right side minus left side) seen over
    every index the item covers; a strict inequality passes when it is
    positive; it is None when the item has nothing to check at this n.
    ``skipped`` lists indices left out and why.
    """

    item: str
    passed: bool
    margin: float | None
    checked: int
    skipped: tuple = ()


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    rows: tuple[ComparisonRow, ...]
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "passed": self.passed,
            "checks": {k: asdict(v) for k, v in self.checks.items()},
            "rows": [asdict(r) for r in self.rows],
        }


class _Check:
    def __init__(self, item):
        self.item = item
        self.margin = math.inf
        self.ok = True
        self.count = 0
        self.skipped = []

    def less(self, left, right, strict=True):
        slack = right - left
        self.margin = min(self.margin, slack)
        self.ok &= slack > 0.0 if strict else slack >= 0.0
        self.count += 1

    def skip(self, i, why):
        self.skipped.append((i, why))

    def result(self):
        margin = float(self.margin) if self.count else None
        return CheckResult(self.item, bool(self.ok), margin, self.count, tuple(self.skipped))


def comparison_report(n, cfg: SolverConfig | None = None, items: Iterable[str] = ITEMS) -> ComparisonReport:
    """Compute both position vectors for ``n > 2`` and check items (a)-(j).

    Where an item, read literally, would compare two equal numbers (the
    centre of an odd sample, or the endpoints of the second bound in (h)),
    that index is recorded in ``skipped`` or the bound is checked as
    non-strict; see the notes beside each item.
    """
    n = _as_int(n, "n")
    if n <= 2:
        raise DomainError(f"the comparison needs n > 2, got {n}")
    cfg = cfg or DEFAULT_SOLVER
    items = tuple(items)
    unknown = [x for x in items if x not in ITEMS]
    if unknown:
        raise DomainError(f"unknown comparison items {unknown}; expected a subset of a..j")

    w = weibull_piv(n).values
    b = beta_median_piv(n, "bisection", cfg).values
    half = n // 2
    odd = n % 2 == 1
    center = (n + 1) // 2 if odd else None

    rows = []
    for i in range(1, n + 1):
        pw, pb = w[i - 1], b[i - 1]
        rows.append(
            ComparisonRow(
                i=i,
                p_w=float(pw),
                p_b=float(pb),
                diff=float(pw - pb),
                bound_diff=abs(n + 1 - 2 * i) / (n * n - 1.0),
                ratio=float(pb / pw),
                one_minus_ratio=float((1.0 - pb) / (1.0 - pw)),
            )
        )

    def pw(i):
        return w[i - 1]

    def pb(i):
        return b[i - 1]

    checks = {}

    if "a" in items:
        c = _Check("a")
        # the smallest index falls outside the gap bound's hypothesis; use the closed form
        p1 = tail_median_closed_form(n, "first")
        c.less(0.0, 1.0 / (n + 1) - p1)
        c.less(1.0 / (n + 1) - p1, rows[0].bound_diff)
        for i in range(2, half + 1):
            c.less(0.0, pw(i) - pb(i))
            c.less(pw(i) - pb(i), rows[i - 1].bound_diff)
        checks["a"] = c.result()

    if "b" in items:
        c = _Check("b")
        for i in range(half + 1, n + 1):
            if i == center:
                c.skip(i, "centre of an odd sample: both sides are zero, see (c)")
                continue
            c.less(0.0, pb(i) - pw(i))
            c.less(pb(i) - pw(i), rows[i - 1].bound_diff)
        checks["b"] = c.result()

    if "c" in items:
        c = _Check("c")
        if odd:
            # solved directly rather than read off the reflected vector, and
            # tighter than CENTER_TOL so the stopping width does not eat the margin
            tight = SolverConfig(min(cfg.abs_tol, 1e-15), max(cfg.max_iter, 200))
            mid = beta_median_bisection(n, center, tight)
            c.less(abs(pw(center) - mid), CENTER_TOL, strict=False)
        else:
            c.skip(None, "even n has no centre")
        checks["c"] = c.result()

    if "d" in items:
        c = _Check("d")
        for i in range(1, n + 1):
            c.less(abs(pw(i) - pb(i)), 1.0 / (n + 1))
        checks["d"] = c.result()

    if "e" in items:
        c = _Check("e")
        for lo, hi in ((0.0, pb(1)), (pb(1), pw(1)), (pw(1), 1.0), (0.0, pw(n)), (pw(n), pb(n)), (pb(n), 1.0)):
            c.less(lo, hi)
        checks["e"] = c.result()

    if "f" in items:
        c = _Check("f")
        for i in range(2, half + 1):
            c.less(pw(i - 1), pb(i))
            c.less(pb(i), pw(i))
        checks["f"] = c.result()

    if "g" in items:
        c = _Check("g")
        for i in range(half + 1, n):
            c.less(pb(i - 1), pw(i))
            if i == center:
                c.skip(i, "centre of an odd sample: upper comparison is an equality")
                continue
            c.less(pw(i), pb(i))
        checks["g"] = c.result()

    if "h" in items:
        c = _Check("h")
        for i in range(1, n + 1):
            mid_bound = abs(n + 1 - 2 * i) / (i * (n - 1.0))
            if i == center:
                c.skip(i, "centre of an odd sample: first comparison is 0 < 0")
            else:
                c.less(abs(rows[i - 1].ratio - 1.0), mid_bound)
            # equality at i = 1 and i = n, so the outer bound is checked as <=
            c.less(mid_bound, 1.0 / i, strict=(i not in (1, n)))
        checks["h"] = c.result()

    if "i" in items:
        c = _Check("i")
        for i in range(1, n + 1):
            mid_bound = abs(n + 1 - 2 * i) / ((n + 1 - i) * (n - 1.0))
            if i == center:
                c.skip(i, "centre of an odd sample: first comparison is 0 < 0")
            else:
                c.less(abs(rows[i - 1].one_minus_ratio - 1.0), mid_bound)
            c.less(mid_bound, 1.0 / (n - i) if i < n else math.inf)
        checks["i"] = c.result()

    if "j" in items:
        # a limit cannot be checked at one n; check the finite-n form it rests on
        c = _Check("j")
        for ratio in (tail_ratios(n).ratio_first, tail_ratios(n).complement_ratio_last):
            c.less(LN2, ratio)
            c.less(ratio, 1.0, strict=False)
            c.less(ratio - LN2, 1.0 / n)
        checks["j"] = c.result()

    return ComparisonReport(n, tuple(rows), {k: checks[k] for k in ITEMS if k in checks})


# -- tail ratio ----------------------------------------------------------------


class TailRatio(NamedTuple):
    n: int
    ratio_first: float
    complement_ratio_last: float


def tail_ratios(n) -> TailRatio:
    """p_1^B / p_1^W and (1 - p_n^B) / (1 - p_n^W) from the closed forms."""
    n = _as_int(n, "n")
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    first = tail_median_closed_form(n, "first") * (n + 1)
    last = (1.0 - tail_median_closed_form(n, "last")) * (n + 1)
    return TailRatio(n, first, last)


def tail_ratio_limit(n_list) -> list[TailRatio]:
    n_list = list(n_list)
    if not n_list:
        raise DomainError("n_list must not be empty")
    return [tail_ratios(n) for n in n_list]


def is_decreasing(ratios: list[TailRatio]) -> bool:
    """Whether ratio_first strictly decreases along increasing n."""
    ordered = sorted(ratios, key=lambda r: r.n)
    return all(a.ratio_first > b.ratio_first for a, b in zip(ordered, ordered[1:]))


# -- table and figure data -------------------------------------------------------


@dataclass(frozen=True)
class TableCell:
    method: str
    n: int
    i: int
    p: float
    log_value: float

    def __post_init__(self):
        if not self.log_value < 0.0:
            raise DomainError(f"log position must be negative, got {self.log_value}")


def position(method: str, n: int, i: int, cfg: SolverConfig | None = None) -> float:
    """A single plotting position p_i for sample size n."""
    cfg = cfg or DEFAULT_SOLVER
    if method == "exact":
        return beta_median_bisection(n, i, cfg)
    if method == "cran":
        return beta_quantile_newton(0.5, i, n + 1 - i, cfg)
    if method == "weibull":
        return i / (n + 1)
    if method == "erto":
        if n == 1:
            return 0.5
        a = erto_shift(n)
    elif method == "log-e-over-2":
        a = LOG_E_OVER_2
    elif method == "kerman":
        a = 1.0 / 3.0
    else:
        raise DomainError(f"unknown method {method!r}")
    return (i - a) / (n + 1 - 2.0 * a)


def _cell(method, n, i, cfg):
    p = position(method, n, i, cfg)
    return TableCell(method, n, i, p, math.log(p))


def reproduce_table1(cfg: SolverConfig | None = None) -> list[TableCell]:
    """Log positions of the lower half, n = 2..5, for every method."""
    return [
        _cell(method, n, i, cfg)
        for method in TABLE_METHODS
        for n in range(2, 6)
        for i in range(1, n // 2 + 1)
    ]


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError):
        raise DomainError(f"bad fraction {value!r}") from None


def figure1_positions(n, fractions=DEFAULT_FRACTIONS) -> list[int]:
    """Integer positions n * f; ``"1/n"`` stands for the first position."""
    n = _as_int(n, "n")
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    out = []
    for f in fractions:
        if f == FIRST:
            out.append(1)
            continue
        frac = _as_fraction(f)
        pos = frac * n
        if pos.denominator != 1 or not 1 <= pos <= n:
            raise DomainError(f"fraction {f} of n={n} is not an integer position in 1..n")
        out.append(int(pos))
    return out


def figure1_data(n_list, fractions=DEFAULT_FRACTIONS, cfg: SolverConfig | None = None) -> list[TableCell]:
    """Log positions of every method at the requested fractions of each n."""
    n_list = list(n_list)
    # validate everything first so a bad pair fails before any solving
    plan = [(n, figure1_positions(n, fractions)) for n in n_list]
    return [
        _cell(method, n, i, cfg)
        for n, positions in plan
        for i in positions
        for method in TABLE_METHODS
    ]


def cells_to_rows(cells: Iterable[TableCell]) -> list[dict]:
    return [{"method": c.method, "n": c.n, "i": c.i, "p": c.p, "log_p": c.log_value} for c in cells]


# -- distribution-dependent positions ------------------------------------------------


class NonInvariance(NamedTuple):
    tag: str
    cdf_at_mean: float


def non_invariance_demo() -> list[NonInvariance]:
    """F(E X) for a few laws; a position defined this way depends on the law."""
    dists = [("uniform(0,1)", Uniform(0.0, 1.0))]
    dists += [(f"exponential({rate:g})", Exponential(rate)) for rate in (0.5, 1.0, 2.0)]
    return [NonInvariance(tag, d.cdf(d.mean)) for tag, d in dists]


def sweep(n_values, cfg: SolverConfig | None = None) -> dict[int, ComparisonReport]:
    """comparison_report for many n; keyed by n so order does not matter."""
    return {n: comparison_report(n, cfg) for n in n_values}


def max_gap_index(report: ComparisonReport) -> int:
    """Index i with the largest |p_i^W - p_i^B| (first one on ties)."""
    diffs = np.abs([r.diff for r in report.rows])
    return int(np.argmax(diffs)) + 1
