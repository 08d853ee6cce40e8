"""Seeded Monte Carlo for the four plotting-position betting games.

Two players pick positions p_a and p_b for the i-th order statistic U of a
uniform sample of size n; each trial draws U and settles the bet.

1. A collects a dollar when p_a is strictly closer to U, otherwise pays one.
2. A collects |U - p_b| - |U - p_a|.
3. A collects (U - p_b)^2 - (U - p_a)^2.
4. A judge draws fresh uniforms V until one lands in exactly one of the
   intervals A* = (p_a, U) and B* = (p_b, U) (endpoints in either order);
   the player whose interval holds V loses a dollar.

Randomness is split into fixed blocks of ``BLOCK_SIZE`` trials and every
block owns an independent Philox stream keyed by (seed, block, purpose), so
trial t depends only on (seed, t).  Blocks may be evaluated on any number
of threads; tallies are integers and float sums are combined with
``math.fsum``, so the report does not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .beta_core import OrderStatIndex, _as_int, beta_cdf, beta_quantile_newton_many
from .errors import DomainError
from .loss import expected_pl, fpl
from .quadrature import integrate

BLOCK_SIZE = 1 << 16
SEED_MAX = (1 << 64) - 1
DEFAULT_REJECTION_CAP = 10_000

# stream purposes within a block
_STREAM_ORDER_STAT = 0
_STREAM_JUDGE = 1
_STREAM_SORTING = 2


@dataclass(frozen=True)
class GameSpec:
    game_id: int
    idx: OrderStatIndex
    p_a: float
    p_b: float
    trials: int
    seed: int = 0

    def __post_init__(self):
        game_id = _as_int(self.game_id, "game_id")
        if game_id not in (1, 2, 3, 4):
            raise DomainError(f"game_id must be 1, 2, 3 or 4, got {game_id}")
        if not isinstance(self.idx, OrderStatIndex):
            raise DomainError("idx must be an OrderStatIndex")
        p_a, p_b = float(self.p_a), float(self.p_b)
        for name, p in (("p_a", p_a), ("p_b", p_b)):
            if not 0.0 < p < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {p!r}")
        if p_a == p_b:
            raise DomainError("p_a and p_b must differ; equal positions make every game a wash")
        trials = _as_int(self.trials, "trials")
        if trials < 1:
            raise DomainError(f"trials must be >= 1, got {trials}")
        seed = _as_int(self.seed, "seed")
        if not 0 <= seed <= SEED_MAX:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        object.__setattr__(self, "game_id", game_id)
        object.__setattr__(self, "p_a", p_a)
        object.__setattr__(self, "p_b", p_b)
        object.__setattr__(self, "trials", trials)
        object.__setattr__(self, "seed", seed)

    @classmethod
    def make(cls, game_id, n, i, p_a, p_b, trials, seed=0) -> "GameSpec":
        return cls(game_id, OrderStatIndex(n, i), p_a, p_b, trials, seed)


@dataclass(frozen=True)
class GameReport:
    """Tallies for one simulated game, from A's point of view."""

    game_id: int
    trials: int
    wins_a: int
    wins_b: int
    draws: int
    mean_payoff_a: float
    std_error: float
    analytic_payoff_a: float | None = None
    analytic_win_prob_a: float | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def decided(self) -> int:
        return self.wins_a + self.wins_b

    @property
    def win_fraction_a(self) -> float:
        """Share of decided trials won by A (NaN when nothing was decided)."""
        return self.wins_a / self.decided if self.decided else math.nan

    @property
    def win_fraction_se(self) -> float:
        """Binomial standard error of :attr:`win_fraction_a`."""
        if not self.decided:
            return math.nan
        f = self.win_fraction_a
        return math.sqrt(f * (1.0 - f) / self.decided)

    def to_dict(self) -> dict:
        out = asdict(self)
        extra = out.pop("extra")
        out["win_fraction_a"] = self.win_fraction_a
        out.update(extra)
        return out


def _block_rng(seed, block, purpose):
    seq = np.random.SeedSequence(seed, spawn_key=(block, purpose))
    return np.random.Generator(np.random.Philox(seq))


def _open_uniform(rng, size):
    # random() lives on [0, 1); zero would send the quantile solver to the boundary
    u = rng.random(size)
    u[u == 0.0] = 2.0**-54
    return u


@lru_cache(maxsize=64)
def _order_stats_block(n, i, seed, block, size):
    rng = _block_rng(seed, block, _STREAM_ORDER_STAT)
    x = beta_quantile_newton_many(_open_uniform(rng, size), float(i), float(n + 1 - i))
    x.setflags(write=False)
    return x


def _block_sizes(count):
    full, rest = divmod(count, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def order_stat_sampler(idx: OrderStatIndex, count, seed) -> np.ndarray:
    """``count`` i.i.d. draws of U_(i) by inverse-CDF transform of uniforms."""
    count = _as_int(count, "count")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    seed = _as_int(seed, "seed")
    if not 0 <= seed <= SEED_MAX:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.concatenate(
        [_order_stats_block(idx.n, idx.i, seed, b, s) for b, s in enumerate(_block_sizes(count))]
    )


def order_stat_sampler_sorting(idx: OrderStatIndex, count, seed) -> np.ndarray:
    """Same law as :func:`order_stat_sampler`, by sorting n uniforms per draw.

    O(n) per draw, so only meant for small n as an independent check.
    """
    count = _as_int(count, "count")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    out = []
    for b, s in enumerate(_block_sizes(count)):
        rng = _block_rng(seed, b, _STREAM_SORTING)
        sample = np.sort(rng.random((s, idx.n)), axis=1)
        out.append(sample[:, idx.i - 1])
    return np.concatenate(out)


# -- per-block payoffs --------------------------------------------------------


def _payoff_game1(u, spec, rng):
    a_closer = np.abs(u - spec.p_a) < np.abs(u - spec.p_b)
    return np.where(a_closer, 1.0, -1.0)


def _payoff_game2(u, spec, rng):
    return np.abs(u - spec.p_b) - np.abs(u - spec.p_a)


def _payoff_game3(u, spec, rng):
    return (u - spec.p_b) ** 2 - (u - spec.p_a) ** 2


def _intervals(u, spec):
    lo_a, hi_a = np.minimum(u, spec.p_a), np.maximum(u, spec.p_a)
    lo_b, hi_b = np.minimum(u, spec.p_b), np.maximum(u, spec.p_b)
    return lo_a, hi_a, lo_b, hi_b


def _payoff_game4_analytic(u, spec, rng):
    lo_a, hi_a, lo_b, hi_b = _intervals(u, spec)
    overlap = np.maximum(0.0, np.minimum(hi_a, hi_b) - np.maximum(lo_a, lo_b))
    a_only = (hi_a - lo_a) - overlap
    b_only = (hi_b - lo_b) - overlap
    total = a_only + b_only
    decided = total > 0.0
    lose_prob = np.divide(a_only, total, out=np.zeros_like(total), where=decided)
    v = rng.random(u.shape[0])
    return np.where(decided, np.where(v < lose_prob, -1.0, 1.0), 0.0)


def _payoff_game4_rejection(u, spec, rng, cap):
    lo_a, hi_a, lo_b, hi_b = _intervals(u, spec)
    payoff = np.zeros(u.shape[0])
    pending = np.ones(u.shape[0], dtype=bool)
    for _ in range(cap):
        # a whole block of judge draws per round keeps trial t on its own stream position
        v = rng.random(u.shape[0])
        in_a = (lo_a < v) & (v < hi_a)
        in_b = (lo_b < v) & (v < hi_b)
        a_loses = pending & in_a & ~in_b
        b_loses = pending & in_b & ~in_a
        payoff[a_loses] = -1.0
        payoff[b_loses] = 1.0
        pending &= ~(a_loses | b_loses)
        if not pending.any():
            break
    return payoff


def _run(spec: GameSpec, payoff_fn, workers):
    workers = _as_int(workers, "workers")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    idx = spec.idx

    def one_block(job):
        block, size = job
        u = _order_stats_block(idx.n, idx.i, spec.seed, block, size)
        pay = payoff_fn(u, spec, _block_rng(spec.seed, block, _STREAM_JUDGE))
        return (
            int(np.count_nonzero(pay > 0.0)),
            int(np.count_nonzero(pay < 0.0)),
            math.fsum(pay),
            math.fsum(pay * pay),
        )

    jobs = list(enumerate(_block_sizes(spec.trials)))
    if workers == 1 or len(jobs) == 1:
        parts = [one_block(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one_block, jobs))
    wins_a = sum(p[0] for p in parts)
    wins_b = sum(p[1] for p in parts)
    total = math.fsum(p[2] for p in parts)
    total_sq = math.fsum(p[3] for p in parts)
    t = spec.trials
    mean = total / t
    if t > 1:
        var = max(0.0, (total_sq - t * mean * mean) / (t - 1))
        se = math.sqrt(var / t)
    else:
        se = 0.0
    return wins_a, wins_b, t - wins_a - wins_b, mean, se


def _check_game(spec, game_id):
    if spec.game_id != game_id:
        raise DomainError(f"spec is for game {spec.game_id}, not game {game_id}")


def game1_win_probability(idx: OrderStatIndex, p_a, p_b) -> float:
    """P(A strictly closer to U_(i)): U on A's side of the midpoint."""
    mid = 0.5 * (p_a + p_b)
    below = beta_cdf(mid, float(idx.i), float(idx.n + 1 - idx.i))
    return below if p_a < p_b else 1.0 - below


def game3_payoff(idx: OrderStatIndex, p_a, p_b) -> float:
    """E[(U - p_b)^2 - (U - p_a)^2]; the variance terms cancel."""
    mu = idx.mean
    return (mu - p_b) ** 2 - (mu - p_a) ** 2


def game4_win_probability(idx: OrderStatIndex, p_a, p_b) -> float:
    """P(A wins a decided game-4 trial).

    The symmetric difference of A* and B* always has length |p_a - p_b|,
    and A loses exactly when the judge lands between p_a and p_b on A's
    side.  Averaging over U gives 1/2 + (FPL(p_b) - FPL(p_a)) / (2 |p_a - p_b|).
    """
    gap = abs(p_a - p_b)
    return 0.5 + (fpl(idx.n, idx.i, p_b) - fpl(idx.n, idx.i, p_a)) / (2.0 * gap)


def game4_win_probability_quadrature(idx: OrderStatIndex, p_a, p_b, tol=1e-12) -> float:
    """Same quantity as :func:`game4_win_probability`, integrating the conditional
    win probability against the Beta density."""
    from ._kernels import beta_pdf

    a, b = float(idx.i), float(idx.n + 1 - idx.i)

    def win_given_u(u):
        lo_a, hi_a = min(u, p_a), max(u, p_a)
        lo_b, hi_b = min(u, p_b), max(u, p_b)
        overlap = max(0.0, min(hi_a, hi_b) - max(lo_a, lo_b))
        a_only = hi_a - lo_a - overlap
        b_only = hi_b - lo_b - overlap
        return (b_only / (a_only + b_only)) * beta_pdf(a, b, u)

    return integrate(win_given_u, 0.0, 1.0, points=(p_a, p_b), tol=tol)


def simulate_game1(spec: GameSpec, workers=1) -> GameReport:
    _check_game(spec, 1)
    wins_a, wins_b, draws, mean, se = _run(spec, _payoff_game1, workers)
    prob = game1_win_probability(spec.idx, spec.p_a, spec.p_b)
    return GameReport(1, spec.trials, wins_a, wins_b, draws, mean, se, 2.0 * prob - 1.0, prob)


def simulate_game2(spec: GameSpec, workers=1) -> GameReport:
    _check_game(spec, 2)
    wins_a, wins_b, draws, mean, se = _run(spec, _payoff_game2, workers)
    n, i = spec.idx.n, spec.idx.i
    analytic = expected_pl(n, i, spec.p_b) - expected_pl(n, i, spec.p_a)
    return GameReport(2, spec.trials, wins_a, wins_b, draws, mean, se, analytic)


def simulate_game3(spec: GameSpec, workers=1) -> GameReport:
    _check_game(spec, 3)
    wins_a, wins_b, draws, mean, se = _run(spec, _payoff_game3, workers)
    analytic = game3_payoff(spec.idx, spec.p_a, spec.p_b)
    return GameReport(3, spec.trials, wins_a, wins_b, draws, mean, se, analytic)


def simulate_game4(spec: GameSpec, mode="analytic", cap=DEFAULT_REJECTION_CAP, workers=1) -> GameReport:
    """Game 4 with the judge resolved exactly (``mode="analytic"``) or by
    literally drawing uniforms (``mode="rejection"``, at most ``cap`` per
    trial; an unresolved trial is a draw)."""
    _check_game(spec, 4)
    if mode == "analytic":
        payoff_fn = _payoff_game4_analytic
    elif mode == "rejection":
        cap = _as_int(cap, "cap")
        if cap < 1:
            raise DomainError(f"rejection cap must be a positive integer, got {cap}")

        def payoff_fn(u, spec, rng):
            return _payoff_game4_rejection(u, spec, rng, cap)

    else:
        raise DomainError(f"mode must be 'analytic' or 'rejection', got {mode!r}")
    wins_a, wins_b, draws, mean, se = _run(spec, payoff_fn, workers)
    prob = game4_win_probability(spec.idx, spec.p_a, spec.p_b)
    # every trial is decided in the long run, so the payoff is 2 P - 1
    extra = {"mode": mode} if mode == "analytic" else {"mode": mode, "cap": cap}
    return GameReport(4, spec.trials, wins_a, wins_b, draws, mean, se, 2.0 * prob - 1.0, prob, extra)


def simulate(spec: GameSpec, workers=1, mode="analytic", cap=DEFAULT_REJECTION_CAP) -> GameReport:
    """Dispatch on ``spec.game_id``."""
    if spec.game_id == 1:
        return simulate_game1(spec, workers)
    if spec.game_id == 2:
        return simulate_game2(spec, workers)
    if spec.game_id == 3:
        return simulate_game3(spec, workers)
    return simulate_game4(spec, mode, cap, workers)
