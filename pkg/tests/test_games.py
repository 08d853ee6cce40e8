import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from plotpos import (
    DomainError,
    GameSpec,
    OrderStatIndex,
    beta_cdf,
    beta_median_bisection,
    expected_pl,
    order_stat_sampler,
    simulate,
    simulate_game1,
    simulate_game2,
    simulate_game3,
    simulate_game4,
)
from plotpos.games import (
    BLOCK_SIZE,
    game1_win_probability,
    game4_win_probability,
    game4_win_probability_quadrature,
    order_stat_sampler_sorting,
)

MILLION = 10**6
GRID = [k / 10 for k in range(1, 10)]


def within(report_value, analytic, se, k=4.0):
    return abs(report_value - analytic) <= k * se


def binomial_se(p, trials):
    return math.sqrt(p * (1 - p) / trials)


# -- validation ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(game_id=1, n=3, i=2, p_a=0.5, p_b=0.5, trials=10),
        dict(game_id=5, n=3, i=2, p_a=0.4, p_b=0.5, trials=10),
        dict(game_id=1, n=3, i=2, p_a=0.4, p_b=0.5, trials=0),
        dict(game_id=1, n=3, i=2, p_a=0.0, p_b=0.5, trials=10),
        dict(game_id=1, n=3, i=2, p_a=0.4, p_b=1.0, trials=10),
        dict(game_id=1, n=3, i=4, p_a=0.4, p_b=0.5, trials=10),
        dict(game_id=1, n=3, i=2, p_a=0.4, p_b=0.5, trials=10, seed=-1),
        dict(game_id=1, n=3, i=2, p_a=0.4, p_b=0.5, trials=10, seed=2**64),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        GameSpec.make(**kwargs)


def test_wrong_simulator():
    spec = GameSpec.make(2, 3, 2, 0.4, 0.5, 10)
    with pytest.raises(DomainError):
        simulate_game1(spec)


def test_game4_mode_and_cap():
    spec = GameSpec.make(4, 3, 2, 0.4, 0.5, 10)
    with pytest.raises(DomainError):
        simulate_game4(spec, mode="rejection", cap=0)
    with pytest.raises(DomainError):
        simulate_game4(spec, mode="judge")


@given(
    game=st.integers(1, 4),
    n=st.integers(1, 12),
    data=st.data(),
    trials=st.integers(1, 300),
    seed=st.integers(0, 2**64 - 1),
)
def test_report_invariants(game, n, data, trials, seed):
    i = data.draw(st.integers(1, n))
    p_a = data.draw(st.floats(0.01, 0.99))
    p_b = data.draw(st.floats(0.01, 0.99).filter(lambda p: p != p_a))
    r = simulate(GameSpec.make(game, n, i, p_a, p_b, trials, seed))
    assert r.wins_a + r.wins_b + r.draws == trials
    assert r.std_error >= 0


# -- game 1 ------------------------------------------------------------------------------


def test_game1_uniform_example():
    r = simulate_game1(GameSpec.make(1, 1, 1, 0.5, 0.9, MILLION, 11))
    assert r.analytic_win_prob_a == pytest.approx(0.7, abs=1e-15)
    rate = r.wins_a / r.trials
    assert within(rate, 0.7, binomial_se(0.7, r.trials))


def test_game1_median_beats_mean_n2():
    m = 1 - 2**-0.5
    r = simulate_game1(GameSpec.make(1, 2, 1, m, 1 / 3, MILLION, 5))
    rate = r.wins_a / r.trials
    assert (rate - 0.5) / binomial_se(0.5, r.trials) > 6


def test_game1_ties_go_to_b():
    # U exactly halfway between the two positions
    u = np.array([0.5])
    from plotpos.games import _payoff_game1

    spec = GameSpec.make(1, 1, 1, 0.25, 0.75, 1)
    assert _payoff_game1(u, spec, None)[0] == -1.0


@pytest.mark.parametrize("n, i", [(2, 1), (3, 1), (3, 2), (5, 2), (10, 3)])
def test_game1_median_optimal(n, i):
    idx = OrderStatIndex(n, i)
    m = beta_median_bisection(n, i)
    for p_b in GRID:
        if abs(p_b - m) < 1e-9:
            continue
        prob = game1_win_probability(idx, m, p_b)
        assert prob > 0.5
        r = simulate_game1(GameSpec(1, idx, m, p_b, MILLION, 2024))
        assert within(r.wins_a / r.trials, prob, binomial_se(prob, r.trials))


def test_game1_analytic_uses_the_right_side():
    idx = OrderStatIndex(4, 3)
    below = beta_cdf(0.5, 3, 2)
    assert game1_win_probability(idx, 0.4, 0.6) == pytest.approx(below, abs=1e-16)
    assert game1_win_probability(idx, 0.6, 0.4) == pytest.approx(1 - below, abs=1e-16)


# -- game 2 ------------------------------------------------------------------------------


def test_game2_uniform_example():
    r = simulate_game2(GameSpec.make(2, 1, 1, 0.5, 0.6, MILLION, 3))
    assert r.analytic_payoff_a == pytest.approx(0.01, abs=1e-15)
    assert within(r.mean_payoff_a, r.analytic_payoff_a, r.std_error)


@pytest.mark.parametrize("n, i", [(2, 1), (3, 2), (5, 2), (10, 3), (10, 10)])
def test_game2_epl_consistency(n, i):
    m = beta_median_bisection(n, i)
    for p_b in (0.1, 0.45, 0.9):
        r = simulate_game2(GameSpec.make(2, n, i, m, p_b, 200_000, 8))
        expected = expected_pl(n, i, p_b) - expected_pl(n, i, m)
        assert abs(r.analytic_payoff_a - expected) <= 1e-12
        assert r.analytic_payoff_a > 0
        assert within(r.mean_payoff_a, r.analytic_payoff_a, r.std_error)


# -- game 3 ------------------------------------------------------------------------------


def test_game3_uniform_example():
    r = simulate_game3(GameSpec.make(3, 1, 1, 0.5, 0.7, MILLION, 3))
    assert r.analytic_payoff_a == pytest.approx(0.04, abs=1e-15)
    assert within(r.mean_payoff_a, 0.04, r.std_error)


def test_game3_mean_beats_median():
    r = simulate_game3(GameSpec.make(3, 5, 2, 2 / 6, beta_median_bisection(5, 2), MILLION, 9))
    assert r.analytic_payoff_a > 0
    assert within(r.mean_payoff_a, r.analytic_payoff_a, r.std_error)


# -- game 4 ------------------------------------------------------------------------------


def test_game4_uniform_example():
    idx = OrderStatIndex(1, 1)
    # for uniform U the answer is 1/2 + ((0.9^2 + 0.1^2) - (0.5^2 + 0.5^2)) / (4 * 0.4) = 0.7
    assert game4_win_probability(idx, 0.5, 0.9) == pytest.approx(0.7, abs=1e-15)
    assert game4_win_probability_quadrature(idx, 0.5, 0.9) == pytest.approx(0.7, abs=1e-12)
    r = simulate_game4(GameSpec(4, idx, 0.5, 0.9, 200_000, 1))
    assert r.win_fraction_a > 0.5
    assert within(r.win_fraction_a, 0.7, r.win_fraction_se)


@pytest.mark.parametrize("n, i, p_a, p_b", [(5, 2, 0.3, 0.6), (2, 1, 0.2, 0.1), (10, 7, 0.65, 0.64), (30, 1, 0.9, 0.02)])
def test_game4_closed_form_matches_quadrature(n, i, p_a, p_b):
    idx = OrderStatIndex(n, i)
    assert game4_win_probability(idx, p_a, p_b) == pytest.approx(
        game4_win_probability_quadrature(idx, p_a, p_b), abs=1e-10
    )


def test_game4_median_favoured_n2():
    m = 1 - 2**-0.5
    r = simulate_game4(GameSpec.make(4, 2, 1, m, 1 / 3, MILLION, 17))
    assert r.draws == 0
    assert r.win_fraction_a > 0.5
    assert (r.win_fraction_a - 0.5) / r.win_fraction_se > 4
    assert within(r.win_fraction_a, r.analytic_win_prob_a, r.win_fraction_se)


def test_game4_modes_agree():
    m = beta_median_bisection(5, 2)
    spec = GameSpec.make(4, 5, 2, m, 2 / 6, 100_000, 99)
    a = simulate_game4(spec, mode="analytic")
    r = simulate_game4(spec, mode="rejection", cap=10_000)
    combined = math.hypot(a.win_fraction_se, r.win_fraction_se)
    assert abs(a.win_fraction_a - r.win_fraction_a) <= 4 * combined


def test_game4_rejection_cap_gives_draws():
    # a single judge draw rarely lands in the small symmetric difference
    r = simulate_game4(GameSpec.make(4, 5, 3, 0.50, 0.52, 20_000, 4), mode="rejection", cap=1)
    assert r.draws > 0.9 * r.trials
    assert r.wins_a + r.wins_b + r.draws == r.trials


# -- determinism -------------------------------------------------------------------------


@pytest.mark.parametrize("game", [1, 2, 3, 4])
def test_worker_count_invariance(game):
    spec = GameSpec.make(game, 7, 3, 0.31, 0.42, 3 * BLOCK_SIZE + 123, 2**63 + 5)
    reports = [simulate(spec, workers=w) for w in (1, 2, 8)]
    assert reports[0] == reports[1] == reports[2]


def test_rejection_worker_invariance():
    spec = GameSpec.make(4, 7, 3, 0.31, 0.42, 2 * BLOCK_SIZE + 7, 1)
    reports = [simulate(spec, workers=w, mode="rejection", cap=50) for w in (1, 2, 8)]
    assert reports[0] == reports[1] == reports[2]


def test_seed_changes_outcome():
    a = simulate(GameSpec.make(1, 7, 3, 0.31, 0.42, 5000, 1))
    b = simulate(GameSpec.make(1, 7, 3, 0.31, 0.42, 5000, 2))
    assert (a.wins_a, a.mean_payoff_a) != (b.wins_a, b.mean_payoff_a)


def test_trial_randomness_depends_only_on_index():
    idx = OrderStatIndex(6, 2)
    long = order_stat_sampler(idx, BLOCK_SIZE + 500, 77)
    short = order_stat_sampler(idx, 300, 77)
    np.testing.assert_array_equal(long[:300], short)


# -- sampler -----------------------------------------------------------------------------


def test_sampler_uniform_mean():
    x = order_stat_sampler(OrderStatIndex(1, 1), 10**5, 0)
    assert abs(x.mean() - 0.5) <= 4 * (12 * 10**5) ** -0.5
    assert np.all((x > 0) & (x < 1))


def test_sampler_max_mean():
    x = order_stat_sampler(OrderStatIndex(5, 5), 10**5, 1)
    sd = math.sqrt(5 / (36 * 7))
    assert abs(x.mean() - 5 / 6) <= 4 * sd / math.sqrt(x.size)


def test_sampler_min_median():
    x = order_stat_sampler(OrderStatIndex(5, 1), 10**5, 2)
    frac = np.mean(x < 1 - 2 ** (-1 / 5))
    assert abs(frac - 0.5) <= 4 * 0.5 / math.sqrt(x.size)


@pytest.mark.parametrize("n, i", [(3, 2), (12, 1), (40, 37)])
def test_sampler_ks(n, i):
    x = order_stat_sampler(OrderStatIndex(n, i), 50_000, 3)
    result = scipy.stats.kstest(x, lambda u: beta_cdf(np.clip(u, 0, 1), i, n + 1 - i))
    assert result.pvalue > 1e-3


@pytest.mark.parametrize("n, i", [(1, 1), (4, 2), (9, 9), (20, 6)])
def test_sampler_matches_sorting_route(n, i):
    idx = OrderStatIndex(n, i)
    inverse = order_stat_sampler(idx, 40_000, 5)
    sorting = order_stat_sampler_sorting(idx, 40_000, 5)
    assert scipy.stats.ks_2samp(inverse, sorting).pvalue > 1e-3


def test_sampler_count_validated():
    with pytest.raises(DomainError):
        order_stat_sampler(OrderStatIndex(2, 1), 0, 1)
