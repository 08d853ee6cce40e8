import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=80,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # load the compiled kernels once so timing checks measure steady-state work
    from plotpos import beta_cdf, beta_median_bisection, beta_quantile_newton, order_stat_sampler
    from plotpos.beta_core import OrderStatIndex

    beta_cdf(0.3, 2.0, 3.0)
    beta_median_bisection(3, 1)
    beta_quantile_newton(0.5, 2.0, 3.0)
    order_stat_sampler(OrderStatIndex(2, 1), 10, 0)
