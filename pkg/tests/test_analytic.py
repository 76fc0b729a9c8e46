import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from roughbound.analytic import (
    EULER_GAMMA,
    li,
    pi_lower_599,
    pnt_upper,
    pnt_upper_shifted,
    r_ratio,
)
from roughbound.errors import DomainError, SingularityError


def oracle_li(x):
    """Principal-value integral of 1/log t by quadrature, independent of expi.

    Around the singularity at t = 1 the kernel is written as
    1/log(1+s) - 1/s (smooth, removable) plus 1/s whose principal value
    vanishes over the symmetric window.
    """
    assert x > 1
    a = 0.5  # symmetric window (1-a, 1+a)

    def centered(s):
        return 0.5 if s == 0 else 1.0 / math.log1p(s) - 1.0 / s

    smooth, _ = quad(centered, -a, a, epsabs=1e-13, epsrel=1e-13)
    left, _ = quad(lambda t: 1.0 / math.log(t), 0.0, 1.0 - a, epsabs=1e-13, epsrel=1e-13)
    right, _ = quad(lambda t: 1.0 / math.log(t), 1.0 + a, x, epsabs=1e-13, epsrel=1e-13, limit=200)
    return smooth + left + right


def test_li_special_values():
    assert li(0) == 0.0
    assert li(2) == pytest.approx(1.045163780117492, abs=1e-10)
    assert li(2) == pytest.approx(oracle_li(2), abs=1e-10)
    for x in (3.0, 10.0, 1e4, 1e8):
        assert li(x) == pytest.approx(oracle_li(x), rel=1e-10)


def test_li_errors():
    with pytest.raises(SingularityError):
        li(1)
    with pytest.raises(DomainError):
        li(-0.5)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1.0000001, max_value=1e15), st.floats(min_value=1.0000001, max_value=1e15))
def test_li_monotone(a, b):
    lo, hi = sorted((a, b))
    if lo < hi:
        assert li(lo) < li(hi)


def test_partial_summation_constant(table_small, ctx):
    # sum of exact theta-weighted integrals over [2, 10] plus the li defect is
    # comfortably below -.144, the constant absorbed into the pi upper bound
    knots = [2, 3, 5, 7, 10]
    total = 0.0
    for a, b in zip(knots, knots[1:]):
        total += table_small.theta(a) * (1 / math.log(a) - 1 / math.log(b))
    c = total + (1 + ctx.beta0) * (10 / math.log(10) - li(10))
    assert c < -0.144
    assert c > -0.15


def test_pnt_upper(table_1m, ctx):
    assert pnt_upper(2, ctx) > 1
    assert pnt_upper(1e6, ctx) > table_1m.pi(1e6)
    with pytest.raises(DomainError):
        pnt_upper(1.5, ctx)


def test_pnt_upper_shifted(ctx):
    # independent one-shot sieve for pi(1e7)
    n = 10_000_000
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if mask[p]:
            mask[p * p:: p] = False
    pi_1e7 = int(mask.sum())
    assert pi_1e7 - 4 < pnt_upper_shifted(1e7, 4, ctx)
    with pytest.raises(DomainError):
        pnt_upper_shifted(1e7, 1, ctx)
    with pytest.raises(DomainError):
        pnt_upper_shifted(1e7, 10**7 + 1, ctx)


def test_r_ratio(ctx):
    e2 = math.exp(2)
    assert r_ratio(e2, ctx) == pytest.approx((1 + ctx.beta0) * oracle_li(e2) * 2 / e2, rel=1e-9)
    assert 1 < r_ratio(1e10, ctx) < 1.1
    assert r_ratio(599, ctx) > 1 + 1 / math.log(599)
    with pytest.raises(DomainError):
        r_ratio(1.0, ctx)


def test_pi_lower_599(table_1m):
    assert pi_lower_599(599) < table_1m.pi(599) == 109
    assert pi_lower_599(1e4) < table_1m.pi(1e4)
    assert pi_lower_599(1e6) < table_1m.pi(1e6)
    with pytest.raises(DomainError):
        pi_lower_599(598)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=2.5, max_value=1e6), st.floats(min_value=2.5, max_value=1e6))
def test_antiderivative_identity(a, b):
    # the integrand 1/(log t)^2 has antiderivative li(t) - t/log t
    lo, hi = sorted((a, b))
    if hi - lo < 1e-6:
        return
    val, _ = quad(lambda t: 1.0 / math.log(t) ** 2, lo, hi, epsabs=1e-11, epsrel=1e-11, limit=200)
    closed = (li(hi) - hi / math.log(hi)) - (li(lo) - lo / math.log(lo))
    assert val == pytest.approx(closed, rel=1e-8, abs=1e-9)


def test_context_constants(ctx):
    assert math.exp(-ctx.euler_gamma) == pytest.approx(0.561459483566885, abs=1e-12)
    assert ctx.beta0 == 2.3e-8
    assert ctx.beta1(2000) == 0.00624
    assert ctx.beta1(1e5) == 0.00322
    with pytest.raises(DomainError):
        ctx.beta1(500)


def test_mertens_err_window(ctx):
    assert ctx.mertens_err_window(2000) == (0.0, 0.00624)
    assert ctx.mertens_err_window(1e5) == (0.0, 0.00161)
    lo, hi = ctx.mertens_err_window(1e8)
    assert lo == -hi
    assert hi == pytest.approx(1.9036 / math.log(1e8) ** 3)
    with pytest.raises(DomainError):
        ctx.mertens_err_window(1000)


def test_window_consistent_with_table(table_1m, ctx):
    # the window really contains the measured deviation on the sieve range
    b = ctx.meissel_mertens_b
    for t in (1100, 5000, 1e4, 1e5, 5e5, 1e6 - 7):
        dev = table_1m.recip_sum(t) - math.log(math.log(t)) - b
        lo, hi = ctx.mertens_err_window(t)
        assert lo < dev < hi


def test_pair_sum_slack_direction(table_1m, ctx):
    # sum over y < p <= sqrt(x) of 1/p stays below log(log sqrt(x)/log y) + beta1
    rng = np.random.default_rng(23)
    for _ in range(25):
        y = float(rng.uniform(1100, 30_000))
        u = float(rng.uniform(2.0, 3.0))
        rx = y ** (u / 2)
        if rx > 1e6:
            continue
        s = table_1m.recip_sum(rx) - table_1m.recip_sum(y)
        assert s < math.log(math.log(rx) / math.log(y)) + ctx.beta1(y)
        assert s > math.log(math.log(rx) / math.log(y)) - ctx.beta1(y)
