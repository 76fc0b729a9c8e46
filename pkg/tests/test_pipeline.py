import json
import math

import numpy as np
import pytest

from roughbound.errors import DomainError
from roughbound.pipeline import (
    BoundReport,
    C3_SMALL_U,
    ITERATION,
    MID_Y,
    PipelineConfig,
    REFERENCE_SMALL_Y_ROWS,
    REGION_ORDER,
    SELBERG_CLOSED,
    SELBERG_FINITE,
    SMALL_U,
    SMALL_Y,
    covering_regions,
    epsilon_k,
    iteration_tail_epsilon,
    run_full_pipeline,
    small_u_coefficient,
    verify_iteration,
    verify_small_u,
    verify_small_y,
)
from roughbound.primes import build_prime_table

_T = build_prime_table(10_100)
_FAST_ROWS = REFERENCE_SMALL_Y_ROWS[:6]  # bounds up to 1603: scans are instant


def test_epsilon_k_brute():
    q0 = 241
    cap = q0 ** (4 / 3)
    best = -math.inf
    best_q1 = None
    for q1 in map(int, _T.primes_between(q0, cap)):
        s = sum(1.0 / (int(p) * math.log(int(p)))
                for p in _T.primes_between(q0 - 1, q1))
        val = -1.0 / math.log(q0) + 1.0 / math.log(q1) + s
        if val > best:
            best, best_q1 = val, q1
    eps, q1 = epsilon_k(_T, q0, 3)
    assert eps == pytest.approx(best, abs=1e-15)
    assert q1 == best_q1


def test_epsilon_k_nonincreasing_in_k():
    rng = np.random.default_rng(17)
    qs = [int(p) for p in _T.primes_between(241, 1000)]
    for q0 in rng.choice(qs, size=20, replace=False):
        values = [epsilon_k(_T, int(q0), k)[0] for k in (3, 4, 5, 6)]
        assert all(a >= b - 1e-18 for a, b in zip(values, values[1:]))


def test_chain_bracket_consistency():
    # the bracket 1/log q1 + sum 1/(p log p) never exceeds the uniform form
    for q0 in (251, 433, 883):
        eps3, _ = epsilon_k(_T, q0, 3)
        rhs = (1.0 / math.log(q0)) * (1.0 + eps3 * math.log(q0))
        for q1 in map(int, _T.primes_between(q0, q0 ** (4 / 3))):
            s = sum(1.0 / (int(p) * math.log(int(p)))
                    for p in _T.primes_between(q0 - 1, q1))
            bracket = 1.0 / math.log(q1) + s
            assert bracket <= rhs + 1e-15


def test_iteration_certificate():
    cert = verify_iteration(_T)
    assert cert.verified
    assert cert.margin > 0
    assert cert.params["c3"] == C3_SMALL_U
    # the tail value at the first probe already sits below the target
    eps = iteration_tail_epsilon(1009)
    assert C3_SMALL_U * (1 + eps * math.log(1009)) ** 5 < 0.6
    with pytest.raises(DomainError):
        iteration_tail_epsilon(997)


def test_small_y_fast_rows():
    cert = verify_small_y(0.6, _T, rows=_FAST_ROWS)
    assert cert.verified
    assert cert.margin == pytest.approx(0.6 - 0.579398, abs=1e-4)
    by_interval = {r["y_lo"]: r for r in cert.rows}
    assert by_interval[2]["x_bound"] == 22
    assert by_interval[11]["x_bound_match"] is True
    assert by_interval[2]["violations"] == 1  # x = 9 only


def test_small_y_lowered_target_fails_with_witnesses():
    cert = verify_small_y(0.55, _T, rows=_FAST_ROWS)
    assert not cert.verified
    issues = {f["issue"] for f in cert.failures}
    assert "target violated" in issues
    witnessed = [f for f in cert.failures if f["issue"] == "target violated"]
    assert witnessed and witnessed[0]["witnesses"]


def test_small_y_cap_guard():
    from roughbound.errors import ResourceError
    with pytest.raises(ResourceError, match="cap"):
        verify_small_y(0.6, _T, cap=100, rows=_FAST_ROWS)


def test_small_u_coefficient_domain(ctx):
    with pytest.raises(DomainError):
        small_u_coefficient(2000.0, 3.2, ctx)
    with pytest.raises(DomainError):
        small_u_coefficient(500.0, 2.5, ctx)  # below the window validity


def test_small_u_coefficient_spot(ctx):
    # at u=3 and huge y the coefficient must still dominate the limiting
    # density at u=3, which is (1 + log 2)/3 = .56438
    val = small_u_coefficient(1e12, 3.0, ctx)
    assert (1 + math.log(2)) / 3 < val < C3_SMALL_U
    assert val == pytest.approx(0.565185, abs=1e-5)  # regression pin
    assert small_u_coefficient(1100.0, 2.9, ctx) < C3_SMALL_U


def test_covering_regions_segments():
    assert covering_regions(10**6, 50) == {SMALL_Y}
    assert covering_regions(10**6, 100) == {MID_Y}
    assert covering_regions(241.0 ** 2.5, 241) == {SMALL_U}
    assert covering_regions(241.0 ** 5, 241) == {ITERATION}
    assert covering_regions(241.0 ** 7.7, 241) == {ITERATION, SELBERG_FINITE}
    assert covering_regions(600_000.0 ** 9, 600_000) == {SELBERG_CLOSED}
    assert covering_regions(100, 50) == set()  # y > sqrt(x): outside the theorem


def test_covering_regions_no_gap_on_boundaries():
    rng = np.random.default_rng(2)
    ys = [3, 70.999, 71, 240.999, 241, 499_999, 500_000, 500_001, 1100]
    us = [2, 2.999, 3, 7.49, 7.5, 7.51, 7.999, 8, 12]
    pairs = [(y, u) for y in ys for u in us]
    rng.shuffle(pairs)
    checked = 0
    for y, u in pairs[:80]:
        x = float(y) ** u
        assert covering_regions(x, y), f"gap at y={y}, u={u}"
        checked += 1
    assert checked >= 50


def test_report_roundtrip_and_filter():
    config = PipelineConfig(regions=(ITERATION,), sieve_limit=10_100)
    report = run_full_pipeline(config)
    assert len(report.certificates) == 1
    assert report.certificates[0].region == ITERATION
    assert report.verdict
    back = BoundReport.from_json(report.to_json())
    assert back == report
    assert "iteration" in report.to_text()
    assert report.to_csv().splitlines()[0] == "region,verified,margin,method"
    data = json.loads(report.to_json())
    assert isinstance(data["certificates"][0]["margin"], float)


def test_unknown_region_rejected():
    with pytest.raises(DomainError):
        run_full_pipeline(PipelineConfig(regions=("nowhere",)))


def test_small_u_reduced_deterministic_parallel():
    table = build_prime_table(700)
    serial = verify_small_u(table, y_exhaustive_cap=270, parallelism=1)
    twice = verify_small_u(table, y_exhaustive_cap=270, parallelism=2)
    assert serial == twice
    assert serial.params["exhaustive_max"] < 0.56404


def test_small_y_parallel_deterministic():
    serial = verify_small_y(0.6, _T, rows=_FAST_ROWS, parallelism=1)
    par = verify_small_y(0.6, _T, rows=_FAST_ROWS, parallelism=3)
    assert serial == par
