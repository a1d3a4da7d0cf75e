import math

import pytest

import intermittent_aoi as aoi


def fig_params(lam=1.0, var_t=1.0):
    return aoi.SystemParams(
        lam, aoi.DiscreteDist([(1.0, 0.8), (21.0, 0.2)]), aoi.TransmissionModel(1.0, var_t)
    )


def test_no_threshold_benchmark():
    p = fig_params(10.0)
    assert abs(aoi.peak_aoi(p, aoi.NoThresholdZeroWait()) - 12.3) <= 1e-9
    assert abs(aoi.peak_aoi_threshold_policy(p, math.inf) - 12.3) <= 1e-9


def test_threshold_fixed_point():
    p = aoi.SystemParams(1.0, aoi.DiscreteDist.point(0.0), aoi.TransmissionModel(1.0, 0.0))
    s = aoi.solve_threshold(p)
    assert abs(s.w_th - 1.8414056604369606) <= 1e-8
    assert abs(aoi.threshold_cost(p, s.w_th) - s.w_th) <= 1e-8
    assert abs(aoi.g_root_function(p, s.w_th)) <= 1e-8


def test_waiting_criterion():
    p = fig_params(1.0, 200.0)
    assert abs(aoi.k_criterion(p) - 1076.0) <= 1e-9
    assert abs(aoi.x_star(p) - 11.392) <= 1e-3
    assert 0.0 < aoi.h_minimizer(p) < aoi.x_star(p)


def test_optimizer_and_policies():
    p = fig_params()
    policy, value = aoi.optimize_policy(p, "hybrid", waits=[0, 1, 2])
    assert isinstance(policy, aoi.Hybrid)
    assert value <= aoi.average_aoi(p, aoi.NoThresholdZeroWait()) + 1e-12
    assert aoi.describe(aoi.Pod(1.0, 0.5)) == "pod(1;0.5)"
    with pytest.raises(ValueError):
        aoi.optimize_policy(p, "bogus")


def test_simulation_matches_closed_form():
    p = fig_params(10.0)
    est = aoi.simulate(p, aoi.NoThresholdZeroWait(), departures=50_000, seed=3)
    assert est["cycles"] == 50_000
    assert abs(est["peak_aoi"]["mean"] - 12.3) <= 2.0 * est["peak_aoi"]["halfwidth"]
    again = aoi.simulate(p, aoi.NoThresholdZeroWait(), departures=50_000, seed=3, threads=2)
    assert again == est


def test_run_command_and_errors():
    csv = aoi.run_command("solve-peak", '{"solve_peak": {"lambda_grid": [10]}}')
    header, row = csv.strip().splitlines()
    assert header == "lambda,w_th,peak_opt,peak_no_threshold"
    assert row.endswith(",12.3")
    with pytest.raises(aoi.ConfigError):
        aoi.run_command("solve-peak", '{"nope": 1}')
    with pytest.raises(aoi.DomainError):
        aoi.TransmissionModel(-1.0, 0.0)
