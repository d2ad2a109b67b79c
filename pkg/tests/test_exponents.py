from fractions import Fraction

import mpmath
import pytest

from core.errors import EmptyWindowError, InputError
from core.lattice import PathSpec, ThetaSpec, dual_lattice
from core.scale import ScaleValue
from tools.exponent_tool import (
    INFINITY,
    ExponentEstimates,
    Trace,
    beta_alpha_direct,
    beta_alpha_from_psi,
    check_bounds,
    check_dual_inequality,
    check_main_inequalities,
    check_transference,
    confirm_stability,
    divergence_trend,
    estimate_exponents,
    liminf_consistency,
    minkowski_band,
    psi_trace,
    t_grid,
    transference_band,
)

CLOSE = mpmath.mpf("1e-20")


def close(a, b) -> bool:
    return abs(a - b) <= CLOSE


def test_zero_theta_trace_n1(zero_primal):
    lattice, path = zero_primal(1)
    trace = psi_trace(lattice, path, Fraction(2), Fraction(100), 12, 2)
    for sample in trace.samples:
        assert sample.lambdas == (1 / sample.u, sample.u)
        assert close(sample.psis[0], -1) and close(sample.psis[1], 1)
    assert [sample.u for sample in trace.samples] == sorted(sample.u for sample in trace.samples)
    assert len(trace.events) == 1 and trace.samples[0].event


def test_zero_theta_trace_n2(zero_primal):
    lattice, path = zero_primal(2)
    trace = psi_trace(lattice, path, Fraction(2), Fraction(50), 8, 3)
    for sample in trace.samples:
        assert sample.lambdas == (sample.u ** -2, sample.u, sample.u)
        assert all(close(psi, expected) for psi, expected in zip(sample.psis, (-1, Fraction(1, 2), Fraction(1, 2))))
    est = estimate_exponents(trace)
    assert close(est.lower[0], -1) and close(est.upper[2], mpmath.mpf(1) / 2)
    # Θ = 0 is rational, so only the first inequality is expected to hold
    report = check_main_inequalities(est, 2)
    assert all(row.passed for row in report.rows if row.anchor == "eq:main_1")
    assert not report.passed
    assert minkowski_band(trace).passed


def test_zero_theta_dual_and_transference(zero_primal):
    theta = ThetaSpec.from_strings(["rat:0", "rat:0"])
    dual = psi_trace(dual_lattice(theta, 1), PathSpec.dual(1, 2), Fraction(2), Fraction(50), 8, 3)
    assert dual.mode == "dual" and not dual.events
    for sample in dual.samples:
        assert all(close(psi, expected) for psi, expected in zip(sample.psis, (-1, -1, 2)))

    lattice, path = zero_primal(2)
    primal = psi_trace(lattice, path, Fraction(2), Fraction(50), 8, 3, find_events=False)
    report = check_transference(estimate_exponents(primal), estimate_exponents(dual), 2)
    assert report.passed
    assert check_bounds(estimate_exponents(dual)).passed


def test_golden_trace_stays_bounded(golden):
    trace = psi_trace(golden, PathSpec.primal(1, 1), Fraction(2), Fraction(10 ** 4), 60, 2)
    est = estimate_exponents(trace, 0.5)
    assert est.samples_in_window > 0 and est.events_in_window > 0
    assert check_bounds(est, 0.02).passed
    assert check_main_inequalities(est, 1, 0.05).passed
    assert minkowski_band(trace).passed
    # badly approximable: ψ_1 stays near 0
    assert abs(est.lower[0]) < 0.3
    assert liminf_consistency(trace, 0.5, 0.05).passed


def test_window_edges(zero_primal):
    lattice, path = zero_primal(1)
    trace = psi_trace(lattice, path, Fraction(2), Fraction(100), 10, 2)
    assert len(trace.window(1.0)) == 1
    assert trace.window(1.0)[0] is trace.samples[-1]
    est = estimate_exponents(trace, 1.0)
    assert est.samples_in_window == 1 and est.window_start == trace.s_max
    assert len(trace.window(1e-9)) == len(trace.samples)
    with pytest.raises(InputError):
        trace.window(0)
    empty = Trace("x", "primal", 1, 1, 2, Fraction(2), Fraction(3), ())
    with pytest.raises(EmptyWindowError):
        estimate_exponents(empty)


def test_from_values_checks():
    zeros = ExponentEstimates.from_values([0, 0], [0, 0])
    report = check_main_inequalities(zeros, 1)
    assert report.passed
    assert report.notes["main_2_evaluated"]
    assert all(row.slack == 0 for row in report.rows)

    broken = ExponentEstimates.from_values([0, 0], [0, -0.5])
    failures = check_main_inequalities(broken, 1).failures
    assert ("eq:main_1", 2) in [(row.anchor, row.p) for row in failures]

    too_high = ExponentEstimates.from_values([0, 0], [1.2, 1.2])
    assert not check_bounds(too_high).passed

    partial = ExponentEstimates.from_values([0], [0], n=2)
    assert not check_main_inequalities(partial, 2).notes["main_2_evaluated"]


def test_dual_inequality():
    good = ExponentEstimates.from_values([0, 0], [0, 0], mode="dual")
    assert check_dual_inequality(good, 1).passed
    bad = ExponentEstimates.from_values([0.5, 0.5], [-0.5, -0.5], n=1, mode="dual")
    assert not check_dual_inequality(bad, 1).passed


def test_transference_needs_full_estimates():
    part = ExponentEstimates.from_values([0], [0])
    with pytest.raises(InputError):
        check_transference(part, part, 1)


def test_transference_band_is_reported_not_added():
    primal = ExponentEstimates.from_values([0, 0], [0, 0])
    dual = ExponentEstimates.from_values([0.15, 0], [0.15, 0], mode="dual")
    report = check_transference(primal, dual, 1, 0.1, band=mpmath.mpf("0.2"))
    assert not report.passed
    assert [row.p for row in report.failures] == [1, 1]
    assert report.notes["within_band"] and report.notes["band"] == "0.2"
    assert check_transference(primal, primal, 1).passed


def test_transference_band():
    assert close(transference_band(2, 2), 1)
    assert transference_band(3, 10 ** 6) < transference_band(3, 10)


def test_beta_alpha_from_psi():
    values = beta_alpha_from_psi(ExponentEstimates.from_values([0, -1], [0.5, -1]), 1, 1)
    assert values[0].beta == 1
    with mpmath.workdps(30):
        assert close(values[0].alpha, mpmath.mpf(1) / 3)
    assert values[1].beta == INFINITY and values[1].alpha == INFINITY


def test_direct_rational_is_infinite():
    theta = ThetaSpec.from_strings(["rat:22/7"])
    result = beta_alpha_direct(theta, 1, t_grid(Fraction(10), Fraction(1000), 5))
    assert result.beta == INFINITY
    assert all(error == 0 for error in result.errors)


def test_direct_zero_theta_second_exponent():
    theta = ThetaSpec.from_strings(["rat:0"])
    result = beta_alpha_direct(theta, 2, t_grid(Fraction(10), Fraction(1000), 4))
    assert result.errors == (1, 1, 1, 1)
    assert result.beta == 0 and result.alpha == 0


def test_direct_golden_is_one(golden_theta):
    result = beta_alpha_direct(golden_theta, 1, t_grid(Fraction(10), Fraction(10 ** 6), 20), tail_fraction=0.7)
    assert abs(result.beta - 1) < 0.1
    assert 1 <= result.alpha <= result.beta


def test_direct_rejects_bad_grid(golden_theta):
    with pytest.raises(InputError):
        beta_alpha_direct(golden_theta, 1, [Fraction(10), Fraction(5)])
    with pytest.raises(InputError):
        beta_alpha_direct(ThetaSpec.from_strings(["rat:1", "rat:2"], m=2), 1, [Fraction(10)])


def test_divergence_trend_grows(golden):
    trace = psi_trace(golden, PathSpec.primal(1, 1), Fraction(2), Fraction(10 ** 4), 40, 2, find_events=False)
    trend = divergence_trend(trace, 1)
    assert set(trend.series) == {"s(1+psi_1)", "s(1/n-psi_1)", "s(1+psi_2)", "s(1/n-psi_2)"}
    head = [value for s, value in trend.series["s(1+psi_1)"] if s < 2]
    assert trend.tail_max["s(1+psi_1)"] > max(head)


def test_liminf_without_events(zero_primal):
    lattice, path = zero_primal(1)
    trace = psi_trace(lattice, path, Fraction(2), Fraction(100), 10, 2, find_events=False)
    result = liminf_consistency(trace)
    assert result.events_in_window == 0 and not result.passed


def test_confirm_stability(golden, golden_theta):
    path = PathSpec.primal(1, 1)
    trace = psi_trace(golden, path, Fraction(2), Fraction(500), 15, 2, find_events=False)
    report = confirm_stability(trace, golden_theta, path, Fraction(1, 10 ** 30))
    assert report.passed and report.checked == len(trace.samples)
    assert report.confirmed_with == Fraction(1, 10 ** 60)


def test_minkowski_band_needs_all_minima(zero_primal):
    lattice, path = zero_primal(1)
    trace = psi_trace(lattice, path, Fraction(2), Fraction(10), 3, 1)
    with pytest.raises(InputError):
        minkowski_band(trace)


def test_trace_samples_exact_u(zero_primal):
    lattice, path = zero_primal(1)
    trace = psi_trace(lattice, path, Fraction(2), Fraction(32), 5, 2)
    assert trace.samples[0].u == ScaleValue(2)
    assert trace.samples[-1].u == ScaleValue(32)
