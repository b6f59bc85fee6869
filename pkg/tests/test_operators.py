"""Tests for the averaging operators, dilations and index machinery.

The averaging operators on step functions have exact closed forms
(A/t + B per cell, A + B log t per cell), so most oracles here are
textbook integrals of indicators written out by hand.
"""

import math

import numpy as np
import pytest

from bfslab import (
    IndexReport,
    Lp,
    Marcinkiewicz,
    MarcinkiewiczStar,
    OperatorNormBound,
    OrliczCL,
    Power,
    PowerWeight,
    StepFunction,
    YoungSum,
    boyd_indices,
    counting,
    dilation_indices,
    double_star,
    half_line,
    hardy,
    hardy_dual,
    hardy_identity_residual,
    lorentz_pq,
    operator_norm,
    rearrange,
    simonenko_indices,
    unit_interval,
)
from bfslab.weights import PowerLogWeight


def _indicator(mspace, tau):
    values = (mspace.breakpoints[1:] <= tau * (1 + 1e-12)).astype(float)
    return StepFunction(mspace, values)


# ---------------------------------------------------------------------------
# averaging operators, closed forms


def test_hardy_of_indicator_is_min_one_tau_over_t():
    tau = 0.25
    ms = unit_interval(32, include=(tau,))
    h = hardy(_indicator(ms, tau))
    ts = np.geomspace(1e-4, 1.0, 200)
    want = np.where(ts <= tau, 1.0, tau / ts)
    assert np.allclose(h(ts), want, rtol=1e-12, atol=0.0)


def test_hardy_dual_of_indicator_is_log_tail():
    tau = 0.25
    ms = unit_interval(32, include=(tau,))
    hs = hardy_dual(_indicator(ms, tau))
    ts = np.geomspace(1e-4, 1.0, 200)
    want = np.where(ts <= tau, np.log(tau / ts), 0.0)
    assert np.allclose(hs(ts), want, rtol=1e-10, atol=1e-12)


def test_hardy_agrees_with_double_star_on_decreasing_input():
    rng = np.random.default_rng(31)
    for ms in (unit_interval(16), half_line(16)):
        for _ in range(5):
            x = StepFunction(ms, rng.uniform(0.1, 2.0, ms.n_cells))
            xs = rearrange(x)
            ts = np.geomspace(float(xs.space.breakpoints[1]) * 0.5, float(xs.space.breakpoints[-1]), 101)
            have = np.asarray(hardy(xs)(ts))
            want = np.asarray(double_star(xs, ts))
            assert np.allclose(have, want, rtol=1e-12)


def test_hardy_integral_from_zero_closed_form():
    tau = 0.25
    ms = unit_interval(32, include=(tau,))
    h = hardy(_indicator(ms, tau))
    ts = np.geomspace(1e-3, 1.0, 50)
    want = np.where(ts <= tau, ts, tau + tau * np.log(ts / tau))
    assert np.allclose(h.integral_from_zero(ts), want, rtol=1e-12)


def test_smooth_pieces_are_continuous_across_cells():
    rng = np.random.default_rng(32)
    ms = unit_interval(24)
    x = StepFunction(ms, rng.uniform(0.0, 3.0, 24))
    assert hardy(x).continuity_residual() <= 1e-12
    assert hardy_dual(x).continuity_residual() <= 1e-12


def test_hardy_identity_residual_is_float_noise():
    rng = np.random.default_rng(33)
    for ms in (unit_interval(32), half_line(32)):
        for _ in range(10):
            x = StepFunction(ms, rng.uniform(0.0, 2.0, ms.n_cells))
            assert hardy_identity_residual(x) <= 1e-10


def test_averaging_operators_reject_counting_grids():
    x = StepFunction(counting(4), np.ones(4))
    with pytest.raises(ValueError):
        hardy(x)
    with pytest.raises(ValueError):
        hardy_dual(x)


# ---------------------------------------------------------------------------
# operator norm bounds


def test_hardy_norm_bracket_on_l2():
    # On the truncated half-line the sharp constant is not attainable:
    # near-extremal powers t^(-g), g -> 1/2, pay an edge penalty of
    # order 1/((1/2 - g) * window).  The bracket must still be sound
    # and reasonably tight.
    bound = operator_norm("H", Lp(2.0))
    assert bound.upper == 2.0  # conjugate exponent
    assert bound.lower >= 1.55
    assert bound.lower <= bound.upper * (1 + 1e-9)


def test_hardy_dual_norm_bracket_on_l2():
    bound = operator_norm("H*", Lp(2.0))
    assert bound.upper == 2.0  # the exponent itself
    assert bound.lower >= 1.7
    assert bound.lower <= bound.upper * (1 + 1e-9)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_hardy_norm_bracket_stays_sound(p):
    bound = operator_norm("H", Lp(p))
    conj = p / (p - 1.0)
    assert bound.upper == conj
    assert bound.lower >= conj * 0.7
    assert bound.lower <= conj * (1 + 1e-9)


def test_hardy_lower_bound_converges_as_the_window_widens():
    narrow = operator_norm("H", Lp(2.0), mspace=half_line(96))
    wide = operator_norm("H", Lp(2.0), mspace=half_line(384, t_min=2.0**-60, t_max=2.0**60))
    assert wide.lower > narrow.lower
    assert wide.lower >= 1.75
    assert wide.lower <= 2.0 * (1 + 1e-9)


def test_dilation_norm_is_exact_power_on_lp():
    for s, p in ((4.0, 2.0), (0.25, 2.0), (8.0, 4.0)):
        bound = operator_norm("D_s", Lp(p), s=s)
        want = s ** (1.0 / p)
        assert math.isclose(bound.upper, want, rel_tol=1e-12)
        assert bound.lower >= want * 0.99
        assert bound.lower <= want * (1 + 1e-9)
        assert bound.op == f"D_{s:g}"


def test_operator_norm_without_table_reports_open_upper():
    bound = operator_norm("H", Marcinkiewicz(PowerWeight(0.5)), mspace=half_line(32))
    assert math.isinf(bound.upper)
    assert any("no closed-form upper bound" in n for n in bound.notes)
    assert bound.lower > 0.0


def test_operator_norm_rejects_unknown_op():
    with pytest.raises(ValueError):
        operator_norm("T", Lp(2.0))


def test_operator_norm_json_shapes():
    bound = OperatorNormBound(1.0, math.inf, "H", "indicator", ("note",))
    data = bound.to_json()
    assert data["upper"] is None
    assert data["notes"] == ["note"]
    finite = operator_norm("D_s", Lp(2.0), s=2.0).to_json()
    assert isinstance(finite["upper"], float)


# ---------------------------------------------------------------------------
# indices


def test_index_report_validation_and_json():
    with pytest.raises(ValueError):
        IndexReport(1.0, 0.5, "boyd", "closed_form", (0.0, 1.0))
    rep = IndexReport(0.25, 0.5, "boyd", "closed_form", (0.0, 1.0))
    assert rep.to_json() == {
        "lower": 0.25,
        "upper": 0.5,
        "kind": "boyd",
        "method": "closed_form",
        "truncation": [0.0, 1.0],
    }


def test_dilation_indices_closed_form_for_powers():
    rep = dilation_indices(PowerWeight(0.3, 2.0))
    assert rep.lower == rep.upper == 0.3
    assert rep.method == "closed_form"


def test_dilation_indices_estimate_for_log_perturbation():
    rep = dilation_indices(PowerLogWeight(0.5, 1.0))
    assert rep.method == "grid_estimate"
    assert rep.lower <= 0.5 <= rep.upper + 1e-12
    assert 0.4 <= rep.lower and rep.upper <= 0.65


def test_simonenko_indices():
    rep = simonenko_indices(PowerWeight(0.7))
    assert rep.lower == rep.upper == 0.7
    log_rep = simonenko_indices(PowerLogWeight(0.5, 1.0))
    assert log_rep.kind == "simonenko"
    assert log_rep.lower <= 0.5 <= log_rep.upper
    assert -0.6 <= log_rep.lower and log_rep.upper <= 1.6


def test_boyd_indices_table_entries():
    assert boyd_indices(Lp(3.0)).lower == pytest.approx(1.0 / 3.0)
    assert boyd_indices(Lp(3.0)).method == "closed_form"
    rep = boyd_indices(lorentz_pq(2.0, 4.0))
    assert rep.lower == rep.upper == pytest.approx(0.5)
    rep = boyd_indices(MarcinkiewiczStar(PowerWeight(0.3)))
    assert rep.lower == rep.upper == pytest.approx(0.3)


def test_boyd_indices_grid_estimate_brackets_the_orlicz_scale():
    # phi(u) = u + u^2 sits between L^1 and L^2, so the dilation growth
    # exponents live in [1/2, 1].
    space = OrliczCL(Lp(1.0), YoungSum((Power(1.0, 1.0), Power(1.0, 2.0))))
    rep = boyd_indices(space, mspace=half_line(48))
    assert rep.method == "grid_estimate"
    assert 0.4 <= rep.lower <= rep.upper <= 1.05
