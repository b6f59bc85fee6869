"""Tests for space descriptors and their norm evaluators.

Oracles are independent closed forms: power integrals done by hand,
indicator norms of the classical scales, dense-sampling suprema, and
quadratic-formula gauges.
"""

import math

import numpy as np
import pytest

from bfslab import (
    Calderon,
    Capped,
    Convexification,
    Dual,
    LInftyWeighted,
    LorentzLambda,
    LorentzLambdaP,
    Lp,
    Marcinkiewicz,
    MarcinkiewiczStar,
    Multiplier,
    OrliczCL,
    Power,
    PowerWeight,
    Product,
    StepFunction,
    Symmetrization,
    YoungSum,
    canonical,
    counting,
    double_star,
    dual_descriptor,
    fundamental,
    is_primitive,
    is_symmetric,
    lorentz_p1_exact,
    lorentz_pq,
    luxemburg_norm,
    modular,
    norm,
    rearrange,
    space_from_json,
    space_to_json,
    unit_interval,
    weak_lp,
)


def _random_step(rng, mspace, lo=0.1, hi=3.0):
    return StepFunction(mspace, rng.uniform(lo, hi, mspace.n_cells))


def _indicator(mspace, tau):
    values = (mspace.breakpoints[1:] <= tau * (1 + 1e-12)).astype(float)
    return StepFunction(mspace, values)


# ---------------------------------------------------------------------------
# closed-form norms


def test_lp_norm_matches_cell_sum():
    rng = np.random.default_rng(11)
    ms = unit_interval(32)
    for p in (1.0, 1.7, 2.0, 4.0):
        for _ in range(5):
            x = _random_step(rng, ms)
            want = float(np.sum(x.values**p * ms.widths)) ** (1.0 / p)
            res = norm(Lp(p), x)
            assert res.kind == "exact"
            assert math.isclose(res.value, want, rel_tol=1e-12)


def test_lp_weighted_norm_power_integral():
    rng = np.random.default_rng(12)
    ms = unit_interval(24)
    alpha, coef, p = 0.3, 2.0, 2.5
    x = _random_step(rng, ms)
    a, b = ms.breakpoints[:-1], ms.breakpoints[1:]
    q = alpha * p + 1.0
    cells = coef**p * (b**q - a**q) / q
    want = float(np.sum(x.values**p * cells)) ** (1.0 / p)
    res = norm(Lp(p, PowerWeight(alpha, coef)), x)
    assert res.kind == "exact"
    assert math.isclose(res.value, want, rel_tol=1e-12)


def test_lp_infinity_is_sup():
    ms = counting(6)
    x = StepFunction(ms, np.array([0.5, 2.0, 1.0, 0.25, 1.5, 0.75]))
    res = norm(Lp(math.inf), x)
    assert res.kind == "exact"
    assert res.value == 2.0


def test_marcinkiewicz_norm_against_dense_sampling():
    rng = np.random.default_rng(13)
    ms = unit_interval(16)
    b_exp = 0.3
    space = Marcinkiewicz(PowerWeight(b_exp))
    for _ in range(5):
        x = _random_step(rng, ms)
        xs = rearrange(x)
        ts = np.geomspace(1e-6, float(xs.space.breakpoints[-1]), 20001)
        sampled = float(np.max(ts**b_exp * np.asarray(double_star(xs, ts))))
        res = norm(space, x)
        assert res.kind == "exact"
        assert res.value >= sampled - 1e-12
        assert math.isclose(res.value, sampled, rel_tol=1e-4)


def test_marcinkiewicz_star_norm_combinatorial_oracle():
    rng = np.random.default_rng(14)
    ms = unit_interval(20)
    b_exp = 0.45
    space = MarcinkiewiczStar(PowerWeight(b_exp))
    for _ in range(5):
        x = _random_step(rng, ms)
        order = np.argsort(-x.values, kind="stable")
        v = x.values[order]
        t = np.cumsum(ms.widths[order])
        want = float(np.max(v * t**b_exp))
        res = norm(space, x)
        assert res.kind == "exact"
        assert math.isclose(res.value, want, rel_tol=1e-12)


def test_lorentz_lambda_is_stieltjes_sum():
    ms = counting(4)
    x = StepFunction(ms, np.array([1.0, 3.0, 2.0, 0.5]))
    a = 0.6
    # x* = (3, 2, 1, 0.5) on unit cells; sum of v_i * (i^a - (i-1)^a).
    levels = np.array([3.0, 2.0, 1.0, 0.5])
    ks = np.arange(1, 5, dtype=float)
    want = float(np.sum(levels * (ks**a - (ks - 1.0) ** a)))
    res = norm(LorentzLambda(PowerWeight(a)), x)
    assert res.kind == "exact"
    assert math.isclose(res.value, want, rel_tol=1e-12)


@pytest.mark.parametrize("tau", [0.03125, 0.25, 0.5])
def test_indicator_norms_across_the_classical_scale(tau):
    cases = [
        (Lp(2.0), tau**0.5),
        (Lp(1.0), tau),
        (LorentzLambda(PowerWeight(0.6)), tau**0.6),
        (Marcinkiewicz(PowerWeight(0.3)), tau**0.3),
        (MarcinkiewiczStar(PowerWeight(0.3)), tau**0.3),
        (LInftyWeighted(PowerWeight(0.5)), tau**0.5),
        (lorentz_pq(2.0, 4.0), 0.5**0.25 * tau**0.5),
        (lorentz_p1_exact(2.0), tau**0.5),
        (weak_lp(2.0), tau**0.5),
    ]
    for space, want in cases:
        res = fundamental(space, tau)
        assert math.isclose(res.value, want, rel_tol=1e-10), space


def test_fundamental_snaps_to_breakpoints_on_a_supplied_grid():
    res = fundamental(Lp(2.0), 2.5, mspace=counting(4))
    assert math.isclose(res.value, math.sqrt(2.0), rel_tol=1e-12)
    assert any("snapped" in note for note in res.notes)
    with pytest.raises(ValueError):
        fundamental(Lp(2.0), 0.0)
    with pytest.raises(ValueError):
        fundamental(Lp(2.0), math.inf)


# ---------------------------------------------------------------------------
# lattice axioms, sampled


_BANACH_SPACES = [
    Lp(1.0),
    Lp(2.3),
    Lp(3.0, PowerWeight(0.25, 1.5)),
    LorentzLambda(PowerWeight(0.6)),
    Marcinkiewicz(PowerWeight(0.3)),
    weak_lp(2.0),
]


def test_homogeneity_and_triangle_inequality():
    rng = np.random.default_rng(15)
    ms = unit_interval(16)
    for space in _BANACH_SPACES:
        for _ in range(5):
            x = _random_step(rng, ms)
            y = _random_step(rng, ms)
            c = float(rng.uniform(0.2, 5.0))
            nx = norm(space, x).value
            ny = norm(space, y).value
            nc = norm(space, x.with_values(c * x.values)).value
            assert math.isclose(nc, c * nx, rel_tol=1e-12)
            nsum = norm(space, x.with_values(x.values + y.values)).value
            assert nsum <= (nx + ny) * (1 + 1e-12)


def test_symmetric_norms_are_permutation_invariant():
    rng = np.random.default_rng(16)
    ms = counting(12)
    spaces = [
        Lp(2.0),
        LorentzLambda(PowerWeight(0.6)),
        lorentz_pq(2.0, 4.0),
        Marcinkiewicz(PowerWeight(0.3)),
        MarcinkiewiczStar(PowerWeight(0.3)),
    ]
    for space in spaces:
        x = _random_step(rng, ms)
        shuffled = x.values.copy()
        rng.shuffle(shuffled)
        a = norm(space, x).value
        b = norm(space, StepFunction(ms, shuffled)).value
        assert math.isclose(a, b, rel_tol=1e-12)


def test_lattice_monotonicity():
    rng = np.random.default_rng(17)
    ms = unit_interval(16)
    for space in _BANACH_SPACES:
        x = _random_step(rng, ms)
        smaller = x.with_values(x.values * rng.uniform(0.3, 1.0, ms.n_cells))
        assert norm(space, smaller).value <= norm(space, x).value * (1 + 1e-12)


# ---------------------------------------------------------------------------
# canonical rewrites


def test_canonical_convexification_of_lp():
    assert canonical(Convexification(Lp(2.0), 2.0)) == Lp(4.0)
    assert canonical(Convexification(Lp(2.0), 1.0)) == Lp(2.0)
    got = canonical(Convexification(Lp(2.0, PowerWeight(0.5, 2.0)), 2.0))
    assert isinstance(got, Lp) and got.p == 4.0
    assert math.isclose(got.weight.alpha, 0.25, rel_tol=1e-15)
    assert math.isclose(got.weight.coef, math.sqrt(2.0), rel_tol=1e-15)
    nested = canonical(Convexification(Convexification(Lp(1.0), 2.0), 1.5))
    assert nested == Lp(3.0)


def test_canonical_convexification_of_sup_scales():
    got = canonical(Convexification(MarcinkiewiczStar(PowerWeight(0.6)), 2.0))
    assert got == MarcinkiewiczStar(PowerWeight(0.3))
    got = canonical(Convexification(LorentzLambdaP(PowerWeight(0.5), 2.0), 2.0))
    assert got == LorentzLambdaP(PowerWeight(0.25), 4.0)


def test_canonical_orlicz_power_collapse():
    assert canonical(OrliczCL(Lp(1.0), Power(1.0, 1.0))) == Lp(1.0)
    got = canonical(OrliczCL(Lp(1.0), Power(3.0, 2.0)))
    assert isinstance(got, Lp) and got.p == 2.0
    assert math.isclose(got.weight.coef, math.sqrt(3.0), rel_tol=1e-15)
    # The rewrite preserves the norm: gauge of 3*(x/lam)^2 in L1.
    rng = np.random.default_rng(18)
    ms = unit_interval(16)
    x = _random_step(rng, ms)
    lam = math.sqrt(3.0) * norm(Lp(2.0), x).value
    assert math.isclose(norm(got, x).value, lam, rel_tol=1e-12)
    assert math.isclose(luxemburg_norm(Lp(1.0), Power(3.0, 2.0), x).value, lam, rel_tol=1e-10)


def test_canonical_calderon_of_lp_pair():
    assert canonical(Calderon(Lp(1.0), Lp(math.inf), 0.5)) == Lp(2.0)
    got = canonical(Calderon(Lp(2.0), Lp(4.0), 0.25))
    # 1/p = 0.25/2 + 0.75/4 = 0.3125
    assert isinstance(got, Lp)
    assert math.isclose(got.p, 3.2, rel_tol=1e-15)


def test_canonical_symmetrization_collapse():
    assert canonical(Symmetrization(Lp(2.0), "star")) == Lp(2.0)
    kept = canonical(Symmetrization(Lp(2.0, PowerWeight(0.5)), "star"))
    assert isinstance(kept, Symmetrization)
    kept_ds = canonical(Symmetrization(Lp(2.0), "doublestar"))
    assert isinstance(kept_ds, Symmetrization)


def test_canonical_dual_collapse():
    assert canonical(Dual(Lp(3.0))) == Lp(1.5)
    assert canonical(Dual(Dual(Lp(3.0)))) == Lp(3.0)


# ---------------------------------------------------------------------------
# duality


def test_dual_descriptor_table():
    assert dual_descriptor(Lp(3.0)) == Lp(1.5)
    assert dual_descriptor(Lp(1.0)) == Lp(math.inf)
    got = dual_descriptor(Lp(2.0, PowerWeight(0.3, 2.0)))
    assert isinstance(got, Lp) and got.p == 2.0
    assert math.isclose(got.weight.alpha, -0.3, rel_tol=1e-15)
    assert math.isclose(got.weight.coef, 0.5, rel_tol=1e-15)
    assert dual_descriptor(LorentzLambda(PowerWeight(0.6))) == Marcinkiewicz(PowerWeight(0.4))
    assert dual_descriptor(Marcinkiewicz(PowerWeight(0.4))) == LorentzLambda(PowerWeight(0.6))


def test_dual_fundamental_functions_multiply_to_t():
    pairs = [
        Lp(3.0),
        LorentzLambda(PowerWeight(0.6)),
        Marcinkiewicz(PowerWeight(0.25)),
    ]
    for space in pairs:
        dual = dual_descriptor(space)
        assert dual is not None
        for tau in (0.0625, 0.25, 0.75):
            fe = fundamental(space, tau).value
            fd = fundamental(dual, tau).value
            assert math.isclose(fe * fd, tau, rel_tol=1e-9), (space, tau)


def test_dual_norm_goes_through_the_table():
    rng = np.random.default_rng(19)
    ms = unit_interval(16)
    x = _random_step(rng, ms)
    res = norm(Dual(Lp(2.0)), x)
    assert math.isclose(res.value, norm(Lp(2.0), x).value, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# gauges


def test_luxemburg_gauge_quadratic_oracle():
    rng = np.random.default_rng(20)
    ms = unit_interval(16)
    phi = YoungSum((Power(1.0, 1.0), Power(1.0, 2.0)))
    for _ in range(5):
        x = _random_step(rng, ms)
        n1 = norm(Lp(1.0), x).value
        n2 = norm(Lp(2.0), x).value
        lam = 0.5 * (n1 + math.sqrt(n1 * n1 + 4.0 * n2 * n2))
        res = luxemburg_norm(Lp(1.0), phi, x)
        assert res.kind == "estimate"
        assert math.isclose(res.value, lam, rel_tol=1e-8)
        # The bracket convention keeps the modular at the gauge <= 1.
        assert modular(Lp(1.0), phi, x.with_values(x.values / res.value)) <= 1.0 + 1e-9


def test_luxemburg_gauge_of_zero_and_of_unattainable():
    ms = unit_interval(8)
    zero = StepFunction(ms, np.zeros(8))
    assert luxemburg_norm(Lp(1.0), Power(1.0, 2.0), zero).value == 0.0
    capped = Capped(Power(1.0, 1.0), 0.5)
    x = StepFunction(ms, np.ones(8))
    assert modular(Lp(1.0), capped, x) == math.inf


def test_luxemburg_requires_primitive_base():
    ms = unit_interval(8)
    x = StepFunction(ms, np.ones(8))
    with pytest.raises(ValueError):
        luxemburg_norm(Product(Lp(2.0), Lp(2.0)), Power(1.0, 2.0), x)


# ---------------------------------------------------------------------------
# symmetrization


def test_doublestar_norm_bounds_the_maximal_average():
    ms = unit_interval(32)
    tau = 0.25
    x = _indicator(ms, tau)
    want = tau + tau * math.log(1.0 / tau)  # integral of min(1, tau/t) on (0,1)
    res = norm(Symmetrization(Lp(1.0), "doublestar"), x)
    assert res.kind == "estimate"
    assert res.value >= want - 1e-12
    assert res.value <= want * 1.02
    assert any("x**" in note for note in res.notes)


def test_star_symmetrization_matches_rearranged_norm():
    rng = np.random.default_rng(21)
    ms = unit_interval(16)
    x = _random_step(rng, ms)
    space = Lp(2.0, PowerWeight(0.5))
    got = norm(Symmetrization(space, "star"), x)
    want = norm(space, rearrange(x))
    assert math.isclose(got.value, want.value, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# structure predicates and validation


def test_structure_predicates():
    assert is_primitive(Lp(2.0))
    assert is_primitive(Dual(Lp(2.0)))
    assert not is_primitive(Product(Lp(2.0), Lp(2.0)))
    assert not is_primitive(Multiplier(Lp(2.0), Lp(2.0)))
    assert not is_primitive(Dual(LInftyWeighted(PowerWeight(0.3))))
    assert is_primitive(OrliczCL(Lp(1.0), Power(1.0, 2.0)))

    assert is_symmetric(Lp(2.0))
    assert not is_symmetric(Lp(2.0, PowerWeight(0.5)))
    assert is_symmetric(Lp(2.0, PowerWeight(0.0, 3.0)))
    assert is_symmetric(Marcinkiewicz(PowerWeight(0.3)))
    assert not is_symmetric(LInftyWeighted(PowerWeight(0.5)))
    assert is_symmetric(Symmetrization(Lp(2.0, PowerWeight(0.5)), "star"))
    assert is_symmetric(Product(Lp(2.0), Lp(3.0)))
    assert not is_symmetric(Product(Lp(2.0, PowerWeight(1.0)), Lp(3.0)))


def test_descriptor_validation_errors():
    with pytest.raises(ValueError):
        Lp(0.5)
    with pytest.raises(ValueError):
        LorentzLambdaP(PowerWeight(0.5), 0.0)
    with pytest.raises(ValueError):
        Calderon(Lp(1.0), Lp(2.0), 1.0)
    with pytest.raises(ValueError):
        Convexification(Lp(1.0), 0.0)
    with pytest.raises(ValueError):
        Symmetrization(Lp(1.0), "sorted")


def test_norm_delegates_variational_descriptors():
    rng = np.random.default_rng(22)
    ms = unit_interval(16)
    z = _random_step(rng, ms)
    res = norm(Product(Lp(2.0), Lp(2.0)), z)
    assert math.isclose(res.value, norm(Lp(1.0), z).value, rel_tol=1e-10)


# ---------------------------------------------------------------------------
# serialization


@pytest.mark.parametrize(
    "space",
    [
        Lp(2.0),
        Lp(math.inf),
        Lp(2.5, PowerWeight(0.3, 2.0)),
        LorentzLambda(PowerWeight(0.6)),
        LorentzLambdaP(PowerWeight(0.5), 4.0),
        Marcinkiewicz(PowerWeight(0.3)),
        MarcinkiewiczStar(PowerWeight(0.3)),
        LInftyWeighted(PowerWeight(0.5)),
        OrliczCL(Lp(1.0), Power(2.0, 2.0)),
        Calderon(Lp(1.0), Lp(3.0), 0.25),
        Product(Lp(2.0), Marcinkiewicz(PowerWeight(0.5))),
        Multiplier(Lp(2.0), Lp(4.0)),
        Dual(LorentzLambda(PowerWeight(0.6))),
        Convexification(Lp(2.0), 1.5),
        Symmetrization(Lp(2.0, PowerWeight(0.5)), "doublestar"),
    ],
)
def test_space_json_round_trip(space):
    assert space_from_json(space_to_json(space)) == space


def test_space_json_rejects_unknown_kind():
    with pytest.raises(ValueError):
        space_from_json({"kind": "banach"})
    with pytest.raises(TypeError):
        space_to_json(42)
