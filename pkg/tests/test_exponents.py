import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pxdg.exponents import (
    DomainError,
    ExponentField,
    WeightedSampleSet,
    check_modular_norm_relations,
    estimate_c_log,
    log_holder_bound,
    luxemburg_norm,
    modular,
    pointwise_inequalities,
)

HAT = ExponentField.hat_family(0.01, 0.01)


def test_eval_examples():
    assert HAT(0.0) == 1.01
    assert HAT(0.5) == 2.0
    assert ExponentField.constant(2.0)(0.3) == 2.0


def test_eval_outside_domain():
    with pytest.raises(DomainError):
        HAT(1.5)


def test_bounds_on_dense_grid():
    xs = np.linspace(-1, 1, 4001)
    p = HAT(xs)
    assert np.all(p >= HAT.p1) and np.all(p <= HAT.p2)
    assert HAT(HAT.a) == 2.0 and HAT(-HAT.a) == 2.0


def test_conjugate_identity():
    xs = np.linspace(-1, 1, 101)
    p = HAT(xs)
    pc = HAT.conjugate(xs)
    assert np.max(np.abs(1.0 / p + 1.0 / pc - 1.0)) < 1e-14


def test_neg_inv_conjugate_handles_p_equal_one():
    f = ExponentField.constant(1.0)
    assert f.neg_inv_conjugate(0.3) == 0.0


def test_modular_examples():
    s = WeightedSampleSet.gauss(0.0, 1.0, 6, 4)
    p2 = ExponentField.constant(2.0)
    assert abs(modular(s, s.xs, p2) - 1.0 / 3.0) < 1e-14
    s2 = WeightedSampleSet.gauss(-1.0, 1.0, 6, 4)
    assert abs(modular(s2, np.ones(s2.xs.size), p2) - 2.0) < 1e-14


def test_modular_against_adaptive_quadrature_oracle():
    # panel edges aligned with the exponent kink keep the composite rule exact
    field = ExponentField.hat_family(0.3, 0.4)
    left = WeightedSampleSet.gauss(0.0, 0.4, 10, 16)
    right = WeightedSampleSet.gauss(0.4, 1.0, 10, 24)
    s = WeightedSampleSet(np.concatenate([left.xs, right.xs]),
                          np.concatenate([left.weights, right.weights]))
    for fn in (lambda x: np.ones_like(x), lambda x: 2.0 + np.sin(3.0 * x)):
        got = modular(s, fn(s.xs), field)
        want, _ = quad(lambda x: abs(fn(np.array(x))) ** field(x), 0.0, 1.0,
                       epsabs=0.0, epsrel=1e-13, limit=200, points=[0.4])
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_luxemburg_examples():
    p2 = ExponentField.constant(2.0)
    s = WeightedSampleSet.gauss(0.0, 1.0, 6, 4)
    assert abs(luxemburg_norm(s, np.ones(s.xs.size), p2) - 1.0) < 1e-13
    s2 = WeightedSampleSet.gauss(-1.0, 1.0, 6, 4)
    assert abs(luxemburg_norm(s2, np.ones(s2.xs.size), p2) - np.sqrt(2.0)) < 1e-13


def test_luxemburg_zero_function():
    s = WeightedSampleSet.gauss(0.0, 1.0, 4, 2)
    assert luxemburg_norm(s, np.zeros(s.xs.size), HAT) == 0.0


def test_luxemburg_against_bruteforce_bisection():
    # same discrete measure, independent root finding: plain bisection pushed
    # an order of magnitude past the production tolerance, no bracket theory
    field = ExponentField.hat_family(0.3, 0.4)
    s = WeightedSampleSet.gauss(0.0, 1.0, 8, 16)
    got = luxemburg_norm(s, s.xs, field)
    lo, hi = 1e-8, 1e8
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if modular(s, s.xs / mid, field) > 1.0:
            lo = mid
        else:
            hi = mid
    assert abs(got - 0.5 * (lo + hi)) <= 1e-9 * max(1.0, got)


def test_constant_p_matches_classical_lp():
    rng = np.random.default_rng(3)
    for p in (1.0, 1.5, 2.0, 3.0, 7.0):
        fld = ExponentField.constant(p)
        s = WeightedSampleSet(np.linspace(0, 1, 17), rng.uniform(0, 0.2, 17))
        u = rng.normal(size=17)
        classical = (np.sum(s.weights * np.abs(u) ** p)) ** (1.0 / p)
        assert abs(luxemburg_norm(s, u, fld) - classical) <= 1e-12 * max(1.0, classical)


def test_modular_norm_relations_examples():
    p2 = ExponentField.constant(2.0)
    s = WeightedSampleSet.gauss(0.0, 1.0, 6, 2)
    u = np.cos(s.xs)
    lam = luxemburg_norm(s, u, p2)
    rep = check_modular_norm_relations(s, u / lam, p2)
    assert rep.passed and abs(rep.rho - 1.0) < 1e-9

    mixed = ExponentField.piecewise_linear([0.0, 1.0], [1.01, 2.0])
    u2 = u / lam * 2.0
    rep2 = check_modular_norm_relations(s, u2, mixed)
    lam2 = rep2.lam
    assert rep2.passed
    assert lam2**1.01 - 1e-9 <= rep2.rho <= lam2**2.0 + 1e-9

    rep3 = check_modular_norm_relations(s, u / lam * 0.5, p2)
    assert rep3.passed and abs(rep3.rho - 0.25) < 1e-9


def test_log_holder_examples():
    const = ExponentField.constant(3.0)
    assert log_holder_bound(const, 1.0, (0.25, 0.75)) == 1.0
    vals = [log_holder_bound(HAT, 1.0, (-(2.0**-j), 0.0)) for j in range(1, 21)]
    assert max(vals) < 100.0  # bounded along the shrinking sequence
    gap = 0.5
    jumpy = ExponentField.piecewise_linear([-1, 0, 1e-13, 1], [1.5, 1.5, 2.0, 2.0])
    for h in (2.0**-j for j in range(2, 10)):
        got = log_holder_bound(jumpy, 1.0, (-h / 2, h / 2))
        assert abs(got - h**-gap) <= 1e-6 * h**-gap


def test_estimate_c_log_finite():
    assert estimate_c_log(HAT) > 0.0
    assert estimate_c_log(ExponentField.constant(2.0, domain=(0, 1))) == 0.0


def test_pointwise_examples():
    rep = pointwise_inequalities(1.0, 0.0, 2.0)
    assert rep.c_min_power == pytest.approx(1.0)
    # |2|^{p-2} 2 - |1|^{p-2} 1 = 4 - 1 at p = 3, so the sharp constant is 1/3
    rep2 = pointwise_inequalities(2.0, 1.0, 3.0)
    assert rep2.c_min_power == pytest.approx(1.0 / 3.0)
    rep3 = pointwise_inequalities(0.7, 0.7, 1.7)
    assert rep3.c_min_power == 0.0 and rep3.c_min_degenerate == 0.0


def test_serialization_roundtrip():
    for fld in (HAT, ExponentField.constant(2.0),
                ExponentField.piecewise_linear([0, 0.5, 1], [1.2, 2.0, 1.5])):
        back = ExponentField.from_text(fld.to_text())
        xs = np.linspace(*[max(fld.domain[0], -1e6), min(fld.domain[1], 1e6)], 11)
        assert np.allclose(back(xs), fld(xs), rtol=0, atol=0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-50, 50), st.floats(min_value=0.001, max_value=100),
       st.integers(0, 10**6))
def test_homogeneity_property(shift, scale, seed):
    rng = np.random.default_rng(seed)
    s = WeightedSampleSet(np.linspace(-1, 1, 9), rng.uniform(0, 1, 9))
    u = rng.normal(size=9) + shift
    n1 = luxemburg_norm(s, u, HAT)
    n2 = luxemburg_norm(s, scale * u, HAT)
    assert abs(n2 - scale * n1) <= 1e-9 * max(1.0, scale * n1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_triangle_and_convexity_property(seed):
    rng = np.random.default_rng(seed)
    s = WeightedSampleSet(np.linspace(-1, 1, 13), rng.uniform(0, 1, 13))
    u = rng.normal(size=13)
    v = rng.normal(size=13)
    nu, nv, nuv = (luxemburg_norm(s, w, HAT) for w in (u, v, u + v))
    assert nuv <= nu + nv + 1e-9 * max(1.0, nu + nv)
    mid = modular(s, 0.5 * (u + v), HAT)
    assert mid <= 0.5 * (modular(s, u, HAT) + modular(s, v, HAT)) * (1 + 1e-12) + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_norm_modular_equivalence_property(seed):
    rng = np.random.default_rng(seed)
    s = WeightedSampleSet(np.sort(rng.uniform(-1, 1, 11)), rng.uniform(0, 1, 11))
    u = rng.normal(scale=10.0 ** rng.uniform(-2, 2), size=11)
    assert check_modular_norm_relations(s, u, HAT).passed
