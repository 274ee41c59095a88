import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revhardy.errors import ConventionViolation, ToleranceNotMet
from revhardy.measure import EndpointedInterval as E
from revhardy.measure import Interval, Measure
from revhardy.stepfn import StepFunction, norm
from revhardy.stieltjes import MonotoneFunction, cumulative_norm, ls_integral, ls_measure
from specgen import random_measure, random_step

I = Interval(0.0, 1.0)
LEB = Measure.lebesgue(0.0, 1.0)
ONE = StepFunction.constant(I, 1.0)
seeds = st.integers(0, 2**32 - 1)


def test_cumulative_norm_closed_form():
    G = cumulative_norm(ONE, 2.0, LEB, "left")
    t = np.linspace(0.01, 0.99, 25)
    assert np.allclose(G.values_at(t), np.sqrt(t), rtol=1e-15)
    H = cumulative_norm(ONE, 2.0, LEB, "right")
    assert np.allclose(H.values_at(t), np.sqrt(1 - t), rtol=1e-14)


def test_cumulative_sup_one_sided_limits():
    u = StepFunction((0.0, 0.5, 1.0), (1.0, 3.0))
    G = cumulative_norm(u, math.inf, LEB, "left")
    assert G.left_limit(0.5) == 1.0
    assert G.value(0.5) == 1.0
    assert G.right_limit(0.5) == 3.0


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([1.0, 2.0, 3.0, math.inf]))
def test_cumulative_norm_matches_direct_norms(seed, q):
    rng = np.random.default_rng(seed)
    u = random_step(rng, I, int(rng.integers(1, 5)), 0.2)
    m = random_measure(rng, I, 3, 3)
    G = cumulative_norm(u, q, m, "left")
    H = cumulative_norm(u, q, m, "right")
    ts = np.concatenate((rng.uniform(0, 1, 10), m.knots, u.knots))
    for t in ts:
        assert math.isclose(G.value(t), norm(u, q, E.lopen(0.0, t), m), rel_tol=1e-12, abs_tol=1e-300)
        assert math.isclose(H.value(t), norm(u, q, E.ropen(t, 1.0), m), rel_tol=1e-12, abs_tol=1e-300)


def test_power_affine_and_transforms():
    f = MonotoneFunction.power_affine(I, 2.0, 0.0, 1.0, 0.5)
    assert f.increasing and f(0.25) == 1.0
    g = f.power(-2.0)
    assert not g.increasing and g(0.25) == 1.0
    assert (-f)(0.25) == -1.0


def test_ls_measure_of_jump():
    phi = MonotoneFunction.step(I, [0.5], [0.0, 2.0], [0.5])
    assert ls_measure(phi, E.closed(0.5, 0.5)) == 2.0
    assert ls_measure(phi, E.open(0.0, 0.5)) == 0.0


def test_integral_polynomial():
    F = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 1.0)
    phi = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 2.0)
    J = ls_integral(F, phi, I.whole(), tol=1e-8)
    assert J.contains(2.0 / 3.0)
    assert J.width <= 1e-8 * J.hi


def test_integral_atoms_exact():
    F = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 1.0)
    phi = MonotoneFunction.step(I, [0.5], [0.0, 1.0], [0.25])
    # mass 0.25 at 0.5- ... and 0.75 at 0.5+: the jump sits at one point
    assert ls_integral(F, phi, I.whole()).contains(0.5)
    assert ls_integral(F, phi, E.open(0.0, 0.5)).hi == 0.0


def test_integral_singular_end():
    # int_0^1 t^2 d(-t^-1) = 1, the integrator is unbounded at 0
    F = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 2.0)
    phi = -MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, -1.0)
    J = ls_integral(F, phi, I.whole())
    assert J.contains(1.0)
    # divergent: int t^0.5 d(-t^-1)
    F = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 0.5)
    assert ls_integral(F, phi, I.whole()).is_infinite


def test_infinite_plateau_convention():
    # phi = -G^-1 with G = 0 on (0, 0.5): infinite plateau where F > 0
    u = StepFunction((0.0, 0.5, 1.0), (0.0, 1.0))
    G = cumulative_norm(u, 1.0, LEB, "left")
    phi = -(G.power(-1.0))
    F = cumulative_norm(ONE, 1.0, LEB, "left")
    with pytest.raises(ConventionViolation):
        ls_integral(F, phi, I.whole())
    # F vanishing on the plateau is fine: int_(1/2,1) (t-1/2)^2 d(-(t-1/2)^-1) = 1/2
    F0 = cumulative_norm(u, 1.0, LEB, "left").power(2.0)
    assert ls_integral(F0, phi, I.whole()).contains(0.5)
    # and with F0 = (t-1/2) the log divergence is reported as an infinite integral
    assert ls_integral(F0.power(0.5), phi, I.whole()).is_infinite


def test_budget_exhaustion():
    F = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 0.1)
    phi = MonotoneFunction.power_affine(I, 1.0, 0.0, 1.0, 0.1)
    with pytest.raises(ToleranceNotMet):
        ls_integral(F, phi, I.whole(), tol=1e-12, max_cells=64)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 4.0), st.floats(0.2, 4.0), st.floats(0.0, 2.0), st.floats(0.1, 3.0))
def test_integral_encloses_closed_form(alpha, beta, c, coef):
    # int_0^1 (c+t)^alpha d(coef (c+t)^beta) = coef beta/(alpha+beta) [(c+t)^(alpha+beta)]
    F = MonotoneFunction.power_affine(I, 1.0, c, 1.0, alpha)
    phi = MonotoneFunction.power_affine(I, coef, c, 1.0, beta)
    exact = coef * beta / (alpha + beta) * ((1 + c) ** (alpha + beta) - c ** (alpha + beta))
    J = ls_integral(F, phi, I.whole(), tol=1e-7)
    assert J.lo <= exact * (1 + 1e-14) and exact * (1 - 1e-14) <= J.hi
    assert J.width <= 1e-7 * J.hi * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_evaluation_independent_of_batching(seed, q):
    rng = np.random.default_rng(seed)
    u = random_step(rng, I, int(rng.integers(1, 5)), 0.2)
    G = cumulative_norm(u, q, random_measure(rng, I, 3, 2), "left").power(float(rng.uniform(-3, 3)) or 1.0)
    t = np.sort(rng.uniform(0, 1, 64))
    j = np.searchsorted(G.knots, t, side="left")
    batch = G.eval_piece(j, t)
    single = [float(G.eval_piece(int(jj), float(tt))) for jj, tt in zip(j, t)]
    assert batch.tolist() == single
    assert G.left_limits(t).tolist() == [G.left_limit(x) for x in t]
