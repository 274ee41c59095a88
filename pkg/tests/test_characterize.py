import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revhardy.characterize import (ProblemSpec, Regime, compute_constants, constant_A1, constant_A2,
                                   constant_A3, constants_B, discrete_A, forward_phi,
                                   reduce_three_measure, reflect, regime, vanishing_condition)
from revhardy.discretize import discretizing_sequence
from revhardy.errors import NotAbsolutelyContinuous
from revhardy.measure import Interval, Measure
from revhardy.stepfn import StepFunction
from specgen import lambda_from, lebesgue_spec, random_measure, random_spec, random_step

INF = math.inf
I = Interval(0.0, 1.0)
LEB = Measure.lebesgue(0.0, 1.0)
ZERO = StepFunction.constant(I, 0.0)
HALF_ON = StepFunction((0.0, 0.5, 1.0), (0.0, 1.0))
seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("p,q,want", [(3, 2, Regime.QleP), (2, 2, Regime.QleP), (1, 2, Regime.PltQfin),
                                      (2, INF, Regime.QisInf), (INF, INF, Regime.QleP)])
def test_regime(p, q, want):
    assert regime(p, q) is want


def test_closed_form_constants():
    assert constant_A1(lebesgue_spec(2, 2)).contains(1.0)
    A2 = constant_A2(lebesgue_spec(1, 2))
    assert A2.contains(2.0) and A2.width <= 1e-6
    assert constant_A3(lebesgue_spec(1, INF)).contains(1.0)
    assert constants_B(lebesgue_spec(2, 2, direction="dual")).constants["B1"].contains(1.0)


def test_zero_weight_gives_zero():
    for p, q, f in ((2, 2, constant_A1), (1, 2, constant_A2), (1, INF, constant_A3)):
        E = f(lebesgue_spec(p, q, w=ZERO))
        assert (E.lo, E.hi) == (0.0, 0.0)
    assert discrete_A(lebesgue_spec(1, 2, w=ZERO)).value == 0.0
    rep = constants_B(lebesgue_spec(1, 2, w=ZERO, direction="dual"))
    assert rep.constants["B2"].hi == 0.0


def test_vanishing_weight_near_a_is_infinite():
    assert constant_A1(lebesgue_spec(2, 2, u=HALF_ON)).is_infinite
    assert constant_A2(lebesgue_spec(1, 2, u=HALF_ON)).is_infinite
    assert constant_A3(lebesgue_spec(1, INF, u=HALF_ON)).is_infinite


def test_vanishing_verdicts():
    spec = lebesgue_spec(1, 2, u=HALF_ON)
    d = discretizing_sequence(forward_phi(spec))
    assert d.limit == 0.5
    assert vanishing_condition(spec, d) == "violated"
    spec = lebesgue_spec(1, 2, u=HALF_ON, w=HALF_ON)
    assert vanishing_condition(spec, d) == "satisfied"
    spec = lebesgue_spec(1, 2)
    assert vanishing_condition(spec, discretizing_sequence(forward_phi(spec))) == "not-applicable"


def test_a3_single_atom():
    mu = Measure.atoms(I, [(0.6, 0.25)])
    u = StepFunction((0.0, 0.3, 1.0), (2.0, 4.0))
    w = StepFunction((0.0, 0.5, 1.0), (1.0, 3.0))
    spec = ProblemSpec(I, 2.0, INF, mu, LEB, u, w=w)
    # w(0.6) / ||u||_{inf,(0,0.6)} * mass^(1/2) = 3/4 * 1/2
    assert constant_A3(spec).contains(0.375)


def test_discrete_A_closed_forms():
    # x_{k+1} = 4 x_k; W_k / U_k = sqrt(3 x_k) / sqrt(x_k)
    assert math.isclose(discrete_A(lebesgue_spec(2, 2)).value, math.sqrt(3), rel_tol=1e-14)
    # single covering interval: w only on (1/2, 1), phi(1/2) = 1 from an atom
    nu = Measure(I, (0.5,), (1.0,))
    spec = ProblemSpec(I, 1.0, 1.0, LEB, nu, StepFunction.constant(I, 1.0), w=HALF_ON)
    assert discrete_A(spec).value == 0.5


def test_reduce_three_measure_examples():
    assert reduce_three_measure(LEB, LEB, 2.0) == StepFunction.constant(I, 1.0)
    w = reduce_three_measure(Measure.lebesgue(0.0, 1.0, 4.0), LEB, 2.0)
    assert w.simplify() == StepFunction.constant(I, 2.0)
    with pytest.raises(NotAbsolutelyContinuous) as err:
        reduce_three_measure(Measure.atoms(I, [(1 / 3, 1.0)]), LEB, 2.0)
    assert err.value.witness == ("atom", 1 / 3)
    bad = Measure(I, dens_breaks=(0.0, 1.0), dens_values=(1.0,))
    half = Measure(I, dens_breaks=(0.0, 0.5), dens_values=(1.0,))
    with pytest.raises(NotAbsolutelyContinuous):
        reduce_three_measure(bad, half, 1.0)


def test_spec_dict_round_trip():
    rng = np.random.default_rng(3)
    for regime_ in ("QleP", "PltQfin", "QisInf"):
        spec = random_spec(rng, regime_, "dual", three_measure=regime_ != "QleP")
        again = ProblemSpec.from_dict(spec.to_dict())
        assert again == spec


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(["QleP", "PltQfin", "QisInf"]))
def test_reflection_is_exact_involution(seed, regime_):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, regime_, "dual", unbounded=rng.random() < 0.2)
    assert reflect(reflect(spec)) == spec
    rep = compute_constants(spec)
    fwd = compute_constants(reflect(spec))
    for k, v in rep.constants.items():
        assert v == fwd.constants["A" + k[1:]]
    for k, c in rep.cross_check.items():
        assert c["overlaps"], (k, c)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_combined_case_consistency(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, "PltQfin")
    a = constant_A2(spec)
    b = constant_A2(spec, plus=True)
    assert a.overlaps(b) or (a.is_infinite and b.is_infinite)


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_three_measure_round_trip(seed, p):
    rng = np.random.default_rng(seed)
    w = random_step(rng, I, int(rng.integers(1, 5)), 0.2)
    mu = random_measure(rng, I, int(rng.integers(1, 4)), 3, zero_frac=0.2)
    got = reduce_three_measure(lambda_from(w, mu, p), mu, p)
    knots = np.union1d(np.union1d(w.knots, got.knots), mu.knots)
    wc, wk = w.on_grid(knots)
    gc, gk = got.on_grid(knots)
    cm, am = mu.cell_masses(knots)
    assert np.allclose(gc[cm > 0], wc[cm > 0], rtol=4e-16 * p, atol=0)
    assert np.allclose(gk[am > 0], wk[am > 0], rtol=4e-16 * p, atol=0)
