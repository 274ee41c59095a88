import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revhardy.errors import DomainError
from revhardy.measure import EndpointedInterval as E
from revhardy.measure import Interval, Measure
from revhardy.stepfn import StepFunction, norm, pointwise, sup_envelope
from specgen import random_measure, random_step

I = Interval(0.0, 1.0)
LEB = Measure.lebesgue(0.0, 1.0)
seeds = st.integers(0, 2**32 - 1)


def test_norms_of_constants():
    one = StepFunction.constant(I, 1.0)
    assert norm(one, 2.0, None, LEB) == 1.0
    assert norm(one, math.inf, None, LEB) == 1.0
    assert math.isclose(norm(StepFunction.constant(I, 3.0), 1.0, E.lopen(0.0, 0.5), LEB), 1.5)


def test_ess_sup_ignores_null_points():
    f = StepFunction((0.0, 0.5, 1.0), (1.0, 1.0), (9.0,))
    assert norm(f, math.inf, None, LEB) == 1.0
    with_atom = LEB.plus(Measure.atoms(I, [(0.5, 0.1)]))
    assert norm(f, math.inf, None, with_atom) == 9.0


def test_default_pieces_are_left_open_right_closed():
    f = StepFunction((0.0, 0.5, 1.0), (1.0, 2.0))
    assert f(0.5) == 1.0
    assert f(0.50001) == 2.0
    g = StepFunction.indicator(I, E.open(0.2, 0.6))
    assert (g(0.2), g(0.4), g(0.6)) == (0.0, 1.0, 0.0)


def test_validation():
    with pytest.raises(DomainError):
        StepFunction((0.0, 1.0), (-1.0,))
    with pytest.raises(DomainError):
        StepFunction((0.0, 0.5, 0.5, 1.0), (1.0, 1.0, 1.0))
    with pytest.raises(DomainError):
        StepFunction.from_dict({"breaks": [0, 0.5, 1], "values": [1, 2], "points": [[0.3, 1]]}, I)


def test_envelope_example():
    g = StepFunction((0.0, 0.3, 0.7, 1.0), (2.0, 5.0, 1.0))
    h = sup_envelope(g, LEB, "tail")
    assert (h(0.1), h(0.5), h(0.7), h(0.9)) == (5.0, 5.0, 1.0, 1.0)
    h = sup_envelope(g, LEB, "head")
    assert (h(0.1), h(0.5), h(0.9)) == (2.0, 5.0, 5.0)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_closed_envelope_dominates(seed):
    rng = np.random.default_rng(seed)
    g = random_step(rng, I, int(rng.integers(1, 6)), 0.3)
    m = random_measure(rng, I, 3, 3)
    for direction in ("tail", "head"):
        h = sup_envelope(g, m, direction, closed=True)
        knots = np.union1d(np.union1d(g.knots, h.knots), m.knots)
        gc, gk = g.on_grid(knots)
        hc, hk = h.on_grid(knots)
        cm, am = m.cell_masses(knots)
        assert np.all(hc[cm > 0] >= gc[cm > 0])
        assert np.all(hk[am > 0] >= gk[am > 0])
        assert norm(h, math.inf, None, m) == norm(g, math.inf, None, m)
        assert norm(pointwise(g, h, "max"), math.inf, None, m) == norm(h, math.inf, None, m)


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from([1.0, 2.0, 3.5, math.inf]))
def test_reflection_preserves_norms(seed, p):
    rng = np.random.default_rng(seed)
    f = random_step(rng, I, int(rng.integers(1, 6)), 0.2)
    m = random_measure(rng, I, 3, 3)
    l, r = sorted(rng.uniform(0, 1, 2))
    for e in (E.open(l, r), E.lopen(l, r), E.closed(l, r)):
        a = norm(f, p, e, m)
        b = norm(f.reflect(), p, e.reflect(), m.reflect())
        assert math.isclose(a, b, rel_tol=1e-13)
    assert f.reflect().reflect() == f


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_dict_round_trip_and_simplify(seed):
    rng = np.random.default_rng(seed)
    f = random_step(rng, I, int(rng.integers(1, 6)), 0.3)
    assert StepFunction.from_dict(f.to_dict(), I) == f
    s = f.simplify()
    t = np.linspace(0.001, 0.999, 101).tolist() + list(f.knots)
    assert all(s(x) == f(x) for x in t)
