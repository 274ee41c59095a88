import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revhardy.discretize import (check_discretizing, covering_intervals, discretized_rhs,
                                 discretizing_sequence, head_sum)
from revhardy.errors import DomainError, TruncationOverflow
from revhardy.measure import Interval, Measure
from revhardy.sequences import GeomDecay, satisfies_geom
from revhardy.stepfn import StepFunction, norm, pointwise, sup_envelope
from revhardy.stieltjes import MonotoneFunction
from specgen import phi_of, random_measure, random_phi, random_step

I = Interval(0.0, 1.0)
LEB = Measure.lebesgue(0.0, 1.0)
seeds = st.integers(0, 2**32 - 1)
qs = st.sampled_from([0.5, 1.0, 2.0, 3.0, math.inf])


def test_linear_phi_has_analytic_head():
    d = discretizing_sequence(phi_of(StepFunction.constant(I, 1.0), 1.0, LEB))
    assert not d.finite_start and d.limit == 0.0 and d.head_expo == 1.0
    assert d.points.tolist() == [0.5, 1.0]
    assert d.head_ratio() == 0.5
    e = d.extend_head(0.01)
    assert e.points[0] <= 0.01
    assert np.allclose(e.points[:-1], 0.5 ** np.arange(len(e.points) - 1)[::-1] * 0.5)
    assert check_discretizing(e.phi, e)["ok"]


def test_atom_gives_finite_start():
    nu = Measure(I, (0.3,), (1.0,), (0.0, 1.0), (1.0,))
    u = StepFunction((0.0, 0.3, 1.0), (0.0, 1.0), (1.0,))
    d = discretizing_sequence(phi_of(u, 1.0, nu))
    assert d.finite_start and d.points[0] == 0.3
    # phi(0.3) = 1, doubles at 1.3 which is beyond b
    assert d.points.tolist() == [0.3, 1.0]


def test_errors():
    with pytest.raises(DomainError):
        discretizing_sequence(phi_of(StepFunction.constant(I, 0.0), 2.0, LEB))
    with pytest.raises(DomainError):
        discretizing_sequence(MonotoneFunction.step(I, [0.5], [0.0, 1.0], [0.0]))
    steep = StepFunction((0.0, 0.25, 0.5, 0.75, 1.0), (1e-12, 1e-4, 1e4, 1e12))
    with pytest.raises(TruncationOverflow):
        discretizing_sequence(phi_of(steep, 1.0, LEB), max_terms=8)


def test_head_sum():
    assert head_sum(1.0, 0.5, 1.0) == 1.0
    assert head_sum(0.0, 0.5, 2.0) == 0.0


@settings(max_examples=200, deadline=None)
@given(seeds, qs)
def test_invariants_and_geometric_growth(seed, q):
    rng = np.random.default_rng(seed)
    u, nu, phi = random_phi(rng, q)
    d = discretizing_sequence(phi)
    rep = check_discretizing(phi, d)
    assert rep["ok"] and rep["values_match"], rep
    U = d.phi_values
    assert satisfies_geom(U, GeomDecay(1.0, 2.0, 2), "increasing", rel=32 * 2.0**-52)
    Js = covering_intervals(d)
    assert Js[0].left == d.points[0] and Js[-1].right == phi.interval.b


@settings(max_examples=100, deadline=None)
@given(seeds, qs)
def test_discretized_rhs_equivalence(seed, q):
    rng = np.random.default_rng(seed)
    u, nu, phi = random_phi(rng, q)
    J = u.interval
    mu = random_measure(rng, J, int(rng.integers(1, 4)), 3)
    g = random_step(rng, J, int(rng.integers(1, 6)), 0.3, lo=1e-2, hi=1e2)
    d = discretizing_sequence(phi)
    h = sup_envelope(g, mu, "tail")
    lhs = norm(pointwise(u, h), q, None, nu)
    rhs = discretized_rhs(g, u, q, nu, mu, d)
    # q-th powers of a doubling sequence sum geometrically with ratio 2**-q
    upper = max(8.0, (1 - 2.0**-q) ** (-1 / q) if q < math.inf else 1.0)
    if lhs == 0.0:
        assert rhs == 0.0
    else:
        assert 1 / 8 <= rhs / lhs <= upper * (1 + 1e-12)
