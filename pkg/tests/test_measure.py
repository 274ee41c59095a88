import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revhardy.errors import DomainError
from revhardy.measure import EndpointedInterval as E
from revhardy.measure import Interval, Measure, mass
from specgen import random_measure

I = Interval(0.0, 1.0)


def test_lebesgue_mass():
    m = Measure.lebesgue(0.0, 1.0)
    assert math.isclose(mass(m, E.lopen(0.2, 0.5)), 0.3)
    assert m.total == 1.0


def test_atoms_follow_closure_flags():
    m = Measure.atoms(I, [(0.5, 2.0)])
    assert mass(m, E.lopen(0.2, 0.5)) == 2.0
    assert mass(m, E.open(0.2, 0.5)) == 0.0
    assert mass(m, E.ropen(0.5, 0.7)) == 2.0
    assert mass(m, E.open(0.5, 0.7)) == 0.0


def test_density_times_infinite_length_is_rejected():
    with pytest.raises(DomainError):
        Measure(Interval(0.0, math.inf), dens_breaks=(0.0, math.inf), dens_values=(1.0,))


def test_zero_density_on_unbounded_cells():
    m = Measure(Interval(0.0, math.inf), dens_breaks=(0.0, 2.0), dens_values=(1.5,))
    assert mass(m, E.open(0.0, math.inf)) == 3.0
    cm, am = m.cell_masses(np.array([1.0, 2.0]))
    assert cm.tolist() == [1.5, 1.5, 0.0]


def test_bad_inputs():
    with pytest.raises(DomainError):
        Measure.atoms(I, [(1.0, 1.0)])
    with pytest.raises(DomainError):
        Measure(I, dens_breaks=(0.0, 0.5, 0.4), dens_values=(1.0, 1.0))
    with pytest.raises(DomainError):
        mass(Measure.lebesgue(0.0, 1.0), E.open(0.5, 2.0))


def test_dict_round_trip():
    m = Measure(I, (0.25,), (0.5,), (0.0, 0.5, 1.0), (2.0, 0.0))
    assert Measure.from_dict(m.to_dict(), I) == m
    assert m.plus(m).atom_mass == (1.0,)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reflection_preserves_masses(seed):
    rng = np.random.default_rng(seed)
    m = random_measure(rng, I, int(rng.integers(1, 5)), 3)
    l, r = sorted(rng.uniform(0, 1, 2))
    for e in (E.open(l, r), E.lopen(l, r), E.ropen(l, r), E.closed(l, r)):
        assert math.isclose(mass(m, e), mass(m.reflect(), e.reflect()), rel_tol=1e-14, abs_tol=0)
    assert m.reflect().reflect() == m
