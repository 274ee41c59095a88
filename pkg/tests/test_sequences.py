import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revhardy.errors import DomainError, NotAlmostGeometric
from revhardy.numerics import conjugate
from revhardy.sequences import (GeomDecay, WeightedSequence, detect_geom, embedding_norm,
                                leindler_check, leindler_constant, lq_norm)

seeds = st.integers(0, 2**32 - 1)
exps = st.sampled_from([1.0, 1.5, 2.0, 3.0, 5.0, math.inf])


def test_lq_norm_examples():
    assert lq_norm([3, 4], 2) == 5.0
    assert lq_norm([3, 4], math.inf) == 4.0
    assert lq_norm([], 2) == 0.0
    assert lq_norm([1, 1], 1, [2, 3]) == 5.0
    assert WeightedSequence((1.0, 2.0), (2.0, 1.0)).norm(math.inf) == 2.0
    with pytest.raises(DomainError):
        WeightedSequence((1.0,), (0.0,))


def test_embedding_examples():
    W, U = np.array([1.0, 4.0, 2.0]), np.array([1.0, 2.0, 4.0])
    value, a = embedding_norm(W, U, 2.0, 2.0)
    assert value == 2.0 and a.tolist() == [0.0, 0.5, 0.0]
    value, a = embedding_norm(W, U, 1.0, 2.0)
    assert math.isclose(value, math.sqrt(1 + 4 + 0.25))


def test_detect_geom_examples():
    assert detect_geom(2.0 ** -np.arange(6)) == GeomDecay(1.0, 2.0, 1)
    g = detect_geom([1.0, 1.0, 0.4, 0.4, 0.1])
    assert g.L == 2 and g.alpha == 2.5
    assert detect_geom([1.0, 1.0, 1.0]) is None
    assert detect_geom(2.0 ** np.arange(5), "increasing").alpha == 2.0
    with pytest.raises(NotAlmostGeometric):
        leindler_check([1.0, 1.0, 1.0], [1.0, 0.0, 2.0], 2.0)


@settings(max_examples=500, deadline=None)
@given(seeds, exps)
def test_discrete_holder(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    a = np.exp(rng.normal(0, 2, n))
    b = np.exp(rng.normal(0, 2, n))
    assert lq_norm(a * b, 1.0) <= lq_norm(a, p) * lq_norm(b, conjugate(p)) * (1 + 1e-13)


@settings(max_examples=300, deadline=None)
@given(seeds, exps, exps)
def test_embedding_extremal_attains(seed, p, q):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 30))
    W = np.exp(rng.normal(0, 1.5, n))
    U = np.exp(rng.normal(0, 1.5, n))
    value, a = embedding_norm(W, U, p, q)
    got = lq_norm(a * W, p) / lq_norm(a * U, q)
    assert math.isclose(got, value, rel_tol=1e-12)
    # no random competitor beats it
    for _ in range(5):
        b = np.exp(rng.normal(0, 2, n))
        assert lq_norm(b * W, p) / lq_norm(b * U, q) <= value * (1 + 1e-12)


@settings(max_examples=300, deadline=None)
@given(seeds, st.sampled_from([0.5, 1.0, 2.0, 3.0, math.inf]), st.sampled_from(["sum", "sup"]))
def test_leindler_bounds(seed, q, mode):
    rng = np.random.default_rng(seed)
    L = int(rng.integers(1, 4))
    n = int(rng.integers(2 * L + 1, 40))
    # tau_k = 2^(-k/L) times a wobble in [0.6, 1]: a shift by 2L always decays by > 4 * 0.6
    tau = 2.0 ** (-np.arange(n) / L) * rng.uniform(0.6, 1.0, n)
    a = np.where(rng.random(n) < 0.3, 0.0, np.exp(rng.normal(0, 2, n)))
    g = detect_geom(tau)
    lhs, rhs = leindler_check(tau, a, q, mode)
    assert rhs <= lhs * (1 + 1e-13)
    assert lhs <= leindler_constant(g, q, mode) * rhs * (1 + 1e-12)
