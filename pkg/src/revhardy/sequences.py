"""Weighted sequence norms, embedding norms and almost-geometric sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, NotAlmostGeometric
from .numerics import INF, holder_rho

__all__ = [
    "WeightedSequence",
    "GeomDecay",
    "lq_norm",
    "embedding_norm",
    "detect_geom",
    "satisfies_geom",
    "leindler_check",
    "leindler_constant",
]


@dataclass(frozen=True)
class WeightedSequence:
    """Terms ``a_k`` with positive weights ``w_k`` for ``k = start, ..., start+n-1``."""

    terms: tuple
    weights: tuple | None = None
    start: int = 0

    def __post_init__(self):
        t = tuple(float(x) for x in self.terms)
        w = tuple(1.0 for _ in t) if self.weights is None else tuple(float(x) for x in self.weights)
        if len(w) != len(t):
            raise DomainError("terms and weights differ in length")
        if any(not x > 0 for x in w):
            raise DomainError("weights must be positive")
        object.__setattr__(self, "terms", t)
        object.__setattr__(self, "weights", w)

    def norm(self, q: float) -> float:
        return lq_norm(self.terms, q, self.weights)


def lq_norm(a, q: float, w=None) -> float:
    """``||{a_k w_k}||_{l^q}``; the supremum for ``q = inf``."""
    a = np.abs(np.asarray(a, dtype=float))
    if w is not None:
        a = a * np.asarray(w, dtype=float)
    if a.size == 0:
        return 0.0
    if math.isinf(q):
        return float(a.max())
    live = a[a > 0]
    if live.size == 0:
        return 0.0
    if np.any(np.isinf(live)):
        return INF
    return math.fsum((live**q).tolist()) ** (1.0 / q)


def embedding_norm(W, U, p: float, q: float) -> tuple[float, np.ndarray]:
    """Best constant in ``||{a_k W_k}||_p <= c ||{a_k U_k}||_q`` with a maximizer.

    The constant is ``||{W_k / U_k}||_{l^rho}`` with ``1/rho = (1/p - 1/q)_+``.
    For ``q <= p`` the maximizer is the indicator of the largest ratio; for
    ``p < q`` it is the Hoelder extremizer ``a_k = v_k**(rho/q) / U_k`` where
    ``v = W/U``.
    """
    W = np.asarray(W, dtype=float)
    U = np.asarray(U, dtype=float)
    if W.shape != U.shape:
        raise DomainError("W and U differ in length")
    if np.any(U <= 0):
        raise DomainError("U must be positive")
    v = W / U
    rho = holder_rho(p, q)
    value = lq_norm(v, rho)
    a = np.zeros_like(v)
    if v.size == 0 or value == 0.0:
        if v.size:
            a[0] = 1.0 / U[0]
        return value, a
    if math.isinf(rho):
        k = int(np.argmax(v))
        a[k] = 1.0 / U[k]
    else:
        e = 0.0 if math.isinf(q) else rho / q
        # scale by the largest ratio first to keep powers in range
        b = np.where(v > 0, (v / v.max()) ** e, 0.0)
        a = b / U
    return value, a


@dataclass(frozen=True)
class GeomDecay:
    """Witness ``(K, alpha, L)`` of an almost geometric sequence."""

    K: float
    alpha: float
    L: int


def detect_geom(s, direction: Literal["decreasing", "increasing"] = "decreasing") -> GeomDecay | None:
    """Smallest ``L`` (then largest ``alpha``) witnessing almost geometric monotonicity.

    Decreasing means ``alpha * s_k <= s_{k-L}``; increasing means
    ``s_k >= alpha * s_{k-L}``.  A one-term sequence is accepted vacuously
    with ``alpha = inf``.
    """
    s = np.asarray(s, dtype=float)
    if s.size == 0 or np.any(~(s > 0)) or np.any(np.isinf(s)):
        raise DomainError("terms must be positive and finite")
    if direction == "increasing":
        s = 1.0 / s
    elif direction != "decreasing":
        raise DomainError(f"unknown direction {direction!r}")
    n = s.size
    if n == 1:
        return GeomDecay(1.0, INF, 1)
    K = max(1.0, float(np.max(s[1:] / s[:-1])))
    for L in range(1, n):
        alpha = float(np.min(s[:-L] / s[L:]))
        if alpha > 1.0:
            return GeomDecay(K, alpha, L)
    return None


def satisfies_geom(s, g: GeomDecay, direction: Literal["decreasing", "increasing"] = "decreasing",
                   rel: float = 0.0) -> bool:
    """Whether ``alpha * s_k <= s_{k-L}`` (or ``s_k >= alpha * s_{k-L}``) holds for all ``k``.

    ``rel`` is a relative slack on the comparison.
    """
    s = np.asarray(s, dtype=float)
    if direction == "increasing":
        lo, hi = g.alpha * s[:-g.L], s[g.L:]
    elif direction == "decreasing":
        lo, hi = g.alpha * s[g.L:], s[:-g.L]
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return bool(np.all(lo <= hi * (1.0 + rel)))


def leindler_constant(g: GeomDecay, q: float, mode: Literal["sum", "sup"] = "sum") -> float:
    """Constant ``C`` with ``lhs <= C * rhs`` in :func:`leindler_check`.

    From ``tau_k <= K**(L-1) * alpha**(-floor((k-m)/L)) * tau_m`` for ``k >= m``
    the left side is dominated by a convolution of ``{tau_k a_k}`` with a
    kernel summing to ``L / (1 - alpha**-s)`` in ``l^s``, ``s = min(q, 1)``
    for sums; sups only need the ``l^q`` quasi-norm of the kernel.
    """
    K, alpha, L = g.K, g.alpha, g.L
    head = K ** (L - 1)
    if mode == "sup":
        if math.isinf(q):
            return head
        return head * (L / (1.0 - alpha**-q)) ** (1.0 / q)
    s = 1.0 if math.isinf(q) or q >= 1 else q
    return head * (L / (1.0 - alpha**-s)) ** (1.0 / s)


def leindler_check(tau, a, q: float, mode: Literal["sum", "sup"] = "sum") -> tuple[float, float]:
    """Both sides of the Leindler equivalence for an almost geometrically decreasing ``tau``.

    ``lhs = ||{tau_k * sum_{m<=k} a_m}||_q`` (or the running supremum),
    ``rhs = ||{tau_k a_k}||_q``.
    """
    tau = np.asarray(tau, dtype=float)
    a = np.asarray(a, dtype=float)
    if tau.shape != a.shape:
        raise DomainError("tau and a differ in length")
    if np.any(a < 0):
        raise DomainError("a must be non-negative")
    if detect_geom(tau, "decreasing") is None:
        raise NotAlmostGeometric("tau is not almost geometrically decreasing")
    if mode == "sum":
        acc = np.cumsum(a)
    elif mode == "sup":
        acc = np.maximum.accumulate(a) if a.size else a
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return lq_norm(tau * acc, q), lq_norm(tau * a, q)
