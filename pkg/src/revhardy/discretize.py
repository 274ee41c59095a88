"""Discretizing sequences of monotone functions and covering intervals.

For a non-decreasing, right-continuous ``phi`` the greedy rule

    x_{k+1} = inf{t : phi(t) > 2 phi(x_k)}

produces a sequence with ``phi(x_{k+1}-) <= 2 phi(x_k)`` and
``phi(x_{k+1}) >= 2 phi(x_k)``.  The start is the first point where ``phi``
becomes positive.  When ``phi`` grows continuously from zero there (the
sequence is infinite to the left) ``phi`` is a pure power
``C (t - c)**e`` on the first piece, so the omitted head continues
analytically with ``x_{k-1} - c = (x_k - c) * 2**(-1/e)``; the stored
sequence can be extended into it on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, TruncationOverflow
from .measure import EndpointedInterval, Measure
from .numerics import EPS
from .sequences import lq_norm
from .stepfn import StepFunction, norm
from .stieltjes import MonotoneFunction

__all__ = [
    "DiscretizingSequence",
    "discretizing_sequence",
    "check_discretizing",
    "covering_intervals",
    "discretized_rhs",
    "head_sum",
    "ulp_sensitivity",
]


@dataclass(frozen=True, eq=False)
class DiscretizingSequence:
    """Stored points ``x_first < ... < x_M < x_{M+1} = b``.

    Attributes:
        points: stored points, the last one equal to ``b``.
        phi_values: ``phi(x_k)`` for every stored point but the last
            (at ``x = a`` this is ``phi(a+)``).
        limit: ``x_N``: the first point when the sequence starts, otherwise
            the accumulation point of the omitted head.
        head_expo: ``e`` with ``phi(t) = C (t - limit)**e`` near ``limit`` when
            the sequence is infinite to the left, else ``None``.
        phi: the function the sequence discretizes.
    """

    points: np.ndarray
    phi_values: np.ndarray
    limit: float
    head_expo: float | None
    phi: MonotoneFunction = field(repr=False)

    @property
    def finite_start(self) -> bool:
        return self.head_expo is None

    @property
    def n_terms(self) -> int:
        return len(self.points) - 1

    def head_ratio(self) -> float:
        """``(x_{k-1} - c) / (x_k - c)`` in the analytic head."""
        return 2.0 ** (-1.0 / self.head_expo)

    def extend_head(self, bound: float) -> "DiscretizingSequence":
        """Prepend analytic head points until the first stored point is ``<= bound``."""
        if self.finite_start or self.points[0] <= bound:
            return self
        c = self.limit
        rho = self.head_ratio()
        new = []
        x = float(self.points[0])
        while x > bound:
            x = c + (x - c) * rho
            if not x > c:
                raise DomainError("head extension reached the accumulation point")
            new.append(x)
        new.reverse()
        pts = np.concatenate((new, self.points))
        vals = np.concatenate(([self.phi.value(x) for x in new], self.phi_values))
        return replace(self, points=pts, phi_values=vals)


def _profile(phi: MonotoneFunction):
    """Interleaved one-sided limits ``[phi(e_0+), phi(e_1-), phi(e_1+), ...]``."""
    e = phi.edges
    n = len(e) - 1
    j = np.arange(n)
    start = phi.eval_piece(j, e[:-1])
    end = phi.eval_piece(j, e[1:])
    seq = np.empty(2 * n)
    seq[0::2] = start
    seq[1::2] = end
    return e, seq


def _first_above(phi: MonotoneFunction, edges, seq, y: float) -> float:
    """``inf{t : phi(t) > y}``, or ``b`` if ``phi(b-) <= y``."""
    i = int(np.searchsorted(seq, y, side="right"))
    if i >= len(seq):
        return float(edges[-1])
    j = i // 2
    if i % 2 == 0:
        return float(edges[j])
    # phi crosses y inside piece j; invert the closed form
    c, b0, s, an, ex = phi.coef[j], phi.base0[j], phi.slope[j], phi.anchor[j], phi.expo[j]
    lo, hi = edges[j], edges[j + 1]
    if y == 0.0:
        # the root of the affine base, exactly; powers of tiny bases underflow to zero
        return float(min(max(an - b0 / s, lo), hi))
    B = (y / c) ** (1.0 / ex)
    t = an + (B - b0) / s
    t = min(max(t, lo), hi)
    # largest float with phi(t-) <= y, so that phi(x_{k+1}-) <= 2 phi(x_k) holds as computed
    for _ in range(256):
        if t > lo and float(phi.eval_piece(j, t)) > y:
            t = math.nextafter(t, -math.inf)
        else:
            break
    for _ in range(256):
        up = math.nextafter(t, math.inf)
        if up < hi and float(phi.eval_piece(j, up)) <= y:
            t = up
        else:
            break
    return float(t)


def discretizing_sequence(phi: MonotoneFunction, max_terms: int = 4096,
                          head_within: float | None = None) -> DiscretizingSequence:
    """Greedy doubling sequence of a non-negative, non-decreasing, right-continuous ``phi``.

    ``head_within`` asks for the first stored point of an infinite head to
    lie at or left of the given point.
    """
    if not phi.increasing:
        raise DomainError("phi must be non-decreasing")
    if np.any(phi.values != phi.right_continuous().values):
        raise DomainError("phi must be right-continuous")
    edges, seq = _profile(phi)
    if np.any(seq < 0) or np.any(np.diff(seq) < 0) or np.any(~np.isfinite(seq[:-1])):
        raise DomainError("phi must be non-negative, finite and non-decreasing")
    a, b = phi.interval.a, phi.interval.b
    if seq[-1] == 0.0:
        raise DomainError("phi vanishes identically; the weight is zero almost everywhere")

    c = _first_above(phi, edges, seq, 0.0)
    if c == a:
        phi_c = float(seq[0])
    else:
        phi_c = phi.value(c)
    head_expo = None
    if phi_c > 0:
        x0 = c
    else:
        # continuous growth from zero: pure power on the piece starting at c
        j0 = int(np.searchsorted(edges, c, side="right")) - 1
        if phi.base_at(j0, c) != 0.0 or phi.slope[j0] <= 0 or phi.expo[j0] <= 0:
            raise DomainError("cannot continue the head of the discretizing sequence analytically")
        head_expo = float(phi.expo[j0])
        right = float(edges[j0 + 1])
        if head_within is not None:
            right = min(right, head_within)
        if math.isinf(right):
            right = c + 1.0
        x0 = c + 0.5 * (right - c)
        if not c < x0 < right:
            raise DomainError("no room for a head point")

    pts = [x0]
    vals = [phi_c if x0 == c else phi.value(x0)]
    while True:
        if len(pts) > max_terms:
            raise TruncationOverflow(f"discretizing sequence needs more than {max_terms} terms")
        nxt = _first_above(phi, edges, seq, 2.0 * vals[-1])
        if nxt >= b:
            pts.append(b)
            break
        if not nxt > pts[-1]:
            nxt = math.nextafter(pts[-1], math.inf)
        pts.append(nxt)
        vals.append(phi.value(nxt))
    d = DiscretizingSequence(np.array(pts), np.array(vals), float(c), head_expo, phi)
    if head_within is not None:
        d = d.extend_head(head_within)
    return d


def ulp_sensitivity(phi: MonotoneFunction, t: float) -> float:
    """Relative change of ``phi`` across one ulp of ``t`` on the piece right of ``t``."""
    j = int(np.searchsorted(phi.knots, t, side="right"))
    base = phi.base_at(j, t)
    if phi.slope[j] == 0.0 or phi.coef[j] == 0.0:
        return 0.0
    if not base > 0:
        return math.inf
    spread = math.ulp(t) + math.ulp(phi.anchor[j]) + abs(phi.base0[j]) * EPS / abs(phi.slope[j])
    return abs(phi.expo[j] * phi.slope[j]) * spread / base


def check_discretizing(phi: MonotoneFunction, d: DiscretizingSequence, rel: float = 16 * EPS) -> dict:
    """Independent check of conditions (i)-(iii) on the stored part of ``d``.

    Condition (ii) is checked exactly.  When ``phi`` is continuous at
    ``x_{k+1}`` conditions (ii) and (iii) together force
    ``phi(x_{k+1}) = 2 phi(x_k)``, which a floating point ``x_{k+1}`` can
    only meet up to the change of ``phi`` across one ulp, so (iii) allows
    that change plus a relative slack ``rel`` for evaluation rounding.
    """
    x = d.points
    a, b = phi.interval.a, phi.interval.b
    vals = []
    for t in x[:-1]:
        vals.append(phi.right_limit(t) if t == a else phi.value(t))
    vals = np.array(vals)
    left = np.array([phi.left_limit(t) if t > a else 0.0 for t in x])
    report = {"increasing": bool(np.all(np.diff(x) > 0)), "ends_at_b": bool(x[-1] == b)}
    if d.finite_start:
        xN = x[0]
        zero_before = xN == a or phi.left_limit(xN) == 0.0
        report["i"] = bool(vals[0] > 0 and zero_before and report["ends_at_b"])
    else:
        c = d.limit
        report["i"] = bool((c == a or phi.left_limit(c) == 0.0) and phi.value(c) == 0.0
                           and report["ends_at_b"])
    # (ii): phi(x_{k+1}-) <= 2 phi(x_k) for every stored k
    report["ii"] = bool(np.all(left[1:] <= 2.0 * vals))
    # (iii): 2 phi(x_k-) <= phi(x_{k+1}) for N < k < M
    ks = np.arange(0 if not d.finite_start else 1, len(x) - 2)
    slack = np.array([rel + 2.0 * ulp_sensitivity(phi, float(x[k + 1])) for k in ks])
    ok = 2.0 * left[ks] <= vals[ks + 1] * (1 + slack) if ks.size else np.array([True])
    report["iii"] = bool(np.all(ok))
    report["values_match"] = bool(np.array_equal(vals, d.phi_values))
    report["ok"] = all(report[k] for k in ("increasing", "i", "ii", "iii"))
    return report


def covering_intervals(d: DiscretizingSequence) -> list[EndpointedInterval]:
    """``J_k = (x_k, x_{k+1}]`` for ``k < M`` and ``J_M = (x_M, b)``."""
    x = d.points
    out = [EndpointedInterval.lopen(float(x[i]), float(x[i + 1])) for i in range(len(x) - 2)]
    out.append(EndpointedInterval.open(float(x[-2]), float(x[-1])))
    return out


def head_sum(first: float, ratio: float, power: float) -> float:
    """``sum_{i >= 1} (first * ratio**i)**power`` for ``0 < ratio < 1``."""
    if first == 0.0:
        return 0.0
    r = ratio**power
    return first**power * r / (1.0 - r)


def _knots_after(limit: float, *arrays) -> float:
    ks = [k for arr in arrays for k in np.asarray(arr, dtype=float) if k > limit]
    return min(ks) if ks else math.inf


def discretized_rhs(g: StepFunction, u: StepFunction, q: float, nu: Measure, mu: Measure,
                    d: DiscretizingSequence) -> float:
    """``||{ ||g||_{inf,J_k,mu} ||u||_{q,(a,x_k+],nu} }||_{l^q}`` over all terms.

    Omitted head terms are summed in closed form: there ``g`` and ``mu``
    are constant and the second factor halves with every step.
    """
    if d.phi.interval != u.interval:
        raise DomainError("sequence does not belong to this weight")
    if not d.finite_start:
        d = d.extend_head(_knots_after(d.limit, g.knots, mu.knots))
    Js = covering_intervals(d)
    G = np.array([norm(g, math.inf, J, mu) for J in Js])
    terms = G * d.phi_values
    if d.finite_start:
        return lq_norm(terms, q)
    # omitted head: J_{first-i} inside (limit, x_first], constant g and mu there
    head_set = EndpointedInterval.lopen(d.limit, float(d.points[0]))
    G0 = norm(g, math.inf, head_set, mu)
    first = G0 * d.phi_values[0]
    if math.isinf(q):
        return max(lq_norm(terms, q), 0.5 * first)
    return (math.fsum((terms[terms > 0] ** q).tolist()) + head_sum(first, 0.5, q)) ** (1.0 / q)

