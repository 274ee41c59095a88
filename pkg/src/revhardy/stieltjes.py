"""Monotone functions and Lebesgue-Stieltjes integration with enclosures.

A :class:`MonotoneFunction` is stored as interior knots, an explicit value at
every knot, and on every open piece between knots a closed form

    coef * (base0 + slope * (t - anchor)) ** expo

with a non-negative affine base.  That family is closed under the operations
the characterizing constants need (powers, negation, one-sided limits), and
cumulative weighted norms over the computable measure class land in it
exactly.

Integrals ``int_e F dphi`` are enclosed by monotone bracketing on an
adaptively bisected grid: on a cell where ``phi`` is continuous the integrand
is squeezed between its values at the two cell ends, tightened by chord and
tangent bounds since each factor has a fixed convexity there.  Atoms of the
Stieltjes measure (jumps of ``phi``) are integrated exactly.  Cells where
``phi`` blows up are handled in closed form, which is possible because there
both bases vanish at the same endpoint and the integrand is a pure power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConventionViolation, DomainError, NonAdmissibleWeight, ToleranceNotMet
from .measure import EndpointedInterval, Interval, Measure, cell_edges, merge_knots
from .numerics import EPS, INF, Enclosure, ext_pow
from .stepfn import StepFunction

__all__ = [
    "MonotoneFunction",
    "cumulative_norm",
    "ls_measure",
    "ls_integral",
    "DEFAULT_MAX_CELLS",
]

DEFAULT_MAX_CELLS = 2**20


def _power(base: np.ndarray, expo) -> np.ndarray:
    """``base ** expo`` through one code path for any shape.

    numpy special-cases some scalar exponents (squares, square roots) but not
    arrays of them, and the general routine is not correctly rounded, so the
    same point could evaluate differently in a batch and on its own.
    Always passing array arguments keeps evaluations bit-identical.
    """
    shape = np.shape(base)
    b = np.atleast_1d(base)
    e = np.array(np.broadcast_to(expo, b.shape), dtype=float)
    return np.power(b, e).reshape(shape)


def _eval_pieces(coef, base0, slope, anchor, expo, t):
    """Vectorised evaluation of ``coef * (base0 + slope*(t-anchor))**expo``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        base = np.where(slope == 0.0, base0, base0 + slope * (t - anchor))
        base = np.maximum(base, 0.0)
        safe = np.where(base > 0.0, base, 1.0)
        raw = _power(safe, np.broadcast_to(expo, safe.shape))
        pw = np.where(base == 0.0, np.where(expo > 0, 0.0, INF), raw)
        pw = np.where(expo == 0.0, 1.0, pw)
        out = np.where(coef == 0.0, 0.0, coef * pw)
    return out


@dataclass(frozen=True, eq=False)
class MonotoneFunction:
    """Monotone function on ``interval`` with exact value and one-sided limits.

    Attributes:
        knots: interior breakpoints, strictly increasing.
        coef, base0, slope, anchor, expo: per-piece closed form; piece ``j``
            is the open interval between ``edges[j]`` and ``edges[j+1]``.
        values: function value at each knot (may differ from both limits).
        increasing: ``True`` for non-decreasing, ``False`` for non-increasing.
    """

    interval: Interval
    knots: np.ndarray
    coef: np.ndarray
    base0: np.ndarray
    slope: np.ndarray
    anchor: np.ndarray
    expo: np.ndarray
    values: np.ndarray
    increasing: bool = True

    def __post_init__(self):
        n = len(self.knots)
        for name in ("coef", "base0", "slope", "anchor", "expo"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n + 1,):
                raise DomainError(f"{name} needs one entry per piece")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "knots", np.asarray(self.knots, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.shape != (n,):
            raise DomainError("need one value per knot")
        if n and (np.any(np.diff(self.knots) <= 0) or not self.interval.contains(self.knots[0])
                  or not self.interval.contains(self.knots[-1])):
            raise DomainError("knots must be strictly increasing and interior")

    # -- constructors -----------------------------------------------------
    @classmethod
    def power_affine(cls, interval: Interval, coef: float, base0: float, slope: float,
                     expo: float, anchor: float | None = None) -> "MonotoneFunction":
        """Single-piece ``coef * (base0 + slope*(t-anchor))**expo``."""
        if anchor is None:
            anchor = interval.a if math.isfinite(interval.a) else 0.0
        f = cls(interval, np.empty(0), [coef], [base0], [slope], [anchor], [expo], np.empty(0), True)
        lo, hi = f.right_limit(interval.a), f.left_limit(interval.b)
        return f._with_direction(hi >= lo)

    @classmethod
    def step(cls, interval: Interval, knots, piece_values, knot_values) -> "MonotoneFunction":
        """Piecewise-constant monotone function."""
        pv = np.asarray(piece_values, dtype=float)
        n = len(pv)
        f = cls(interval, knots, np.ones(n), pv, np.zeros(n), np.zeros(n), np.ones(n),
                knot_values, True)
        if n > 1:
            return f._with_direction(pv[-1] >= pv[0])
        return f

    def _with_direction(self, increasing: bool) -> "MonotoneFunction":
        return MonotoneFunction(self.interval, self.knots, self.coef, self.base0, self.slope,
                                self.anchor, self.expo, self.values, bool(increasing))

    # -- evaluation -------------------------------------------------------
    @property
    def edges(self) -> np.ndarray:
        return cell_edges(self.interval, self.knots)

    def piece_index(self, t: float) -> int:
        """Index of the piece containing a non-knot point ``t``."""
        return int(np.searchsorted(self.knots, t, side="right"))

    def eval_piece(self, j, t):
        j = np.asarray(j)
        return _eval_pieces(self.coef[j], self.base0[j], self.slope[j], self.anchor[j],
                            self.expo[j], t)

    def _knot_index(self, t: float) -> int | None:
        i = int(np.searchsorted(self.knots, t))
        if i < len(self.knots) and self.knots[i] == t:
            return i
        return None

    def value(self, t: float) -> float:
        if t <= self.interval.a:
            return self.right_limit(self.interval.a)
        if t >= self.interval.b:
            return self.left_limit(self.interval.b)
        i = self._knot_index(t)
        if i is not None:
            return float(self.values[i])
        return float(self.eval_piece(self.piece_index(t), t))

    __call__ = value

    def left_limit(self, t: float) -> float:
        j = int(np.searchsorted(self.knots, t, side="left"))
        return float(self.eval_piece(j, t))

    def right_limit(self, t: float) -> float:
        j = int(np.searchsorted(self.knots, t, side="right"))
        return float(self.eval_piece(j, t))

    def left_limits(self, t) -> np.ndarray:
        """Vectorised :meth:`left_limit` for points in ``(a, b]``."""
        t = np.asarray(t, dtype=float)
        return self.eval_piece(np.searchsorted(self.knots, t, side="left"), t)

    def values_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array([self.value(x) for x in t.ravel()]).reshape(t.shape)

    def piece_bounds(self, j: int) -> tuple[float, float]:
        """Infimum and supremum of piece ``j`` over its open interval."""
        e = self.edges
        lo, hi = float(self.eval_piece(j, e[j])), float(self.eval_piece(j, e[j + 1]))
        return (min(lo, hi), max(lo, hi))

    def base_at(self, j: int, t: float) -> float:
        if self.slope[j] == 0.0:
            return float(self.base0[j])
        return float(self.base0[j] + self.slope[j] * (t - self.anchor[j]))

    # -- transforms -------------------------------------------------------
    def _limits(self, side: str) -> np.ndarray:
        if not len(self.knots):
            return self.values.copy()
        j = np.arange(len(self.knots)) + (1 if side == "right" else 0)
        return self.eval_piece(j, self.knots)

    def right_continuous(self) -> "MonotoneFunction":
        """Same function with knot values replaced by right limits."""
        return MonotoneFunction(self.interval, self.knots, self.coef, self.base0, self.slope,
                                self.anchor, self.expo, self._limits("right"), self.increasing)

    def left_continuous(self) -> "MonotoneFunction":
        return MonotoneFunction(self.interval, self.knots, self.coef, self.base0, self.slope,
                                self.anchor, self.expo, self._limits("left"), self.increasing)

    def power(self, e: float) -> "MonotoneFunction":
        """``f ** e`` for a non-negative ``f``; a negative ``e`` reverses monotonicity."""
        if np.any(self.coef < 0) or np.any(self.values < 0):
            raise DomainError("power of a function taking negative values")
        if e == 0:
            raise DomainError("zero power")
        coef = np.array([ext_pow(c, e) for c in self.coef])
        vals = np.array([ext_pow(v, e) for v in self.values])
        return MonotoneFunction(self.interval, self.knots, coef, self.base0, self.slope,
                                self.anchor, self.expo * e, vals,
                                self.increasing if e > 0 else not self.increasing)

    def __neg__(self) -> "MonotoneFunction":
        return MonotoneFunction(self.interval, self.knots, -self.coef, self.base0, self.slope,
                                self.anchor, self.expo, -self.values, not self.increasing)

    def same_as(self, other: "MonotoneFunction") -> bool:
        return (
            self.interval == other.interval
            and self.increasing == other.increasing
            and all(np.array_equal(getattr(self, k), getattr(other, k), equal_nan=True)
                    for k in ("knots", "coef", "base0", "slope", "anchor", "expo", "values"))
        )


# ---------------------------------------------------------------------------
# cumulative norms
# ---------------------------------------------------------------------------

def cumulative_norm(u: StepFunction, q: float, m: Measure,
                    side: Literal["left", "right"] = "left") -> MonotoneFunction:
    """``t -> ||u||_{q,(a,t],m}`` (left) or ``t -> ||u||_{q,[t,b),m}`` (right).

    For ``q < inf`` the result is right-continuous (left side) or
    left-continuous (right side).  For ``q = inf`` it is the essential
    supremum over the same sets, a step function whose knot values need not
    agree with either one-sided limit.
    """
    if u.interval != m.interval:
        raise DomainError("weight and measure live on different intervals")
    if not q > 0:
        raise DomainError("exponent must be positive")
    I = m.interval
    knots = merge_knots(I, u.knots, m.knots)
    edges = cell_edges(I, knots)
    uc, uk = u.on_grid(knots)
    dens, atoms = m.on_grid(knots)
    n = len(knots)

    if math.isinf(q):
        ec = np.where((dens > 0) & (uc > 0), uc, 0.0)
        ek = np.where(atoms > 0, uk, 0.0)
        seq = np.empty(2 * n + 1)
        seq[0::2] = ec
        seq[1::2] = ek
        if side == "left":
            acc = np.maximum.accumulate(seq)
        else:
            acc = np.maximum.accumulate(seq[::-1])[::-1]
        pieces = acc[0::2]
        vals = acc[1::2]
        f = MonotoneFunction.step(I, knots, pieces, vals)
        return f._with_direction(side == "left")

    rate = np.where((dens > 0) & (uc > 0), uc**q * dens, 0.0)
    jump = np.where((atoms > 0) & (uk > 0), uk**q * atoms, 0.0)
    lengths = np.diff(edges)
    with np.errstate(invalid="ignore"):
        inc = np.where(rate == 0.0, 0.0, rate * lengths)
    if side == "left":
        if math.isinf(inc[0]) and n == 0:
            raise NonAdmissibleWeight("cumulative norm is infinite everywhere")
        # base at the left end of cell j, i.e. the right limit at edges[j]
        steps = inc[:-1] + jump
        start = np.concatenate(([0.0], np.cumsum(steps)))
        if np.any(np.isinf(start[:-1])) or (n and math.isinf(start[-1])):
            raise NonAdmissibleWeight("||u||_{q,(a,t]} is infinite at an interior point")
        anchor = edges[:-1].copy()
        bad = ~np.isfinite(anchor)
        if np.any(bad & (rate > 0)):
            raise NonAdmissibleWeight("positive weight on an unbounded piece")
        anchor[bad] = np.where(np.isfinite(edges[1:][bad]), edges[1:][bad], 0.0)
        base0 = start
        slope = rate
        knot_vals = start[1:]
    else:
        steps = inc[1:] + jump
        end = np.concatenate((np.cumsum(steps[::-1])[::-1], [0.0]))
        if np.any(np.isinf(end[1:])) or (n and math.isinf(end[0])):
            raise NonAdmissibleWeight("||u||_{q,[t,b)} is infinite at an interior point")
        anchor = edges[1:].copy()
        bad = ~np.isfinite(anchor)
        if np.any(bad & (rate > 0)):
            raise NonAdmissibleWeight("positive weight on an unbounded piece")
        anchor[bad] = np.where(np.isfinite(edges[:-1][bad]), edges[:-1][bad], 0.0)
        base0 = end
        slope = -rate
        knot_vals = end[:-1]
    e = 1.0 / q
    return MonotoneFunction(I, knots, np.ones(n + 1), base0, slope, anchor, np.full(n + 1, e),
                            np.where(knot_vals > 0, _power(np.where(knot_vals > 0, knot_vals, 1.0), e), 0.0),
                            side == "left")


# ---------------------------------------------------------------------------
# Stieltjes measure and integral
# ---------------------------------------------------------------------------

def _limit(phi: MonotoneFunction, t: float, side: str) -> float:
    if side == "+":
        return phi.right_limit(t)
    return phi.left_limit(t)


def _diff(hi: float, lo: float) -> float:
    if math.isinf(hi) and math.isinf(lo) and (hi > 0) == (lo > 0):
        raise ConventionViolation("integrator is infinite on the whole interval")
    return hi - lo


def ls_measure(phi: MonotoneFunction, e: EndpointedInterval) -> float:
    """Measure of ``e`` induced by ``phi`` through its one-sided limits.

    For a non-increasing ``phi`` the measure induced by ``-phi`` is returned.
    """
    if not e.within(phi.interval):
        raise DomainError("interval not contained in the domain of phi")
    if e.empty:
        return 0.0
    right = _limit(phi, e.right, "+" if e.right_closed else "-")
    left = _limit(phi, e.left, "-" if e.left_closed else "+")
    d = _diff(right, left)
    return max(0.0, d if phi.increasing else -d)


def _cell_pieces(f: MonotoneFunction, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        mid = np.where(np.isfinite(left) & np.isfinite(right), 0.5 * (left + right),
                       np.where(np.isfinite(left), left + 1.0,
                                np.where(np.isfinite(right), right - 1.0, 0.0)))
    return np.searchsorted(f.knots, mid, side="right")


def _singular_cell(F: MonotoneFunction, jF: int, phi: MonotoneFunction, jp: int,
                   l: float, r: float, end: float) -> float:
    """Closed form of ``int F |dphi|`` over a cell where ``phi`` is infinite at ``end``.

    Both bases vanish at ``end``; with ``s`` the distance to ``end`` the
    integrand is ``cF * (BF s)**eF * |cp eP| BP**eP s**(eP-1)``.
    """
    eF, eP = F.expo[jF], phi.expo[jp]
    BF, BP = abs(F.slope[jF]), abs(phi.slope[jp])
    cF, cP = F.coef[jF], phi.coef[jp]
    if BF == 0.0 or cF == 0.0:
        return 0.0
    k = eF + eP
    length = r - l
    if k <= 0:
        return INF
    return float(cF * BF**eF * abs(cP * eP) * BP**eP * length**k / k)


def ls_integral(
    F: MonotoneFunction,
    phi: MonotoneFunction,
    e: EndpointedInterval,
    tol: float = 1e-6,
    max_cells: int = DEFAULT_MAX_CELLS,
    atol: float = 1e-300,
) -> Enclosure:
    """Enclose ``int_e F dphi`` for monotone ``F >= 0`` and monotone ``phi``.

    A non-increasing ``phi`` integrates against the measure of ``-phi``.  On an
    infinite plateau of ``phi`` the integrand must vanish (the plateau is then
    skipped); otherwise :class:`ConventionViolation` is raised.  A genuinely
    divergent integral yields ``[inf, inf]``.
    """
    if F.interval != phi.interval:
        raise DomainError("integrand and integrator live on different intervals")
    if not e.within(phi.interval):
        raise DomainError("integration set outside the domain")
    if np.any(F.coef < 0) or np.any(F.values < 0):
        raise DomainError("integrand must be non-negative")
    if e.empty:
        return Enclosure(0.0, 0.0)

    knots = merge_knots(Interval(e.left, e.right), F.knots, phi.knots) \
        if e.right > e.left else np.empty(0)
    exact_terms: list[float] = []

    # atoms of the Stieltjes measure
    pts = list(knots)
    if e.left_closed:
        pts.insert(0, e.left)
    if e.right_closed and e.right > e.left:
        pts.append(e.right)
    for t in pts:
        lo_lim, hi_lim = phi.left_limit(t), phi.right_limit(t)
        if lo_lim == hi_lim:
            continue
        Ft = F.value(t)
        if math.isinf(lo_lim) or math.isinf(hi_lim):
            if Ft == 0.0:
                continue
            raise ConventionViolation(
                f"integrand is {Ft:g} > 0 where the integrator leaves an infinite plateau (t={t:g})")
        if Ft == 0.0:
            continue
        if math.isinf(Ft):
            return Enclosure(INF, INF)
        exact_terms.append(Ft * abs(hi_lim - lo_lim))

    if e.right == e.left:
        s = math.fsum(exact_terms)
        return Enclosure.point(s, 8 * EPS)

    edges = np.concatenate(([e.left], knots, [e.right]))
    L, R = edges[:-1], edges[1:]
    jF = _cell_pieces(F, L, R)
    jP = _cell_pieces(phi, L, R)
    FL, FR = F.eval_piece(jF, L), F.eval_piece(jF, R)
    PL, PR = phi.eval_piece(jP, L), phi.eval_piece(jP, R)

    regular = []
    for c in range(len(L)):
        fl, fr, pl, pr = FL[c], FR[c], PL[c], PR[c]
        if fl == 0.0 and fr == 0.0:
            continue
        inf_l, inf_r = math.isinf(pl), math.isinf(pr)
        if inf_l and inf_r:
            if (pl > 0) == (pr > 0):
                raise ConventionViolation(
                    f"integrand positive on an infinite plateau ({L[c]:g}, {R[c]:g})")
            return Enclosure(INF, INF)
        if inf_l or inf_r:
            end = L[c] if inf_l else R[c]
            f_end = fl if inf_l else fr
            if f_end > 0:
                return Enclosure(INF, INF)
            v = _singular_cell(F, int(jF[c]), phi, int(jP[c]), L[c], R[c], end)
            if math.isinf(v):
                return Enclosure(INF, INF)
            exact_terms.append(v)
            continue
        if pl == pr:
            continue
        if not (math.isfinite(L[c]) and math.isfinite(R[c])):
            raise DomainError("non-constant integrator on an unbounded piece")
        if math.isinf(fl) or math.isinf(fr):
            return Enclosure(INF, INF)
        regular.append(c)

    exact = math.fsum(exact_terms)
    lo_b, hi_b, pad = _bracket(F, phi, L[regular], R[regular], jF[regular], jP[regular],
                               tol, max_cells, exact, atol)
    lo = exact * (1 - 16 * EPS) + lo_b - pad
    hi = exact * (1 + 16 * EPS) + hi_b + pad
    return Enclosure(max(0.0, lo), hi)


def _linear_bounds(val_l, val_r, val_m, der_m, convex, h):
    """Lower/upper linear bounds of a non-negative function with fixed convexity.

    Returns the bounds as their values at the two cell ends.  A convex
    function lies below its chord and above a tangent; a concave one the
    other way round.  A tangent that dips below zero is replaced by the
    trivial constant bound.
    """
    tan_l = val_m - 0.5 * h * der_m
    tan_r = val_m + 0.5 * h * der_m
    tan_ok = np.isfinite(tan_l) & np.isfinite(tan_r) & (tan_l >= 0) & (tan_r >= 0)
    mn = np.minimum(val_l, val_r)
    mx = np.maximum(val_l, val_r)
    lo_l = np.where(convex > 0, np.where(tan_ok, tan_l, mn), np.where(convex < 0, val_l, val_l))
    lo_r = np.where(convex > 0, np.where(tan_ok, tan_r, mn), np.where(convex < 0, val_r, val_r))
    hi_l = np.where(convex < 0, np.where(tan_ok, tan_l, mx), val_l)
    hi_r = np.where(convex < 0, np.where(tan_ok, tan_r, mx), val_r)
    return lo_l, lo_r, hi_l, hi_r


def _product_integral(a_l, a_r, b_l, b_r, h):
    """Exact integral over a cell of the product of two linear functions."""
    return h * (2 * a_l * b_l + a_l * b_r + a_r * b_l + 2 * a_r * b_r) / 6.0


def _convexity(coef, slope, expo):
    return np.where(slope == 0.0, 0.0, np.sign(coef * expo * (expo - 1.0)))


def _cell_bounds(F, phi, L, R, jF, jP):
    """Per-cell lower and upper bounds of ``int F |dphi|`` on regular cells."""
    FL, FR = F.eval_piece(jF, L), F.eval_piece(jF, R)
    PL, PR = phi.eval_piece(jP, L), phi.eval_piece(jP, R)
    dphi = np.abs(PR - PL)
    lo = np.minimum(FL, FR) * dphi
    hi = np.maximum(FL, FR) * dphi

    # second-order bounds: F and |phi'| are powers of affine functions, so
    # each has a fixed convexity sign on the cell
    h = R - L
    M = 0.5 * (L + R)
    cF, bF, sF, aF, eF = F.coef[jF], F.base0[jF], F.slope[jF], F.anchor[jF], F.expo[jF]
    cP, bP, sP, aP, eP = phi.coef[jP], phi.base0[jP], phi.slope[jP], phi.anchor[jP], phi.expo[jP]
    Fm = _eval_pieces(cF, bF, sF, aF, eF, M)
    dFm = _eval_pieces(cF * eF * sF, bF, sF, aF, eF - 1.0, M)
    kq = np.abs(cP * eP * sP)
    gq = eP - 1.0
    QL = _eval_pieces(kq, bP, sP, aP, gq, L)
    QR = _eval_pieces(kq, bP, sP, aP, gq, R)
    Qm = _eval_pieces(kq, bP, sP, aP, gq, M)
    dQm = _eval_pieces(kq * gq * sP, bP, sP, aP, gq - 1.0, M)
    with np.errstate(invalid="ignore", over="ignore"):
        f = _linear_bounds(FL, FR, Fm, dFm, _convexity(cF, sF, eF), h)
        q = _linear_bounds(QL, QR, Qm, dQm, _convexity(kq, sP, gq), h)
        plo = _product_integral(f[0], f[1], q[0], q[1], h)
        phi_ = _product_integral(f[2], f[3], q[2], q[3], h)
    good = np.isfinite(plo) & np.isfinite(phi_)
    # allowance for rounding in the closed-form evaluation
    plo = plo * (1 - 64 * EPS)
    phi_ = phi_ * (1 + 64 * EPS)
    lo = np.where(good, np.maximum(lo, plo), lo)
    hi = np.where(good, np.minimum(hi, phi_), hi)
    hi = np.maximum(hi, lo)
    scale = np.maximum(np.abs(PL), np.abs(PR)) * np.maximum(FL, FR)
    return lo, hi, scale


def _bracket(F, phi, L, R, jF, jP, tol, max_cells, exact, atol):
    """Adaptive bracketing over regular cells; returns (lo, hi, pad).

    Every cell stays in the pool; a cell is bisected whenever its width
    exceeds an equal share of the remaining target width.
    """
    if len(L) == 0:
        return 0.0, 0.0, 0.0
    while True:
        lo_c, hi_c, sc = _cell_bounds(F, phi, L, R, jF, jP)
        width = hi_c - lo_c
        lo = math.fsum(lo_c.tolist())
        hi = math.fsum(hi_c.tolist())
        scale = float(np.max(sc))
        # rounding allowance: evaluation errors of phi telescope against the monotone F
        pad = 16 * EPS * (scale + hi + exact)
        target = max(tol * (hi + exact), atol)
        if hi - lo + 2 * pad <= target:
            return lo, hi, pad
        mid = 0.5 * (L + R)
        splittable = (width > 0.5 * target / len(L)) & (mid > L) & (mid < R)
        if not np.any(splittable):
            raise ToleranceNotMet(
                f"enclosure width {hi - lo:.3e} (rounding pad {pad:.3e}) above target {target:.3e}"
                " at representation limit")
        if len(L) + int(np.count_nonzero(splittable)) > max_cells:
            raise ToleranceNotMet(
                f"refinement budget of {max_cells} cells exhausted (width {hi - lo:.3e}, target {target:.3e})")
        s = splittable
        L = np.concatenate((L, mid[s]))
        R = np.concatenate((np.where(s, mid, R), R[s]))
        jF = np.concatenate((jF, jF[s]))
        jP = np.concatenate((jP, jP[s]))
