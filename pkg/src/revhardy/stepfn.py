"""Non-negative piecewise-constant functions and weighted norms.

A :class:`StepFunction` on ``(a, b)`` has breakpoints ``a = t_0 < ... < t_n = b``,
a value on each open piece ``(t_{i-1}, t_i)`` and a value at each interior
breakpoint.  By default the breakpoint value is that of the piece on its
left, so pieces are ``(t_{i-1}, t_i]``.  Explicit breakpoint values are needed
to represent reflections and supremal envelopes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError
from .measure import EndpointedInterval, Interval, Measure, _num, cell_edges, merge_knots
from .numerics import INF

__all__ = ["StepFunction", "norm", "sup_envelope", "pointwise", "grid_values"]


@dataclass(frozen=True)
class StepFunction:
    breaks: tuple
    values: tuple
    point_values: tuple | None = None

    def __post_init__(self):
        br = tuple(_num(x) for x in self.breaks)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breaks", br)
        object.__setattr__(self, "values", vals)
        if len(br) < 2 or len(vals) != len(br) - 1:
            raise DomainError("need len(breaks) == len(values) + 1 >= 2")
        if any(not br[i] < br[i + 1] for i in range(len(br) - 1)):
            raise DomainError("breakpoints must be strictly increasing")
        if any(math.isinf(x) for x in br[1:-1]):
            raise DomainError("interior breakpoints must be finite")
        pv = vals[:-1] if self.point_values is None else tuple(float(v) for v in self.point_values)
        if len(pv) != len(br) - 2:
            raise DomainError("need one point value per interior breakpoint")
        object.__setattr__(self, "point_values", pv)
        for v in vals + pv:
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"step values must be finite and non-negative, got {v}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, interval: Interval, c: float) -> "StepFunction":
        return cls((interval.a, interval.b), (c,))

    @classmethod
    def indicator(cls, interval: Interval, e: EndpointedInterval, level: float = 1.0) -> "StepFunction":
        """``level`` times the indicator of ``e``."""
        knots = merge_knots(interval, [e.left, e.right])
        edges = cell_edges(interval, knots)
        cells = np.where((edges[:-1] >= e.left) & (edges[1:] <= e.right), level, 0.0)
        pts = np.where(e.contains_array(knots), level, 0.0)
        return cls.from_grid(interval, knots, cells, pts)

    @classmethod
    def from_grid(cls, interval: Interval, knots: np.ndarray, cells, points) -> "StepFunction":
        edges = cell_edges(interval, np.asarray(knots, dtype=float))
        return cls(tuple(edges.tolist()), tuple(np.asarray(cells, float).tolist()),
                   tuple(np.asarray(points, float).tolist()))

    @classmethod
    def from_dict(cls, d: dict, interval: Interval) -> "StepFunction":
        br = [_num(x) for x in d["breaks"]]
        vals = [float(v) for v in d["values"]]
        if br[0] != interval.a or br[-1] != interval.b:
            raise DomainError("step function breaks must start at a and end at b")
        f = cls(tuple(br), tuple(vals))
        pts = d.get("points") or []
        if pts:
            pv = list(f.point_values)
            for pos, val in pts:
                pos = _num(pos)
                try:
                    i = br.index(pos, 1, len(br) - 1)
                except ValueError:
                    raise DomainError(f"point value at {pos} is not on an interior breakpoint")
                pv[i - 1] = float(val)
            f = cls(tuple(br), tuple(vals), tuple(pv))
        return f

    def to_dict(self) -> dict:
        out = {"breaks": list(self.breaks), "values": list(self.values)}
        pts = [[self.breaks[i + 1], v] for i, v in enumerate(self.point_values) if v != self.values[i]]
        if pts:
            out["points"] = pts
        return out

    # -- basic queries ----------------------------------------------------
    @property
    def interval(self) -> Interval:
        return Interval(self.breaks[0], self.breaks[-1])

    @property
    def knots(self) -> np.ndarray:
        return np.asarray(self.breaks[1:-1], dtype=float)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        kn = self.knots
        vals = np.asarray(self.values)
        idx = np.searchsorted(kn, t_arr, side="left")
        out = vals[idx]
        if kn.size:
            j = np.minimum(idx, kn.size - 1)
            on = kn[j] == t_arr
            out = np.where(on, np.asarray(self.point_values)[j], out)
        return float(out) if np.ndim(out) == 0 else out

    def on_grid(self, knots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values on the open cells and at the knots of a refining grid."""
        kn = self.knots
        edges = cell_edges(self.interval, knots)
        idx = np.searchsorted(kn, edges[:-1], side="right")
        cells = np.asarray(self.values)[idx]
        if knots.size == 0:
            return cells, np.empty(0)
        j = np.searchsorted(kn, knots, side="left")
        pts = np.asarray(self.values)[j]
        if kn.size:
            jj = np.minimum(j, kn.size - 1)
            on = kn[jj] == knots
            pts = np.where(on, np.asarray(self.point_values)[jj], pts)
        return cells, pts

    @property
    def sup(self) -> float:
        return max(self.values + self.point_values)

    def reflect(self) -> "StepFunction":
        """``x -> f(-x)`` on the reflected interval."""
        return StepFunction(
            tuple(-x for x in reversed(self.breaks)),
            tuple(reversed(self.values)),
            tuple(reversed(self.point_values)),
        )

    def scale(self, c: float) -> "StepFunction":
        return StepFunction(self.breaks, tuple(c * v for v in self.values),
                            tuple(c * v for v in self.point_values))

    def simplify(self) -> "StepFunction":
        """Drop breakpoints across which nothing changes."""
        br = [self.breaks[0]]
        vals = [self.values[0]]
        pts = []
        for i, pv in enumerate(self.point_values):
            nxt = self.values[i + 1]
            if pv == vals[-1] and nxt == vals[-1]:
                continue
            br.append(self.breaks[i + 1])
            pts.append(pv)
            vals.append(nxt)
        br.append(self.breaks[-1])
        return StepFunction(tuple(br), tuple(vals), tuple(pts))


def grid_values(f: StepFunction, m: Measure, e: EndpointedInterval | None = None):
    """Common refinement of ``f`` and ``m`` restricted to ``e``.

    Returns ``(cell_values, cell_masses, knot_values, knot_masses)`` for the
    cells and knots lying in ``e``.
    """
    if f.interval != m.interval:
        raise DomainError("function and measure live on different intervals")
    I = m.interval
    if e is None:
        e = I.whole()
    if not e.within(I):
        raise DomainError(f"{e} is not contained in ({I.a}, {I.b})")
    knots = merge_knots(I, f.knots, m.knots, [e.left, e.right])
    fc, fk = f.on_grid(knots)
    cm, am = m.cell_masses(knots)
    edges = cell_edges(I, knots)
    cin = (edges[:-1] >= e.left) & (edges[1:] <= e.right)
    kin = e.contains_array(knots)
    return fc[cin], cm[cin], fk[kin], am[kin]


def _power_sum(vals: np.ndarray, masses: np.ndarray, p: float) -> float:
    live = (vals > 0) & (masses > 0)
    if not np.any(live):
        return 0.0
    return math.fsum((vals[live] ** p * masses[live]).tolist())


def norm(f: StepFunction, p: float, e: EndpointedInterval | None, m: Measure) -> float:
    """``||f||_{p,e,m}``; for ``p = inf`` the ``m``-essential supremum on ``e``."""
    if not p > 0:
        raise DomainError("norm exponent must be positive")
    fc, cm, fk, am = grid_values(f, m, e)
    if math.isinf(p):
        cand = np.concatenate((fc[cm > 0], fk[am > 0]))
        return float(cand.max()) if cand.size else 0.0
    s = _power_sum(fc, cm, p) + _power_sum(fk, am, p)
    if math.isinf(s):
        return INF
    return s ** (1.0 / p)


def sup_envelope(
    g: StepFunction,
    m: Measure,
    direction: Literal["tail", "head"] = "tail",
    closed: bool = False,
) -> StepFunction:
    """Tabulate ``x -> ||g||_{inf,(x,b),m}`` (tail) or ``||g||_{inf,(a,x),m}`` (head).

    With ``closed=True`` the point ``x`` itself is included, i.e. ``[x, b)``
    or ``(a, x]``; that variant dominates ``g`` m-almost everywhere.
    """
    if g.interval != m.interval:
        raise DomainError("function and measure live on different intervals")
    I = m.interval
    knots = merge_knots(I, g.knots, m.knots)
    gc, gk = g.on_grid(knots)
    cm, am = m.cell_masses(knots)
    ec = np.where(cm > 0, gc, 0.0)
    ek = np.where(am > 0, gk, 0.0)
    n = knots.size
    seq = np.empty(2 * n + 1)
    seq[0::2] = ec
    seq[1::2] = ek
    if direction == "tail":
        suf = np.maximum.accumulate(seq[::-1])[::-1]
        cells = suf[0::2]
        # knot i sits at seq[2i+1]; the open tail starts at cell i+1 = seq[2i+2]
        pts = suf[1::2] if closed else suf[2::2]
    elif direction == "head":
        pre = np.maximum.accumulate(seq)
        cells = pre[0::2]
        pts = pre[1::2] if closed else pre[0:-1:2]
    else:
        raise DomainError(f"unknown envelope direction {direction!r}")
    return StepFunction.from_grid(I, knots, cells, pts)


def pointwise(f: StepFunction, g: StepFunction, op: Literal["product", "max"] = "product") -> StepFunction:
    if f.interval != g.interval:
        raise DomainError("functions live on different intervals")
    I = f.interval
    knots = merge_knots(I, f.knots, g.knots)
    fc, fk = f.on_grid(knots)
    gc, gk = g.on_grid(knots)
    if op == "product":
        return StepFunction.from_grid(I, knots, fc * gc, fk * gk)
    if op == "max":
        return StepFunction.from_grid(I, knots, np.maximum(fc, gc), np.maximum(fk, gk))
    raise DomainError(f"unknown pointwise operation {op!r}")
