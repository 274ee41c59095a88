"""Computable Borel measures on an open interval.

A :class:`Measure` is a finite list of atoms plus a piecewise-constant
density with bounded support.  On this class every quantity needed later
(masses, weighted norms, cumulative norms) is exactly computable piece by
piece, which is what makes the rigorous enclosures possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .numerics import INF, ext_mul

__all__ = [
    "Interval",
    "EndpointedInterval",
    "Measure",
    "mass",
    "merge_knots",
    "cell_edges",
]


def _num(x) -> float:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
    if x is None:
        raise DomainError("missing numeric value")
    return float(x)


@dataclass(frozen=True)
class Interval:
    """Open interval ``(a, b)``; ``a`` may be ``-inf`` and ``b`` may be ``+inf``."""

    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", _num(self.a))
        object.__setattr__(self, "b", _num(self.b))
        if not self.a < self.b:
            raise DomainError(f"interval needs a < b, got ({self.a}, {self.b})")
        if self.a == INF or self.b == -INF:
            raise DomainError("interval endpoints out of order")

    def contains(self, t: float) -> bool:
        return self.a < t < self.b

    def reflect(self) -> "Interval":
        return Interval(-self.b, -self.a)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)

    def whole(self) -> "EndpointedInterval":
        return EndpointedInterval(self.a, self.b, False, False)


@dataclass(frozen=True)
class EndpointedInterval:
    """Interval with explicit endpoint closure flags, e.g. ``(alpha, beta]``."""

    left: float
    right: float
    left_closed: bool = False
    right_closed: bool = True

    def __post_init__(self):
        if self.left > self.right:
            raise DomainError(f"left endpoint {self.left} exceeds right {self.right}")
        if self.left_closed and math.isinf(self.left):
            raise DomainError("an infinite endpoint cannot be closed")
        if self.right_closed and math.isinf(self.right):
            raise DomainError("an infinite endpoint cannot be closed")

    @classmethod
    def open(cls, left, right):
        return cls(left, right, False, False)

    @classmethod
    def lopen(cls, left, right):
        """``(left, right]``"""
        return cls(left, right, False, True)

    @classmethod
    def ropen(cls, left, right):
        """``[left, right)``"""
        return cls(left, right, True, False)

    @classmethod
    def closed(cls, left, right):
        return cls(left, right, True, True)

    @property
    def empty(self) -> bool:
        if self.left < self.right:
            return False
        return not (self.left_closed and self.right_closed)

    def contains(self, t: float) -> bool:
        if t < self.left or t > self.right:
            return False
        if t == self.left and not self.left_closed:
            return False
        if t == self.right and not self.right_closed:
            return False
        return True

    def contains_array(self, t: np.ndarray) -> np.ndarray:
        lo = t >= self.left if self.left_closed else t > self.left
        hi = t <= self.right if self.right_closed else t < self.right
        return lo & hi

    def within(self, interval: Interval) -> bool:
        if self.empty:
            return interval.a <= self.left <= interval.b
        if self.left < interval.a or self.right > interval.b:
            return False
        if self.left_closed and self.left == interval.a:
            return False
        if self.right_closed and self.right == interval.b:
            return False
        return True

    def reflect(self) -> "EndpointedInterval":
        return EndpointedInterval(-self.right, -self.left, self.right_closed, self.left_closed)


def merge_knots(interval: Interval, *arrays: Iterable[float]) -> np.ndarray:
    """Sorted distinct points strictly inside the interval."""
    parts = [np.asarray(list(x) if not isinstance(x, np.ndarray) else x, dtype=float).ravel()
             for x in arrays]
    if not parts:
        return np.empty(0)
    allk = np.concatenate(parts)
    allk = allk[(allk > interval.a) & (allk < interval.b)]
    return np.unique(allk)


def cell_edges(interval: Interval, knots: np.ndarray) -> np.ndarray:
    """``[a, k_1, ..., k_n, b]``; cell ``j`` is the open interval between edges j and j+1."""
    return np.concatenate(([interval.a], knots, [interval.b]))


def _cell_lengths(edges: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        return np.diff(edges)


@dataclass(frozen=True)
class Measure:
    """Atoms plus a piecewise-constant density on ``interval``.

    ``dens_breaks`` are finite and strictly increasing; ``dens_values[i]`` is
    the density on ``(dens_breaks[i], dens_breaks[i+1])``.  The density is zero
    outside ``[dens_breaks[0], dens_breaks[-1]]``.
    """

    interval: Interval
    atom_pos: tuple = ()
    atom_mass: tuple = ()
    dens_breaks: tuple = ()
    dens_values: tuple = ()

    def __post_init__(self):
        I = self.interval
        pos = tuple(float(x) for x in self.atom_pos)
        ms = tuple(float(x) for x in self.atom_mass)
        br = tuple(_num(x) for x in self.dens_breaks)
        vals = tuple(float(x) for x in self.dens_values)
        object.__setattr__(self, "atom_pos", pos)
        object.__setattr__(self, "atom_mass", ms)
        object.__setattr__(self, "dens_breaks", br)
        object.__setattr__(self, "dens_values", vals)
        if len(pos) != len(ms):
            raise DomainError("atom positions and masses differ in length")
        for i, (x, m) in enumerate(zip(pos, ms)):
            if not I.contains(x):
                raise DomainError(f"atom at {x} is not inside ({I.a}, {I.b})")
            if not (m > 0 and math.isfinite(m)):
                raise DomainError(f"atom mass must be positive and finite, got {m}")
            if i and not pos[i - 1] < x:
                raise DomainError("atom positions must be strictly increasing")
        if br or vals:
            if len(br) != len(vals) + 1:
                raise DomainError("density needs len(breaks) == len(values) + 1")
            for x in br:
                if not math.isfinite(x):
                    raise DomainError("density breaks must be finite (bounded support)")
                if x < I.a or x > I.b:
                    raise DomainError(f"density break {x} outside the interval")
            if any(not br[i] < br[i + 1] for i in range(len(br) - 1)):
                raise DomainError("density breaks must be strictly increasing")
            if any(not (v >= 0 and math.isfinite(v)) for v in vals):
                raise DomainError("density values must be finite and non-negative")

    # -- constructors -----------------------------------------------------
    @classmethod
    def lebesgue(cls, a: float, b: float, density: float = 1.0) -> "Measure":
        return cls(Interval(a, b), dens_breaks=(a, b), dens_values=(density,))

    @classmethod
    def atoms(cls, interval: Interval, pairs: Sequence[Sequence[float]]) -> "Measure":
        pairs = sorted(pairs)
        return cls(interval, tuple(p for p, _ in pairs), tuple(m for _, m in pairs))

    @classmethod
    def from_dict(cls, d: dict, interval: Interval) -> "Measure":
        atoms = sorted((_num(p), _num(m)) for p, m in d.get("atoms", []))
        dens = d.get("density") or {}
        return cls(
            interval,
            tuple(p for p, _ in atoms),
            tuple(m for _, m in atoms),
            tuple(dens.get("breaks", ())),
            tuple(dens.get("values", ())),
        )

    def to_dict(self) -> dict:
        out = {"atoms": [[p, m] for p, m in zip(self.atom_pos, self.atom_mass)]}
        if self.dens_breaks:
            out["density"] = {"breaks": list(self.dens_breaks), "values": list(self.dens_values)}
        return out

    def plus(self, other: "Measure") -> "Measure":
        """Sum of two measures on the same interval."""
        if other.interval != self.interval:
            raise DomainError("measures live on different intervals")
        atoms: dict[float, float] = {}
        for p, m in list(zip(self.atom_pos, self.atom_mass)) + list(zip(other.atom_pos, other.atom_mass)):
            atoms[p] = atoms.get(p, 0.0) + m
        br = np.union1d(np.asarray(self.dens_breaks), np.asarray(other.dens_breaks))
        if br.size:
            mids = 0.5 * (br[:-1] + br[1:])
            vals = self.density_at(mids) + other.density_at(mids)
        else:
            vals = np.empty(0)
        keys = sorted(atoms)
        return Measure(self.interval, tuple(keys), tuple(atoms[k] for k in keys), tuple(br), tuple(vals))

    def reflect(self) -> "Measure":
        """The measure ``E -> m(-E)`` on ``(-b, -a)``."""
        return Measure(
            self.interval.reflect(),
            tuple(-p for p in reversed(self.atom_pos)),
            tuple(reversed(self.atom_mass)),
            tuple(-x for x in reversed(self.dens_breaks)),
            tuple(reversed(self.dens_values)),
        )

    # -- queries ----------------------------------------------------------
    @property
    def knots(self) -> np.ndarray:
        return merge_knots(self.interval, self.atom_pos, self.dens_breaks)

    def density_at(self, t) -> np.ndarray:
        """Density value at points not on a density break (zero outside the support)."""
        t = np.asarray(t, dtype=float)
        if not self.dens_breaks:
            return np.zeros_like(t)
        br = np.asarray(self.dens_breaks)
        vals = np.asarray(self.dens_values)
        idx = np.searchsorted(br, t, side="right") - 1
        ok = (idx >= 0) & (idx < len(vals))
        return np.where(ok, vals[np.clip(idx, 0, len(vals) - 1)], 0.0)

    def atom_at(self, t: float) -> float:
        i = np.searchsorted(self.atom_pos, t)
        if i < len(self.atom_pos) and self.atom_pos[i] == t:
            return self.atom_mass[i]
        return 0.0

    def on_grid(self, knots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Density on each open cell and atom mass at each knot.

        ``knots`` must contain every atom position and density break lying
        inside the interval.
        """
        edges = cell_edges(self.interval, knots)
        left = edges[:-1]
        if self.dens_breaks:
            br = np.asarray(self.dens_breaks)
            vals = np.asarray(self.dens_values)
            idx = np.searchsorted(br, left, side="right") - 1
            # a cell starting at -inf lies left of the support
            ok = (idx >= 0) & (idx < len(vals))
            dens = np.where(ok, vals[np.clip(idx, 0, len(vals) - 1)], 0.0)
        else:
            dens = np.zeros(len(left))
        atoms = np.zeros(len(knots))
        if self.atom_pos:
            pos = np.asarray(self.atom_pos)
            j = np.searchsorted(knots, pos)
            if np.any(j >= len(knots)) or np.any(knots[np.minimum(j, len(knots) - 1)] != pos):
                raise DomainError("grid does not contain every atom position")
            atoms[j] = self.atom_mass
        return dens, atoms

    def cell_masses(self, knots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Mass of each open cell (density times length, ``0*inf = 0``) and of each knot."""
        dens, atoms = self.on_grid(knots)
        lengths = _cell_lengths(cell_edges(self.interval, knots))
        with np.errstate(invalid="ignore"):
            cm = np.where(dens == 0.0, 0.0, dens * lengths)
        return cm, atoms

    @property
    def total(self) -> float:
        return mass(self, self.interval.whole())

    @property
    def is_zero(self) -> bool:
        return not self.atom_pos and not any(v > 0 for v in self.dens_values)


def mass(m: Measure, e: EndpointedInterval) -> float:
    """``m(e)``: atoms selected by the closure flags plus the density integral."""
    if not e.within(m.interval):
        raise DomainError(f"{e} is not contained in ({m.interval.a}, {m.interval.b})")
    if e.empty:
        return 0.0
    terms = [mm for p, mm in zip(m.atom_pos, m.atom_mass) if e.contains(p)]
    br = m.dens_breaks
    for i, v in enumerate(m.dens_values):
        lo = max(br[i], e.left)
        hi = min(br[i + 1], e.right)
        if hi > lo:
            terms.append(ext_mul(v, hi - lo))
    return math.fsum(terms)
