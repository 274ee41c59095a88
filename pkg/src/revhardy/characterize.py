"""Characterizing constants of reverse Hardy inequalities with supremal operators.

Forward problem, for all ``g >= 0``::

    ||g w||_{p,(a,b),mu} <= c ||u(x) ||g||_{inf,(x,b),mu}||_{q,(a,b),nu}

and the dual problem with ``(a, x)`` in place of ``(x, b)``.  The best
constant is equivalent to ``A1`` (``q <= p``), ``A2`` (``p < q < inf``) or
``A3`` (``q = inf``); the dual constants ``B1``-``B3`` are obtained by
reflecting ``x -> -x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .discretize import (DiscretizingSequence, check_discretizing, covering_intervals,
                         discretizing_sequence)
from .errors import ConventionViolation, DomainError, NotAbsolutelyContinuous
from .measure import EndpointedInterval, Interval, Measure, cell_edges, merge_knots
from .numerics import EPS, INF, Enclosure, check_exponent, ext_div, ext_pow, holder_rho
from .stepfn import StepFunction, norm
from .stieltjes import MonotoneFunction, cumulative_norm, ls_integral

__all__ = [
    "Regime",
    "ProblemSpec",
    "DiscreteA",
    "ConstantsReport",
    "regime",
    "forward_phi",
    "vanishing_condition",
    "discrete_A",
    "constant_A1",
    "constant_A2",
    "constant_A3",
    "reflect",
    "constants_B",
    "direct_B",
    "reduce_three_measure",
    "compute_constants",
]

PAD = 64 * EPS


class Regime(str, Enum):
    QleP = "QleP"
    PltQfin = "PltQfin"
    QisInf = "QisInf"


def regime(p: float, q: float) -> Regime:
    check_exponent(p, "p")
    check_exponent(q, "q")
    if q <= p:
        return Regime.QleP
    if math.isinf(q):
        return Regime.QisInf
    return Regime.PltQfin


# ---------------------------------------------------------------------------
# problem definition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    """One inequality instance; exactly one of ``w`` and ``lam`` is given."""

    interval: Interval
    p: float
    q: float
    mu: Measure
    nu: Measure
    u: StepFunction
    w: StepFunction | None = None
    lam: Measure | None = None
    direction: str = "forward"

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p, "p"))
        object.__setattr__(self, "q", check_exponent(self.q, "q"))
        if self.direction not in ("forward", "dual"):
            raise DomainError(f"direction must be 'forward' or 'dual', got {self.direction!r}")
        if (self.w is None) == (self.lam is None):
            raise DomainError("give exactly one of w and lambda")
        parts = [self.mu, self.nu, self.u] + [x for x in (self.w, self.lam) if x is not None]
        if any(x.interval != self.interval for x in parts):
            raise DomainError("all measures and weights must live on the same interval")

    @property
    def weight(self) -> StepFunction:
        """``w``, or ``(d lambda / d mu)**(1/p)`` in the three-measure form."""
        if self.w is not None:
            return self.w
        return reduce_three_measure(self.lam, self.mu, self.p)

    def with_weight(self) -> "ProblemSpec":
        """Equivalent two-measure problem."""
        if self.w is not None:
            return self
        return ProblemSpec(self.interval, self.p, self.q, self.mu, self.nu, self.u,
                           w=self.weight, direction=self.direction)

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemSpec":
        I = Interval(*d["interval"])
        weights = d.get("weights", {})
        measures = d.get("measures", {})
        w = weights.get("w")
        lam = measures.get("lambda")
        return cls(
            interval=I,
            p=_exp(d["p"]),
            q=_exp(d["q"]),
            mu=Measure.from_dict(measures["mu"], I),
            nu=Measure.from_dict(measures["nu"], I),
            u=StepFunction.from_dict(weights["u"], I),
            w=None if w is None else StepFunction.from_dict(w, I),
            lam=None if lam is None else Measure.from_dict(lam, I),
            direction=d.get("direction", "forward"),
        )

    def to_dict(self) -> dict:
        measures = {"mu": self.mu.to_dict(), "nu": self.nu.to_dict()}
        weights = {"u": self.u.to_dict()}
        if self.lam is not None:
            measures["lambda"] = self.lam.to_dict()
        if self.w is not None:
            weights["w"] = self.w.to_dict()
        return {
            "interval": [_jnum(self.interval.a), _jnum(self.interval.b)],
            "p": _jnum(self.p),
            "q": _jnum(self.q),
            "direction": self.direction,
            "measures": measures,
            "weights": weights,
        }


def _exp(x) -> float:
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return float(x)


def _jnum(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


# ---------------------------------------------------------------------------
# three measures and reflection
# ---------------------------------------------------------------------------

def reduce_three_measure(lam: Measure, mu: Measure, p: float) -> StepFunction:
    """``w = (d lambda / d mu)**(1/p)`` when ``lambda`` is absolutely continuous w.r.t. ``mu``."""
    if lam.interval != mu.interval:
        raise DomainError("measures live on different intervals")
    p = check_exponent(p)
    I = mu.interval
    for pos, m in zip(lam.atom_pos, lam.atom_mass):
        if mu.atom_at(pos) == 0.0:
            raise NotAbsolutelyContinuous(
                f"lambda has an atom of mass {m:g} at {pos:g} where mu has none", witness=("atom", pos))
    knots = merge_knots(I, lam.knots, mu.knots)
    edges = cell_edges(I, knots)
    ld, la = lam.on_grid(knots)
    md, ma = mu.on_grid(knots)
    bad = np.flatnonzero((ld > 0) & (md == 0))
    if bad.size:
        j = int(bad[0])
        raise NotAbsolutelyContinuous(
            f"lambda has density {ld[j]:g} on ({edges[j]:g}, {edges[j + 1]:g}) where mu has none",
            witness=("interval", float(edges[j]), float(edges[j + 1])))

    def root(num, den):
        v = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
        if math.isinf(p):
            return np.where(v > 0, 1.0, 0.0)
        return v ** (1.0 / p)

    cells = root(ld, md)
    pts = np.where(ma > 0, root(la, ma), cells[:-1])
    return StepFunction.from_grid(I, knots, cells, pts).simplify()


def reflect(spec: ProblemSpec) -> ProblemSpec:
    """The problem on ``(-b, -a)`` under ``x -> -x``; the direction flips."""
    return ProblemSpec(
        spec.interval.reflect(),
        spec.p,
        spec.q,
        spec.mu.reflect(),
        spec.nu.reflect(),
        spec.u.reflect(),
        w=None if spec.w is None else spec.w.reflect(),
        lam=None if spec.lam is None else spec.lam.reflect(),
        direction="dual" if spec.direction == "forward" else "forward",
    )


# ---------------------------------------------------------------------------
# discretization
# ---------------------------------------------------------------------------

def forward_phi(spec: ProblemSpec) -> MonotoneFunction:
    """``phi(t) = ||u||_{q,(a,t+],nu}`` (right-continuous)."""
    return cumulative_norm(spec.u, spec.q, spec.nu, "left").right_continuous()


def _require_forward(spec: ProblemSpec):
    if spec.direction != "forward":
        raise DomainError("forward problem expected; reflect the dual problem first")


def vanishing_condition(spec: ProblemSpec, d: DiscretizingSequence) -> str:
    """``w = 0`` mu-a.e. on ``(a, x_N]`` when ``x_N > a``."""
    _require_forward(spec)
    xN = d.limit
    if xN <= spec.interval.a:
        return "not-applicable"
    if norm(spec.weight, spec.p, EndpointedInterval.lopen(spec.interval.a, xN), spec.mu) == 0.0:
        return "satisfied"
    return "violated"


@dataclass(frozen=True)
class DiscreteA:
    """``A = ||{W_k / U_k}||_{l^rho}`` with the analytic head of an infinite sequence.

    ``head_first`` is the first omitted term and ``head_factor`` the ratio of
    consecutive omitted terms, so the omitted part is an exact geometric
    series.
    """

    value: float
    rho: float
    W: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    head_first: float = 0.0
    head_factor: float = 0.0

    @property
    def head_value(self) -> float:
        if self.head_first == 0.0:
            return 0.0
        if math.isinf(self.rho):
            return self.head_first if self.head_factor <= 1.0 else INF
        if self.head_factor >= 1.0:
            return INF
        return (self.head_first**self.rho / (1.0 - self.head_factor**self.rho)) ** (1.0 / self.rho)

    def as_dict(self) -> dict:
        return {"value": self.value, "rho": self.rho, "terms": len(self.W),
                "head_first": self.head_first, "head_factor": self.head_factor,
                "head_value": self.head_value}


def _head_knot(spec: ProblemSpec, d: DiscretizingSequence) -> float:
    ks = [k for k in np.concatenate((spec.weight.knots, spec.mu.knots)) if k > d.limit]
    return min(ks) if ks else INF


def discrete_A(spec: ProblemSpec, d: DiscretizingSequence | None = None) -> DiscreteA:
    """Discrete characteristic ``A`` of the forward problem."""
    _require_forward(spec)
    if d is None:
        d = discretizing_sequence(forward_phi(spec))
    if not d.finite_start:
        d = d.extend_head(_head_knot(spec, d))
    w = spec.weight
    p, rho = spec.p, holder_rho(spec.p, spec.q)
    Js = covering_intervals(d)
    W = np.array([norm(w, p, J, spec.mu) for J in Js])
    U = np.asarray(d.phi_values, dtype=float)
    ratios = np.array([ext_div(x, y) for x, y in zip(W, U)])
    head_first = head_factor = 0.0
    if not d.finite_start:
        # the first omitted covering interval and its successors shrink
        # geometrically toward the accumulation point inside one grid cell
        x1 = float(d.points[0])
        x0 = d.limit + (x1 - d.limit) * d.head_ratio()
        W0 = norm(w, p, EndpointedInterval.lopen(x0, x1), spec.mu)
        head_first = ext_div(W0, 0.5 * U[0])
        head_factor = 2.0 if math.isinf(p) else 2.0 * d.head_ratio() ** (1.0 / p)
    out = DiscreteA(0.0, rho, W, U, head_first, head_factor)
    hv = out.head_value
    if math.isinf(rho):
        value = max(float(ratios.max()) if ratios.size else 0.0, hv)
    else:
        live = ratios[ratios > 0]
        if np.any(np.isinf(live)) or math.isinf(hv):
            value = INF
        else:
            value = (math.fsum((live**rho).tolist()) + hv**rho) ** (1.0 / rho)
    return DiscreteA(value, rho, W, U, head_first, head_factor)


# ---------------------------------------------------------------------------
# A1: essential supremum of a ratio of monotone power pieces
# ---------------------------------------------------------------------------

def _piece(f: MonotoneFunction, j: int):
    return f.coef[j], f.base0[j], f.slope[j], f.anchor[j], f.expo[j]


def _end_ratio(F, jF, G, jG, t) -> float:
    """Limit of ``F/G`` at a cell end ``t`` from inside the cell."""
    Ft = float(F.eval_piece(jF, t))
    Gt = float(G.eval_piece(jG, t))
    if Gt > 0:
        return ext_div(Ft, Gt) if math.isfinite(Gt) else 0.0
    if Ft > 0:
        return INF
    cF, _, sF, _, eF = _piece(F, jF)
    cG, _, sG, _, eG = _piece(G, jG)
    if cF == 0.0 or sF == 0.0:
        return 0.0
    if sG == 0.0:
        return INF
    # both bases vanish at t: ratio ~ K |x - t|**(eF - eG)
    if eF < eG:
        return INF
    if eF > eG:
        return 0.0
    return float(cF * abs(sF) ** eF / (cG * abs(sG) ** eG))


def _cell_sup(F, jF, G, jG, l, r) -> float:
    """Supremum of ``F/G`` over the open cell ``(l, r)``."""
    cands = [_end_ratio(F, jF, G, jG, l), _end_ratio(F, jF, G, jG, r)]
    _, bF, sF, aF, eF = _piece(F, jF)
    _, bG, sG, aG, eG = _piece(G, jG)
    if sF != 0.0 and sG != 0.0 and eF != eG:
        # d/dx log(F/G) = eF sF / BF - eG sG / BG vanishes on a line
        x = (eG * sG * (bF - sF * aF) - eF * sF * (bG - sG * aG)) / (sF * sG * (eF - eG))
        if l < x < r:
            Fx, Gx = float(F.eval_piece(jF, x)), float(G.eval_piece(jG, x))
            cands.append(ext_div(Fx, Gx) if Gx > 0 or Fx > 0 else 0.0)
    return max(cands)


def ess_sup_ratio(F: MonotoneFunction, G: MonotoneFunction, mu: Measure,
                  F_at, G_at) -> Enclosure:
    """``||F/G||_{inf,I,mu}`` where ``F``, ``G`` are monotone power-piece functions.

    ``F_at`` and ``G_at`` give the values used at points carrying atoms of
    ``mu`` (the one-sided conventions differ between the constants).
    """
    I = mu.interval
    knots = merge_knots(I, F.knots, G.knots, mu.knots)
    edges = cell_edges(I, knots)
    dens, atoms = mu.on_grid(knots)
    best = 0.0
    for j in range(len(edges) - 1):
        if dens[j] == 0.0:
            continue
        l, r = edges[j], edges[j + 1]
        m = 0.5 * (l + r) if math.isfinite(l) and math.isfinite(r) else (
            l + 1.0 if math.isfinite(l) else (r - 1.0 if math.isfinite(r) else 0.0))
        best = max(best, _cell_sup(F, F.piece_index(m), G, G.piece_index(m), l, r))
        if math.isinf(best):
            return Enclosure(INF, INF)
    for i, t in enumerate(knots):
        if atoms[i] > 0:
            Ft, Gt = F_at(t), G_at(t)
            best = max(best, ext_div(Ft, Gt) if Gt > 0 or Ft > 0 else 0.0)
            if math.isinf(best):
                return Enclosure(INF, INF)
    return Enclosure.point(best, PAD)


def constant_A1(spec: ProblemSpec, tol: float = 1e-6) -> Enclosure:
    """``A1 = || ||w||_{p,(a,x],mu} / ||u||_{q,(a,x),nu} ||_{inf,I,mu}``.

    The outer essential supremum is taken with respect to ``mu``.  Each
    factor is a power of an affine function on every grid cell, so the
    supremum is located exactly (endpoints and the stationary point of the
    log-ratio); ``tol`` is accepted for interface uniformity.
    """
    _require_forward(spec)
    F = cumulative_norm(spec.weight, spec.p, spec.mu, "left")
    G = cumulative_norm(spec.u, spec.q, spec.nu, "left")
    return ess_sup_ratio(F, G, spec.mu, F.value, G.left_limit)


# ---------------------------------------------------------------------------
# A2 and A3
# ---------------------------------------------------------------------------

def _boundary_term(F_total: float, G_total: float) -> float:
    return ext_div(F_total, G_total) if G_total > 0 or F_total > 0 else 0.0


def _a2_from(F: MonotoneFunction, G: MonotoneFunction, r: float, I: Interval, tol: float) -> Enclosure:
    """``(int F**r d(-G**-r))**(1/r) + F(b-)/G(b-)`` for the left-anchored norms ``F``, ``G``."""
    Fr = F.power(r)
    phi = -(G.power(-r))
    try:
        J = ls_integral(Fr, phi, I.whole(), tol=min(tol, tol * r))
    except ConventionViolation:
        return Enclosure(INF, INF)
    bnd = _boundary_term(F.left_limit(I.b), G.left_limit(I.b))
    return J.power(1.0 / r) + Enclosure.point(bnd, PAD)


def constant_A2(spec: ProblemSpec, tol: float = 1e-6, plus: bool = False) -> Enclosure:
    """``A2 = (int ||w||_{p,(a,x]}^r d(-||u||_{q,(a,x]}^-r))^(1/r) + ||w||_p / ||u||_q``.

    ``1/r = 1/p - 1/q``.  With ``plus=True`` the integrator uses
    ``||u||_{q,(a,x+],nu}``; that form also covers ``q = inf``.  A plateau
    of ``u = 0`` near ``a`` on which ``w`` does not vanish yields ``inf``.
    """
    _require_forward(spec)
    p, q = spec.p, spec.q
    if not p < q:
        raise DomainError("A2 needs p < q")
    if math.isinf(q) and not plus:
        raise DomainError("for q = inf use the right-continuous integrator (plus=True)")
    r = holder_rho(p, q)
    F = cumulative_norm(spec.weight, p, spec.mu, "left")
    G = cumulative_norm(spec.u, q, spec.nu, "left")
    if plus:
        G = G.right_continuous()
    return _a2_from(F, G, r, spec.interval, tol)


def _step_power_integral(cell_ratio, cell_mass, knot_ratio, knot_mass, p: float) -> float:
    total = []
    for ratio, m in ((cell_ratio, cell_mass), (knot_ratio, knot_mass)):
        live = (ratio > 0) & (m > 0)
        if np.any(np.isinf(ratio[live])):
            return INF
        total.extend((ratio[live] ** p * m[live]).tolist())
    return math.fsum(total)


def _a3_from(w: StepFunction, G: MonotoneFunction, G_at, mu: Measure, p: float) -> Enclosure:
    """``(int (w / G)**p dmu)**(1/p)`` with ``G`` a step function; ``G_at`` gives values at knots."""
    I = mu.interval
    knots = merge_knots(I, w.knots, G.knots, mu.knots)
    edges = cell_edges(I, knots)
    wc, wk = w.on_grid(knots)
    cm, am = mu.cell_masses(knots)
    mids = []
    for l, r in zip(edges[:-1], edges[1:]):
        mids.append(0.5 * (l + r) if math.isfinite(l) and math.isfinite(r) else
                    (l + 1.0 if math.isfinite(l) else (r - 1.0 if math.isfinite(r) else 0.0)))
    Gc = np.array([G.value(m) for m in mids])
    Gk = np.array([G_at(t) for t in knots])
    rc = np.array([ext_div(x, y) for x, y in zip(wc, Gc)])
    rk = np.array([ext_div(x, y) for x, y in zip(wk, Gk)])
    s = _step_power_integral(rc, cm, rk, am, p)
    return Enclosure.point(ext_pow(s, 1.0 / p), PAD)


def constant_A3(spec: ProblemSpec, tol: float = 1e-6) -> Enclosure:
    """``A3 = (int (w(x) / ||u||_{inf,(a,x),nu})**p dmu(x))**(1/p)``, exact up to rounding."""
    _require_forward(spec)
    if math.isinf(spec.p):
        raise DomainError("A3 needs p < inf")
    G = cumulative_norm(spec.u, INF, spec.nu, "left")
    return _a3_from(spec.weight, G, G.left_limit, spec.mu, spec.p)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class ConstantsReport:
    regime: Regime
    direction: str
    constants: dict
    discrete_A: DiscreteA | None
    vanishing: str
    sequence_check: dict | None = None
    cross_check: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def primary(self) -> str:
        prefix = "A" if self.direction == "forward" else "B"
        return prefix + {"QleP": "1", "PltQfin": "2", "QisInf": "3"}[self.regime.value]

    @property
    def finite(self) -> bool:
        c = self.constants.get(self.primary)
        return self.vanishing != "violated" and c is not None and not c.is_infinite

    def as_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "direction": self.direction,
            "constants": {k: v.as_dict() for k, v in self.constants.items()},
            "discrete_A": None if self.discrete_A is None else self.discrete_A.as_dict(),
            "vanishing": self.vanishing,
            "finite": self.finite,
            "sequence_check": self.sequence_check,
            "cross_check": self.cross_check,
            "warnings": list(self.warnings),
        }


def _forward_constants(spec: ProblemSpec, tol: float, max_terms: int) -> ConstantsReport:
    spec = spec.with_weight()
    phi = forward_phi(spec)
    d = discretizing_sequence(phi, max_terms=max_terms)
    rg = regime(spec.p, spec.q)
    consts = {}
    warnings = []
    if rg is Regime.QleP:
        consts["A1"] = constant_A1(spec, tol)
        warnings.append("A1: outer essential supremum taken with respect to mu")
    elif rg is Regime.PltQfin:
        consts["A2"] = constant_A2(spec, tol)
    else:
        consts["A3"] = constant_A3(spec, tol)
        consts["A2'"] = constant_A2(spec, tol, plus=True)
    A = discrete_A(spec, d)
    return ConstantsReport(rg, "forward", consts, A, vanishing_condition(spec, d),
                           sequence_check=check_discretizing(phi, d), warnings=warnings)


def constants_B(spec: ProblemSpec, tol: float = 1e-6, max_terms: int = 4096,
                cross_check: bool = True) -> ConstantsReport:
    """Dual constants ``B1``-``B3`` as the forward constants of the reflected problem."""
    if spec.direction != "dual":
        raise DomainError("dual problem expected")
    rep = _forward_constants(reflect(spec), tol, max_terms)
    rep.direction = "dual"
    rep.constants = {"B" + k[1:]: v for k, v in rep.constants.items()}
    rep.warnings = [w.replace("A1", "B1") for w in rep.warnings]
    if cross_check:
        direct = direct_B(spec, tol)
        rep.cross_check = {
            k: {"direct": v.as_dict(), "overlaps": rep.constants[k].overlaps(v)}
            for k, v in direct.items() if k in rep.constants
        }
    return rep


def direct_B(spec: ProblemSpec, tol: float = 1e-6) -> dict:
    """The dual constants evaluated from their own formulas, without reflection."""
    spec = spec.with_weight()
    p, q, I = spec.p, spec.q, spec.interval
    w = spec.weight
    rg = regime(p, q)
    out = {}
    if rg is Regime.QleP:
        F = cumulative_norm(w, p, spec.mu, "right")
        G = cumulative_norm(spec.u, q, spec.nu, "right")
        out["B1"] = ess_sup_ratio(F, G, spec.mu, F.value, G.right_limit)
    elif rg is Regime.PltQfin:
        r = holder_rho(p, q)
        F = cumulative_norm(w, p, spec.mu, "right")
        G = cumulative_norm(spec.u, q, spec.nu, "right")
        try:
            J = ls_integral(F.power(r), G.power(-r), I.whole(), tol=min(tol, tol * r))
            bnd = _boundary_term(F.right_limit(I.a), G.right_limit(I.a))
            out["B2"] = J.power(1.0 / r) + Enclosure.point(bnd, PAD)
        except ConventionViolation:
            out["B2"] = Enclosure(INF, INF)
    else:
        G = cumulative_norm(spec.u, INF, spec.nu, "right")
        out["B3"] = _a3_from(w, G, G.right_limit, spec.mu, p)
    return out


def compute_constants(spec: ProblemSpec, tol: float = 1e-6, max_terms: int = 4096) -> ConstantsReport:
    """Regime, characterizing constant(s), discrete ``A`` and the vanishing verdict."""
    if spec.direction == "dual":
        return constants_B(spec, tol, max_terms)
    return _forward_constants(spec, tol, max_terms)
