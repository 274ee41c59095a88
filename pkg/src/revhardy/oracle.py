"""Brute-force lower bounds for the best constant.

The best constant is the supremum over ``g >= 0`` of

    ||g w||_{p,(a,b),mu} / ||u(x) ||g||_{inf,S_x,mu}||_{q,(a,b),nu}

with ``S_x = (x, b)`` (forward) or ``(a, x)`` (dual).  Replacing ``g`` by its
closed tail envelope ``x -> ||g||_{inf,[x,b),mu}`` never lowers the ratio
(the numerator grows mu-a.e., the supremal operator is unchanged), so the
search runs over non-increasing step functions.  Dual problems are reflected.

Three strategies feed one deterministic maximum: proof-driven candidates
built from a discretizing sequence, random monotone step functions, and
coordinate ascent from the best candidate found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characterize import ProblemSpec, forward_phi, reflect
from .discretize import DiscretizingSequence, covering_intervals, discretizing_sequence
from .measure import EndpointedInterval, cell_edges, merge_knots
from .numerics import INF, ext_div
from .sequences import embedding_norm
from .stepfn import StepFunction, norm, pointwise, sup_envelope
from .stieltjes import cumulative_norm

__all__ = [
    "OracleResult",
    "ratio",
    "extremal_candidates",
    "vanishing_probe",
    "best_constant_estimate",
    "GridEvaluator",
]


def ratio(spec: ProblemSpec, g: StepFunction) -> float:
    """The inequality quotient for one test function, exact on the computable class."""
    w = spec.weight
    lhs = norm(pointwise(g, w), spec.p, None, spec.mu)
    direction = "tail" if spec.direction == "forward" else "head"
    h = sup_envelope(g, spec.mu, direction)
    rhs = norm(pointwise(spec.u, h), spec.q, None, spec.nu)
    if lhs == 0.0:
        return 0.0
    return ext_div(lhs, rhs)


@dataclass(frozen=True)
class OracleResult:
    c_lower: float
    witness: StepFunction
    strategy: str
    grid: int
    seed: int
    samples: int
    grid_value: float

    def as_dict(self) -> dict:
        return {
            "c_lower": self.c_lower,
            "witness": self.witness.to_dict(),
            "strategy": self.strategy,
            "grid": self.grid,
            "seed": self.seed,
            "samples": self.samples,
            "grid_value": self.grid_value,
        }


# ---------------------------------------------------------------------------
# proof-driven candidates
# ---------------------------------------------------------------------------

def _head_bound(spec: ProblemSpec, d: DiscretizingSequence) -> float:
    ks = [k for k in np.concatenate((spec.weight.knots, spec.mu.knots, spec.u.knots, spec.nu.knots))
          if k > d.limit]
    return min(ks) if ks else INF


def _blocks(spec: ProblemSpec, pts: np.ndarray, levels) -> StepFunction:
    """Step function equal to ``levels[k]`` on ``(x_k, x_{k+1}]`` and zero left of ``x_0``."""
    I = spec.interval
    levels = [float(v) for v in levels]
    if pts[0] > I.a:
        breaks = [I.a] + list(pts)
        vals = [0.0] + levels
    else:
        breaks = list(pts)
        vals = levels
    return StepFunction(tuple(breaks), tuple(vals))


def vanishing_probe(spec: ProblemSpec, d: DiscretizingSequence) -> StepFunction | None:
    """``chi_(a, x_N]`` when ``x_N > a``: the test that detects a failed vanishing condition."""
    I = spec.interval
    if not d.limit > I.a or not d.limit < I.b:
        return None
    return StepFunction.indicator(I, EndpointedInterval.lopen(I.a, d.limit))


def extremal_candidates(spec: ProblemSpec, d: DiscretizingSequence | None = None,
                        max_single: int = 16) -> list[StepFunction]:
    """Test functions ``sum a_k chi_{J_k}`` from the discrete extremal problem (forward direction).

    The list holds the combination with the extremal coefficients of the
    embedding ``l^q(U) -> l^p(W)``, indicators of the ``max_single`` covering
    intervals with the largest ratios ``W_k/U_k`` and, if applicable, the
    vanishing probe.
    """
    if d is None:
        d = discretizing_sequence(forward_phi(spec))
    if not d.finite_start:
        b = _head_bound(spec, d)
        d = d.extend_head(b)
        # a few analytic head intervals beyond the first grid cell
        d = d.extend_head(d.limit + (float(d.points[0]) - d.limit) * 2.0**-8)
    w = spec.weight
    Js = covering_intervals(d)
    W = np.array([norm(w, spec.p, J, spec.mu) for J in Js])
    U = np.asarray(d.phi_values, dtype=float)
    out = []
    _, a = embedding_norm(W, U, spec.p, spec.q)
    if np.any(a > 0):
        out.append(_blocks(spec, d.points, a))
    order = np.argsort(-(W / U), kind="stable")[:max_single]
    for k in order:
        if W[k] > 0:
            out.append(StepFunction.indicator(spec.interval, Js[k]))
    probe = vanishing_probe(spec, d)
    if probe is not None:
        out.append(probe)
    return out


# ---------------------------------------------------------------------------
# vectorised evaluation on a fixed grid
# ---------------------------------------------------------------------------

def _interleave(cells: np.ndarray, pts: np.ndarray) -> np.ndarray:
    out = np.empty(cells.shape[:-1] + (cells.shape[-1] + pts.shape[-1],))
    out[..., 0::2] = cells
    out[..., 1::2] = pts
    return out


class GridEvaluator:
    """Ratios of many non-increasing test functions on one grid (forward direction).

    A test function is a row of values on the interleaved positions
    ``cell_0, knot_0, cell_1, ..., cell_n``.
    """

    def __init__(self, spec: ProblemSpec, knots: np.ndarray):
        I = spec.interval
        self.spec = spec
        self.knots = knots
        self.edges = cell_edges(I, knots)
        w = spec.weight
        wc, wk = w.on_grid(knots)
        uc, uk = spec.u.on_grid(knots)
        mc, mk = spec.mu.cell_masses(knots)
        nc, nk = spec.nu.cell_masses(knots)
        self.w = _interleave(wc, wk)
        self.u = _interleave(uc, uk)
        self.mu = _interleave(mc, mk)
        self.nu = _interleave(nc, nk)
        self.mu_pos = self.mu > 0

    @property
    def size(self) -> int:
        return len(self.w)

    @staticmethod
    def _norm(vals: np.ndarray, masses: np.ndarray, p: float) -> np.ndarray:
        if math.isinf(p):
            return np.where(vals > 0, vals, 0.0).max(axis=-1, initial=0.0)
        with np.errstate(over="ignore", invalid="ignore"):
            return (vals**p @ masses) ** (1.0 / p)

    def ratios(self, G: np.ndarray, chunk: int = 512) -> np.ndarray:
        G = np.atleast_2d(G)
        if len(G) > chunk:
            return np.concatenate([self.ratios(G[i:i + chunk]) for i in range(0, len(G), chunk)])
        mu_live = self.mu_pos
        nu_live = self.nu > 0
        lhs = self._norm(G[:, mu_live] * self.w[mu_live], self.mu[mu_live], self.spec.p)
        masked = np.where(mu_live, G, 0.0)
        suf = np.maximum.accumulate(masked[:, ::-1], axis=1)[:, ::-1]
        # open tail (x, b): a cell sees itself and everything right of it, a knot only what is right of it
        h = np.empty_like(G)
        h[:, 0::2] = suf[:, 0::2]
        h[:, 1::2] = suf[:, 2::2]
        rhs = self._norm(h[:, nu_live] * self.u[nu_live], self.nu[nu_live], self.spec.q)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(lhs == 0.0, 0.0, np.where(rhs == 0.0, INF, lhs / rhs))

    def monotone(self, G: np.ndarray) -> np.ndarray:
        """Closed tail envelope ``x -> ||g||_{inf,[x,b),mu}`` of each row; never lowers the ratio."""
        masked = np.where(self.mu_pos, np.atleast_2d(G), 0.0)
        return np.maximum.accumulate(masked[:, ::-1], axis=1)[:, ::-1]

    def sample(self, f: StepFunction) -> np.ndarray:
        c, k = f.on_grid(self.knots)
        return _interleave(c, k)

    def to_step(self, row: np.ndarray) -> StepFunction:
        return StepFunction.from_grid(self.spec.interval, self.knots, row[0::2], row[1::2]).simplify()


def _grid_knots(spec: ProblemSpec, d: DiscretizingSequence, grid: int) -> np.ndarray:
    I = spec.interval
    natural = merge_knots(I, spec.weight.knots, spec.u.knots, spec.mu.knots, spec.nu.knots, d.points)
    lo = I.a if math.isfinite(I.a) else (natural.min() - 1.0 if natural.size else -1.0)
    hi = I.b if math.isfinite(I.b) else (natural.max() + 1.0 if natural.size else 1.0)
    n_extra = max(grid - natural.size, 0)
    extra = [np.linspace(lo, hi, n_extra + 2)[1:-1]] if n_extra else []
    if not d.finite_start:
        # geometric points toward the accumulation point of the sequence
        span = float(d.points[0]) - d.limit
        extra.append(d.limit + span * 2.0 ** -np.arange(0, 48, 0.5))
    return merge_knots(I, natural, *extra)


def _log_range(spec: ProblemSpec) -> float:
    """Natural-log dynamic range for random levels: that of ``u`` and ``w`` plus a margin."""
    vals = np.concatenate([np.asarray(f.values + f.point_values) for f in (spec.u, spec.weight)])
    vals = vals[(vals > 0) & np.isfinite(vals)]
    span = float(np.log(vals.max() / vals.min())) if vals.size else 0.0
    return 2.0 * span + 8.0


def _random_monotone(rng: np.random.Generator, n: int, count: int, spread: float,
                     max_steps: int = 8) -> np.ndarray:
    """Non-increasing rows with up to ``max_steps`` log-uniform drops at random positions."""
    steps = rng.integers(1, max_steps + 1, size=count)
    cut = rng.integers(0, n, size=(count, max_steps))
    drop = rng.uniform(0.0, spread, size=(count, max_steps))
    drop[np.arange(max_steps) >= steps[:, None]] = 0.0
    inc = np.zeros((count, n))
    np.add.at(inc, (np.repeat(np.arange(count), max_steps), cut.ravel()), -drop.ravel())
    rows = np.exp(np.cumsum(inc, axis=1))
    # some rows are flat on an initial stretch
    start = np.where(rng.random(count) < 0.3, rng.integers(0, max(n // 4, 1), size=count), 0)
    idx = np.maximum(np.arange(n), start[:, None])
    return np.take_along_axis(rows, idx, axis=1)


def _coordinate_ascent(ev: GridEvaluator, row: np.ndarray, rounds: int, blocks: int = 64):
    n = len(row)
    bounds = np.unique(np.linspace(0, n, min(blocks, n) + 1).astype(int))
    factors = np.array([0.0, 0.5, 0.8, 0.95, 1.05, 1.25, 2.0])
    best = row.copy()
    best_r = float(ev.ratios(best)[0])
    for _ in range(rounds):
        moves = []
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            for f in factors:
                cand = best.copy()
                cand[lo:hi] *= f
                # keep the row non-increasing
                cand[:lo] = np.maximum(cand[:lo], cand[lo])
                cand[hi:] = np.minimum(cand[hi:], cand[hi - 1])
                moves.append(cand)
        M = np.array(moves)
        r = ev.ratios(M)
        k = int(np.argmax(r))
        if not r[k] > best_r * (1 + 1e-12):
            break
        best, best_r = M[k], float(r[k])
    return best, best_r


def best_constant_estimate(spec: ProblemSpec, grid: int = 512, samples: int = 4096,
                           seed: int = 0, rounds: int = 40, chunk: int = 512) -> OracleResult:
    """Lower estimate of the best constant with a witness test function."""
    dual = spec.direction == "dual"
    fwd = reflect(spec).with_weight() if dual else spec.with_weight()
    d = discretizing_sequence(forward_phi(fwd))
    rng = np.random.default_rng(seed)

    ev = GridEvaluator(fwd, _grid_knots(fwd, d, grid))
    rows, tags = [], []
    probe = vanishing_probe(fwd, d)
    for k, g in enumerate(extremal_candidates(fwd, d)):
        rows.append(ev.sample(g))
        tags.append("probe" if g == probe else f"extremal[{k}]")
    # powers of the cumulative weight norm (Hoelder-type extremals)
    G_u = cumulative_norm(fwd.u, fwd.q, fwd.nu, "left")
    gu = G_u.left_limits(_positions(ev))
    for s in (0.5, 1.0, 1.5, 2.0, 3.0):
        with np.errstate(divide="ignore"):
            row = np.where(gu > 0, gu ** -s, 0.0)
        if np.any(row > 0):
            row = np.where(gu > 0, row, row[gu > 0].max())
            rows.append(np.minimum.accumulate(row))
            tags.append(f"power[{s:g}]")
    base = ev.monotone(np.array(rows)) if rows else np.ones((1, ev.size))
    r0 = ev.ratios(base)

    k = int(np.argmax(r0))
    best_row, best_r, best_tag = base[k], float(r0[k]), (tags[k] if tags else "constant")

    # random monotone rows, scored chunk by chunk; ties keep the earliest row
    spread = _log_range(fwd)
    done = 0
    while done < samples and math.isfinite(best_r):
        n = min(chunk, samples - done)
        R = _random_monotone(rng, ev.size, n, spread)
        r = ev.ratios(R)
        k = int(np.argmax(r))
        if r[k] > best_r:
            best_row, best_r, best_tag = R[k], float(r[k]), f"random[{done + k}]"
        done += n

    if math.isfinite(best_r) and rounds > 0:
        row, r = _coordinate_ascent(ev, best_row, rounds)
        if r > best_r:
            best_row, best_r, best_tag = row, r, best_tag + "+ascent"

    witness = ev.to_step(best_row)
    if dual:
        witness = witness.reflect()
    exact = ratio(spec.with_weight(), witness)
    return OracleResult(exact, witness, best_tag, len(ev.knots), seed, samples, best_r)


def _positions(ev: GridEvaluator) -> np.ndarray:
    """A representative point for each interleaved position (cell midpoints and knots)."""
    e = ev.edges
    mids = []
    for l, r in zip(e[:-1], e[1:]):
        if math.isfinite(l) and math.isfinite(r):
            mids.append(0.5 * (l + r))
        elif math.isfinite(l):
            mids.append(l + 1.0)
        elif math.isfinite(r):
            mids.append(r - 1.0)
        else:
            mids.append(0.0)
    return _interleave(np.array(mids), ev.knots)
