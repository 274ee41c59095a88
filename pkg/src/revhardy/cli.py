"""Command line front end: ``revhardy {constants,discretize,oracle,verify,reduce} FILE``.

Reports go to stdout as JSON, a short summary to stderr.  Exit codes:
0 success, 1 invalid input, 2 the inequality fails (infinite constant or
violated vanishing condition), 3 a tolerance or truncation budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .characterize import ProblemSpec, compute_constants, forward_phi, reflect
from .discretize import check_discretizing, discretizing_sequence
from .errors import DomainError, ToleranceNotMet, TruncationOverflow
from .numerics import ext_div
from .oracle import best_constant_estimate

EXIT_OK, EXIT_INVALID, EXIT_FAILS, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {"tol": 1e-6, "grid": 512, "samples": 4096, "seed": 0, "max_terms": 4096}


def jsonable(x):
    """Plain JSON types; non-finite floats become the strings ``inf``, ``-inf``, ``nan``."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def _settings(args, doc: dict) -> dict:
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key)
        out[key] = flag if flag is not None else type(default)(doc.get(key, default))
    return out


def _forward_view(spec: ProblemSpec) -> ProblemSpec:
    spec = spec.with_weight()
    return reflect(spec) if spec.direction == "dual" else spec


def cmd_constants(spec, s):
    rep = compute_constants(spec, tol=s["tol"], max_terms=s["max_terms"])
    out = rep.as_dict()
    fails = not rep.finite
    return out, fails


def cmd_discretize(spec, s):
    fwd = _forward_view(spec)
    phi = forward_phi(fwd)
    d = discretizing_sequence(phi, max_terms=s["max_terms"])
    out = {
        "orientation": "reflected" if spec.direction == "dual" else "forward",
        "points": d.points,
        "phi_values": d.phi_values,
        "limit": d.limit,
        "head": None if d.finite_start else {"exponent": d.head_expo, "ratio": d.head_ratio()},
        "check": check_discretizing(phi, d),
    }
    return out, False


def cmd_oracle(spec, s):
    res = best_constant_estimate(spec, grid=s["grid"], samples=s["samples"], seed=s["seed"])
    return {"oracle": res.as_dict()}, math.isinf(res.c_lower)


def _ratio(x: float, y: float) -> float:
    """``x / y`` with ``inf / inf`` reported as nan rather than raising."""
    if math.isinf(x) and math.isinf(y):
        return math.nan
    return ext_div(x, y)


def cmd_verify(spec, s):
    rep = compute_constants(spec, tol=s["tol"], max_terms=s["max_terms"])
    res = best_constant_estimate(spec, grid=s["grid"], samples=s["samples"], seed=s["seed"])
    out = rep.as_dict()
    out["oracle"] = {"c_lower": res.c_lower, "witness": res.witness.to_dict(), "strategy": res.strategy}
    A = rep.discrete_A.value if rep.discrete_A is not None else math.nan
    primary = rep.constants[rep.primary]
    ratios = {
        f"c_lower/{rep.primary}": _ratio(res.c_lower, primary.hi),
        "c_lower/A": _ratio(res.c_lower, A),
        f"{rep.primary}/A": _ratio(primary.hi, A),
    }
    out["ratios"] = ratios
    return out, not rep.finite or math.isinf(res.c_lower)


def cmd_reduce(spec, s):
    return spec.with_weight().to_dict(), False


COMMANDS = {
    "constants": cmd_constants,
    "discretize": cmd_discretize,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
}


def _summary(name: str, out: dict) -> str:
    lines = [f"[{name}]"]
    if "regime" in out:
        lines.append(f"regime {out['regime']} ({out.get('direction')}), vanishing {out.get('vanishing')}")
    for k, v in out.get("constants", {}).items():
        lines.append(f"{k} in [{v['lo']}, {v['hi']}]")
    if out.get("discrete_A"):
        lines.append(f"discrete A = {out['discrete_A']['value']}")
    if "oracle" in out:
        lines.append(f"oracle c_lower = {out['oracle']['c_lower']} ({out['oracle'].get('strategy')})")
    for k, v in out.get("ratios", {}).items():
        lines.append(f"{k} = {v}")
    if "check" in out:
        lines.append(f"{len(out['points'])} points, invariants ok: {out['check']['ok']}")
    for w in out.get("warnings", []):
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revhardy", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file", help="problem file (JSON); '-' reads stdin")
    ap.add_argument("--tol", type=float, default=None, help="relative tolerance for enclosures (1e-6)")
    ap.add_argument("--grid", type=int, default=None, help="oracle grid size (512)")
    ap.add_argument("--samples", type=int, default=None, help="oracle random samples (4096)")
    ap.add_argument("--seed", type=int, default=None, help="oracle seed (0)")
    ap.add_argument("--max-terms", dest="max_terms", type=int, default=None,
                    help="discretizing sequence length limit (4096)")
    ap.add_argument("--json-only", action="store_true", help="no summary on stderr")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            doc = json.load(sys.stdin)
        else:
            with open(args.file) as fh:
                doc = json.load(fh)
        spec = ProblemSpec.from_dict(doc)
        settings = _settings(args, doc)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"invalid problem file: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        out, fails = COMMANDS[args.command](spec, settings)
    except (ToleranceNotMet, TruncationOverflow) as exc:
        print(f"budget exceeded: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        witness = getattr(exc, "witness", None)
        extra = f" (witness {witness})" if witness is not None else ""
        print(f"invalid problem: {type(exc).__name__}: {exc}{extra}", file=sys.stderr)
        return EXIT_INVALID

    out = jsonable(out)
    print(json.dumps(out, indent=2, sort_keys=True))
    if not args.json_only:
        print(_summary(args.command, out), file=sys.stderr)
    return EXIT_FAILS if fails else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
