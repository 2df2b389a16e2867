"""Batch front door: parse inputs, run one experiment, emit one JSON report.

Every invocation writes a single report object with the tool version, an
echo of the parsed configuration, the results with their exactness and
verdict flags, and wall-clock timings isolated in one sub-object so that
reports can be compared byte for byte modulo timing.  Exit codes: 0
success, 1 failed invariant or assertion, 2 bad input, 3 exhausted
budget.  The environment variable GGTLAB_NODE_BUDGET overrides the
default node budget of the area search.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .boundary import (
    VisualQuasimetric,
    boundary_approx,
    boundary_cloud,
    elementary_check,
)
from .cayley import ball_to_dict, build_ball, distance
from .errors import GgtError, InputError
from .isoperimetry import SearchBudget, area, hyperbolicity_scan
from .presentations import choose_oracle, load_presentation
from .quasimetric import (
    boxcount_dimension,
    chain_metrize,
    doubling_constant_estimate,
    doubling_iterate_check,
    is_metric,
    load_cloud,
    measure_doubling_check,
    quasimetric_constant,
    save_cloud,
)
from .words import parse_word, serialize
from . import _kernels

REPORT_SCHEMA = "ggtlab/report/1"


def _default_nodes() -> int:
    raw = os.environ.get("GGTLAB_NODE_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise InputError(f"GGTLAB_NODE_BUDGET={raw!r} is not an integer") from exc
    return SearchBudget().max_nodes


def _add_presentation_args(sub):
    sub.add_argument("--pres", required=True, help="presentation file (gens:/rel: lines)")
    sub.add_argument(
        "--oracle",
        default="auto",
        choices=["auto", "free", "expsum", "rewrite"],
        help="word-problem strategy (default: auto)",
    )
    sub.add_argument("--moduli", default=None, help="comma-separated generator orders for expsum")
    sub.add_argument("--length-cap", type=int, default=12, help="rewrite oracle word-length cap")
    sub.add_argument("--step-cap", type=int, default=20000, help="rewrite oracle step cap")


def _add_budget_args(sub):
    sub.add_argument("--max-area", type=int, default=SearchBudget().max_area)
    sub.add_argument("--max-factors", type=int, default=SearchBudget().max_factors)
    sub.add_argument("--max-nodes", type=int, default=None, help="defaults to GGTLAB_NODE_BUDGET or 10^7")
    sub.add_argument("--rel-exponent", type=int, default=2, help="relator length exponent in the usage cost")


def _add_common(sub):
    sub.add_argument("--out", default=None, help="report path (default: stdout)")
    sub.add_argument("--seed", type=int, default=0, help="seed for any sampled auxiliary checks")
    sub.add_argument("--threads", type=int, default=1, help="worker cap for parallel scans")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ggtlab",
        description="group word metrics, isoperimetric areas, quasimetric/doubling lab",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("ball", help="Cayley ball with distances and adjacency")
    _add_presentation_args(sub)
    sub.add_argument("--radius", type=int, required=True)
    sub.add_argument("--limit", type=int, default=10**6, help="vertex guard")
    _add_common(sub)

    sub = subs.add_parser("dist", help="word-metric distance between two elements")
    _add_presentation_args(sub)
    sub.add_argument("--from", dest="src", default="", help="source word (default: identity)")
    sub.add_argument("--to", dest="dst", required=True)
    sub.add_argument("--cap", type=int, default=64)
    _add_common(sub)

    sub = subs.add_parser("area", help="minimal area certificate for a trivial word")
    _add_presentation_args(sub)
    sub.add_argument("--word", required=True)
    _add_budget_args(sub)
    _add_common(sub)

    sub = subs.add_parser("scan", help="area/length ratios over short trivial words")
    _add_presentation_args(sub)
    sub.add_argument("--maxlen", type=int, required=True)
    sub.add_argument("--symmetry", action="store_true", help="fold cyclic rotations")
    _add_budget_args(sub)
    _add_common(sub)

    sub = subs.add_parser("qaudit", help="quasimetric constant audit of a cloud")
    sub.add_argument("--cloud", required=True)
    _add_common(sub)

    sub = subs.add_parser("metrize", help="chain metrization of a cloud")
    sub.add_argument("--cloud", required=True)
    sub.add_argument("--epsilon", default="auto", help="chain exponent, or auto")
    sub.add_argument("--emit", default=None, help="write the metrized cloud here")
    _add_common(sub)

    sub = subs.add_parser("doubling", help="covering and measure doubling estimates")
    sub.add_argument("--cloud", required=True)
    sub.add_argument("--radii", default=None, help="comma-separated radii (default: dyadic)")
    sub.add_argument("--iterate", type=int, default=0, help="also check iterated halving to this level")
    _add_common(sub)

    sub = subs.add_parser("dimension", help="box-count dimension fit")
    sub.add_argument("--cloud", required=True)
    sub.add_argument("--octaves", type=int, default=6)
    sub.add_argument("--radii", default=None, help="comma-separated radii (overrides octaves)")
    _add_common(sub)

    sub = subs.add_parser("boundary", help="free-group boundary approximation")
    sub.add_argument("--rank", type=int, required=True)
    sub.add_argument("--depth", type=int, required=True)
    sub.add_argument("--epsilon", type=float, default=math.log(3.0))
    sub.add_argument("--audit", action="store_true", help="verify metric/ultrametric structure")
    sub.add_argument("--emit-cloud", default=None, help="write the boundary cloud here")
    _add_common(sub)

    return parser


def _load_oracle(args):
    p = load_presentation(args.pres)
    moduli = None
    if args.moduli:
        moduli = tuple(int(x) for x in args.moduli.split(","))
    o = choose_oracle(
        p,
        strategy=args.oracle,
        moduli=moduli,
        length_cap=args.length_cap,
        step_cap=args.step_cap,
    )
    return p, o


def _budget(args) -> SearchBudget:
    nodes = args.max_nodes if args.max_nodes is not None else _default_nodes()
    return SearchBudget(max_area=args.max_area, max_factors=args.max_factors, max_nodes=nodes)


def _radii(args):
    if args.radii is None:
        return None
    return [float(x) for x in args.radii.split(",")]


def _cmd_ball(args) -> dict:
    p, o = _load_oracle(args)
    ball = build_ball(p, o, args.radius, max_elements=args.limit)
    return ball_to_dict(ball)


def _cmd_dist(args) -> dict:
    p, o = _load_oracle(args)
    src = parse_word(args.src, p.alphabet)
    dst = parse_word(args.dst, p.alphabet)
    d = distance(p, o, src, dst, cap=args.cap)
    return {"from": args.src, "to": args.dst, "distance": d, "cap": args.cap}


def _cmd_area(args) -> dict:
    p, o = _load_oracle(args)
    w = parse_word(args.word, p.alphabet)
    cert = area(p, o, w, budget=_budget(args), relator_exponent=args.rel_exponent)
    return {
        "word": args.word,
        "value": cert.value,
        "exact": cert.exact,
        "lower_bound": cert.lower_bound,
        "witness": [
            {
                "conjugator": serialize(f.conjugator, p.alphabet),
                "relator": f.relator,
                "power": f.power,
            }
            for f in cert.witness.factors
        ],
        "stats": cert.stats,
    }


def _cmd_scan(args) -> dict:
    p, o = _load_oracle(args)
    report = hyperbolicity_scan(
        p,
        o,
        max_len=args.maxlen,
        budget=_budget(args),
        symmetry=args.symmetry,
        relator_exponent=args.rel_exponent,
        threads=args.threads,
    )
    return report.to_dict(p)


def _cmd_qaudit(args) -> dict:
    cloud = load_cloud(args.cloud)
    constant = quasimetric_constant(cloud)
    return {
        "n": cloud.n,
        "quasimetric_constant": constant,
        "is_metric": is_metric(cloud),
        "weighted": cloud.weights is not None,
    }


def _cmd_metrize(args) -> dict:
    cloud = load_cloud(args.cloud)
    epsilon = None if args.epsilon == "auto" else float(args.epsilon)
    result = chain_metrize(cloud, epsilon)
    out = {
        "n": cloud.n,
        "epsilon": result.epsilon,
        "delta": result.delta,
        "c_prime": result.c_prime,
        "output_is_metric": is_metric(result.cloud),
    }
    if args.emit:
        save_cloud(result.cloud, args.emit)
        out["emitted"] = args.emit
    return out


def _cmd_doubling(args) -> dict:
    cloud = load_cloud(args.cloud)
    radii = _radii(args)
    cover = doubling_constant_estimate(cloud, radii)
    measure = measure_doubling_check(cloud, radii)
    out = {"cover": cover.to_dict(), "measure": measure.to_dict()}
    if args.iterate:
        worst = 0
        for r in cover.radii:
            for x in range(cloud.n):
                worst = max(
                    worst,
                    doubling_iterate_check(cloud, x, r, args.iterate, cover.constant),
                )
        out["iterate"] = {
            "level": args.iterate,
            "worst_count": worst,
            "bound": cover.constant**args.iterate,
            "ok": True,
        }
    return out


def _cmd_dimension(args) -> dict:
    cloud = load_cloud(args.cloud)
    fit = boxcount_dimension(cloud, radii=_radii(args), octaves=args.octaves)
    return fit.to_dict()


def _cmd_boundary(args) -> dict:
    approx = boundary_approx(args.rank, args.depth)
    report = elementary_check(args.rank, depths=tuple(range(1, args.depth + 1)))
    out = {
        "rank": args.rank,
        "depth": args.depth,
        "epsilon": args.epsilon,
        "point_count": len(approx.points),
        "elementary": report.to_dict(),
    }
    if args.audit or args.emit_cloud:
        cloud = boundary_cloud(approx, VisualQuasimetric(args.epsilon))
        if args.audit:
            defect = float(_kernels.ultrametric_defect(cloud.dist))
            out["audit"] = {
                "is_metric": is_metric(cloud),
                "ultrametric_defect": defect,
                "ultrametric": defect <= 0.0,
                "weights_sum": float(np.sum(cloud.weights)),
            }
        if args.emit_cloud:
            save_cloud(cloud, args.emit_cloud)
            out["emitted"] = args.emit_cloud
    return out


_COMMANDS = {
    "ball": _cmd_ball,
    "dist": _cmd_dist,
    "area": _cmd_area,
    "scan": _cmd_scan,
    "qaudit": _cmd_qaudit,
    "metrize": _cmd_metrize,
    "doubling": _cmd_doubling,
    "dimension": _cmd_dimension,
    "boundary": _cmd_boundary,
}


def _config_echo(args) -> dict:
    skip = {"command", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(args) -> dict:
    t0 = time.perf_counter()
    result = _COMMANDS[args.command](args)
    elapsed = time.perf_counter() - t0
    return {
        "schema": REPORT_SCHEMA,
        "tool": {"name": "ggtlab", "version": __version__},
        "command": args.command,
        "config": _config_echo(args),
        "result": result,
        "timings": {"total_s": elapsed},
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except GgtError as exc:
        print(f"ggtlab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"ggtlab {args.command}: missing input file: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ValueError) as exc:
        print(f"ggtlab {args.command}: malformed input: {exc}", file=sys.stderr)
        return 2
    blob = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(blob)
    else:
        sys.stdout.write(blob)
    return 0


if __name__ == "__main__":
    sys.exit(main())
