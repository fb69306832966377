"""Command-line interface.

Exit codes: 0 success, 2 parse or validation error, 3 mathematical error,
4 search cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import io
from .construct import DEFAULT_TOL, construct_target_limit
from .engine import (
    f_n,
    formal_magnitude,
    magnitude_profile,
    numeric_magnitude,
    one_point_report,
    small_scale_limit,
    t_grid,
)
from .errors import MagnitudeError
from .genfun import LimitResult, as_rational
from .spaces import (
    HOMOGENEITY_CAP,
    from_graph,
    is_homogeneous,
    join,
    l1_product,
    negative_type_check,
    sample_random_metric,
    scale,
    schoenberg_check,
    uniform_space,
)


@dataclass
class GridSpec:
    t_min: float = 1e-3
    t_max: float = 1e3
    count: int = 61
    log: bool = True

    def points(self) -> list:
        return t_grid(self.t_min, self.t_max, self.count, self.log)


@dataclass
class RunConfig:
    tolerance: float = 1e-9
    construct_tol: Fraction = DEFAULT_TOL
    seed: int = 0
    homogeneity_cap: int = HOMOGENEITY_CAP
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        if self.homogeneity_cap < 1 or self.tolerance <= 0 or self.construct_tol <= 0:
            raise ValueError("caps and tolerances must be positive")
        if self.grid.t_min <= 0 or self.grid.count < 1:
            raise ValueError("grid needs t_min > 0 and count >= 1")


def _emit_json(obj):
    print(json.dumps(obj, ensure_ascii=False))


def cmd_magnitude(args, cfg: RunConfig):
    x = io.load_space(args.space)
    if args.t is not None:
        print(io.format_float(numeric_magnitude(x, args.t)))
        return
    sys.stdout.write(io.profile_csv(magnitude_profile(x, cfg.grid.points())))


def cmd_formal(args, cfg):
    print(formal_magnitude(io.load_space(args.space)))


def cmd_limit(args, cfg):
    print(small_scale_limit(io.load_space(args.space), args.method))


def cmd_onepoint(args, cfg):
    report = one_point_report(io.load_space(args.space), verify=args.verify)
    _emit_json(report.to_dict())


def cmd_construct(args, cfg):
    result = construct_target_limit(as_rational(args.target), cfg.construct_tol)
    _emit_json(io.construction_to_dict(result))


def cmd_join(args, cfg):
    print(io.dumps_space(join(io.load_space(args.a), io.load_space(args.b))))


def cmd_product(args, cfg):
    print(io.dumps_space(l1_product(io.load_space(args.a), io.load_space(args.b))))


def cmd_graph(args, cfg):
    print(io.dumps_space(from_graph(io.load_graph(args.graph))))


def cmd_uniform(args, cfg):
    print(io.dumps_space(uniform_space(args.n, as_rational(args.r))))


def cmd_scale(args, cfg):
    print(io.dumps_space(scale(io.load_space(args.space), as_rational(args.t))))


def cmd_sample(args, cfg):
    print(io.dumps_space(sample_random_metric(args.n, cfg.seed, args.grid_denominator)))


def cmd_check(args, cfg):
    x = io.load_space(args.space)
    samples = negative_type_check(x, args.t)
    _emit_json({
        "negative_type_evidence": all(s.passed for s in samples),
        "samples": [{"t": s.t, "min_eigenvalue": s.min_eigenvalue, "passed": s.passed}
                    for s in samples],
        "schoenberg": schoenberg_check(x),
        "homogeneous": is_homogeneous(x, cfg.homogeneity_cap),
    })


def cmd_generic(args, cfg):
    nonzero, one = 0, 0
    counterexamples = []
    for k in range(args.samples):
        x = sample_random_metric(args.n, cfg.seed + k)
        if f_n(x) != 0:
            nonzero += 1
        else:
            counterexamples.append(x)
        if args.verify and small_scale_limit(x) == LimitResult.finite(1):
            one += 1
    print(f"{nonzero}/{args.samples} nonzero")
    if args.verify:
        print(f"{one}/{args.samples} limit 1")
    for x in counterexamples:
        print(io.dumps_space(x))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finmag", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("magnitude", help="numeric |tX| at one t or over a grid (CSV)")
    s.add_argument("space")
    s.add_argument("--t", type=float)
    s.add_argument("--grid", nargs=3, metavar=("MIN", "MAX", "COUNT"))
    s.add_argument("--linear", action="store_true", help="linear instead of log spacing")
    s.set_defaults(func=cmd_magnitude)

    s = sub.add_parser("formal", help="exact formal magnitude Mag(X)(q)")
    s.add_argument("space")
    s.set_defaults(func=cmd_formal)

    s = sub.add_parser("limit", help="exact small-scale limit")
    s.add_argument("space")
    s.add_argument("--method", choices=("auto", "formal", "series"), default="auto")
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("onepoint", help="one-point property report (JSON)")
    s.add_argument("space")
    s.add_argument("--verify", action="store_true",
                   help="run the exact engine even when F_n != 0")
    s.set_defaults(func=cmd_onepoint)

    s = sub.add_parser("construct", help="space with small-scale limit R (JSON)")
    s.add_argument("target")
    s.add_argument("--tol", default=str(DEFAULT_TOL))
    s.set_defaults(func=cmd_construct)

    for name, func, text in (("join", cmd_join, "join of two spaces of diameter <= 2"),
                             ("product", cmd_product, "l1 product of two spaces")):
        s = sub.add_parser(name, help=text)
        s.add_argument("a")
        s.add_argument("b")
        s.set_defaults(func=func)

    s = sub.add_parser("graph", help="shortest-path metric of a graph file")
    s.add_argument("graph")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("uniform", help="n points at pairwise distance r")
    s.add_argument("n", type=int)
    s.add_argument("r")
    s.set_defaults(func=cmd_uniform)

    s = sub.add_parser("scale", help="multiply all distances by t")
    s.add_argument("space")
    s.add_argument("t")
    s.set_defaults(func=cmd_scale)

    s = sub.add_parser("sample", help="random metric with distances in [1, 2]")
    s.add_argument("n", type=int)
    s.add_argument("--grid-denominator", type=int, default=1000)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("check", help="negative-type evidence, Schoenberg test, homogeneity")
    s.add_argument("space")
    s.add_argument("--t", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("generic", help="count random spaces with F_n != 0")
    s.add_argument("samples", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--verify", action="store_true", help="also compute each exact limit")
    s.set_defaults(func=cmd_generic)

    for s in sub.choices.values():
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--cap", type=int, default=HOMOGENEITY_CAP,
                       help="largest space for the homogeneity search")
    return p


def _config(args) -> RunConfig:
    grid = GridSpec()
    if getattr(args, "grid", None):
        grid = GridSpec(float(args.grid[0]), float(args.grid[1]), int(args.grid[2]),
                        not args.linear)
    tol = as_rational(args.tol) if getattr(args, "tol", None) else DEFAULT_TOL
    return RunConfig(construct_tol=tol, seed=args.seed, homogeneity_cap=args.cap, grid=grid)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        args.func(args, cfg)
    except MagnitudeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
