"""Command line entry point: ``graphdiff <subcommand> ...``.

Exit codes: 0 success, 2 unreadable input or bad arguments, 3 a flag
combination the chosen variant cannot run with.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import experiments as ex
from .graphs import EdgeListError, read_edge_list

EXIT_PARSE = 2
EXIT_INVALID = 3


class InvalidCombination(Exception):
    pass


def _window(text: str) -> tuple:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LOW:HIGH, got {text!r}") from None
    if not 0 < lo < hi:
        raise argparse.ArgumentTypeError(f"need 0 < LOW < HIGH, got {text!r}")
    return lo, hi


def _range(text: str) -> tuple:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _shared(p: argparse.ArgumentParser, variant_default="linear"):
    p.add_argument("--variant", choices=["linear", "linear-fixed", "tsgdd", "exp", "exp-fixed", "hammond"],
                   default=variant_default)
    p.add_argument("--alpha", type=float, default=None, help="fixed time-scaling factor")
    p.add_argument("--r", type=float, default=None, help="TSGDD exponent")
    p.add_argument("--dt", type=float, default=0.01, help="t step for the exponential search")
    p.add_argument("--alpha-window", type=_window, default=(1e-6, 10.0), metavar="LOW:HIGH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.add_argument("--squared", action="store_true", help="report squared distances")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphdiff", description="Spectral diffusion distances between graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="distance between two edge-list files")
    d.add_argument("graph1")
    d.add_argument("graph2")
    _shared(d)

    t = sub.add_parser("triplets", help="triangle-inequality census on random triplets")
    _shared(t)
    t.add_argument("--count", type=int, default=200)
    t.add_argument("--p-list", type=_floats, default=(0.25, 0.5, 0.75))
    t.add_argument("--orderings", default="123", help="comma-separated subset of 123,213,321")

    lt = sub.add_parser("lineage-table", help="mean distances between lineage members")
    _shared(lt, "exp")
    lt.add_argument("--index-range", type=_range, default=(1, 12), metavar="A:B")
    lt.add_argument("--families", default="grid,path,cycle,barbell")

    c = sub.add_parser("converge", help="distance between consecutive lineage members")
    _shared(c, "exp")
    c.add_argument("--families", default="path,path", help="FAMILY_A,FAMILY_B")
    c.add_argument("--n-range", type=_range, default=(20, 60), metavar="A:B")

    pb = sub.add_parser("product-bound", help="grid distances against the box-product bound")
    _shared(pb, "exp")
    pb.add_argument("--n-range", type=_range, default=(4, 20), metavar="A:B")

    b = sub.add_parser("baseline", help="frontier search against golden section in alpha")
    _shared(b)
    b.add_argument("--count", type=int, default=60)
    b.add_argument("--p-list", type=_floats, default=(0.25, 0.5, 0.75))
    return parser


def _config(args, **extra) -> ex.ExperimentConfig:
    kw = dict(seed=args.seed, variant=args.variant, dt=args.dt, alpha_window=args.alpha_window,
              out=args.out, jobs=args.jobs, squared=args.squared)
    if args.alpha is not None:
        kw["alpha"] = args.alpha
    if args.r is not None:
        kw["r"] = args.r
    kw.update(extra)
    try:
        return ex.ExperimentConfig(**kw)
    except ValueError as exc:
        raise InvalidCombination(str(exc)) from None


def _check_variant(args):
    if args.variant == "linear-fixed" and args.alpha is None:
        raise InvalidCombination("--variant linear-fixed needs --alpha")
    if args.variant == "tsgdd" and args.r is None:
        raise InvalidCombination("--variant tsgdd needs --r")
    if args.alpha is not None and args.variant not in ("linear-fixed", "exp-fixed"):
        raise InvalidCombination(f"--alpha does not apply to --variant {args.variant}")
    if args.alpha is not None and args.alpha <= 0:
        raise InvalidCombination("--alpha must be positive")


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_dist(args) -> int:
    _check_variant(args)
    try:
        g1, g2 = read_edge_list(args.graph1), read_edge_list(args.graph2)
    except (OSError, EdgeListError) as exc:
        print(f"graphdiff: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.variant == "hammond" and g1.n != g2.n:
        raise InvalidCombination(f"hammond needs equal sizes, got {g1.n} and {g2.n}")
    if g1.n == 0 or g2.n == 0:
        raise InvalidCombination("graphs must have at least one vertex")
    cfg = _config(args)
    r = ex.distance(args.variant, g1, g2, cfg)
    payload = r.to_dict(squared=args.squared)
    out = {k: payload[k] for k in ("value", "t_star", "alpha_star", "matching", "variant", "work")}
    _emit(json.dumps(out) + "\n", args.out)
    return 0


def cmd_triplets(args) -> int:
    _check_variant(args)
    if args.variant == "hammond":
        raise InvalidCombination("hammond needs equal sizes; triplets have unequal sizes")
    orderings = tuple(o.strip() for o in args.orderings.split(",") if o.strip())
    if not orderings or any(o not in ex.ORDERINGS for o in orderings):
        raise InvalidCombination(f"--orderings must be drawn from {','.join(ex.ORDERINGS)}")
    cfg = _config(args, count=args.count, p_list=args.p_list)
    rows = ex.triplet_discrepancy_experiment(cfg, orderings)
    meta = ex.config_meta(cfg)
    meta.update({f"summary_{k}": v for k, v in ex.discrepancy_summary(rows).items()})
    _emit(ex.format_csv(rows, meta=meta), args.out)
    return 0


def cmd_lineage_table(args) -> int:
    fams = tuple(f.strip() for f in args.families.split(","))
    try:
        cfg = _config(args, index_range=args.index_range, families=fams)
        table = ex.lineage_table(cfg)
    except ValueError as exc:
        raise InvalidCombination(str(exc)) from None
    cells = table["squared_cells"] if args.squared else table["cells"]
    rows = [{"row": fa, **{fb: cells[fa, fb] for fb in table["families"]}} for fa in table["families"]]
    _emit(ex.format_csv(rows, meta=ex.config_meta(cfg)), args.out)
    return 0


def cmd_converge(args) -> int:
    try:
        fa, fb = (f.strip() for f in args.families.split(","))
        cfg = _config(args, n_range=args.n_range)
        rows = ex.convergence_sweep(fa, fb, args.n_range, cfg)
    except ValueError as exc:
        raise InvalidCombination(str(exc)) from None
    _emit(ex.format_csv(rows, meta=ex.config_meta(cfg)), args.out)
    return 0


def cmd_product_bound(args) -> int:
    cfg = _config(args)
    rows = ex.product_bound_sweep(args.n_range, cfg)
    _emit(ex.format_csv(rows, meta=ex.config_meta(cfg)), args.out)
    return 0


def cmd_baseline(args) -> int:
    if args.variant != "linear":
        raise InvalidCombination("the baseline comparison runs on the linear variant only")
    cfg = _config(args, count=args.count, p_list=args.p_list)
    rows = ex.baseline_pairs(cfg)
    _emit(ex.format_csv(rows, meta=ex.config_meta(cfg)), args.out)
    return 0


COMMANDS = {
    "dist": cmd_dist,
    "triplets": cmd_triplets,
    "lineage-table": cmd_lineage_table,
    "converge": cmd_converge,
    "product-bound": cmd_product_bound,
    "baseline": cmd_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    try:
        return COMMANDS[args.command](args)
    except InvalidCombination as exc:
        print(f"graphdiff: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
