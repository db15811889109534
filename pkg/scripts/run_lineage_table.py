"""Mean distances between consecutive members of four graph lineages."""
import argparse

from graphdiff import experiments as ex


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--index-range", default="1:12")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--squared", action="store_true")
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.index_range.split(":"))
    cfg = ex.ExperimentConfig(variant="exp", index_range=(lo, hi), jobs=args.jobs)
    table = ex.lineage_table(cfg)
    cells = table["squared_cells"] if args.squared else table["cells"]
    fams = table["families"]
    print(" " * 9 + "".join(f"{f:>12s}" for f in fams))
    for fa in fams:
        print(f"{fa:9s}" + "".join(f"{cells[fa, fb]:12.6g}" for fb in fams))
    print("diagonal smallest:", ex.diagonal_dominance(table["cells"], fams))


if __name__ == "__main__":
    main()
