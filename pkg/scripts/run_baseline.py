"""Work of the frontier search against golden section in alpha on seeded random pairs."""
import argparse
import statistics

from graphdiff import experiments as ex


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    cfg = ex.ExperimentConfig(count=args.count, seed=args.seed, jobs=args.jobs)
    rows = ex.baseline_pairs(cfg)
    for r in rows:
        print(f"n1={r['n1']:<4d} n2={r['n2']:<4d} p={r['p']:.2f} speedup={r['speedup']:8.2f}")
    s = [r["speedup"] for r in rows]
    print(f"median {statistics.median(s):.2f}  min {min(s):.2f}  max {max(s):.2f}")
    if args.out:
        ex.write_csv(rows, args.out, meta=ex.config_meta(cfg))


if __name__ == "__main__":
    main()
