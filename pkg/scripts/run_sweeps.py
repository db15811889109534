"""Path-lineage convergence, divergent pair, and the grid product bound."""
import argparse

from graphdiff import experiments as ex


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    cfg = ex.ExperimentConfig(variant="exp", jobs=args.jobs)

    print("n   D(Pa_n, Pa_n+1)  alpha*    t*")
    for r in ex.convergence_sweep("path", "path", (20, 60), cfg):
        print(f"{r['n']:<3d} {r['distance']:.6f}        {r['alpha_star']:.4f}  {r['t_star']:.4f}")

    print("\nn   D(Pa_n, Ba_n+1)")
    for r in ex.convergence_sweep("path", "barbell", (3, 12), cfg):
        print(f"{r['n']:<3d} {r['distance']:.6f}")

    print("\nn   D(Sq_n, Sq_n+1)  bound     min-form")
    for r in ex.product_bound_sweep((4, 20), cfg):
        print(f"{r['n']:<3d} {r['direct']:.6f}        {r['bound']:.6f}  {r['bound_min_form']:.6f}")


if __name__ == "__main__":
    main()
