"""Exact mean height of the restricted and standard models side by side.

    python3 scripts/model_gap.py --p 1/2 --n 16,64,256,1024
"""
import argparse
import math

from moranwalk import ModelParams, height_mean, standard_height_pmf


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", default="1/2")
    ap.add_argument("--n", default="16,64,256,1024")
    args = ap.parse_args()

    params = ModelParams.parse(args.p)
    lg = math.log(1 / float(params.p))
    print("n,restricted,standard,ratio,restricted_per_log,standard_per_log")
    for n in (int(x) for x in args.n.split(",")):
        r = height_mean(params, n, "float")
        s = standard_height_pmf(params, n, "float").mean()
        ln = math.log(n) / lg
        print(f"{n},{r:.6f},{s:.6f},{r / s:.4f},{r / ln:.4f},{s / ln:.4f}")


if __name__ == "__main__":
    main()
