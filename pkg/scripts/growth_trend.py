"""Doubling increments of the exact mean height against both predicted slopes.

    python3 scripts/growth_trend.py --p 1/2 --kmin 6 --kmax 13
"""
import argparse

from moranwalk import ModelParams, TailVariant, height_mean
from moranwalk.asymptotics import growth_rate_per_doubling


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", default="1/2")
    ap.add_argument("--kmin", type=int, default=6)
    ap.add_argument("--kmax", type=int, default=13)
    args = ap.parse_args()

    params = ModelParams.parse(args.p)
    paper = growth_rate_per_doubling(params, TailVariant.PAPER)
    corrected = growth_rate_per_doubling(params, TailVariant.CORRECTED)
    print(f"# p={params.p}  slope per doubling: paper {paper:.5f}, corrected {corrected:.5f}")
    print("k,n,mean,increment,minus_paper,minus_corrected")
    prev = None
    for k in range(args.kmin, args.kmax + 1):
        m = height_mean(params, 2**k, "float")
        if prev is None:
            print(f"{k},{2**k},{m:.8f},,,")
        else:
            inc = m - prev
            print(f"{k},{2**k},{m:.8f},{inc:.6f},{inc - paper:+.6f},{inc - corrected:+.6f}")
        prev = m


if __name__ == "__main__":
    main()
