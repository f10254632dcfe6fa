"""Errors of the first and refined root estimates as H grows, for several p.

    python3 scripts/bootstrap_table.py --p 1/4,1/2,3/4 --H 1:40
"""
import argparse

from moranwalk import ModelParams, RegimeError, bootstrap


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", default="1/4,1/2,3/4")
    ap.add_argument("--H", default="1:40", help="a:b range")
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.H.split(":"))

    print("p,H,removable,numeric_root,first_error,refined_error,ratio")
    for text in args.p.split(","):
        params = ModelParams.parse(text)
        for H in range(lo, hi + 1):
            try:
                b = bootstrap(params, H)
            except RegimeError as exc:
                print(f"{params.p},{H},,,,,# {exc}")
                continue
            ratio = b.refined_error / b.first_error if b.first_error else float("nan")
            print(f"{params.p},{H},{int(b.removable)},{b.numeric_root:.15g},"
                  f"{b.first_error:.3e},{b.refined_error:.3e},{ratio:.3e}")


if __name__ == "__main__":
    main()
