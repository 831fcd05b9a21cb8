"""Smallest rank d at which the threshold holds for each t, with the stability margin there."""

import argparse

from dualpolar.bounds import b_constants, example_size_exact, stability_verdict, threshold
from dualpolar.qcore import Family, PolarParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--t-max", type=int, default=8)
    ap.add_argument("--d-max", type=int, default=200)
    args = ap.parse_args()
    print(f"{'family':8} {'t':>2} {'d_min':>5} {'stable':>6}  digits(example) - digits(b-total)")
    for fam in Family:
        if fam.hermitian and args.q not in (4, 9, 16, 25):
            continue
        for t in range(2, args.t_max + 1):
            d = next((d for d in range(1, args.d_max + 1) if threshold(PolarParams(fam, args.q, d), t)), None)
            if d is None:
                print(f"{fam.value:8} {t:>2} {'-':>5}")
                continue
            p = PolarParams(fam, args.q, d)
            ex, tot = example_size_exact(p, t), b_constants(p, t).total
            margin = len(str(ex)) - len(str(tot)) if tot else float("inf")
            print(f"{fam.value:8} {t:>2} {d:>5} {str(stability_verdict(p, t)):>6}  {margin}")


if __name__ == "__main__":
    main()
