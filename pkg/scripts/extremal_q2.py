"""Where the minimum and largest-modulus eigenvalues sit at q = 2.

The case analysis for the extremal eigenvalues is only claimed for q >= 3; this
prints the q = 2 positions so deviations are visible as data.
"""

import argparse

from dualpolar.qcore import Family, PolarParams
from dualpolar.spectra import extremal_eigs
from dualpolar.verify import _extremal_case_violations


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=8)
    args = ap.parse_args()
    deviations = total = 0
    for fam in Family:
        if fam.hermitian:
            continue
        for d in range(2, args.d_max + 1):
            p = PolarParams(fam, 2, d)
            for a in range(d):
                (lo, argmin), (hi, argmax) = extremal_eigs(p, a)
                bad = _extremal_case_violations(p, a)
                total += 1
                deviations += bool(bad)
                flag = "  <- " + "; ".join(bad) if bad else ""
                print(f"{p.label():20} a={a}: min {lo} at r={argmin}, max|.| {hi} at r={argmax}{flag}")
    print(f"# {deviations} of {total} (space, a) pairs deviate from the q >= 3 pattern")


if __name__ == "__main__":
    main()
