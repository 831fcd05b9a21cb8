"""Clique number, LP bound and Hoffman bound for every enumerable (space, t)."""

import argparse
import csv
import sys

from dualpolar.bounds import hoffman_bound
from dualpolar.cache import load_graph
from dualpolar.lp import delsarte_lp
from dualpolar.search import EKRInstance, classify_witness, max_ekr
from dualpolar.verify import small_graph_params


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=300)
    ap.add_argument("--budget", type=int, default=10 ** 7)
    ap.add_argument("--cache")
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["family", "q", "d", "t", "n", "clique", "optimal", "lp", "hoffman", "witness_tag"])
    for p in small_graph_params(args.max_n, qs=(2, 3, 4)):
        if p.d < 2:
            continue
        g = load_graph(p, args.cache)
        for t in range(1, p.d):
            inst = EKRInstance.of(g, t)
            res = max_ekr(inst, budget=args.budget)
            tag = classify_witness(inst, res.witness).tag
            w.writerow([p.family.value, p.q, p.d, t, g.n, res.size, res.optimal,
                        delsarte_lp(p, t).value, hoffman_bound(p, t), tag])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
