from functools import lru_cache

import pytest

from dualpolar.geometry import build_graph
from dualpolar.qcore import PolarParams


@lru_cache(maxsize=None)
def graph(family: str, q: int, d: int):
    return build_graph(PolarParams(family, q, d))


@pytest.fixture
def G():
    return graph


def subspaces_gf2(n: int) -> list[frozenset[int]]:
    """Every subspace of GF(2)^n, as a frozenset of bitmask vectors."""
    seen = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for S in frontier:
            for v in range(1, 1 << n):
                if v in S:
                    continue
                T = S | frozenset(x ^ v for x in S)
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return list(seen)


def dim2(S) -> int:
    return len(S).bit_length() - 1
