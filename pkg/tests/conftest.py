"""Shared oracles for the test suite.

Everything here is deliberately naive: quadratic scans, exhaustive
enumeration. The library must agree with these on small inputs.
"""

import itertools
import random

import numpy as np


def brute_omega(n, edges):
    """Exhaustive maximum clique by descending subset size."""
    adj = {i: set() for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for k in range(n, 0, -1):
        for combo in itertools.combinations(range(n), k):
            if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
                return k
    return 0


def random_edges(rng: random.Random, n: int, density: float):
    return [(i, j) for i in range(n) for j in range(i + 1, n)
            if rng.random() < density]


def edges_to_adj(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def brute_rgg_pairs(points: np.ndarray, r: float, norm) -> set:
    """O(n^2) reference adjacency, same float semantics as distance()."""
    from nrgg import distance

    n = len(points)
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            if distance(points[i], points[j], norm) <= r:
                out.add((i, j))
    return out


def brute_rgg_pairs_blocked(points: np.ndarray, r: float, norm) -> set:
    """Same all-pairs scan, vectorised so n ~ 2000 stays cheap."""
    from nrgg.geometry import dist_block

    n = len(points)
    out = set()
    step = 256
    for s in range(0, n, step):
        dm = dist_block(points[s:s + step], points, norm)
        ii, jj = np.nonzero(dm <= r)
        for a, b in zip(ii + s, jj):
            if a < b:
                out.add((int(a), int(b)))
    return out
