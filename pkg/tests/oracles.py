"""Brute-force reference computations used as independent test oracles.

Nothing here calls into bibnet; inputs are plain Python adjacency structures.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np

NRAYS_EDGES = [
    (2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (6, 5), (7, 5), (8, 7),
    (9, 8), (10, 8), (10, 9), (11, 8), (11, 9), (12, 8), (12, 9), (12, 10),
]

NRAYS_MATRIX = np.array([
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0],
])

JOURNALS5 = np.array([
    [79, 65, 15, 6, 24],
    [42, 182, 11, 15, 44],
    [6, 22, 37, 8, 6],
    [20, 26, 13, 30, 11],
    [7, 48, 7, 10, 254],
], dtype=float)


def count_walks_dfs(succ: dict, start, end, k: int) -> int:
    """Number of directed walks of exactly k edges from start to end."""
    if k == 0:
        return int(start == end)
    return sum(count_walks_dfs(succ, nxt, end, k - 1) for nxt in succ.get(start, ()))


def all_paths(succ: dict, start, ends: set) -> list[list]:
    """Every directed path from start that stops at a node in ``ends``."""
    out = []
    stack = [[start]]
    while stack:
        path = stack.pop()
        last = path[-1]
        if last in ends:
            out.append(path)
        for nxt in succ.get(last, ()):
            stack.append(path + [nxt])
    return out


def spc_by_enumeration(nodes, citations) -> dict:
    """SPC counts by listing every source-to-sink path of the reversed citation graph.

    ``citations`` are (citing, cited) pairs.  Returns {(earlier, later): count}.
    """
    flow = {v: [] for v in nodes}
    indeg = {v: 0 for v in nodes}
    for citing, cited in citations:
        flow[cited].append(citing)
        indeg[citing] += 1
    sources = [v for v in nodes if indeg[v] == 0]
    sinks = {v for v in nodes if not flow[v]}
    counts: dict = {}
    for s in sources:
        for path in all_paths(flow, s, sinks):
            for a, b in zip(path, path[1:]):
                counts[(a, b)] = counts.get((a, b), 0) + 1
    return counts


def has_cycle_dfs(nodes, edges) -> bool:
    succ = {v: [] for v in nodes}
    for u, v in edges:
        succ[u].append(v)
    color = {v: 0 for v in nodes}

    def visit(v):
        color[v] = 1
        for w in succ[v]:
            if color[w] == 1 or (color[w] == 0 and visit(w)):
                return True
        color[v] = 2
        return False

    return any(color[v] == 0 and visit(v) for v in nodes)


def floyd_warshall(n: int, edges) -> np.ndarray:
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for u, v in edges:
        d[u, v] = d[v, u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def all_shortest_paths(n: int, edges, s: int, t: int) -> list[list[int]]:
    """Enumerate every shortest s-t path by exhaustive simple-path search."""
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    found = []
    best = [np.inf]

    def walk(path):
        last = path[-1]
        if len(path) - 1 > best[0]:
            return
        if last == t:
            if len(path) - 1 < best[0]:
                best[0] = len(path) - 1
                found.clear()
            found.append(list(path))
            return
        for w in sorted(adj[last]):
            if w not in path:
                path.append(w)
                walk(path)
                path.pop()

    walk([s])
    return found


def betweenness_by_enumeration(n: int, edges) -> list[float]:
    score = [Fraction(0)] * n
    for s, t in itertools.combinations(range(n), 2):
        sp_list = all_shortest_paths(n, edges, s, t)
        if not sp_list:
            continue
        for v in range(n):
            if v in (s, t):
                continue
            through = sum(1 for p in sp_list if v in p)
            score[v] += Fraction(through, len(sp_list))
    return [float(x) for x in score]


def binomial_upper_tail(m: int, p: Fraction, k: int) -> Fraction:
    """Exact P[X >= k] for X ~ Binomial(m, p)."""
    return sum((comb(m, i) * p**i * (1 - p) ** (m - i) for i in range(k, m + 1)), Fraction(0))


def random_connected_graph(rng, n: int, extra_p: float) -> list[tuple[int, int]]:
    """Random spanning tree plus extra edges with probability ``extra_p``."""
    perm = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        a, b = int(perm[i]), int(perm[j])
        edges.add((min(a, b), max(a, b)))
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < extra_p:
            edges.add((a, b))
    return sorted(edges)


def random_dag(rng, n: int, p: float) -> list[tuple[int, int]]:
    """Edges (citing, cited) with citing > cited, i.e. a temporally ordered DAG."""
    return [(i, j) for i in range(n) for j in range(i) if rng.random() < p]
