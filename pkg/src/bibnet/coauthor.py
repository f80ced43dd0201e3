"""Co-authorship projection and structural metrics: components, distances, degree, betweenness.

Distances count hops; edge weights (joint papers) never enter them.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from bibnet.errors import DisconnectedGraphError, ValidationError
from bibnet.netcore import AffiliationMatrix, TemporalDigraph, WeightVector, _label_index, row_projection

_BFS_BATCH = 256


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    """Simple undirected graph; ``adjacency`` is symmetric with zero diagonal."""

    labels: tuple[str, ...]
    adjacency: sp.csr_matrix
    paper_counts: WeightVector | None = None
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "_index", _label_index(self.labels))
        a = sp.csr_matrix(self.adjacency, dtype=float)
        n = len(self.labels)
        if a.shape != (n, n):
            raise ValidationError(f"adjacency shape {a.shape} does not match {n} labels")
        a.eliminate_zeros()
        if a.nnz:
            if a.diagonal().any():
                raise ValidationError("co-authorship graphs have no self-edges")
            if abs(a - a.T).max() != 0:
                raise ValidationError("adjacency must be symmetric")
            if (a.data < 1).any():
                raise ValidationError("edge weights must be at least 1")
        a.sort_indices()
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown node {label!r}") from None

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges ``(i, j, weight)`` with ``i < j``, sorted."""
        upper = sp.triu(self.adjacency, k=1).tocoo()
        return sorted((int(i), int(j), float(w)) for i, j, w in zip(upper.row, upper.col, upper.data))

    @property
    def edge_count(self) -> int:
        return int(sp.triu(self.adjacency, k=1).nnz)

    def subgraph(self, members: Iterable[str]) -> "UndirectedGraph":
        idx = sorted(self.index(m) for m in members)
        return UndirectedGraph(tuple(self.labels[i] for i in idx), self.adjacency[idx][:, idx])


def graph_from_edges(edges: Iterable[Sequence], nodes: Sequence[str] = ()) -> UndirectedGraph:
    """Build from ``(u, v[, weight])`` pairs; repeated pairs add their weights."""
    index = {lab: i for i, lab in enumerate(nodes)}
    acc: Counter = Counter()
    for rec in edges:
        u, v = str(rec[0]), str(rec[1])
        if u == v:
            raise ValidationError(f"self-edge on {u!r}")
        w = float(rec[2]) if len(rec) > 2 else 1.0
        i, j = index.setdefault(u, len(index)), index.setdefault(v, len(index))
        acc[(min(i, j), max(i, j))] += w
    n = len(index)
    keys = list(acc)
    rows = [i for i, _ in keys] + [j for _, j in keys]
    cols = [j for _, j in keys] + [i for i, _ in keys]
    vals = [acc[k] for k in keys] * 2
    return UndirectedGraph(tuple(index), sp.csr_matrix((vals, (rows, cols)), shape=(n, n)))


def undirected(g: TemporalDigraph) -> UndirectedGraph:
    """Forget edge direction and weights of a citation graph (self-loops dropped)."""
    a = g.binary()
    a = a.tolil()
    a.setdiag(0)
    a = a.tocsr()
    sym = ((a + a.T) > 0).astype(float)
    return UndirectedGraph(g.labels, sym)


def coauthor_graph(aff: AffiliationMatrix) -> UndirectedGraph:
    """Authors x papers -> co-authorship graph weighted by joint papers.

    The projection's diagonal is kept aside as ``paper_counts``.
    """
    if not aff.is_binary:
        raise ValidationError("co-authorship needs a binary authors x papers matrix")
    b = row_projection(aff, dense_cutoff=0).values.tolil()
    counts = b.diagonal().copy()
    b.setdiag(0)
    return UndirectedGraph(aff.row_labels, b.tocsr(), WeightVector(aff.row_labels, counts))


@dataclass(frozen=True)
class ComponentReport:
    components: tuple[tuple[str, ...], ...]
    n_nodes: int

    @property
    def shares(self) -> list[float]:
        return [len(c) / self.n_nodes for c in self.components]

    @property
    def main(self) -> tuple[str, ...]:
        return self.components[0] if self.components else ()

    @property
    def main_share(self) -> float:
        return len(self.main) / self.n_nodes if self.n_nodes else 0.0

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


def connected_components(g: UndirectedGraph) -> ComponentReport:
    """Components sorted by size (descending), then by smallest member index."""
    if g.n == 0:
        return ComponentReport((), 0)
    _, comp = _cc(g.adjacency, directed=False)
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(comp):
        groups.setdefault(int(c), []).append(i)
    ordered = sorted(groups.values(), key=lambda m: (-len(m), m[0]))
    return ComponentReport(tuple(tuple(g.labels[i] for i in m) for m in ordered), g.n)


def _restrict(g: UndirectedGraph, component) -> UndirectedGraph:
    return g if component is None else g.subgraph(component)


def _distance_blocks(g: UndirectedGraph) -> Iterator[np.ndarray]:
    """Hop distances, ``batch x n`` blocks of all-sources BFS; -1 = unreachable.

    Sources advance level by level together, one sparse product per level.
    """
    n = g.n
    adj = (g.adjacency > 0).astype(np.float32).tocsr()
    for start in range(0, n, _BFS_BATCH):
        src = np.arange(start, min(start + _BFS_BATCH, n))
        b = len(src)
        dist = np.full((n, b), -1, dtype=np.int64)
        frontier = np.zeros((n, b), dtype=bool)
        frontier[src, np.arange(b)] = True
        dist[frontier] = 0
        visited = frontier.copy()
        level = 0
        while frontier.any():
            level += 1
            reached = (adj @ frontier.astype(np.float32)) > 0
            frontier = reached & ~visited
            dist[frontier] = level
            visited |= frontier
        yield dist.T


def _require_connected(g: UndirectedGraph):
    if g.n and connected_components(g).sizes[0] != g.n:
        raise DisconnectedGraphError("graph is not connected; distances are infinite")


def diameter(g: UndirectedGraph, component: Iterable[str] | None = None) -> int:
    """Largest shortest-path hop count over all node pairs."""
    g = _restrict(g, component)
    if g.n == 0:
        raise ValidationError("graph is empty")
    _require_connected(g)
    return int(max(block.max() for block in _distance_blocks(g)))


def average_path_length(g: UndirectedGraph, component: Iterable[str] | None = None) -> float:
    """Mean shortest-path hop count over unordered pairs of distinct nodes."""
    g = _restrict(g, component)
    if g.n < 2:
        raise ValidationError("average path length needs at least two nodes")
    _require_connected(g)
    total = sum(int(block.sum()) for block in _distance_blocks(g))
    return total / (g.n * (g.n - 1))


@dataclass(frozen=True)
class DegreeReport:
    histogram: dict[int, int]
    max_degree: int
    mean_degree: float


def degrees(g: UndirectedGraph) -> np.ndarray:
    return np.diff(g.adjacency.indptr)


def degree_distribution(g: UndirectedGraph) -> DegreeReport:
    """Number of nodes per (unweighted) degree, plus max and mean degree."""
    deg = degrees(g)
    hist = dict(sorted(Counter(int(d) for d in deg).items()))
    if g.n == 0:
        return DegreeReport({}, 0, 0.0)
    return DegreeReport(hist, int(deg.max()), float(deg.mean()))


def betweenness(g: UndirectedGraph, normalized: bool = False) -> WeightVector:
    """Shortest-path betweenness by Brandes' single-source accumulation.

    Each unordered pair {s, t} contributes once.  With ``normalized`` the
    scores are divided by (n-1)(n-2)/2, the number of pairs excluding the node.
    """
    n = g.n
    nbrs = [g.neighbors(i).tolist() for i in range(n)]
    score = np.zeros(n)
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in nbrs[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    score /= 2.0
    if normalized and n > 2:
        score /= (n - 1) * (n - 2) / 2.0
    return WeightVector(g.labels, score)
