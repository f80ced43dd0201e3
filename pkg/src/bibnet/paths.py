"""Walks on citation graphs: reader model, path counts, SPC main path.

Edges point from citing to cited article.  Knowledge flows the other way,
so main-path analysis runs on the reversed ("flow") graph: from articles
that cite nothing in the network towards articles nobody cites yet.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass

import numpy as np

from bibnet.errors import CycleError, ValidationError
from bibnet.netcore import SimilarityMatrix, TemporalDigraph, WeightVector

SOURCE = "__source__"
SINK = "__sink__"

_INT64_SAFE = float(2**62)


@dataclass(frozen=True)
class ReaderState:
    vector: WeightVector
    step: int = 0
    normalized: bool = False
    absorbed: bool = False


def start_state(g: TemporalDigraph, start: str) -> ReaderState:
    """Unit mass at ``start`` at step 0."""
    v = np.zeros(g.n)
    v[g.index(start)] = 1.0
    return ReaderState(WeightVector(g.labels, v), 0)


def _step(matrix, g: TemporalDigraph, state: ReaderState) -> ReaderState:
    v = np.asarray(state.vector.values, dtype=float)
    if v.shape != (g.n,):
        raise ValidationError(f"reader vector has {v.shape[0]} components, graph has {g.n} nodes")
    new = matrix @ v
    return ReaderState(WeightVector(g.labels, new), state.step + 1, False, not new.any())


def reader_step(g: TemporalDigraph, state: ReaderState, weighted: bool = False) -> ReaderState:
    """Move the reader from each article to the sources it cites: ``r <- A.T r``.

    Article graphs are walked on their binary pattern unless ``weighted``.
    """
    a = g.adjacency if weighted else g.binary()
    return _step(a.T.tocsr(), g, state)


def forward_navigation_step(g: TemporalDigraph, state: ReaderState, weighted: bool = False) -> ReaderState:
    """Move the reader from each article to the articles citing it: ``r <- A r``."""
    a = g.adjacency if weighted else g.binary()
    return _step(a, g, state)


def random_reader(
    g: TemporalDigraph, start: str, steps: int, forward: bool = False, weighted: bool = False
) -> ReaderState:
    """Iterate the reader ``steps`` times, then scale the vector to sum one.

    A reader that runs out of references is absorbed: the zero vector is
    returned with ``absorbed=True`` instead of dividing by zero.
    """
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    state = start_state(g, start)
    step = forward_navigation_step if forward else reader_step
    for _ in range(steps):
        state = step(g, state, weighted)
    v = state.vector.values
    total = v.sum()
    if total == 0:
        return ReaderState(state.vector, state.step, False, True)
    return ReaderState(WeightVector(g.labels, v / total), state.step, True, False)


def path_count_matrix(g: TemporalDigraph, k: int) -> SimilarityMatrix:
    """``A**k`` on the binary adjacency: entry (i, j) counts directed i->j walks of length k.

    ``k = 0`` gives the identity.  Counts are int64; an ``OverflowError`` is
    raised before any entry could exceed the int64 range.
    """
    if k < 0:
        raise ValidationError("k must be non-negative")
    n = g.n
    base = g.binary().astype(np.int64).tocsr()
    result = np.eye(n, dtype=np.int64)
    for _ in range(k):
        # float shadow bounds the exact product; int64 is trusted only below 2**62
        bound = base.astype(float) @ result.astype(float)
        if n and np.max(bound, initial=0.0) >= _INT64_SAFE:
            raise OverflowError(f"path counts for k={k} exceed the int64 range")
        result = np.asarray(base @ result, dtype=np.int64)
    return SimilarityMatrix(g.labels, result)


@dataclass(frozen=True)
class MainPathResult:
    """SPC edge weights and the greedy main path.

    ``edge_weights`` maps flow edges ``(earlier, later)`` (``later`` cites
    ``earlier``) to traversal counts and also carries the virtual edges
    ``(SOURCE, x)`` and ``(x, SINK)``.  ``path`` lists articles from the
    oldest to the newest, so each consecutive pair is a citation read in
    reverse.
    """

    edge_weights: dict[tuple[str, str], int]
    path: list[str]
    scheme: str = "SPC"

    @property
    def total_paths(self) -> int:
        return sum(w for (u, _), w in self.edge_weights.items() if u == SOURCE)

    def citation_weights(self) -> dict[tuple[str, str], int]:
        """Weights keyed by the original ``(citing, cited)`` direction, virtual edges dropped."""
        return {
            (v, u): w for (u, v), w in self.edge_weights.items() if u != SOURCE and v != SINK
        }


def _flow_topology(g: TemporalDigraph):
    """Flow-graph predecessor/successor lists and a topological order."""
    pred: list[list[int]] = [[] for _ in range(g.n)]
    succ: list[list[int]] = [[] for _ in range(g.n)]
    for citing, cited, _ in g.edges():
        if citing == cited:
            raise CycleError("main path needs an acyclic graph", [g.labels[citing]] * 2)
        succ[cited].append(citing)
        pred[citing].append(cited)
    sorter = graphlib.TopologicalSorter({v: pred[v] for v in range(g.n)})
    try:
        topo = list(sorter.static_order())
    except graphlib.CycleError as exc:
        cycle = [g.labels[i] for i in exc.args[1]]
        raise CycleError("main path needs an acyclic graph", cycle) from None
    return pred, succ, topo


def spc_weights(g: TemporalDigraph) -> MainPathResult:
    """Search Path Count weights for every flow edge.

    The virtual source feeds every article with no in-network references,
    every never-cited article drains into the virtual sink.  An edge's
    weight is (paths from source to its tail) x (paths from its head to
    sink).  Counts are exact Python integers.
    """
    if g.n == 0:
        raise ValidationError("graph is empty")
    pred, succ, topo = _flow_topology(g)
    from_source = [0] * g.n
    for v in topo:
        from_source[v] = sum(from_source[u] for u in pred[v]) if pred[v] else 1
    to_sink = [0] * g.n
    for v in reversed(topo):
        to_sink[v] = sum(to_sink[u] for u in succ[v]) if succ[v] else 1

    lab = g.labels
    weights: dict[tuple[str, str], int] = {}
    for v in range(g.n):
        if not pred[v]:
            weights[(SOURCE, lab[v])] = to_sink[v]
    for v in range(g.n):
        for u in succ[v]:
            weights[(lab[v], lab[u])] = from_source[v] * to_sink[u]
    for v in range(g.n):
        if not succ[v]:
            weights[(lab[v], SINK)] = from_source[v]
    return MainPathResult(weights, [], "SPC")


def greedy_path(g: TemporalDigraph, edge_weights: dict) -> list[str]:
    """Walk from the virtual source along the heaviest flow edge until a sink.

    Ties go to the smallest node index.  Any positive rescaling of
    ``edge_weights`` gives the same path.
    """
    lab = g.labels
    succ: list[list[int]] = [[] for _ in range(g.n)]
    for citing, cited, _ in g.edges():
        succ[cited].append(citing)
    starts = [v for v in range(g.n) if (SOURCE, lab[v]) in edge_weights]
    current = min(starts, key=lambda v: (-edge_weights[(SOURCE, lab[v])], v))
    path = [lab[current]]
    while succ[current]:
        here = lab[current]
        current = min(succ[current], key=lambda u: (-edge_weights[(here, lab[u])], u))
        path.append(lab[current])
    return path


def main_path(g: TemporalDigraph, scheme: str = "SPC") -> MainPathResult:
    """SPC weights plus the greedy forward main path (see :func:`greedy_path`)."""
    if scheme.upper() != "SPC":
        raise ValidationError(f"unsupported weighting scheme {scheme!r}")
    spc = spc_weights(g)
    return MainPathResult(spc.edge_weights, greedy_path(g, spc.edge_weights), "SPC")
