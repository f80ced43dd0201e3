"""Science maps from similarity matrices: node thresholds, agglomerative clustering, cluster networks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from bibnet.errors import ValidationError
from bibnet.netcore import SimilarityMatrix

LINKAGES = ("single", "average")
AGGREGATES = ("mean", "sum", "max")


def threshold_nodes(C: SimilarityMatrix, min_diagonal: float) -> SimilarityMatrix:
    """Keep nodes whose diagonal (citation count for co-citation input) is at least ``min_diagonal``.

    May return a 0 x 0 matrix.
    """
    keep = [i for i, d in enumerate(C.diagonal()) if d >= min_diagonal]
    return C.submatrix(keep)


@dataclass(frozen=True)
class Clustering:
    """Hard partition: ``assignment[i]`` is the cluster id of ``labels[i]``.

    Cluster ids are 0..k-1, numbered by the smallest member index.
    """

    labels: tuple[str, ...]
    assignment: tuple[int, ...]
    level: float

    @property
    def n_clusters(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_clusters)]
        for i, c in enumerate(self.assignment):
            out[c].append(i)
        return out

    def clusters(self) -> list[tuple[str, ...]]:
        return [tuple(self.labels[i] for i in m) for m in self.members()]


def _checked_similarity(S: SimilarityMatrix) -> np.ndarray:
    v = S.dense().astype(float)
    if not S.is_symmetric(atol=1e-12):
        raise ValidationError("similarity matrix must be symmetric")
    if (v < 0).any():
        raise ValidationError("similarities must be non-negative")
    return v


def cluster_similarity(S: SimilarityMatrix, linkage: str = "single", cut: float = 0.0) -> Clustering:
    """Agglomerative clustering on similarities, most similar pair first.

    Merging stops as soon as the best available linkage similarity drops
    below ``cut``; the diagonal is ignored.  Ties go to the pair whose
    smallest member indices are lexicographically smallest.
    """
    if linkage not in LINKAGES:
        raise ValidationError(f"linkage must be one of {LINKAGES}")
    v = _checked_similarity(S)
    n = S.n
    if n == 0:
        return Clustering((), (), cut)
    link = v.copy()
    np.fill_diagonal(link, -np.inf)
    active = list(range(n))
    groups = {i: [i] for i in range(n)}
    while len(active) > 1:
        sub = link[np.ix_(active, active)]
        best = sub.max()
        if best < cut:
            break
        # active stays sorted by smallest member, so the first argmax is the tie winner
        flat = int(np.argmax(sub))
        a, b = active[flat // len(active)], active[flat % len(active)]
        a, b = min(a, b), max(a, b)
        na, nb = len(groups[a]), len(groups[b])
        if linkage == "single":
            merged = np.maximum(link[a], link[b])
        else:
            merged = (na * link[a] + nb * link[b]) / (na + nb)
        link[a, :] = merged
        link[:, a] = merged
        link[a, a] = -np.inf
        groups[a] = sorted(groups[a] + groups.pop(b))
        active.remove(b)
    assignment = [0] * n
    for cid, rep in enumerate(sorted(active, key=lambda r: groups[r][0])):
        for i in groups[rep]:
            assignment[i] = cid
    return Clustering(S.labels, tuple(assignment), cut)


@dataclass(frozen=True)
class ClusterNetwork:
    """Clusters collapsed to nodes.

    ``labels`` name each cluster after its first member; ``matrix`` holds
    inter-cluster strengths (zero diagonal) and feeds the next aggregation
    level.  ``edges`` lists the positive strengths only.
    """

    labels: tuple[str, ...]
    members: tuple[tuple[str, ...], ...]
    matrix: SimilarityMatrix
    pair_counts: np.ndarray
    aggregate: str = "mean"

    @property
    def sizes(self) -> list[int]:
        return [len(m) for m in self.members]

    @property
    def edges(self) -> list[tuple[str, str, float]]:
        return self.matrix.pairs()


def aggregate_clusters(S: SimilarityMatrix, clustering: Clustering, aggregate: str = "mean") -> ClusterNetwork:
    """Collapse each cluster to a point; link strength aggregates all cross pairs.

    ``mean`` (default) averages the similarities over all member pairs of the
    two clusters, ``sum`` and ``max`` are alternatives.
    """
    if aggregate not in AGGREGATES:
        raise ValidationError(f"aggregate must be one of {AGGREGATES}")
    if tuple(clustering.labels) != tuple(S.labels) or len(clustering.assignment) != S.n:
        raise ValidationError("clustering does not cover the nodes of the similarity matrix")
    v = S.dense().astype(float)
    groups = clustering.members()
    k = len(groups)
    strength = np.zeros((k, k))
    pairs = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        for b in range(a + 1, k):
            block = v[np.ix_(groups[a], groups[b])]
            pairs[a, b] = pairs[b, a] = block.size
            if aggregate == "mean":
                val = block.mean()
            elif aggregate == "sum":
                val = block.sum()
            else:
                val = block.max()
            strength[a, b] = strength[b, a] = val
    labels = tuple(S.labels[g[0]] for g in groups)
    members = tuple(tuple(S.labels[i] for i in g) for g in groups)
    return ClusterNetwork(labels, members, SimilarityMatrix(labels, strength), pairs, aggregate)


def recursive_aggregate(
    S: SimilarityMatrix,
    linkage: str = "single",
    cut_schedule: Sequence[float] = (0.0,),
    aggregate: str = "mean",
) -> list[ClusterNetwork]:
    """Clusters of clusters: one cluster/aggregate round per cut, each on the previous level's network."""
    cuts = list(cut_schedule)
    if not cuts:
        raise ValidationError("cut schedule is empty")
    if any(b >= a for a, b in zip(cuts, cuts[1:])):
        raise ValidationError("cut schedule must be strictly decreasing")
    levels = []
    current = S
    for cut in cuts:
        net = aggregate_clusters(current, cluster_similarity(current, linkage, cut), aggregate)
        if levels:
            # expand members back to the original nodes
            prev = {lab: mem for lab, mem in zip(levels[-1].labels, levels[-1].members)}
            expanded = tuple(tuple(x for m in mem for x in prev[m]) for mem in net.members)
            net = ClusterNetwork(net.labels, expanded, net.matrix, net.pair_counts, aggregate)
        levels.append(net)
        current = net.matrix
    return levels
