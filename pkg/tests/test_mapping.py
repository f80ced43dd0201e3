import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform

from bibnet.errors import ValidationError
from bibnet.mapping import (
    Clustering,
    aggregate_clusters,
    cluster_similarity,
    recursive_aggregate,
    threshold_nodes,
)
from bibnet.netcore import SimilarityMatrix


def _sim(v):
    v = np.asarray(v, dtype=float)
    return SimilarityMatrix(tuple(f"n{i}" for i in range(v.shape[0])), v)


def symmetric_unit(max_n=9):
    def build(a):
        s = (a + a.T) / 2
        np.fill_diagonal(s, 1.0)
        return s

    return st.integers(2, max_n).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=st.floats(0, 1, allow_nan=False)).map(build)
    )


def _partition(clustering):
    return {frozenset(m) for m in clustering.members()}


def _components_at(v, cut):
    """Single-linkage oracle: connected components of the graph of pairs with similarity >= cut."""
    n = v.shape[0]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(n), 2):
        if v[i, j] >= cut:
            parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i)
    return {frozenset(g) for g in groups.values()}


def test_threshold_keeps_highly_cited(nrays):
    from bibnet.similarity import cocitation

    c = cocitation(nrays.as_affiliation())
    kept = threshold_nodes(c, 3)
    assert kept.labels == ("1", "8", "9")
    assert threshold_nodes(c, 100).n == 0
    assert threshold_nodes(c, 0).n == 12


def test_two_cliques():
    v = np.zeros((6, 6))
    for block in ([0, 1, 2], [3, 4, 5]):
        v[np.ix_(block, block)] = 1
    v[2, 3] = v[3, 2] = 0.1
    c = cluster_similarity(_sim(v), cut=0.5)
    assert c.clusters() == [("n0", "n1", "n2"), ("n3", "n4", "n5")]
    assert c.assignment == (0, 0, 0, 1, 1, 1)


def test_cut_zero_gives_one_cluster():
    v = np.random.default_rng(0).random((5, 5))
    assert cluster_similarity(_sim((v + v.T) / 2), cut=0.0).n_clusters == 1


def test_cut_above_everything_gives_singletons():
    assert cluster_similarity(_sim(np.eye(4) * 5), cut=0.5).n_clusters == 4


def test_empty_matrix():
    assert cluster_similarity(_sim(np.zeros((0, 0)))).n_clusters == 0


def test_rejects_bad_input():
    with pytest.raises(ValidationError):
        cluster_similarity(_sim([[0, 1], [0.5, 0]]))
    with pytest.raises(ValidationError):
        cluster_similarity(_sim([[0, -1], [-1, 0]]))
    with pytest.raises(ValidationError):
        cluster_similarity(_sim(np.eye(2)), linkage="complete")


@settings(max_examples=80, deadline=None)
@given(symmetric_unit(), st.floats(0, 1))
def test_single_linkage_is_threshold_components(s, cut):
    got = _partition(cluster_similarity(_sim(s), "single", cut))
    assert got == _components_at(s, cut)


@settings(max_examples=80, deadline=None)
@given(symmetric_unit(), st.floats(0.05, 0.95))
def test_average_linkage_matches_scipy(s, cut):
    d = 1.0 - s
    np.fill_diagonal(d, 0)
    z = linkage(squareform(d, checks=False), method="average")
    heights = z[:, 2]
    # equal fusion heights or heights at the cut make the two tie rules diverge
    if len(set(np.round(heights, 9))) < len(heights) or np.any(np.abs(heights - (1 - cut)) < 1e-9):
        return
    labels = fcluster(z, t=1 - cut, criterion="distance")
    expected = {frozenset(np.flatnonzero(labels == k)) for k in set(labels)}
    assert _partition(cluster_similarity(_sim(s), "average", cut)) == expected


@settings(max_examples=50, deadline=None)
@given(symmetric_unit(), st.floats(0, 1), st.floats(0, 1))
def test_higher_cut_refines_partition(s, c1, c2):
    lo, hi = sorted((c1, c2))
    coarse = cluster_similarity(_sim(s), "single", lo)
    fine = cluster_similarity(_sim(s), "single", hi)
    for block in fine.members():
        assert len({coarse.assignment[i] for i in block}) == 1


def test_planted_partition_recovered_and_optimal():
    rng = np.random.default_rng(4)
    n = 8
    truth = [0, 0, 0, 1, 1, 1, 1, 0]
    v = np.where(np.equal.outer(truth, truth), 0.8, 0.1) + rng.uniform(-0.05, 0.05, (n, n))
    v = (v + v.T) / 2
    np.fill_diagonal(v, 1)
    c = cluster_similarity(_sim(v), "average", cut=0.5)
    assert _partition(c) == {frozenset(i for i in range(n) if truth[i] == k) for k in (0, 1)}

    # exhaustive oracle: among all 2-partitions, the planted one has the lowest max cross-similarity
    def max_cross(part):
        return max(v[i, j] for i in range(n) for j in range(n) if part[i] != part[j])

    best = min(
        (bits for bits in itertools.product((0, 1), repeat=n) if bits[0] == 0 and 0 < sum(bits) < n),
        key=max_cross,
    )
    assert _partition(Clustering(_sim(v).labels, best, 0)) == _partition(c)


def test_aggregate_mean_preserves_cross_mass():
    rng = np.random.default_rng(1)
    v = rng.random((7, 7))
    v = (v + v.T) / 2
    clus = Clustering(_sim(v).labels, (0, 1, 0, 2, 1, 2, 2), 0.5)
    net = aggregate_clusters(_sim(v), clus)
    groups = clus.members()
    cross = sum(v[i, j] for i, j in itertools.combinations(range(7), 2) if clus.assignment[i] != clus.assignment[j])
    m = net.matrix.dense()
    assert np.triu(m * net.pair_counts, 1).sum() == pytest.approx(cross)
    assert net.labels == ("n0", "n1", "n3")
    assert net.sizes == [len(g) for g in groups]
    assert not np.diag(m).any()


def test_aggregate_sum_and_max():
    v = np.array([[0, 1, 2], [1, 0, 4], [2, 4, 0]], dtype=float)
    clus = Clustering(_sim(v).labels, (0, 0, 1), 0)
    assert aggregate_clusters(_sim(v), clus, "sum").matrix.get("n0", "n2") == 6
    assert aggregate_clusters(_sim(v), clus, "max").matrix.get("n0", "n2") == 4
    assert aggregate_clusters(_sim(v), clus, "mean").matrix.get("n0", "n2") == 3
    with pytest.raises(ValidationError):
        aggregate_clusters(_sim(v), clus, "median")


def test_two_level_hierarchy():
    # four 2-node blocks, blocks pair up into two super-blocks
    v = np.full((8, 8), 0.05)
    for a in range(0, 8, 2):
        v[a, a + 1] = v[a + 1, a] = 0.9
    for a, b in [(0, 2), (4, 6)]:
        v[np.ix_([a, a + 1], [b, b + 1])] = 0.5
        v[np.ix_([b, b + 1], [a, a + 1])] = 0.5
    np.fill_diagonal(v, 1)
    levels = recursive_aggregate(_sim(v), "average", [0.8, 0.3])
    assert levels[0].sizes == [2, 2, 2, 2]
    assert levels[1].sizes == [4, 4]
    assert set(levels[1].members[0]) == {"n0", "n1", "n2", "n3"}


def test_schedule_must_decrease():
    with pytest.raises(ValidationError):
        recursive_aggregate(_sim(np.eye(3)), cut_schedule=[0.2, 0.5])
    with pytest.raises(ValidationError):
        recursive_aggregate(_sim(np.eye(3)), cut_schedule=[])
