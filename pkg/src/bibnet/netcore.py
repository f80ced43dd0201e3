"""Core graph and matrix types plus the two bipartite projections.

Conventions used throughout the package:

* A directed citation edge ``(i, j)`` means *i cites j*; the adjacency
  entry ``a[i, j]`` holds its weight.
* Affiliation matrices are rows x columns (articles x sources,
  authors x papers, documents x terms).
* Every object is treated as immutable once built.  Sparse arrays are
  exposed for speed, callers must not write into them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from bibnet.errors import MissingOrderError, ValidationError

#: projections whose smaller dimension is at most this are returned dense
DENSE_CUTOFF = 4096


@dataclass(frozen=True)
class NodeLabel:
    label: str
    index: int


def _label_index(labels: Sequence[str]) -> dict[str, int]:
    index = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise ValidationError(f"duplicate label {lab!r}")
        index[lab] = i
    return index


@dataclass(frozen=True, eq=False)
class TemporalDigraph:
    """Directed citation graph with optional publication ranks.

    ``adjacency`` is an n x n CSR matrix, entry (i, j) = weight of "i cites j".
    ``order`` holds one rank per node (larger = later) or is ``None``.
    """

    labels: tuple[str, ...]
    adjacency: sp.csr_matrix
    order: tuple[float, ...] | None = None
    allow_self_loops: bool = False
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", _label_index(self.labels))
        n = len(self.labels)
        if self.adjacency.shape != (n, n):
            raise ValidationError(f"adjacency shape {self.adjacency.shape} does not match {n} labels")
        if self.order is not None and len(self.order) != n:
            raise ValidationError("order must assign one rank per node")
        if not self.allow_self_loops and n and self.adjacency.diagonal().any():
            raise ValidationError("self-loop edges require allow_self_loops=True")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def nodes(self) -> list[NodeLabel]:
        return [NodeLabel(lab, i) for i, lab in enumerate(self.labels)]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown node {label!r}") from None

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges as ``(citing, cited, weight)`` sorted by index pair."""
        coo = self.adjacency.tocoo()
        out = [(int(i), int(j), float(w)) for i, j, w in zip(coo.row, coo.col, coo.data) if w != 0]
        out.sort()
        return out

    @property
    def edge_count(self) -> int:
        return len(self.edges())

    def dense(self) -> np.ndarray:
        return self.adjacency.toarray()

    def binary(self) -> sp.csr_matrix:
        b = self.adjacency.copy()
        b.data = (b.data != 0).astype(float)
        b.eliminate_zeros()
        return b

    def as_affiliation(self) -> "AffiliationMatrix":
        """Articles x cited sources view of the same adjacency (within-network references)."""
        return AffiliationMatrix(self.labels, self.labels, self.adjacency.copy())


def build_digraph(
    edges: Iterable[Sequence],
    order: Mapping[str, float] | Sequence[str] | None = None,
    nodes: Sequence[str] | None = None,
    allow_self_loops: bool = False,
) -> TemporalDigraph:
    """Build a citation graph from ``(citing, cited[, weight])`` records.

    ``order`` is either a mapping label -> rank or a sequence of labels in
    publication order (position = rank).  When ``nodes`` (or a sequence
    ``order``) is given it fixes the node list and its index order, and
    edges naming any other node are rejected.  Otherwise nodes are indexed
    in order of first appearance, or by rank when a mapping is supplied.

    Repeated unweighted records of one pair sum (each counts 1).  Repeated
    records carrying explicit weights must agree and are kept once; mixing
    explicit and implicit records for one pair is rejected as a conflict.
    """
    if isinstance(order, Mapping):
        rank_of = {str(k): float(v) for k, v in order.items()}
    elif order is not None:
        order = [str(o) for o in order]
        rank_of = {lab: float(i) for i, lab in enumerate(order)}
        if len(rank_of) != len(order):
            raise ValidationError("order lists a label twice")
        if nodes is None:
            nodes = order
    else:
        rank_of = None

    declared = None if nodes is None else [str(v) for v in nodes]
    seen: dict[str, None] = dict.fromkeys(declared or [])
    implicit: dict[tuple[str, str], int] = {}
    explicit: dict[tuple[str, str], float] = {}
    for rec in edges:
        if len(rec) not in (2, 3):
            raise ValidationError(f"edge record must have 2 or 3 fields, got {rec!r}")
        u, v = str(rec[0]), str(rec[1])
        if not u or not v:
            raise ValidationError("node labels must be non-empty")
        for lab in (u, v):
            if declared is not None and lab not in seen:
                raise ValidationError(f"edge references undeclared node {lab!r}")
            seen.setdefault(lab, None)
        if u == v and not allow_self_loops:
            raise ValidationError(f"self-loop on {u!r} (pass allow_self_loops=True for journal matrices)")
        key = (u, v)
        if len(rec) == 3:
            w = float(rec[2])
            if not np.isfinite(w) or w < 0:
                raise ValidationError(f"edge {u!r}->{v!r} has invalid weight {rec[2]!r}")
            if key in implicit or (key in explicit and explicit[key] != w):
                raise ValidationError(f"conflicting weights for edge {u!r}->{v!r}")
            explicit[key] = w
        else:
            if key in explicit:
                raise ValidationError(f"conflicting weights for edge {u!r}->{v!r}")
            implicit[key] = implicit.get(key, 0) + 1

    labels = list(seen)
    if declared is None and rank_of is not None:
        missing = [lab for lab in labels if lab not in rank_of]
        if missing:
            raise ValidationError(f"order has no rank for {missing}")
        first = {lab: i for i, lab in enumerate(labels)}
        labels.sort(key=lambda lab: (rank_of[lab], first[lab]))
    idx = {lab: i for i, lab in enumerate(labels)}

    weights = {**{k: float(c) for k, c in implicit.items()}, **explicit}
    rows = [idx[u] for u, _ in weights]
    cols = [idx[v] for _, v in weights]
    n = len(labels)
    adj = sp.csr_matrix((list(weights.values()), (rows, cols)), shape=(n, n), dtype=float)
    adj.sort_indices()

    ranks = None
    if rank_of is not None:
        missing = [lab for lab in labels if lab not in rank_of]
        if missing:
            raise ValidationError(f"order has no rank for {missing}")
        ranks = tuple(rank_of[lab] for lab in labels)
    return TemporalDigraph(tuple(labels), adj, ranks, allow_self_loops)


def check_temporal_acyclicity(g: TemporalDigraph) -> list[tuple[str, str]]:
    """Edges ``(citing, cited)`` whose cited node is not strictly older than the citing one.

    An empty result means the adjacency is strictly lower triangular once
    nodes are sorted by rank, hence the graph is acyclic.
    """
    if g.order is None:
        raise MissingOrderError("graph carries no publication order")
    return [
        (g.labels[i], g.labels[j])
        for i, j, _ in g.edges()
        if not g.order[i] > g.order[j]
    ]


@dataclass(frozen=True, eq=False)
class AffiliationMatrix:
    """Weighted bipartite network stored as a rows x columns sparse matrix."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    entries: sp.csr_matrix

    def __post_init__(self):
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        _label_index(self.row_labels)
        _label_index(self.col_labels)
        m = sp.csr_matrix(self.entries, dtype=float)
        if m.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValidationError(
                f"entries shape {m.shape} does not match {len(self.row_labels)}x{len(self.col_labels)} labels"
            )
        if m.nnz and (m.data < 0).any():
            raise ValidationError("affiliation entries must be non-negative")
        m.eliminate_zeros()
        m.sort_indices()
        object.__setattr__(self, "entries", m)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def is_binary(self) -> bool:
        return bool(np.all(self.entries.data == 1.0))

    def binarized(self) -> "AffiliationMatrix":
        b = self.entries.copy()
        b.data[:] = 1.0
        return AffiliationMatrix(self.row_labels, self.col_labels, b)

    def transpose(self) -> "AffiliationMatrix":
        return AffiliationMatrix(self.col_labels, self.row_labels, self.entries.T.tocsr())

    def dense(self) -> np.ndarray:
        return self.entries.toarray()

    def row_sets(self) -> list[frozenset[str]]:
        m = self.entries
        return [
            frozenset(self.col_labels[j] for j in m.indices[m.indptr[i]:m.indptr[i + 1]])
            for i in range(m.shape[0])
        ]


def build_affiliation(
    records: Iterable[Sequence],
    rows: Sequence[str] | None = None,
    cols: Sequence[str] | None = None,
) -> AffiliationMatrix:
    """Affiliation matrix from ``(row, col[, weight])`` records; repeated pairs sum."""
    row_idx: dict[str, int] = {r: i for i, r in enumerate(rows or [])}
    col_idx: dict[str, int] = {c: i for i, c in enumerate(cols or [])}
    acc: dict[tuple[int, int], float] = {}
    for rec in records:
        if len(rec) not in (2, 3):
            raise ValidationError(f"affiliation record must have 2 or 3 fields, got {rec!r}")
        r, c = str(rec[0]), str(rec[1])
        w = float(rec[2]) if len(rec) == 3 else 1.0
        if not np.isfinite(w) or w < 0:
            raise ValidationError(f"invalid weight {rec[2]!r} for ({r!r}, {c!r})")
        if rows is not None and r not in row_idx:
            raise ValidationError(f"undeclared row {r!r}")
        if cols is not None and c not in col_idx:
            raise ValidationError(f"undeclared column {c!r}")
        i = row_idx.setdefault(r, len(row_idx))
        j = col_idx.setdefault(c, len(col_idx))
        acc[(i, j)] = acc.get((i, j), 0.0) + w
    keys = list(acc)
    m = sp.csr_matrix(
        ([acc[k] for k in keys], ([k[0] for k in keys], [k[1] for k in keys])),
        shape=(len(row_idx), len(col_idx)),
    )
    return AffiliationMatrix(tuple(row_idx), tuple(col_idx), m)


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Square labeled real matrix (dense ``ndarray`` or sparse CSR)."""

    labels: tuple[str, ...]
    values: np.ndarray | sp.csr_matrix
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "_index", _label_index(self.labels))
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise ValidationError(f"matrix shape {self.values.shape} does not match {n} labels")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown label {label!r}") from None

    def get(self, a: str, b: str) -> float:
        return self.values[self.index(a), self.index(b)]

    def dense(self) -> np.ndarray:
        return self.values.toarray() if sp.issparse(self.values) else np.asarray(self.values)

    def diagonal(self) -> np.ndarray:
        return self.values.diagonal().copy()

    def masked_diagonal(self) -> "SimilarityMatrix":
        """Same matrix with self-similarities (self-couplings, own citation counts) zeroed."""
        if sp.issparse(self.values):
            v = self.values.tolil()
            v.setdiag(0)
            v = v.tocsr()
            v.eliminate_zeros()
        else:
            v = np.array(self.values, copy=True)
            np.fill_diagonal(v, 0)
        return SimilarityMatrix(self.labels, v)

    def submatrix(self, indices: Sequence[int]) -> "SimilarityMatrix":
        idx = list(indices)
        if sp.issparse(self.values):
            v = self.values[idx][:, idx].tocsr()
        else:
            v = self.values[np.ix_(idx, idx)]
        return SimilarityMatrix(tuple(self.labels[i] for i in idx), v)

    def is_symmetric(self, atol: float = 1e-12) -> bool:
        d = self.values - self.values.T
        if sp.issparse(d):
            return not d.nnz or float(abs(d).max()) <= atol
        return bool(np.all(np.abs(d) <= atol))

    def pairs(self, include_zero: bool = False) -> list[tuple[str, str, float]]:
        """Upper-triangle entries ``(a, b, value)`` in lexicographic index order."""
        m = self.dense()
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if include_zero or m[i, j] != 0:
                    out.append((self.labels[i], self.labels[j], float(m[i, j])))
        return out


@dataclass(frozen=True, eq=False)
class WeightVector:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        v = np.asarray(self.values)
        if v.shape != (len(self.labels),):
            raise ValidationError(f"vector of length {v.shape} does not match {len(self.labels)} labels")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, label: str):
        try:
            return self.values[self.labels.index(label)]
        except ValueError:
            raise KeyError(label) from None

    def as_dict(self, nonzero: bool = False) -> dict[str, float]:
        return {
            lab: float(v)
            for lab, v in zip(self.labels, self.values)
            if not nonzero or v != 0
        }

    @property
    def total(self) -> float:
        return float(self.values.sum())


def _symmetrize_exact(m):
    """Mirror the upper triangle so the result is bitwise symmetric."""
    if sp.issparse(m):
        upper = sp.triu(m, format="csr")
        out = (upper + sp.triu(m, k=1, format="csr").T).tocsr()
        out.sort_indices()
        return out
    upper = np.triu(m)
    return upper + np.triu(m, k=1).T


def _project(m: sp.csr_matrix, dense_cutoff: int):
    prod = m @ m.T
    if prod.shape[0] <= dense_cutoff:
        return _symmetrize_exact(prod.toarray())
    return _symmetrize_exact(prod.tocsr())


def row_projection(aff: AffiliationMatrix, dense_cutoff: int = DENSE_CUTOFF) -> SimilarityMatrix:
    """``A @ A.T``: scalar products of rows (bibliographic coupling, co-authorship)."""
    if not aff.row_labels:
        raise ValidationError("affiliation matrix has no rows")
    return SimilarityMatrix(aff.row_labels, _project(aff.entries, dense_cutoff))


def col_projection(aff: AffiliationMatrix, dense_cutoff: int = DENSE_CUTOFF) -> SimilarityMatrix:
    """``A.T @ A``: scalar products of columns (co-citation, co-word)."""
    if not aff.col_labels:
        raise ValidationError("affiliation matrix has no columns")
    return SimilarityMatrix(aff.col_labels, _project(aff.entries.T.tocsr(), dense_cutoff))
