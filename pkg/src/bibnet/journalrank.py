"""Journal citation matrices: normalizations, influence weights, Geller weights, PageRank, ego environments.

Entry (i, j) of a journal matrix counts citations *of* journal j *by*
journal i, so row sums ``a_{i+}`` are references given and column sums
``a_{+j}`` are citations received.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from bibnet.errors import ConvergenceError, ReducibleMatrixError, ValidationError
from bibnet.netcore import TemporalDigraph, WeightVector, _label_index

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True, eq=False)
class JournalCitationMatrix:
    journals: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "journals", tuple(self.journals))
        _label_index(self.journals)
        c = np.array(self.counts, dtype=float)
        n = len(self.journals)
        if c.shape != (n, n):
            raise ValidationError(f"journal matrix must be {n}x{n}, got {c.shape}")
        if not np.all(np.isfinite(c)) or (c < 0).any():
            raise ValidationError("journal citation counts must be finite and non-negative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def n(self) -> int:
        return len(self.journals)

    def index(self, journal: str) -> int:
        try:
            return self.journals.index(journal)
        except ValueError:
            raise ValidationError(f"unknown journal {journal!r}") from None

    @property
    def references_given(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def citations_received(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def without_self_citations(self) -> "JournalCitationMatrix":
        c = self.counts.copy()
        np.fill_diagonal(c, 0)
        return JournalCitationMatrix(self.journals, c)

    def submatrix(self, indices: Sequence[int]) -> "JournalCitationMatrix":
        idx = list(indices)
        return JournalCitationMatrix(tuple(self.journals[i] for i in idx), self.counts[np.ix_(idx, idx)])


@dataclass(frozen=True)
class RankResult:
    weights: WeightVector
    iterations: int
    residual: float
    scaling: str


def _prepare(A: JournalCitationMatrix, include_self: bool) -> JournalCitationMatrix:
    return A if include_self else A.without_self_citations()


def _row_sums(A: JournalCitationMatrix) -> np.ndarray:
    rows = A.references_given
    zero = [A.journals[i] for i in np.flatnonzero(rows == 0)]
    if zero:
        raise ValidationError(f"journals with no references in the network: {zero}")
    return rows


def gamma_cited(A: JournalCitationMatrix, include_self: bool = True) -> np.ndarray:
    """``gamma[i, j] = a_ij / a_{j+}``: citations of j scaled by j's own reference total."""
    A = _prepare(A, include_self)
    return A.counts / _row_sums(A)[None, :]


def gamma_citing(A: JournalCitationMatrix, include_self: bool = True) -> np.ndarray:
    """``gamma*[i, j] = a_ij / a_{i+}``; its transpose is column-stochastic."""
    A = _prepare(A, include_self)
    return A.counts / _row_sums(A)[:, None]


def import_export(A: JournalCitationMatrix, include_self: bool = True) -> WeightVector:
    """Citations received over references given, ``a_{+j} / a_{j+}``.

    Equal to one step of influence-weight redistribution from all-ones weights.
    """
    A = _prepare(A, include_self)
    return WeightVector(A.journals, A.citations_received / _row_sums(A))


def _require_irreducible(A: JournalCitationMatrix):
    if A.n <= 1:
        return
    ncomp, labels = connected_components(sp.csr_matrix(A.counts), directed=True, connection="strong")
    if ncomp > 1:
        comps = [[A.journals[i] for i in np.flatnonzero(labels == k)] for k in range(ncomp)]
        comps.sort(key=lambda c: (-len(c), A.journals.index(c[0])))
        raise ReducibleMatrixError("citation matrix is not strongly connected", comps)


def influence_iteration(A: JournalCitationMatrix, include_self: bool = True) -> Iterator[np.ndarray]:
    """Yield ``w(1), w(2), ...`` of ``w <- gamma^T w`` started from all ones (unscaled)."""
    gt = gamma_cited(A, include_self).T
    w = np.ones(A.n)
    while True:
        w = gt @ w
        yield w


def geller_iteration(A: JournalCitationMatrix, include_self: bool = True) -> Iterator[np.ndarray]:
    """Yield iterates of ``v <- gamma*^T v`` from all ones; component sum stays at n."""
    gt = gamma_citing(A, include_self).T
    v = np.ones(A.n)
    while True:
        v = gt @ v
        yield v


def influence_weights(
    A: JournalCitationMatrix,
    tolerance: float = DEFAULT_TOL,
    max_iterations: int = DEFAULT_MAX_ITER,
    include_self: bool = True,
) -> RankResult:
    """Fixed point of ``w = gamma^T w`` by power iteration, rescaled to sum n.

    The raw iteration loses weight (its first step sums the import-export
    ratios, below n for the usual matrices), so the converged vector is
    rescaled.  Iteration stops once the rescaled vector satisfies
    ``max|gamma^T w - w| < tolerance``.
    """
    A = _prepare(A, include_self)
    gt = gamma_cited(A).T
    _require_irreducible(A)
    n = A.n
    w = np.ones(n)
    residual = np.inf
    for it in range(max_iterations + 1):
        scaled = w * n / w.sum()
        nxt = gt @ scaled
        residual = float(np.max(np.abs(nxt - scaled)))
        if residual < tolerance:
            return RankResult(WeightVector(A.journals, scaled), it, residual, "sum=n")
        w = nxt
    raise ConvergenceError("influence weights did not converge", max_iterations, residual)


def geller_weights(
    A: JournalCitationMatrix,
    tolerance: float = DEFAULT_TOL,
    max_iterations: int = DEFAULT_MAX_ITER,
    include_self: bool = True,
) -> RankResult:
    """Stationary vector of the column-stochastic ``gamma*^T``, summing to n.

    No rescaling happens: the stochastic iteration conserves the component
    sum by itself.
    """
    A = _prepare(A, include_self)
    gt = gamma_citing(A).T
    _row_sums(A)
    _require_irreducible(A)
    v = np.ones(A.n)
    residual = np.inf
    for it in range(1, max_iterations + 1):
        new = gt @ v
        residual = float(np.max(np.abs(new - v)))
        v = new
        if residual < tolerance:
            return RankResult(WeightVector(A.journals, v), it, float(np.max(np.abs(gt @ v - v))), "sum=n")
    raise ConvergenceError("Geller weights did not converge", max_iterations, residual)


def _transition(g) -> tuple[tuple[str, ...], sp.csr_matrix]:
    if isinstance(g, JournalCitationMatrix):
        return g.journals, sp.csr_matrix(g.counts)
    if isinstance(g, TemporalDigraph):
        return g.labels, g.adjacency
    raise ValidationError(f"pagerank needs a TemporalDigraph or JournalCitationMatrix, got {type(g).__name__}")


def pagerank(
    g,
    damping: float = 0.85,
    tolerance: float = 1e-12,
    max_iterations: int = DEFAULT_MAX_ITER,
    include_self: bool = True,
) -> RankResult:
    """Random-surfer stationary distribution over a weighted citation graph.

    The surfer at i follows a reference of i with probability ``damping``
    (choosing j in proportion to ``a_ij``) and otherwise jumps uniformly.
    Nodes without references spread their mass uniformly.  Convergence is
    tested on the L1 change between iterates.
    """
    if not 0 < damping < 1:
        raise ValidationError("damping must lie strictly between 0 and 1")
    if isinstance(g, JournalCitationMatrix):
        g = _prepare(g, include_self)
    labels, adj = _transition(g)
    n = len(labels)
    if n == 0:
        raise ValidationError("graph is empty")
    out = np.asarray(adj.sum(axis=1)).ravel()
    dangling = out == 0
    inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, out))
    pt = (sp.diags(inv) @ adj).T.tocsr()
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iterations + 1):
        new = damping * (pt @ x + x[dangling].sum() / n) + (1.0 - damping) / n
        new /= new.sum()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tolerance:
            return RankResult(WeightVector(labels, x), it, residual, "sum=1")
    raise ConvergenceError("PageRank did not converge", max_iterations, residual)


def ego_environments(A: JournalCitationMatrix, seed: str) -> tuple[JournalCitationMatrix, JournalCitationMatrix]:
    """``(citation-impact environment, knowledge base)`` of ``seed``.

    The impact environment holds journals citing the seed, the knowledge
    base journals the seed cites.  The seed belongs to both; original
    journal order is kept.
    """
    s = A.index(seed)
    impact = [j for j in range(A.n) if A.counts[j, s] > 0 or j == s]
    base = [j for j in range(A.n) if A.counts[s, j] > 0 or j == s]
    return A.submatrix(impact), A.submatrix(base)
