"""Coupling and co-citation strengths, Jaccard/Salton indices, co-citation significance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.stats import binom

from bibnet.errors import ValidationError
from bibnet.netcore import (
    AffiliationMatrix,
    SimilarityMatrix,
    build_affiliation,
    col_projection,
    row_projection,
)


@dataclass(frozen=True)
class ReferenceSet:
    owner: str
    members: frozenset[str]

    def __init__(self, owner: str, members: Iterable[str]):
        object.__setattr__(self, "owner", owner)
        object.__setattr__(self, "members", frozenset(members))


def reference_sets(aff: AffiliationMatrix) -> list[ReferenceSet]:
    return [ReferenceSet(owner, refs) for owner, refs in zip(aff.row_labels, aff.row_sets())]


def _require_binary(aff: AffiliationMatrix, weighted: bool) -> AffiliationMatrix:
    if not weighted and not aff.is_binary:
        raise ValidationError(
            "set-based coupling needs a binary affiliation matrix; pass weighted=True for scalar products"
        )
    return aff


def bibliographic_coupling(aff: AffiliationMatrix, weighted: bool = False) -> SimilarityMatrix:
    """Shared-reference counts ``A A^T``; diagonal holds reference-list lengths.

    With ``weighted=True`` non-binary entries are allowed and the result is
    the plain scalar product of weight rows.
    """
    return row_projection(_require_binary(aff, weighted))


def cocitation(aff: AffiliationMatrix, weighted: bool = False) -> SimilarityMatrix:
    """Co-citation counts ``A^T A``; diagonal holds each source's citation count."""
    return col_projection(_require_binary(aff, weighted))


def _members(x) -> frozenset:
    return x.members if isinstance(x, ReferenceSet) else frozenset(x)


def jaccard_index(a, b) -> float:
    """|a & b| / |a | b|; two empty sets score 0."""
    a, b = _members(a), _members(b)
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def salton_index(a, b) -> float:
    """|a & b| / sqrt(|a| |b|); 0 when either set is empty."""
    a, b = _members(a), _members(b)
    if not a or not b:
        return 0.0
    return len(a & b) / math.sqrt(len(a) * len(b))


def _as_coupling(x) -> SimilarityMatrix:
    if isinstance(x, SimilarityMatrix):
        return x
    if isinstance(x, AffiliationMatrix):
        return bibliographic_coupling(x.binarized())
    sets = list(x)
    cols = sorted(set().union(*(_members(s) for s in sets)))
    owners = [s.owner if isinstance(s, ReferenceSet) else str(i) for i, s in enumerate(sets)]
    records = [(o, c) for o, s in zip(owners, sets) for c in sorted(_members(s))]
    return bibliographic_coupling(build_affiliation(records, rows=owners, cols=cols))


def jaccard_matrix(x) -> SimilarityMatrix:
    """Pairwise Jaccard indices from a binary overlap matrix.

    ``x`` may be a coupling/co-citation matrix (diagonal = set sizes), an
    affiliation matrix (rows are the sets), or a sequence of reference sets.
    """
    b = _as_coupling(x)
    v = b.dense()
    d = np.diag(v)
    union = d[:, None] + d[None, :] - v
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(union > 0, v / np.where(union > 0, union, 1), 0.0)
    return SimilarityMatrix(b.labels, out)


def salton_matrix(x) -> SimilarityMatrix:
    """Pairwise Salton (cosine) indices; same inputs as :func:`jaccard_matrix`."""
    b = _as_coupling(x)
    v = b.dense()
    d = np.diag(v)
    denom = np.sqrt(np.outer(d, d))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(denom > 0, v / np.where(denom > 0, denom, 1), 0.0)
    return SimilarityMatrix(b.labels, out)


@dataclass(frozen=True)
class SignificantPair:
    a: str
    b: str
    observed: int
    expected: float
    p_value: float


@dataclass(frozen=True)
class SignificantPairs:
    pairs: tuple[SignificantPair, ...]
    citing_count: int
    alpha: float

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def keys(self) -> list[tuple[str, str]]:
        return [(p.a, p.b) for p in self.pairs]


def cocitation_significance(C: SimilarityMatrix, citing_count: int, alpha: float = 0.01) -> SignificantPairs:
    """Keep co-citation pairs observed significantly above independence.

    Under independent citation of sources i and j by ``m`` citing documents
    the co-citation count is Binomial(m, (c_ii/m)(c_jj/m)) with mean
    ``c_ii c_jj / m``.  A pair is kept when it exceeds that mean and the
    upper tail P[X >= c_ij] is below ``alpha``.
    """
    m = int(citing_count)
    if m < 1:
        raise ValidationError("citing_count must be at least 1")
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie in (0, 1)")
    v = C.dense()
    d = np.diag(v)
    too_big = [C.labels[i] for i in range(C.n) if d[i] > m]
    if too_big:
        raise ValidationError(f"citation counts exceed citing_count={m} for {too_big}")
    kept = []
    for i in range(C.n):
        for j in range(i + 1, C.n):
            obs = int(round(v[i, j]))
            if obs <= 0:
                continue
            expected = d[i] * d[j] / m
            if obs <= expected:
                continue
            p = float(binom.sf(obs - 1, m, (d[i] / m) * (d[j] / m)))
            if p < alpha:
                kept.append(SignificantPair(C.labels[i], C.labels[j], obs, float(expected), p))
    return SignificantPairs(tuple(kept), m, alpha)

