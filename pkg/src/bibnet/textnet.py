"""Term-document networks: co-word and lexical coupling projections, Jacobi SVD, LSA."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from bibnet.errors import ConvergenceError, EmptyCorpusError, ValidationError
from bibnet.netcore import AffiliationMatrix, SimilarityMatrix, col_projection, row_projection
from bibnet.similarity import jaccard_matrix, salton_matrix

_TOKEN = re.compile(r"[^\W_]+")

MAX_SWEEPS = 60


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything that is not a letter or digit."""
    return _TOKEN.findall(text.lower())


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    data = resources.files("bibnet").joinpath("data/english_stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in data.splitlines() if w.strip() and not w.startswith("#"))


@dataclass(frozen=True, eq=False)
class TermDocumentMatrix:
    documents: tuple[str, ...]
    terms: tuple[str, ...]
    counts: sp.csr_matrix

    def affiliation(self) -> AffiliationMatrix:
        return AffiliationMatrix(self.documents, self.terms, self.counts)

    def dense(self) -> np.ndarray:
        return self.counts.toarray()

    def tfidf(self) -> np.ndarray:
        """Counts times log(N / document frequency); an option, never the default."""
        a = self.dense()
        df = (a > 0).sum(axis=0)
        return a * np.log(len(self.documents) / np.maximum(df, 1))[None, :]


def build_term_document(
    documents: Sequence[str | Sequence[str]],
    stopwords: Iterable[str] | None = None,
    min_frequency: int = 1,
    labels: Sequence[str] | None = None,
) -> TermDocumentMatrix:
    """Count matrix documents x terms.

    Documents given as strings are tokenized with :func:`tokenize`; token
    sequences are lowercased and used as is.  ``stopwords=None`` applies
    the bundled English list, pass an empty set to keep everything.  Terms
    whose total corpus count is below ``min_frequency`` are dropped.  The
    vocabulary is sorted alphabetically.
    """
    if not documents:
        raise EmptyCorpusError("empty corpus")
    stop = default_stopwords() if stopwords is None else frozenset(w.lower() for w in stopwords)
    bags = []
    for doc in documents:
        tokens = tokenize(doc) if isinstance(doc, str) else [str(t).lower() for t in doc]
        bags.append(Counter(t for t in tokens if t not in stop))
    total = Counter()
    for bag in bags:
        total.update(bag)
    vocab = sorted(t for t, c in total.items() if c >= min_frequency)
    if not vocab:
        raise EmptyCorpusError("empty corpus: no terms survive stopword and frequency filtering")
    col = {t: j for j, t in enumerate(vocab)}
    rows, cols, vals = [], [], []
    for i, bag in enumerate(bags):
        for t, c in bag.items():
            if t in col:
                rows.append(i)
                cols.append(col[t])
                vals.append(c)
    counts = sp.csr_matrix((vals, (rows, cols)), shape=(len(bags), len(vocab)), dtype=np.int64)
    counts.sort_indices()
    doc_labels = tuple(labels) if labels is not None else tuple(f"d{i + 1}" for i in range(len(bags)))
    if len(doc_labels) != len(bags):
        raise ValidationError("one label per document required")
    return TermDocumentMatrix(doc_labels, tuple(vocab), counts)


def coword_matrix(td: TermDocumentMatrix, mode: str = "binary") -> SimilarityMatrix:
    """Term x term co-occurrence.

    ``binary``: number of documents containing both terms (diagonal =
    document frequency).  ``counts``: scalar products of raw count columns.
    """
    aff = td.affiliation()
    if mode == "binary":
        aff = aff.binarized()
    elif mode != "counts":
        raise ValidationError(f"unknown co-word mode {mode!r}")
    return col_projection(aff)


def lexical_coupling(td: TermDocumentMatrix, measure: str = "raw") -> SimilarityMatrix:
    """Document x document similarity from shared terms (``raw``, ``jaccard`` or ``salton``)."""
    aff = td.affiliation()
    if measure == "raw":
        return row_projection(aff)
    if measure == "jaccard":
        return jaccard_matrix(aff.binarized())
    if measure == "salton":
        return salton_matrix(aff.binarized())
    raise ValidationError(f"unknown lexical coupling measure {measure!r}")


@dataclass(frozen=True)
class SvdFactorization:
    """``A ~ U diag(s) V^T`` with U (m x k), s (k,), V (n x k)."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    sweeps: int = 0

    @property
    def rank(self) -> int:
        return len(self.s)

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.v.T


def _complete_basis(q: np.ndarray, have: np.ndarray) -> np.ndarray:
    """Fill columns of ``q`` not flagged in ``have`` with an orthonormal completion."""
    m, k = q.shape
    basis = [q[:, j] for j in range(k) if have[j]]
    fill = []
    for e in np.eye(m):
        if len(basis) + len(fill) == k:
            break
        x = e.copy()
        for _ in range(2):
            for b in basis + fill:
                x -= (b @ x) * b
        norm = np.linalg.norm(x)
        if norm > 1e-8:
            fill.append(x / norm)
    out = q.copy()
    for j, vec in zip(np.flatnonzero(~have), fill):
        out[:, j] = vec
    return out


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int):
    """One-sided (Hestenes) Jacobi on columns of a tall matrix."""
    u = np.array(a, dtype=float)
    m, n = u.shape
    v = np.eye(n)
    eps = np.finfo(float).eps
    # thresholds below m*eps can never be met in double precision
    tol = max(tol, m * eps)
    null = (eps * np.linalg.norm(u)) ** 2
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                up, uq = u[:, p], u[:, q]
                alpha = up @ up
                beta = uq @ uq
                gamma = up @ uq
                if alpha <= null or beta <= null or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * up - s * uq
                new_q = s * up + c * uq
                u[:, p], u[:, q] = new_p, new_q
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        if not rotated:
            return u, v, sweep
    raise ConvergenceError("Jacobi SVD did not converge", max_sweeps, float("nan"))


def svd(matrix, k: int | None = None, tolerance: float = 1e-15, max_sweeps: int = MAX_SWEEPS) -> SvdFactorization:
    """Singular value decomposition by one-sided Jacobi rotations, truncated to ``k``.

    Singular values come out non-increasing.  Signs are fixed so the
    largest-magnitude entry of every right singular vector is positive
    (first such entry on ties), which makes results reproducible bit for bit.
    Left vectors belonging to zero singular values are an arbitrary
    orthonormal completion.
    """
    a = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=float)
    if a.ndim != 2 or 0 in a.shape:
        raise ValidationError("svd needs a non-empty 2-D matrix")
    m, n = a.shape
    full = min(m, n)
    k = full if k is None else int(k)
    if not 1 <= k <= full:
        raise ValidationError(f"k={k} outside 1..{full}")

    wide = m < n
    work = a.T if wide else a
    u, v, sweeps = _jacobi(work, tolerance, max_sweeps)
    s = np.linalg.norm(u, axis=0)
    order = sorted(range(len(s)), key=lambda j: (-s[j], j))
    s, u, v = s[order], u[:, order], v[:, order]
    scale = s.max() if s.size else 0.0
    nonzero = s > scale * 1e-14 if scale > 0 else np.zeros_like(s, dtype=bool)
    u = np.where(nonzero[None, :], u / np.where(nonzero, s, 1.0)[None, :], 0.0)
    s = np.where(nonzero, s, 0.0)
    u = _complete_basis(u, nonzero)
    if wide:
        u, v = v, u
    for j in range(v.shape[1]):
        col = v[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            v[:, j] = -col
            u[:, j] = -u[:, j]
    return SvdFactorization(u[:, :k].copy(), s[:k].copy(), v[:, :k].copy(), sweeps)


def cosine_similarity(x: np.ndarray) -> np.ndarray:
    """Row-wise cosines; rows with zero norm get similarity 0."""
    norms = np.linalg.norm(x, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = x / safe[:, None]
    out = unit @ unit.T
    out[norms == 0, :] = 0.0
    out[:, norms == 0] = 0.0
    return out


@dataclass(frozen=True)
class LsaEmbedding:
    documents: tuple[str, ...]
    terms: tuple[str, ...]
    document_coords: np.ndarray
    term_coords: np.ndarray
    singular_values: np.ndarray

    def document_similarity(self) -> SimilarityMatrix:
        return SimilarityMatrix(self.documents, cosine_similarity(self.document_coords))

    def term_similarity(self) -> SimilarityMatrix:
        return SimilarityMatrix(self.terms, cosine_similarity(self.term_coords))


def lsa_embed(td: TermDocumentMatrix, k: int, weighting: str = "counts") -> LsaEmbedding:
    """Latent semantic coordinates: documents at rows of U*s, terms at rows of V*s."""
    if k < 1:
        raise ValidationError("k must be at least 1")
    if weighting == "counts":
        a = td.dense().astype(float)
    elif weighting == "tfidf":
        a = td.tfidf()
    else:
        raise ValidationError(f"unknown weighting {weighting!r}")
    f = svd(a, k)
    return LsaEmbedding(td.documents, td.terms, f.u * f.s, f.v * f.s, f.s)
