"""Weighted centroid vectors and cosine distance.

A token sequence is represented by the weighted average of its word
vectors. Tokens without an embedding contribute nothing, to either the
numerator or the weight normalizer, so out-of-vocabulary noise does not
dilute the covered content. All arithmetic is 64-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .embeddings import EmbeddingTable


@dataclass(frozen=True, eq=False)
class SemanticVector:
    """A centroid plus bookkeeping about how much input it actually covers.

    ``components`` is the zero vector when no token had an embedding or
    every covered token carried zero weight; ``covered_tokens`` records how
    many input tokens had embeddings regardless.
    """

    components: np.ndarray
    covered_tokens: int
    total_tokens: int

    @property
    def is_zero(self) -> bool:
        return not np.any(self.components)


def _zero(dim: int, covered: int, total: int) -> SemanticVector:
    components = np.zeros(dim, dtype=np.float64)
    components.flags.writeable = False
    return SemanticVector(components=components, covered_tokens=covered, total_tokens=total)


def weighted_centroid(
    tokens: Sequence[str],
    embeddings: EmbeddingTable,
    weight: Callable[[str], float],
) -> SemanticVector:
    """Sum of weight(t) * vector(t) over covered tokens, divided by the
    weight sum. Degenerate inputs (nothing covered, all weights zero)
    yield a flagged zero vector rather than an error."""
    total = len(tokens)
    acc = np.zeros(embeddings.dim, dtype=np.float64)
    weight_sum = 0.0
    covered = 0
    for token in tokens:
        vector = embeddings.lookup(token)
        if vector is None:
            continue
        covered += 1
        w = float(weight(token))
        if w == 0.0:
            continue
        acc += w * vector
        weight_sum += w
    if covered == 0 or weight_sum == 0.0:
        return _zero(embeddings.dim, covered, total)
    components = acc / weight_sum
    components.flags.writeable = False
    return SemanticVector(components=components, covered_tokens=covered, total_tokens=total)


def centroid(
    tokens: Sequence[str],
    embeddings: EmbeddingTable,
    idf=None,
) -> SemanticVector:
    """Uniform centroid when ``idf`` is None, idf-weighted otherwise.

    ``idf`` is anything with a ``weight(token) -> float`` method (normally
    an :class:`~centroidrank.idf.IdfTable`).
    """
    if idf is None:
        return weighted_centroid(tokens, embeddings, lambda _token: 1.0)
    return weighted_centroid(tokens, embeddings, idf.weight)


def _as_array(v) -> np.ndarray:
    if isinstance(v, SemanticVector):
        return v.components
    return np.asarray(v, dtype=np.float64)


def cosine_distance(u, v) -> float:
    """1 - cos(angle) between two vectors, in [0, 2].

    Accepts arrays or SemanticVectors. A zero-norm operand gives the
    neutral distance 1.0, so all-OOV passages stay rankable without ever
    outranking a positively matching one.
    """
    a = _as_array(u)
    b = _as_array(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 1.0
    similarity = float(np.dot(a, b)) / (norm_a * norm_b)
    # 64-bit rounding can push |similarity| a few ulps past 1.
    similarity = max(-1.0, min(1.0, similarity))
    return 1.0 - similarity
