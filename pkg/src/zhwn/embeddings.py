"""Pretrained word vectors: loading, cosine, composition, 2D PCA projection.

Only the word2vec *text* format is supported (header "count dim", then one
"token v1 ... vdim" line per word); the binary format is deliberately not.
Tables are immutable after load and all operations here are pure.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParseError, ZhwnError

logger = logging.getLogger("zhwn.embeddings")

# Word2vec training settings the supplied vector file is expected to match
# (kept as provenance metadata; training itself is out of scope).
EXPECTED_TRAINING = {
    "model": "word2vec-skipgram",
    "learning_rate": 0.0001,
    "window": 5,
    "dimension": 200,
    "min_frequency": 1,
}


class EmbeddingTable:
    """token -> dense vector, all sharing one declared dimension."""

    def __init__(self, dimension: int, metadata: dict | None = None):
        if dimension <= 0:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.metadata = dict(metadata or {})
        self._vectors: dict[str, np.ndarray] = {}

    def __len__(self):
        return len(self._vectors)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    def __getitem__(self, token: str) -> np.ndarray:
        return self._vectors[token]

    def get(self, token: str):
        return self._vectors.get(token)

    def tokens(self):
        return self._vectors.keys()

    def put(self, token: str, vector) -> None:
        vec = np.asarray(vector, dtype=float)
        if vec.shape != (self.dimension,):
            raise ValueError(f"{token!r}: expected {self.dimension} components, got {vec.shape}")
        if token in self._vectors:
            logger.warning("duplicate token %r: keeping the later vector", token)
        self._vectors[token] = vec


def load_embeddings(path) -> EmbeddingTable:
    """Load a word2vec-text vector file; duplicate tokens warn, last wins."""
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ParseError("header must be 'count dim'", line=1)
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(f"non-numeric header {header!r}", line=1) from None
        if dim <= 0:
            raise ParseError("dimension must be positive", line=1)
        table = EmbeddingTable(dim, {"source": str(path), "expected_training": EXPECTED_TRAINING})
        rows = 0
        for number, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if len(parts) != dim + 1:
                raise ParseError(
                    f"expected token + {dim} components, found {len(parts)} fields", line=number
                )
            try:
                vector = np.array([float(x) for x in parts[1:]], dtype=float)
            except ValueError:
                raise ParseError("non-numeric vector component", line=number) from None
            table.put(parts[0], vector)
            rows += 1
        if rows != count:
            raise ParseError(f"header declares {count} rows, file has {rows}")
    return table


def cosine(a, b) -> float:
    """Cosine similarity in [-1, 1]; zero-norm inputs give 0.0 (see cosine_flagged)."""
    value, _ = cosine_flagged(a, b)
    return value


def cosine_flagged(a, b) -> tuple[float, bool]:
    """Cosine plus a flag that is True when a zero-norm input forced 0.0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ZhwnError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0, True
    value = float(np.dot(a, b) / (na * nb))
    return max(-1.0, min(1.0, value)), False


def compose(vectors, mode: str = "sum") -> np.ndarray:
    """Componentwise sum or mean of equally sized vectors."""
    stacked = [np.asarray(v, dtype=float) for v in vectors]
    if not stacked:
        raise ZhwnError("cannot compose an empty vector list")
    shape = stacked[0].shape
    for vec in stacked[1:]:
        if vec.shape != shape:
            raise ZhwnError(f"dimension mismatch: {vec.shape} vs {shape}")
    if mode == "sum":
        return np.sum(stacked, axis=0)
    if mode == "mean":
        return np.mean(stacked, axis=0)
    raise ValueError(f"unknown compose mode {mode!r}")


@dataclass
class Projection2D:
    """2D points per token plus the fitted basis (2 axes + feature means)."""

    points: dict[str, np.ndarray]
    axes: np.ndarray   # shape (2, dim), rows orthonormal
    means: np.ndarray  # shape (dim,)

    def __contains__(self, token: str) -> bool:
        return token in self.points

    def __getitem__(self, token: str) -> np.ndarray:
        return self.points[token]

    def project(self, vector) -> np.ndarray:
        return self.axes @ (np.asarray(vector, dtype=float) - self.means)

    @classmethod
    def from_points(cls, points: dict) -> "Projection2D":
        """Wrap externally supplied 2D coordinates (identity basis)."""
        coords = {tok: np.asarray(p, dtype=float) for tok, p in points.items()}
        for tok, p in coords.items():
            if p.shape != (2,):
                raise ValueError(f"{tok!r}: point must have exactly 2 components")
        return cls(coords, np.eye(2), np.zeros(2))

    def save(self, path) -> None:
        payload = {
            "axes": self.axes.tolist(),
            "means": self.means.tolist(),
            "points": {tok: p.tolist() for tok, p in self.points.items()},
        }
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "Projection2D":
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
        return cls(
            {tok: np.asarray(p, dtype=float) for tok, p in payload["points"].items()},
            np.asarray(payload["axes"], dtype=float),
            np.asarray(payload["means"], dtype=float),
        )


def pca_fit_project(table: EmbeddingTable, tokens) -> Projection2D:
    """Project the given tokens' vectors onto their top-2 principal axes.

    Axes are ordered by descending explained variance with a fixed sign
    convention (each axis's largest-magnitude component is positive), so
    identical input reproduces identical output bit for bit.
    """
    if table.dimension < 2:
        raise DegenerateInputError("PCA to 2D needs vectors with at least 2 components")
    ordered = []
    seen = set()
    for token in tokens:
        if token in table and token not in seen:
            ordered.append(token)
            seen.add(token)
    if len(ordered) < 3:
        raise DegenerateInputError(
            f"PCA needs at least 3 in-vocabulary tokens, got {len(ordered)}"
        )
    data = np.stack([table[t] for t in ordered])
    means = data.mean(axis=0)
    centered = data - means
    if not np.any(centered):
        logger.warning("all %d points identical: projecting everything to the origin", len(ordered))
        axes = np.zeros((2, table.dimension))
        axes[0, 0] = 1.0
        axes[1, 1] = 1.0
        return Projection2D({t: np.zeros(2) for t in ordered}, axes, means)

    # SVD of the centered data; right singular vectors are the principal
    # axes (orthonormal even past the data rank, with >=3 points in >=2D).
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    axes = vt[:2].copy()
    for i in range(2):
        pivot = int(np.argmax(np.abs(axes[i])))
        if axes[i, pivot] < 0:
            axes[i] = -axes[i]
    points = {t: axes @ (table[t] - means) for t in ordered}
    return Projection2D(points, axes, means)
