"""Learning the 2D semantic map.

Snippets become L2-normalized tf-idf vectors; a self-organizing map places
them on the grid so that nearby cells hold similar snippets.  Training is
fully deterministic for a given seed: identical corpus, schedule, and seed
reproduce the same grid and the same snippet assignment bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .corpus import Snippet, Vocabulary
from .errors import EmptyCorpus, EmptyVector
from .fingerprint import GridTopology

__all__ = [
    "SnippetVector",
    "TrainingSchedule",
    "SomGrid",
    "CellAssignment",
    "MapQualityReport",
    "snippet_vector",
    "train_som",
    "assign_snippets",
    "map_quality",
]


@dataclass(frozen=True)
class SnippetVector:
    """A snippet's L2-normalized tf-idf weights over the vocabulary."""

    snippet_id: int
    weights: Mapping[str, float] = field(default_factory=dict)


def snippet_vector(snippet: Snippet, vocab: Vocabulary) -> SnippetVector:
    """Weigh a snippet's in-vocabulary terms by tf * ln(N / sf), L2-normalized.

    tf is the term's count inside the snippet, N the corpus snippet total,
    sf the term's snippet frequency.  Terms outside the vocabulary are
    ignored; terms with idf 0 (present in every snippet) drop out.

    Raises:
        EmptyVector: if no term receives positive weight.
    """
    counts: dict[str, int] = {}
    for token in snippet.tokens:
        if token in vocab:
            counts[token] = counts.get(token, 0) + 1
    weights = {}
    for term, tf in counts.items():
        idf = math.log(vocab.total_snippets / vocab.snippet_frequency(term))
        if idf > 0.0:
            weights[term] = tf * idf
    if not weights:
        raise EmptyVector(f"snippet {snippet.snippet_id} has no weighted terms")
    norm = math.sqrt(sum(w * w for w in weights.values()))
    return SnippetVector(snippet.snippet_id, {t: w / norm for t, w in weights.items()})


@dataclass(frozen=True)
class TrainingSchedule:
    """Per-epoch learning-rate and radius plan for map training.

    Both quantities decay log-linearly (geometrically) from their start to
    their end value over the epochs.  ``radius_start`` defaults to half the
    larger grid dimension when left unset.
    """

    epochs: int = 10
    lr_start: float = 0.5
    lr_end: float = 0.05
    radius_start: float | None = None
    radius_end: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not 0 < self.lr_end <= self.lr_start:
            raise ValueError("need 0 < lr_end <= lr_start")
        if self.radius_end <= 0:
            raise ValueError("radius_end must be positive")

    def resolved_radius_start(self, topology: GridTopology) -> float:
        radius = self.radius_start if self.radius_start is not None else max(topology.rows, topology.cols) / 2.0
        if radius < self.radius_end:
            raise ValueError("radius_start must be >= radius_end")
        return radius


def _decayed(start: float, end: float, epoch: int, epochs: int) -> float:
    # Geometric interpolation; epoch 0 gives start, the last epoch gives end.
    if epochs <= 1:
        return start
    return start * (end / start) ** (epoch / (epochs - 1))


class SomGrid:
    """A trained map: one term-weight prototype per grid cell.

    Instances are produced by :func:`train_som` and treated as read-only.
    """

    def __init__(self, topology: GridTopology, terms: tuple[str, ...], matrix: np.ndarray):
        if matrix.shape != (topology.size, len(terms)):
            raise ValueError("prototype matrix shape does not match grid and terms")
        self.topology = topology
        self.terms = terms
        self._matrix = matrix
        self._index = {t: i for i, t in enumerate(terms)}

    @cached_property
    def _norms(self) -> np.ndarray:
        return np.sqrt((self._matrix * self._matrix).sum(axis=1))

    def prototype(self, cell: int) -> dict[str, float]:
        """The nonzero term weights of one cell's prototype."""
        row = self._matrix[cell]
        return {self.terms[i]: float(row[i]) for i in np.nonzero(row)[0]}

    def densify(self, vector: SnippetVector) -> np.ndarray:
        """Project a snippet vector onto this grid's term axis.

        Terms the grid has never seen are dropped; they cannot influence
        cell similarity.
        """
        dense = np.zeros(len(self.terms), dtype=np.float64)
        for term, weight in vector.weights.items():
            i = self._index.get(term)
            if i is not None:
                dense[i] = weight
        return dense

    def cell_scores(self, vector: SnippetVector) -> np.ndarray:
        """Cosine similarity of a snippet vector against every cell."""
        dense = self.densify(vector)
        vnorm = math.sqrt(float(dense @ dense))
        if vnorm == 0.0:
            return np.zeros(self.topology.size, dtype=np.float64)
        dots = self._matrix @ dense
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self._norms > 0, dots / (self._norms * vnorm), 0.0)


def _as_dense_matrix(vectors: Sequence[SnippetVector]) -> tuple[tuple[str, ...], np.ndarray]:
    terms = tuple(sorted({t for v in vectors for t in v.weights}))
    index = {t: i for i, t in enumerate(terms)}
    data = np.zeros((len(vectors), len(terms)), dtype=np.float64)
    for row, v in enumerate(vectors):
        for term, weight in v.weights.items():
            data[row, index[term]] = weight
    return terms, data


def train_som(
    vectors: Sequence[SnippetVector],
    topology: GridTopology,
    schedule: TrainingSchedule | None = None,
) -> SomGrid:
    """Train the map on snippet vectors.

    Each cell's prototype is initialized to the mean of 3 randomly drawn
    training vectors (seeded).  Every epoch visits the vectors in a fresh
    seeded shuffle; for each vector the best-matching cell is the one with
    the highest cosine similarity (ties go to the lowest cell index), and
    every cell within the current radius moves toward the vector, scaled by
    the learning rate and a Gaussian of its grid distance to the winner.

    Raises:
        EmptyCorpus: if no vectors are given.
    """
    if not vectors:
        raise EmptyCorpus("cannot train a map on zero snippet vectors")
    schedule = schedule or TrainingSchedule()
    terms, data = _as_dense_matrix(vectors)
    n, width = data.shape
    cells = topology.size
    rng = np.random.default_rng(schedule.seed)

    picks = rng.integers(0, n, size=(cells, 3))
    protos = data[picks].mean(axis=1)
    norms = np.sqrt((protos * protos).sum(axis=1))

    rows = np.arange(cells) // topology.cols
    cols = np.arange(cells) % topology.cols
    radius_start = schedule.resolved_radius_start(topology)

    for epoch in range(schedule.epochs):
        lr = _decayed(schedule.lr_start, schedule.lr_end, epoch, schedule.epochs)
        radius = _decayed(radius_start, schedule.radius_end, epoch, schedule.epochs)
        two_sigma_sq = 2.0 * radius * radius
        order = rng.permutation(n)
        for i in order:
            vec = data[i]
            dots = protos @ vec
            with np.errstate(divide="ignore", invalid="ignore"):
                scores = np.where(norms > 0, dots / norms, 0.0)
            bmu = int(np.argmax(scores))
            d_sq = (rows - rows[bmu]) ** 2 + (cols - cols[bmu]) ** 2
            hood = np.nonzero(d_sq <= radius * radius)[0]
            gain = lr * np.exp(-d_sq[hood] / two_sigma_sq)
            protos[hood] += gain[:, None] * (vec - protos[hood])
            norms[hood] = np.sqrt((protos[hood] * protos[hood]).sum(axis=1))
    return SomGrid(topology, terms, protos)


@dataclass(frozen=True)
class CellAssignment:
    """Where every snippet landed on the grid: a total snippet -> cell map."""

    num_cells: int
    snippet_to_cell: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for snippet_id, cell in self.snippet_to_cell.items():
            if not 0 <= cell < self.num_cells:
                raise ValueError(f"snippet {snippet_id} assigned to cell {cell} outside grid")

    @cached_property
    def cell_to_snippets(self) -> dict[int, tuple[int, ...]]:
        inverse: dict[int, list[int]] = {}
        for snippet_id, cell in self.snippet_to_cell.items():
            inverse.setdefault(cell, []).append(snippet_id)
        return {cell: tuple(sorted(ids)) for cell, ids in inverse.items()}


def assign_snippets(grid: SomGrid, vectors: Sequence[SnippetVector]) -> CellAssignment:
    """Assign every snippet vector to its best-matching cell.

    Ties go to the lowest cell index; a vector with zero similarity
    everywhere lands on cell 0.
    """
    mapping = {}
    for vector in vectors:
        scores = grid.cell_scores(vector)
        mapping[vector.snippet_id] = int(np.argmax(scores))
    return CellAssignment(grid.topology.size, mapping)


@dataclass(frozen=True)
class MapQualityReport:
    """Diagnostics of a trained map.

    topographic_error: fraction of vectors whose best and second-best cells
    are not grid neighbors (8-neighborhood).  quantization_error: mean
    (1 - cosine) between vectors and their best cell.  occupancy: snippet
    count per cell, summing to the number of vectors.
    """

    topographic_error: float
    quantization_error: float
    occupancy: tuple[int, ...]


def map_quality(grid: SomGrid, vectors: Sequence[SnippetVector]) -> MapQualityReport:
    """Measure how well the trained map fits the given vectors."""
    if not vectors:
        raise EmptyCorpus("map quality needs at least one vector")
    cells = grid.topology.size
    cols = grid.topology.cols
    occupancy = [0] * cells
    topo_misses = 0
    quant_sum = 0.0
    for vector in vectors:
        scores = grid.cell_scores(vector)
        best = int(np.argmax(scores))
        occupancy[best] += 1
        quant_sum += 1.0 - float(scores[best])
        if cells > 1:
            runner_scores = scores.copy()
            runner_scores[best] = -np.inf
            second = int(np.argmax(runner_scores))
            adjacent = max(abs(best // cols - second // cols), abs(best % cols - second % cols)) <= 1
            if not adjacent:
                topo_misses += 1
    n = len(vectors)
    return MapQualityReport(
        topographic_error=topo_misses / n,
        quantization_error=quant_sum / n,
        occupancy=tuple(occupancy),
    )
