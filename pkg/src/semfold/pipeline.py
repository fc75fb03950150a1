"""End-to-end retina construction from raw documents.

Chains the corpus, map, and retina stages: documents are cut into snippets,
a vocabulary is derived, snippet vectors train the map, and the resulting
assignment yields the retina.  Equal inputs and seeds reproduce the same
retina byte for byte.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document, Snippet, TokenizerConfig, build_vocabulary, cut_snippets
from .errors import EmptyCorpus, EmptyVector
from .fingerprint import GridTopology
from .retina import BuildConfig, Retina, build_retina
from .som import (
    MapQualityReport,
    TrainingSchedule,
    assign_snippets,
    map_quality,
    snippet_vector,
    train_som,
)

__all__ = ["BuildParams", "BuildResult", "load_documents", "build_from_documents"]


@dataclass(frozen=True)
class BuildParams:
    """Everything that determines a retina build."""

    topology: GridTopology = GridTopology()
    snippet_sentences: int = 1
    min_snippet_freq: int = 1
    max_snippet_ratio: float = 0.4
    schedule: TrainingSchedule = TrainingSchedule()
    word_cap: int | None = None
    weighting: str = "tfidf"
    tokenizer: TokenizerConfig = TokenizerConfig()
    name: str = "retina"
    description: str = ""


@dataclass(frozen=True)
class BuildResult:
    """A built retina plus build diagnostics."""

    retina: Retina
    quality: MapQualityReport
    snippet_count: int
    dropped_snippets: int


def load_documents(path: str | os.PathLike) -> list[Document]:
    """Read corpus documents from a directory of text files or one flat file.

    A directory contributes one document per ``*.txt`` file (sorted by name,
    doc id = file stem); a single file contributes one document per
    non-blank line (doc id = 1-based line number).
    """
    p = Path(path)
    if p.is_dir():
        docs = []
        for file in sorted(p.glob("*.txt")):
            text = file.read_text(encoding="utf-8")
            if text.strip():
                docs.append(Document(file.stem, text))
        return docs
    docs = []
    with open(p, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if line.strip():
                docs.append(Document(f"line-{i:04d}", line.strip()))
    return docs


def build_from_documents(docs: list[Document], params: BuildParams | None = None) -> BuildResult:
    """Run the full pipeline on in-memory documents.

    Snippet ids are assigned globally and sequentially across documents.
    Snippets whose terms are all filtered out of the vocabulary cannot be
    placed on the map; they are dropped and counted.

    Raises:
        EmptyCorpus: if no document yields a snippet, or none yields a
            usable snippet vector.
    """
    params = params or BuildParams()
    snippets: list[Snippet] = []
    for doc in docs:
        snippets.extend(
            cut_snippets(doc, params.snippet_sentences, params.tokenizer, start_id=len(snippets))
        )
    if not snippets:
        raise EmptyCorpus("documents produced no snippets")
    vocab = build_vocabulary(snippets, params.min_snippet_freq, params.max_snippet_ratio)

    vectors = []
    kept = []
    dropped = 0
    for snippet in snippets:
        try:
            vectors.append(snippet_vector(snippet, vocab))
            kept.append(snippet)
        except EmptyVector:
            dropped += 1
    if not vectors:
        raise EmptyCorpus("no snippet survived vocabulary filtering")

    grid = train_som(vectors, params.topology, params.schedule)
    assignment = assign_snippets(grid, vectors)
    retina = build_retina(
        assignment,
        kept,
        vocab,
        BuildConfig(params.topology, params.word_cap, params.weighting),
        name=params.name,
        description=params.description,
        tokenizer=params.tokenizer,
    )
    return BuildResult(
        retina=retina,
        quality=map_quality(grid, vectors),
        snippet_count=len(kept),
        dropped_snippets=dropped,
    )
