"""Reference-corpus preprocessing: tokenization, snippets, vocabulary.

The training pipeline consumes plain-text documents, splits them into
sentence-bounded snippets, and derives a frequency-filtered vocabulary.
Snippets never span document boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCorpus

__all__ = [
    "TokenizerConfig",
    "Document",
    "Snippet",
    "TermStats",
    "Vocabulary",
    "tokenize",
    "sentence_spans",
    "normalize_term",
    "cut_snippets",
    "build_vocabulary",
]


@dataclass(frozen=True)
class TokenizerConfig:
    """Controls how raw text becomes sentences of tokens.

    lowercase folds case before anything else.  terminators are the single
    characters that end a sentence.  phrase_lexicon lists multiword phrases
    (space-separated) that are merged into one underscore-joined token before
    sentence splitting, longest phrase first.  Tokens shorter than
    min_token_length are dropped.
    """

    lowercase: bool = True
    terminators: frozenset[str] = frozenset({".", "!", "?"})
    min_token_length: int = 1
    phrase_lexicon: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        for t in self.terminators:
            if len(t) != 1:
                raise ValueError(f"terminators must be single characters: {t!r}")
        if not self.terminators:
            raise ValueError("at least one sentence terminator is required")

    @cached_property
    def _terminator_re(self) -> re.Pattern[str]:
        return re.compile("[" + re.escape("".join(sorted(self.terminators))) + "]+")

    @cached_property
    def _phrase_patterns(self) -> tuple[tuple[re.Pattern[str], str], ...]:
        # Longest phrases first so nested phrases cannot shadow longer ones.
        prepared = []
        for phrase in sorted(self.phrase_lexicon, key=lambda p: (-len(p.split()), p)):
            words = phrase.lower().split()
            if len(words) < 2:
                continue
            pattern = re.compile(
                r"\b" + r"\s+".join(re.escape(w) for w in words) + r"\b",
                re.IGNORECASE,
            )
            prepared.append((pattern, "_".join(words)))
        return tuple(prepared)


_NON_WORD_RE = re.compile(r"[^\w]+", re.UNICODE)


def _chunk_tokens(chunk: str, config: TokenizerConfig) -> list[str]:
    if config.lowercase:
        chunk = chunk.casefold()
    for pattern, joined in config._phrase_patterns:
        chunk = pattern.sub(joined, chunk)
    cleaned = _NON_WORD_RE.sub(" ", chunk)
    return [t for t in cleaned.split() if len(t) >= config.min_token_length]


def sentence_spans(text: str, config: TokenizerConfig | None = None) -> list[tuple[int, int]]:
    """Character spans of the sentences in ``text``, partitioning it exactly.

    A span runs from the end of the previous sentence (terminator run plus
    any following whitespace) to the end of its own.  Concatenating the spans
    reproduces the input verbatim.  Whitespace-only spans are merged into
    their predecessor.
    """
    config = config or TokenizerConfig()
    if not text:
        return []
    boundaries = []
    for match in config._terminator_re.finditer(text):
        end = match.end()
        while end < len(text) and text[end].isspace():
            end += 1
        boundaries.append(end)
    if not boundaries or boundaries[-1] != len(text):
        boundaries.append(len(text))
    spans: list[tuple[int, int]] = []
    prev = 0
    for end in boundaries:
        if end <= prev:
            continue
        if text[prev:end].strip():
            spans.append((prev, end))
        elif spans:
            spans[-1] = (spans[-1][0], end)
        else:
            spans.append((prev, end))
        prev = end
    return spans


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[list[str]]:
    """Split text into sentences of tokens.

    Sentences are delimited by terminator characters; within a sentence,
    phrases from the lexicon are merged, remaining punctuation is stripped,
    and whitespace separates tokens.  Sentences with no surviving tokens are
    dropped.
    """
    config = config or TokenizerConfig()
    sentences = []
    for start, end in sentence_spans(text, config):
        tokens = _chunk_tokens(text[start:end], config)
        if tokens:
            sentences.append(tokens)
    return sentences


def normalize_term(term: str, config: TokenizerConfig | None = None) -> str:
    """Fold a lookup term the same way the tokenizer folds corpus text.

    Multiword input is joined with underscores so a phrase built into a
    retina ("new york" -> "new_york") resolves from its natural spelling.
    """
    config = config or TokenizerConfig()
    if config.lowercase:
        term = term.casefold()
    return "_".join(term.split())


@dataclass(frozen=True)
class Document:
    """A raw corpus document."""

    doc_id: str
    text: str


@dataclass(frozen=True)
class Snippet:
    """A contiguous run of sentences from one document.

    snippet_id is globally sequential across the corpus build; tokens keep
    sentence order.
    """

    snippet_id: int
    doc_id: str
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("a snippet must contain at least one token")

    @cached_property
    def term_set(self) -> frozenset[str]:
        return frozenset(self.tokens)


def cut_snippets(
    doc: Document,
    snippet_sentences: int = 1,
    config: TokenizerConfig | None = None,
    start_id: int = 0,
) -> list[Snippet]:
    """Cut one document into consecutive, non-overlapping snippets.

    Every ``snippet_sentences`` sentences become one snippet; a final
    partial group is kept.  Snippet ids are assigned sequentially from
    ``start_id`` so a multi-document build can chain calls without clashes.
    """
    if snippet_sentences < 1:
        raise ValueError("snippet_sentences must be >= 1")
    sentences = tokenize(doc.text, config)
    snippets = []
    next_id = start_id
    for i in range(0, len(sentences), snippet_sentences):
        group = sentences[i : i + snippet_sentences]
        tokens = tuple(t for sentence in group for t in sentence)
        snippets.append(Snippet(next_id, doc.doc_id, tokens))
        next_id += 1
    return snippets


@dataclass(frozen=True)
class TermStats:
    """Corpus frequencies for one vocabulary term."""

    document_frequency: int
    snippet_frequency: int


@dataclass(frozen=True)
class Vocabulary:
    """The filtered term inventory of a corpus.

    terms maps each surviving term to its frequencies; total_snippets is the
    snippet count of the whole corpus (before filtering), which drives idf.
    """

    total_snippets: int
    terms: Mapping[str, TermStats] = field(default_factory=dict)

    def __contains__(self, term: str) -> bool:
        return term in self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def snippet_frequency(self, term: str) -> int:
        return self.terms[term].snippet_frequency


def build_vocabulary(
    snippets: Sequence[Snippet],
    min_snippet_freq: int = 1,
    max_snippet_ratio: float = 0.4,
) -> Vocabulary:
    """Count term frequencies and filter rare terms and stopwords.

    A term survives iff it occurs in at least ``min_snippet_freq`` snippets
    and in no more than ``max_snippet_ratio`` of all snippets (strictly
    above the cap means excluded).  The cap is the stopword filter: words
    spread over too many snippets carry no positional meaning.

    Raises:
        EmptyCorpus: if no snippets are given.
    """
    if not snippets:
        raise EmptyCorpus("cannot build a vocabulary from zero snippets")
    if min_snippet_freq < 1:
        raise ValueError("min_snippet_freq must be >= 1")
    if not 0.0 < max_snippet_ratio <= 1.0:
        raise ValueError("max_snippet_ratio must be in (0, 1]")
    snippet_freq: dict[str, int] = {}
    doc_sets: dict[str, set[str]] = {}
    for snippet in snippets:
        for term in snippet.term_set:
            snippet_freq[term] = snippet_freq.get(term, 0) + 1
            doc_sets.setdefault(term, set()).add(snippet.doc_id)
    total = len(snippets)
    cap = max_snippet_ratio * total
    terms = {
        term: TermStats(document_frequency=len(doc_sets[term]), snippet_frequency=sf)
        for term, sf in snippet_freq.items()
        if sf >= min_snippet_freq and sf <= cap
    }
    return Vocabulary(total_snippets=total, terms=terms)
