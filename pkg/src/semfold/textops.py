"""Operations on text via word-fingerprint aggregation.

Everything here works purely on the fingerprint level: a text becomes the
sparsified stack of its words' fingerprints, and keywords, slicing, contexts,
Boolean expressions, classification, and visual comparison all manipulate
those position sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Final, Iterable, Sequence

import numpy as np

from .corpus import normalize_term, sentence_spans, tokenize
from .errors import (
    EmptyClassError,
    EmptyTextError,
    FormatError,
    TermNotFound,
    TopologyMismatch,
)
from .fingerprint import (
    MAX_SPARSITY,
    BooleanOp,
    Fingerprint,
    WeightedStack,
    boolean_op,
    similarity,
    sparsify,
)
from .retina import Retina

__all__ = [
    "TEXT_SPARSITY",
    "TextFingerprint",
    "SliceResult",
    "Context",
    "CategoryFilter",
    "ClassificationResult",
    "ImagePalette",
    "DEFAULT_PALETTE",
    "text_fingerprint",
    "keywords",
    "slices",
    "contexts",
    "evaluate_expression",
    "resolve_fingerprint",
    "create_category_filter",
    "classify",
    "render_comparison_image",
]

#: Default fill ratio for aggregated text fingerprints.
TEXT_SPARSITY: Final[float] = 0.02


@dataclass(frozen=True)
class TextFingerprint:
    """Result of aggregating a text: the fingerprint plus bookkeeping."""

    fingerprint: Fingerprint
    known_words: int
    skipped_words: int


def _target_bits(retina: Retina, target_sparsity: float, max_sparsity: float) -> int:
    if not 0.0 < target_sparsity <= max_sparsity:
        raise ValueError(
            f"target_sparsity must be in (0, {max_sparsity}], got {target_sparsity}"
        )
    return max(1, math.floor(target_sparsity * retina.topology.size))


def text_fingerprint(
    text: str,
    retina: Retina,
    target_sparsity: float = TEXT_SPARSITY,
    max_sparsity: float = MAX_SPARSITY,
) -> TextFingerprint:
    """Aggregate a text into one fingerprint.

    Every occurrence of an in-vocabulary word stacks weight 1 onto that
    word's positions; the stack is then cut to ``floor(target_sparsity *
    grid size)`` bits (at least 1), heaviest bits first, ties toward lower
    positions.  Out-of-vocabulary words are skipped and counted.

    Raises:
        EmptyTextError: if no word of the text is in the retina.
    """
    target = _target_bits(retina, target_sparsity, max_sparsity)
    weights: dict[int, float] = {}
    known = 0
    skipped = 0
    for sentence in tokenize(text, retina.tokenizer):
        for token in sentence:
            fp = retina.fingerprints.get(token)
            if fp is None:
                skipped += 1
                continue
            known += 1
            for p in fp.positions:
                weights[p] = weights.get(p, 0.0) + 1.0
    if known == 0:
        raise EmptyTextError(
            f"no usable words in text ({skipped} unknown)" if skipped else "empty text"
        )
    stack = WeightedStack(retina.topology, weights)
    return TextFingerprint(sparsify(stack, target), known, skipped)


# --------------------------------------------------------------------------
# keywords
# --------------------------------------------------------------------------


def keywords(
    text: str,
    retina: Retina,
    max_k: int = 10,
    coverage_goal: float = 1.0,
    target_sparsity: float = TEXT_SPARSITY,
    max_sparsity: float = MAX_SPARSITY,
) -> list[str]:
    """Pick the words that together best reconstruct the text's fingerprint.

    Greedy set cover over the document fingerprint: each round selects the
    in-text word covering the most still-uncovered bits.  Ties prefer the
    word whose own fingerprint is most cosine-similar to the document
    fingerprint, then the lexicographically smaller word.  Selection stops
    at ``max_k`` words, at ``coverage_goal`` coverage, or when no candidate
    adds a new bit.

    Raises:
        EmptyTextError: if no word of the text is in the retina.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    if not 0.0 < coverage_goal <= 1.0:
        raise ValueError("coverage_goal must be in (0, 1]")
    doc = text_fingerprint(text, retina, target_sparsity, max_sparsity).fingerprint
    doc_set = doc.position_set
    candidates = sorted(
        {token for sentence in tokenize(text, retina.tokenizer) for token in sentence}
        & set(retina.fingerprints)
    )
    tie_rank = {
        term: similarity(retina.fingerprints[term], doc).cosine for term in candidates
    }
    uncovered = set(doc_set)
    chosen: list[str] = []
    while len(chosen) < max_k and uncovered:
        covered_fraction = 1.0 - len(uncovered) / len(doc_set)
        if covered_fraction >= coverage_goal:
            break
        best_term = None
        best_key: tuple[int, float, str] | None = None
        for term in candidates:
            if term in chosen:
                continue
            gain = len(retina.fingerprints[term].position_set & uncovered)
            key = (-gain, -tie_rank[term], term)
            if best_key is None or key < best_key:
                best_key = key
                best_term = term
        if best_term is None or best_key is None or best_key[0] == 0:
            break
        chosen.append(best_term)
        uncovered -= retina.fingerprints[best_term].position_set
    return chosen


# --------------------------------------------------------------------------
# semantic slicing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceResult:
    """One topically coherent span of the input text."""

    text: str
    fingerprint: Fingerprint


def _span_fingerprint(text: str, retina: Retina, target_sparsity: float) -> Fingerprint:
    try:
        return text_fingerprint(text, retina, target_sparsity).fingerprint
    except EmptyTextError:
        return Fingerprint(retina.topology)


def slices(
    text: str,
    retina: Retina,
    window_sentences: int = 1,
    cut_threshold: float = 0.1,
    target_sparsity: float = TEXT_SPARSITY,
) -> list[SliceResult]:
    """Cut a text where its fingerprint changes too much.

    The text is read in consecutive windows of ``window_sentences``
    sentences; a cut happens between two windows whenever the Jaccard
    similarity of their fingerprints falls below ``cut_threshold``.  The
    returned slice texts partition the input exactly; each carries the
    fingerprint of its merged span.  Texts of fewer than two windows come
    back as a single slice.
    """
    if window_sentences < 1:
        raise ValueError("window_sentences must be >= 1")
    if cut_threshold < 0.0:
        raise ValueError("cut_threshold must be >= 0")
    spans = sentence_spans(text, retina.tokenizer)
    if not spans:
        return []
    windows = [
        (spans[i][0], spans[min(i + window_sentences, len(spans)) - 1][1])
        for i in range(0, len(spans), window_sentences)
    ]
    fps = [_span_fingerprint(text[a:b], retina, target_sparsity) for a, b in windows]
    groups: list[list[int]] = [[0]]
    for i in range(1, len(windows)):
        a, b = fps[i - 1].position_set, fps[i].position_set
        union = len(a | b)
        jaccard = len(a & b) / union if union else 0.0
        if jaccard < cut_threshold:
            groups.append([i])
        else:
            groups[-1].append(i)
    out = []
    for group in groups:
        start = windows[group[0]][0]
        end = windows[group[-1]][1]
        chunk = text[start:end]
        out.append(SliceResult(chunk, _span_fingerprint(chunk, retina, target_sparsity)))
    return out


# --------------------------------------------------------------------------
# contexts (word-sense decomposition)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """One sense of a term: a label word plus terms shared with that sense."""

    label: str
    terms: tuple[str, ...]


def contexts(
    term: str,
    retina: Retina,
    max_contexts: int = 10,
    min_remaining_bits: int = 1,
    terms_per_context: int = 5,
) -> list[Context]:
    """Decompose a term's fingerprint into its distinct usage contexts.

    Iteratively: the most similar other term labels the first context; all
    bits shared with that label are cleared from a working copy; the next
    label is drawn from what remains, until fewer than
    ``min_remaining_bits`` bits survive or ``max_contexts`` is reached.
    Each context lists the terms most similar to the overlap of the original
    fingerprint with its label (label and query term excluded).

    Raises:
        TermNotFound: if the term is not in the retina.
    """
    if max_contexts < 1 or min_remaining_bits < 1 or terms_per_context < 0:
        raise ValueError("contexts parameters must be positive")
    folded = normalize_term(term, retina.tokenizer)
    full = retina.get_fingerprint(term)
    residual = full
    taken: set[str] = {folded}
    found: list[Context] = []
    while len(found) < max_contexts and len(residual) >= min_remaining_bits:
        label = None
        for candidate, score in retina.similar_terms(residual, k=len(retina)):
            if score <= 0.0:
                break
            if candidate not in taken:
                label = candidate
                break
        if label is None:
            break
        shared = boolean_op(BooleanOp.AND, full, retina.fingerprints[label])
        neighbor_terms = []
        if terms_per_context and len(shared):
            for candidate, score in retina.similar_terms(shared, k=len(retina)):
                if score <= 0.0 or len(neighbor_terms) >= terms_per_context:
                    break
                if candidate != folded and candidate != label:
                    neighbor_terms.append(candidate)
        found.append(Context(label, tuple(neighbor_terms)))
        taken.add(label)
        residual = boolean_op(BooleanOp.SUB, residual, retina.fingerprints[label])
    return found


# --------------------------------------------------------------------------
# Boolean expressions over fingerprints
# --------------------------------------------------------------------------

_EXPR_OPS = {"and": BooleanOp.AND, "or": BooleanOp.OR, "sub": BooleanOp.SUB}
_LEAF_KEYS = {"term", "text", "positions"}


def _eval_node(node: object, retina: Retina, target_sparsity: float, path: str) -> Fingerprint:
    if not isinstance(node, dict) or len(node) != 1:
        raise FormatError(f"expression node at {path} must be a single-key object")
    key, value = next(iter(node.items()))
    if key in _EXPR_OPS:
        if not isinstance(value, list) or len(value) < 2:
            raise FormatError(f"operator {key!r} at {path} needs a list of >= 2 operands")
        result = _eval_node(value[0], retina, target_sparsity, f"{path}.{key}[0]")
        for i, child in enumerate(value[1:], start=1):
            operand = _eval_node(child, retina, target_sparsity, f"{path}.{key}[{i}]")
            result = boolean_op(_EXPR_OPS[key], result, operand)
        return result
    if key == "term":
        try:
            return retina.get_fingerprint(str(value))
        except TermNotFound as exc:
            raise TermNotFound(str(value), detail=f"at {path}.term") from None
    if key == "text":
        return text_fingerprint(str(value), retina, target_sparsity).fingerprint
    if key == "positions":
        if not isinstance(value, list) or not all(isinstance(p, int) for p in value):
            raise FormatError(f"positions at {path} must be a list of ints")
        try:
            return Fingerprint(retina.topology, tuple(sorted(set(value))))
        except ValueError as exc:
            raise FormatError(f"invalid positions at {path}: {exc}") from exc
    raise FormatError(f"unknown expression key {key!r} at {path}")


def evaluate_expression(
    expr: dict,
    retina: Retina,
    target_sparsity: float = TEXT_SPARSITY,
) -> Fingerprint:
    """Evaluate a Boolean fingerprint expression tree.

    Nodes are single-key objects: operators ``{"and"|"or"|"sub": [child,
    ...]}`` (``sub`` folds left to right) and leaves ``{"term": str}``,
    ``{"text": str}``, ``{"positions": [int, ...]}``.

    Raises:
        TermNotFound: for an unresolvable term leaf; the error carries the
            leaf's path inside the tree.
        FormatError: for a malformed tree.
    """
    return _eval_node(expr, retina, target_sparsity, "$")


def resolve_fingerprint(
    source: dict,
    retina: Retina,
    target_sparsity: float = TEXT_SPARSITY,
) -> Fingerprint:
    """Resolve a ``{"term"|"text"|"positions": ...}`` object to a fingerprint.

    The same leaf forms the expression evaluator accepts; full operator
    trees are also allowed.
    """
    return evaluate_expression(source, retina, target_sparsity)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CategoryFilter:
    """A category prototype fingerprint with an acceptance cutoff."""

    label: str
    fingerprint: Fingerprint
    cutoff: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.cutoff <= 1.0:
            raise ValueError("cutoff must be in [0, 1]")


@dataclass(frozen=True)
class ClassificationResult:
    """Score of one document against one category filter."""

    label: str
    score: float
    accepted: bool


def create_category_filter(
    label: str,
    positive_texts: Sequence[str],
    retina: Retina,
    negative_texts: Sequence[str] = (),
    cutoff: float = 0.5,
    target_sparsity: float = TEXT_SPARSITY,
    max_sparsity: float = MAX_SPARSITY,
) -> CategoryFilter:
    """Build a category filter from example texts, without any training.

    Positive example fingerprints are stacked bit-wise; if negative examples
    are given, each bit's negative stack weight is subtracted from its
    positive weight.  The surviving weights are sparsified to the target.

    Raises:
        EmptyClassError: if no positive texts are given.
        EmptyTextError: if a text contains no known words.
    """
    if not positive_texts:
        raise EmptyClassError(f"category {label!r} needs at least one positive text")
    target = _target_bits(retina, target_sparsity, max_sparsity)
    weights: dict[int, float] = {}
    for text in positive_texts:
        fp = text_fingerprint(text, retina, target_sparsity, max_sparsity).fingerprint
        for p in fp.positions:
            weights[p] = weights.get(p, 0.0) + 1.0
    for text in negative_texts:
        fp = text_fingerprint(text, retina, target_sparsity, max_sparsity).fingerprint
        for p in fp.positions:
            if p in weights:
                weights[p] -= 1.0
    stack = WeightedStack(retina.topology, {p: w for p, w in weights.items() if w > 0})
    return CategoryFilter(label, sparsify(stack, target), cutoff)


def classify(doc_fp: Fingerprint, filters: Sequence[CategoryFilter]) -> list[ClassificationResult]:
    """Score a document fingerprint against every filter.

    Scores are cosine similarities; a document is accepted by every filter
    whose score reaches the filter's cutoff, so multi-label outcomes are
    expected.  Results come back sorted by descending score, ties by label.
    """
    results = []
    for f in filters:
        if f.fingerprint.topology != doc_fp.topology:
            raise TopologyMismatch(f"filter {f.label!r} grid differs from document grid")
        score = similarity(doc_fp, f.fingerprint).cosine
        results.append(ClassificationResult(f.label, score, score >= f.cutoff))
    return sorted(results, key=lambda r: (-r.score, r.label))


# --------------------------------------------------------------------------
# comparison images
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ImagePalette:
    """RGB colors for the four cell states of a comparison image."""

    background: tuple[int, int, int] = (20, 20, 20)
    a_only: tuple[int, int, int] = (68, 136, 240)
    b_only: tuple[int, int, int] = (240, 156, 48)
    overlap: tuple[int, int, int] = (248, 248, 248)


DEFAULT_PALETTE: Final[ImagePalette] = ImagePalette()


def render_comparison_image(
    a: Fingerprint,
    b: Fingerprint,
    scale: int = 4,
    palette: ImagePalette = DEFAULT_PALETTE,
) -> bytes:
    """Render two fingerprints on their grid as a binary P6 pixmap.

    Each grid cell becomes a ``scale x scale`` pixel block colored by its
    state: set in both, only in ``a``, only in ``b``, or unset.  The output
    is deterministic byte-for-byte for equal inputs.

    Raises:
        TopologyMismatch: if the fingerprints live on different grids.
    """
    if a.topology != b.topology:
        raise TopologyMismatch(f"{a.topology} != {b.topology}")
    if scale < 1:
        raise ValueError("scale must be >= 1")
    topo = a.topology
    img = np.empty((topo.rows, topo.cols, 3), dtype=np.uint8)
    img[:, :] = palette.background
    flat = img.reshape(topo.size, 3)
    only_a = a.position_set - b.position_set
    only_b = b.position_set - a.position_set
    both = a.position_set & b.position_set
    if only_a:
        flat[sorted(only_a)] = palette.a_only
    if only_b:
        flat[sorted(only_b)] = palette.b_only
    if both:
        flat[sorted(both)] = palette.overlap
    img = np.repeat(np.repeat(img, scale, axis=0), scale, axis=1)
    header = f"P6\n{topo.cols * scale} {topo.rows * scale}\n255\n".encode("ascii")
    return header + img.tobytes()
