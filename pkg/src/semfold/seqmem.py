"""Sequence memory over fingerprints.

A single-order memory of word-fingerprint sequences: every observed prefix
keys a weighted stack of the bits that followed it.  Replaying a learned
sequence is predicted perfectly; unseen prefixes are answered by blending
the successor stacks of similar stored prefixes, which is what lets the
memory complete sentences it has never been shown.

The memory works purely on position sets; it never sees term strings.
Decoding a prediction back to a word goes through a retina's similarity
ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ExperimentVocabError, NoPrediction
from .fingerprint import Fingerprint, GridTopology, WeightedStack, sparsify
from .retina import Retina

__all__ = [
    "PredictorConfig",
    "AnomalyScore",
    "SequenceMemory",
    "decode",
    "ExperimentTranscript",
    "run_experiment",
    "EXPERIMENT_NAMES",
]

_PrefixKey = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PredictorConfig:
    """Prediction behavior of a sequence memory.

    match_mode "exact" answers only literally seen prefixes;  "similarity"
    additionally blends the successors of similar stored prefixes.  A stored
    prefix is comparable when it is at least as long as the current one; the
    two are compared element-wise over their trailing positions by mean
    fingerprint cosine.  Prefixes scoring below ``similarity_floor`` are
    ignored; of the rest, only those within ``blend_band`` of the best match
    contribute, weighted by their match quality.  Predictions are cut to
    ``prediction_sparsity`` of the grid; the default equals the word-cap
    fraction so an unambiguous recalled word survives uncut.
    """

    match_mode: str = "similarity"
    similarity_floor: float = 0.2
    prediction_sparsity: float = 0.025
    blend_band: float = 0.9

    def __post_init__(self) -> None:
        if self.match_mode not in ("exact", "similarity"):
            raise ValueError(f"unknown match_mode {self.match_mode!r}")
        if not 0.0 <= self.similarity_floor <= 1.0:
            raise ValueError("similarity_floor must be in [0, 1]")
        if not 0.0 < self.prediction_sparsity <= 1.0:
            raise ValueError("prediction_sparsity must be in (0, 1]")
        if not 0.0 < self.blend_band <= 1.0:
            raise ValueError("blend_band must be in (0, 1]")


@dataclass(frozen=True)
class AnomalyScore:
    """How unexpected one observed word was.

    value is ``1 - cosine(predicted, observed)``, clamped to [0, 1], and
    exactly 1 when nothing was predicted.  prediction carries the
    fingerprint the memory expected, if any.
    """

    value: float
    prediction: Fingerprint | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError("anomaly value must be in [0, 1]")


def _cosine(a: tuple[int, ...], b: tuple[int, ...]) -> float:
    if not a or not b:
        return 0.0
    ov = len(frozenset(a) & frozenset(b))
    return ov / math.sqrt(len(a) * len(b))


class SequenceMemory:
    """Online learner of fingerprint sequences.

    Single-writer: one thread feeds words via :meth:`learn_step` and closes
    sequences with :meth:`end_of_sequence`.  Prediction methods do not
    mutate state.
    """

    def __init__(self, topology: GridTopology, config: PredictorConfig | None = None):
        self.topology = topology
        self.config = config or PredictorConfig()
        self._transitions: dict[_PrefixKey, dict[int, float]] = {}
        self._current: list[Fingerprint] = []
        self._cosine_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}

    # -- learning -------------------------------------------------------------

    def learn_step(self, observed: Fingerprint) -> AnomalyScore:
        """Ingest the next word of the current sequence.

        The prediction standing *before* the word arrives is compared with
        the observation; then the transition from the current prefix to the
        observed fingerprint is strengthened and the word is appended to the
        running sequence.
        """
        if observed.topology != self.topology:
            raise ValueError("observed fingerprint is on a different grid")
        predicted = self.predict_next()
        if predicted is None or len(predicted) == 0 or len(observed) == 0:
            score = 1.0
        else:
            score = 1.0 - _cosine(predicted.positions, observed.positions)
        key = tuple(fp.positions for fp in self._current)
        stack = self._transitions.setdefault(key, {})
        for p in observed.positions:
            stack[p] = stack.get(p, 0.0) + 1.0
        self._current.append(observed)
        return AnomalyScore(min(1.0, max(0.0, score)), predicted)

    def end_of_sequence(self) -> None:
        """Close the current sequence (the full-stop signal).  Idempotent."""
        self._current.clear()

    @property
    def sequence_length(self) -> int:
        """Words ingested since the last sequence end."""
        return len(self._current)

    # -- prediction -----------------------------------------------------------

    def _target_bits(self) -> int:
        return max(1, math.floor(self.config.prediction_sparsity * self.topology.size))

    def _pair_cosine(self, a: tuple[int, ...], b: tuple[int, ...]) -> float:
        key = (a, b) if a <= b else (b, a)
        hit = self._cosine_cache.get(key)
        if hit is None:
            hit = _cosine(a, b)
            self._cosine_cache[key] = hit
        return hit

    def predict_for(self, prefix: Sequence[Fingerprint]) -> Fingerprint | None:
        """Predict the fingerprint following an arbitrary prefix.

        Pure: the memory is not modified.  An exactly stored prefix answers
        directly; otherwise, under similarity matching, the successor stacks
        of sufficiently similar stored prefixes are blended.
        """
        query: _PrefixKey = tuple(fp.positions for fp in prefix)
        exact = self._transitions.get(query)
        if exact:
            return sparsify(WeightedStack(self.topology, exact), self._target_bits())
        if self.config.match_mode == "exact" or not query:
            return None

        floor = self.config.similarity_floor
        q_len = len(query)
        matches: list[tuple[float, dict[int, float]]] = []
        for key, stack in self._transitions.items():
            if len(key) < q_len or not stack:
                continue
            tail = key[-q_len:]
            quality = sum(
                self._pair_cosine(query[i], tail[i]) for i in range(q_len)
            ) / q_len
            if quality >= floor:
                matches.append((quality, stack))
        if not matches:
            return None
        best = max(q for q, _ in matches)
        cutoff = best * self.config.blend_band
        blended: dict[int, float] = {}
        for quality, stack in matches:
            if quality < cutoff:
                continue
            for p, w in stack.items():
                blended[p] = blended.get(p, 0.0) + quality * w
        return sparsify(WeightedStack(self.topology, blended), self._target_bits())

    def predict_next(self) -> Fingerprint | None:
        """Prediction for the word that would come next in the running sequence."""
        return self.predict_for(self._current)


def decode(prediction: Fingerprint | None, retina: Retina) -> str:
    """Name a predicted fingerprint with the retina's closest term.

    Raises:
        NoPrediction: if there is no prediction or it has no set bits.
    """
    if prediction is None or len(prediction) == 0:
        raise NoPrediction("nothing to decode")
    return retina.similar_terms(prediction, k=1)[0][0]


# --------------------------------------------------------------------------
# desk-scale inference experiments
# --------------------------------------------------------------------------

EXPERIMENT_NAMES = ("fox", "physicists")


@dataclass(frozen=True)
class ExperimentTranscript:
    """Outcome of one experiment: 'query => answer' lines in query order."""

    name: str
    answers: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    @property
    def lines(self) -> tuple[str, ...]:
        return tuple(f"{query} => {answer}" for query, answer in self.answers)

    def answer(self, query: str) -> str:
        for q, a in self.answers:
            if q == query:
                return a
        raise KeyError(query)

    def __str__(self) -> str:
        return "\n".join(self.lines)


def _flat_tokens(sentences: Iterable[str], retina: Retina) -> list[list[str]]:
    from .corpus import tokenize

    out = []
    for sentence in sentences:
        parsed = tokenize(sentence, retina.tokenizer)
        tokens = [t for chunk in parsed for t in chunk]
        if tokens:
            out.append(tokens)
    return out


def run_experiment(
    name: str,
    retina: Retina | None = None,
    config: PredictorConfig | None = None,
    seed: int = 0,
) -> ExperimentTranscript:
    """Run one of the bundled sentence-completion experiments.

    The named dataset's sentences are fed word by word into a fresh
    sequence memory (full stop closes each sequence); the dataset's queries
    are then answered by predicting the next fingerprint after the query
    words and decoding it against the retina.

    Args:
        name: "fox" (single animal-diet query) or "physicists" (13 queries
            over professions).
        retina: word encoder; the bundled toy retina is built when omitted.
        config: predictor settings, default similarity matching.
        seed: build seed for the toy retina when ``retina`` is omitted.

    Raises:
        ExperimentVocabError: if any dataset or query word has no
            fingerprint in the retina.
    """
    from . import data

    if name not in EXPERIMENT_NAMES:
        raise ValueError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")
    if retina is None:
        retina = data.build_toy_retina(seed=seed)
    sentences, queries = data.experiment_dataset(name)

    token_rows = _flat_tokens(sentences, retina)
    query_rows = _flat_tokens(queries, retina)
    missing = sorted(
        {
            t
            for row in token_rows + query_rows
            for t in row
            if t not in retina.fingerprints
        }
    )
    if missing:
        raise ExperimentVocabError(missing)

    memory = SequenceMemory(retina.topology, config)
    for row in token_rows:
        for token in row:
            memory.learn_step(retina.fingerprints[token])
        memory.end_of_sequence()

    answers = []
    for query, row in zip(queries, query_rows):
        prediction = memory.predict_for([retina.fingerprints[t] for t in row])
        try:
            answer = decode(prediction, retina)
        except NoPrediction:
            answer = "?"
        answers.append((query, answer))
    return ExperimentTranscript(name=name, answers=tuple(answers))
