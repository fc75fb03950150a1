"""The retina: a queryable database of word fingerprints.

Built from a trained snippet assignment, the retina stores one fingerprint
per vocabulary term (the set of grid cells whose snippets contain the term),
the per-cell term bags that ground those fingerprints, and corpus
frequencies.  It persists to a single little-endian binary file.
"""

from __future__ import annotations

import math
import os
import struct
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Snippet, TokenizerConfig, Vocabulary, normalize_term
from .errors import BuildError, CorruptFile, FormatError, TermNotFound, TopologyMismatch
from .fingerprint import (
    Fingerprint,
    GridTopology,
    PackedFingerprints,
    WeightedStack,
    _read_varint,
    _write_varint,
    sparsify,
)
from .som import CellAssignment

__all__ = ["BuildConfig", "RetinaInfo", "Retina", "build_retina", "WORD_CAP_FRACTION"]

#: Fraction of grid cells a single word fingerprint may occupy at most.
WORD_CAP_FRACTION = 0.025

_RETINA_MAGIC = b"SFRETINA"
_RETINA_VERSION = 1


@dataclass(frozen=True)
class BuildConfig:
    """Parameters of retina construction.

    word_cap limits how many cells a single term may keep (default 2.5% of
    the grid, e.g. 409 on 128x128); heavier cells win, ties go to the lower
    cell index.  weighting picks how cell weights are accumulated: "tfidf"
    sums the term's tf-idf over the cell's snippets, "binary" marks plain
    presence.
    """

    topology: GridTopology = GridTopology()
    word_cap: int | None = None
    weighting: str = "tfidf"

    def __post_init__(self) -> None:
        if self.weighting not in ("tfidf", "binary"):
            raise ValueError(f"unknown weighting {self.weighting!r}")
        if self.word_cap is not None and self.word_cap < 1:
            raise ValueError("word_cap must be >= 1")

    @property
    def effective_word_cap(self) -> int:
        if self.word_cap is not None:
            return self.word_cap
        return max(1, math.floor(WORD_CAP_FRACTION * self.topology.size))


@dataclass(frozen=True)
class RetinaInfo:
    """Descriptive metadata of a retina."""

    retina_name: str
    description: str
    number_of_terms: int
    rows: int
    cols: int

    def to_dict(self) -> dict:
        """The wire form with its canonical field names."""
        return {
            "retinaName": self.retina_name,
            "description": self.description,
            "numberOfTermsInRetina": self.number_of_terms,
            "numberOfRows": self.rows,
            "numberOfColumns": self.cols,
        }


class Retina:
    """Immutable word-fingerprint database over one grid topology."""

    def __init__(
        self,
        name: str,
        description: str,
        topology: GridTopology,
        fingerprints: dict[str, Fingerprint],
        cell_terms: dict[int, dict[str, float]],
        vocab_stats: dict[str, int],
        tokenizer: TokenizerConfig | None = None,
    ):
        for term, fp in fingerprints.items():
            if fp.topology != topology:
                raise BuildError(f"fingerprint of {term!r} is on a different grid")
            if len(fp) == 0:
                raise BuildError(f"term {term!r} has an empty fingerprint")
        self.name = name
        self.description = description
        self.topology = topology
        self.fingerprints = fingerprints
        self.cell_terms = cell_terms
        self.vocab_stats = vocab_stats
        self.tokenizer = tokenizer or TokenizerConfig()
        self._sorted_terms: tuple[str, ...] = tuple(sorted(fingerprints))
        self._packed: PackedFingerprints | None = None

    # -- queries ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.fingerprints)

    def __contains__(self, term: str) -> bool:
        return normalize_term(term, self.tokenizer) in self.fingerprints

    @property
    def terms(self) -> tuple[str, ...]:
        """All vocabulary terms, sorted."""
        return self._sorted_terms

    def get_fingerprint(self, term: str) -> Fingerprint:
        """Look up a term's fingerprint after tokenizer folding.

        Multiword input resolves to its underscore-joined phrase term.

        Raises:
            TermNotFound: if the folded term is not in the vocabulary.
        """
        folded = normalize_term(term, self.tokenizer)
        try:
            return self.fingerprints[folded]
        except KeyError:
            raise TermNotFound(term) from None

    def similar_terms(self, fp: Fingerprint, k: int = 20) -> list[tuple[str, float]]:
        """The k vocabulary terms most cosine-similar to a fingerprint.

        Scores are sorted descending; equal scores are ordered
        lexicographically by term.  k is clamped to the vocabulary size.

        Raises:
            TopologyMismatch: if the fingerprint is on a different grid.
        """
        if fp.topology != self.topology:
            raise TopologyMismatch(f"{fp.topology} != {self.topology}")
        if k < 1:
            raise ValueError("k must be >= 1")
        if self._packed is None:
            fps = [self.fingerprints[t] for t in self._sorted_terms]
            self._packed = PackedFingerprints(self.topology, fps)
        scores = self._packed.cosine(fp)
        k = min(k, len(self._sorted_terms))
        # Sorting (-score, term) keeps the ordering total and deterministic.
        order = np.lexsort((np.array(self._sorted_terms), -scores))[:k]
        return [(self._sorted_terms[i], float(scores[i])) for i in order]

    def info(self) -> RetinaInfo:
        return RetinaInfo(
            retina_name=self.name,
            description=self.description,
            number_of_terms=len(self.fingerprints),
            rows=self.topology.rows,
            cols=self.topology.cols,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Retina):
            return NotImplemented
        return (
            self.name == other.name
            and self.description == other.description
            and self.topology == other.topology
            and self.fingerprints == other.fingerprints
            and self.cell_terms == other.cell_terms
            and self.vocab_stats == other.vocab_stats
            and self.tokenizer == other.tokenizer
        )

    # -- persistence ----------------------------------------------------------

    def save(self, path: str | os.PathLike) -> None:
        """Write the retina to a single binary file, atomically."""
        data = _serialize_retina(self)
        tmp = f"{os.fspath(path)}.tmp"
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Retina":
        """Read a retina file.

        Raises:
            FormatError: wrong magic or unsupported version.
            CorruptFile: truncated or internally inconsistent data; no
                partially populated retina is ever returned.
        """
        with open(path, "rb") as fh:
            data = fh.read()
        return _deserialize_retina(data)


def build_retina(
    assignment: CellAssignment,
    snippets: Sequence[Snippet],
    vocab: Vocabulary,
    config: BuildConfig | None = None,
    name: str = "retina",
    description: str = "",
    tokenizer: TokenizerConfig | None = None,
) -> Retina:
    """Turn an assigned snippet corpus into a retina.

    A term's raw fingerprint is the set of cells holding at least one
    snippet that contains it; each such cell is weighted by the summed
    tf-idf of the term over the cell's snippets (or plain presence under
    binary weighting).  Raw sets wider than the word cap keep only their
    heaviest cells.

    Raises:
        BuildError: if the assignment does not cover every snippet or the
            grid sizes disagree.
    """
    config = config or BuildConfig()
    topology = config.topology
    if assignment.num_cells != topology.size:
        raise BuildError(
            f"assignment covers {assignment.num_cells} cells, grid has {topology.size}"
        )
    term_cells: dict[str, dict[int, float]] = {}
    cell_terms: dict[int, dict[str, float]] = {}
    total = vocab.total_snippets
    for snippet in snippets:
        cell = assignment.snippet_to_cell.get(snippet.snippet_id)
        if cell is None:
            raise BuildError(f"snippet {snippet.snippet_id} has no cell assignment")
        counts = Counter(t for t in snippet.tokens if t in vocab)
        for term, tf in counts.items():
            if config.weighting == "binary":
                weight = 1.0
            else:
                weight = tf * math.log(total / vocab.snippet_frequency(term))
            cells = term_cells.setdefault(term, {})
            bag = cell_terms.setdefault(cell, {})
            if config.weighting == "binary":
                cells[cell] = 1.0
                bag[term] = 1.0
            else:
                cells[cell] = cells.get(cell, 0.0) + weight
                bag[term] = bag.get(term, 0.0) + weight

    cap = config.effective_word_cap
    fingerprints = {}
    for term, cells in term_cells.items():
        stack = WeightedStack(topology, cells)
        if not stack.weights:
            # Terms present in every snippet have idf 0; fall back to plain
            # presence so the fingerprint stays grounded and nonempty.
            stack = WeightedStack(topology, {c: 1.0 for c in cells})
        fingerprints[term] = sparsify(stack, cap)

    vocab_stats = {term: vocab.snippet_frequency(term) for term in fingerprints}
    return Retina(
        name=name,
        description=description,
        topology=topology,
        fingerprints=fingerprints,
        cell_terms=cell_terms,
        vocab_stats=vocab_stats,
        tokenizer=tokenizer,
    )


# --------------------------------------------------------------------------
# binary file format
# --------------------------------------------------------------------------
#
# magic "SFRETINA" | version u8 | rows u32 | cols u32
# name, description: u16 length + utf8
# tokenizer: lowercase u8, min_token_length u16, terminators u16+utf8,
#            phrase count u32, each phrase u16+utf8
# term count u32
# vocab table: per term (sorted) u16+utf8, snippet_frequency u32
# fingerprint block: per term varint bit count + delta varint positions
# cell_terms block: u32 populated cell count; per cell u32 index,
#            u32 entry count, entries of (varint term index, f64 weight)
# All integers little-endian.


def _pack_str(out: bytearray, value: str) -> None:
    raw = value.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise FormatError("string field longer than 65535 bytes")
    out += struct.pack("<H", len(raw))
    out += raw


def _serialize_retina(retina: Retina) -> bytes:
    out = bytearray()
    out += _RETINA_MAGIC
    out.append(_RETINA_VERSION)
    out += struct.pack("<II", retina.topology.rows, retina.topology.cols)
    _pack_str(out, retina.name)
    _pack_str(out, retina.description)

    tok = retina.tokenizer
    out.append(1 if tok.lowercase else 0)
    out += struct.pack("<H", tok.min_token_length)
    _pack_str(out, "".join(sorted(tok.terminators)))
    phrases = sorted(tok.phrase_lexicon)
    out += struct.pack("<I", len(phrases))
    for phrase in phrases:
        _pack_str(out, phrase)

    terms = sorted(retina.fingerprints)
    out += struct.pack("<I", len(terms))
    for term in terms:
        _pack_str(out, term)
        out += struct.pack("<I", retina.vocab_stats.get(term, 0))
    for term in terms:
        positions = retina.fingerprints[term].positions
        _write_varint(out, len(positions))
        prev = 0
        for i, p in enumerate(positions):
            _write_varint(out, p if i == 0 else p - prev)
            prev = p

    term_index = {t: i for i, t in enumerate(terms)}
    populated = sorted(cell for cell, bag in retina.cell_terms.items() if bag)
    out += struct.pack("<I", len(populated))
    for cell in populated:
        bag = retina.cell_terms[cell]
        out += struct.pack("<II", cell, len(bag))
        for term in sorted(bag):
            if term not in term_index:
                raise FormatError(f"cell {cell} references unknown term {term!r}")
            _write_varint(out, term_index[term])
            out += struct.pack("<d", bag[term])
    return bytes(out)


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int) -> bytes:
        if self.offset + n > len(self.data):
            raise CorruptFile("file ends prematurely")
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def string(self) -> str:
        (length,) = self.unpack("<H")
        try:
            return self.take(length).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptFile(f"invalid utf-8 in string field: {exc}") from exc

    def varint(self) -> int:
        value, self.offset = _read_varint(self.data, self.offset)
        return value


def _deserialize_retina(data: bytes) -> Retina:
    if len(data) < len(_RETINA_MAGIC) or data[: len(_RETINA_MAGIC)] != _RETINA_MAGIC:
        raise FormatError("bad magic: not a retina file")
    cur = _Cursor(data)
    cur.take(len(_RETINA_MAGIC))
    version = cur.u8()
    if version != _RETINA_VERSION:
        raise FormatError(f"unsupported retina file version {version}")
    rows, cols = cur.unpack("<II")
    try:
        topology = GridTopology(rows, cols)
    except ValueError as exc:
        raise CorruptFile(str(exc)) from exc
    name = cur.string()
    description = cur.string()

    lowercase = cur.u8() != 0
    (min_len,) = cur.unpack("<H")
    terminators = cur.string()
    (n_phrases,) = cur.unpack("<I")
    phrases = frozenset(cur.string() for _ in range(n_phrases))
    try:
        tokenizer = TokenizerConfig(
            lowercase=lowercase,
            terminators=frozenset(terminators),
            min_token_length=min_len,
            phrase_lexicon=phrases,
        )
    except ValueError as exc:
        raise CorruptFile(f"invalid tokenizer section: {exc}") from exc

    (term_count,) = cur.unpack("<I")
    terms = []
    vocab_stats = {}
    for _ in range(term_count):
        term = cur.string()
        (freq,) = cur.unpack("<I")
        terms.append(term)
        vocab_stats[term] = freq

    fingerprints = {}
    for term in terms:
        count = cur.varint()
        positions = []
        prev = -1
        for i in range(count):
            delta = cur.varint()
            value = delta if i == 0 else prev + delta
            if (i > 0 and delta == 0) or value >= topology.size:
                raise CorruptFile(f"invalid position list for term {term!r}")
            positions.append(value)
            prev = value
        if not positions:
            raise CorruptFile(f"term {term!r} stored with an empty fingerprint")
        fingerprints[term] = Fingerprint._trusted(topology, tuple(positions))

    (n_cells,) = cur.unpack("<I")
    cell_terms: dict[int, dict[str, float]] = {}
    for _ in range(n_cells):
        cell, n_entries = cur.unpack("<II")
        if cell >= topology.size:
            raise CorruptFile(f"cell index {cell} outside grid")
        bag = {}
        for _ in range(n_entries):
            idx = cur.varint()
            if idx >= len(terms):
                raise CorruptFile(f"cell {cell} references term index {idx} out of range")
            (weight,) = cur.unpack("<d")
            bag[terms[idx]] = weight
        cell_terms[cell] = bag

    if cur.offset != len(data):
        raise CorruptFile("trailing bytes after retina payload")
    return Retina(
        name=name,
        description=description,
        topology=topology,
        fingerprints=fingerprints,
        cell_terms=cell_terms,
        vocab_stats=vocab_stats,
        tokenizer=tokenizer,
    )
