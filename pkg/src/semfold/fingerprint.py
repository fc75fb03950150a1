"""Sparse binary fingerprints on a 2D grid and their algebra.

A fingerprint is an immutable set of grid positions (set bits) on a fixed
``rows x cols`` topology, stored as a strictly ascending position tuple.
Positions index the grid row-major: ``p = row * cols + col``.  The default
grid is 128 x 128, i.e. a 16384-bit data width.

The module provides:

* value types: :class:`GridTopology`, :class:`Fingerprint`,
  :class:`WeightedStack`, :class:`SimilarityReport`;
* Boolean algebra (:func:`boolean_op`) and similarity (:func:`similarity`),
  including a grid-aware ``weighted_overlap`` that credits near-miss bits
  with a Gaussian distance falloff;
* sparsity control: :func:`sparsify`, :func:`subsample`, :func:`is_valid_sdr`;
* union membership testing (:func:`union_contains`);
* JSON and binary wire formats plus :class:`PackedFingerprints`, a packed
  bit-matrix for brute-force similarity scans over large fingerprint sets.

All values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Final, Iterable, Mapping, Sequence

import numpy as np

from .errors import CorruptFile, EmptyFingerprint, FormatError, TopologyMismatch

__all__ = [
    "DEFAULT_ROWS",
    "DEFAULT_COLS",
    "MAX_SPARSITY",
    "GAUSS_SIGMA",
    "GridTopology",
    "Fingerprint",
    "WeightedStack",
    "SimilarityReport",
    "BooleanOp",
    "boolean_op",
    "overlap_count",
    "similarity",
    "sparsify",
    "subsample",
    "union_contains",
    "is_valid_sdr",
    "fingerprint_to_json",
    "fingerprint_from_json",
    "fingerprint_to_bytes",
    "fingerprint_from_bytes",
    "PackedFingerprints",
]

DEFAULT_ROWS: Final[int] = 128
DEFAULT_COLS: Final[int] = 128
#: Maximum fraction of set bits for a fingerprint to count as a valid SDR.
MAX_SPARSITY: Final[float] = 0.05
#: Default Gaussian falloff (in cell units) for ``weighted_overlap``.
GAUSS_SIGMA: Final[float] = 1.0

_FP_MAGIC: Final[bytes] = b"SFFP"
_FP_VERSION: Final[int] = 1


# --------------------------------------------------------------------------
# value types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GridTopology:
    """Shape of the 2D grid fingerprints live on.

    Attributes:
        rows: number of grid rows, > 0.
        cols: number of grid columns, > 0.
    """

    rows: int = DEFAULT_ROWS
    cols: int = DEFAULT_COLS

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid dimensions must be positive: {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        """Total number of grid cells (the bit width of a fingerprint)."""
        return self.rows * self.cols

    def coords(self, position: int) -> tuple[int, int]:
        """Map a row-major position to its ``(row, col)`` pair."""
        if not 0 <= position < self.size:
            raise ValueError(f"position {position} outside grid of size {self.size}")
        return divmod(position, self.cols)

    def position(self, row: int, col: int) -> int:
        """Map a ``(row, col)`` pair to its row-major position."""
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise ValueError(f"({row}, {col}) outside {self.rows}x{self.cols} grid")
        return row * self.cols + col


@dataclass(frozen=True)
class Fingerprint:
    """An immutable sparse set of grid positions.

    Attributes:
        topology: the grid this fingerprint is defined on.
        positions: strictly ascending tuple of set-bit positions, each in
            ``[0, topology.size)``.
    """

    topology: GridTopology
    positions: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        size = self.topology.size
        prev = -1
        for p in self.positions:
            if not isinstance(p, int) or p <= prev or p >= size:
                raise ValueError(
                    "positions must be strictly ascending ints within the grid"
                )
            prev = p

    @classmethod
    def from_positions(cls, topology: GridTopology, positions: Iterable[int]) -> "Fingerprint":
        """Build a fingerprint from any iterable, deduplicating and sorting."""
        return cls(topology, tuple(sorted({int(p) for p in positions})))

    @classmethod
    def _trusted(cls, topology: GridTopology, positions: tuple[int, ...]) -> "Fingerprint":
        # Fast path for internally produced, already-sorted position tuples.
        fp = object.__new__(cls)
        object.__setattr__(fp, "topology", topology)
        object.__setattr__(fp, "positions", positions)
        return fp

    @cached_property
    def position_set(self) -> frozenset[int]:
        """The positions as a frozenset, cached for set algebra."""
        return frozenset(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def __contains__(self, position: int) -> bool:
        return position in self.position_set

    @property
    def sparsity(self) -> float:
        """Fraction of grid bits that are set."""
        return len(self.positions) / self.topology.size

    def __and__(self, other: "Fingerprint") -> "Fingerprint":
        return boolean_op(BooleanOp.AND, self, other)

    def __or__(self, other: "Fingerprint") -> "Fingerprint":
        return boolean_op(BooleanOp.OR, self, other)

    def __sub__(self, other: "Fingerprint") -> "Fingerprint":
        return boolean_op(BooleanOp.SUB, self, other)

    def __xor__(self, other: "Fingerprint") -> "Fingerprint":
        return boolean_op(BooleanOp.XOR, self, other)


@dataclass(frozen=True)
class WeightedStack:
    """Accumulated bit weights prior to sparsification.

    Stacking is how several fingerprints are aggregated into one: each
    contributing fingerprint adds weight to every position it sets.  The
    stack keeps only positive weights; an absent position has weight 0.

    Attributes:
        topology: the grid the weights are defined on.
        weights: mapping position -> positive weight.
    """

    topology: GridTopology
    weights: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        size = self.topology.size
        cleaned = {}
        for p, w in self.weights.items():
            if not 0 <= p < size:
                raise ValueError(f"stack position {p} outside grid of size {size}")
            if w > 0:
                cleaned[int(p)] = float(w)
        object.__setattr__(self, "weights", cleaned)

    @classmethod
    def from_fingerprints(
        cls,
        topology: GridTopology,
        fingerprints: Iterable[Fingerprint],
        weights: Iterable[float] | None = None,
    ) -> "WeightedStack":
        """Stack fingerprints, each contributing ``weight`` to its positions.

        Args:
            topology: grid for the stack; every fingerprint must match it.
            fingerprints: contributors.
            weights: optional per-fingerprint weight, default 1.0 each.
        """
        acc: dict[int, float] = {}
        fps = list(fingerprints)
        ws = list(weights) if weights is not None else [1.0] * len(fps)
        if len(ws) != len(fps):
            raise ValueError("weights must align one-to-one with fingerprints")
        for fp, w in zip(fps, ws):
            if fp.topology != topology:
                raise TopologyMismatch(
                    f"stack grid {topology} != fingerprint grid {fp.topology}"
                )
            for p in fp.positions:
                acc[p] = acc.get(p, 0.0) + w
        return cls(topology, acc)


@dataclass(frozen=True)
class SimilarityReport:
    """All pairwise similarity figures for one fingerprint pair.

    Ratio metrics (``jaccard``, ``dice``, ``cosine``, ``weighted_overlap``)
    lie in [0, 1] and are defined as 0 when either operand is empty.
    ``hamming_distance`` counts differing bits; ``euclidean_distance`` is its
    square root.
    """

    overlap_count: int
    jaccard: float
    dice: float
    cosine: float
    hamming_distance: int
    euclidean_distance: float
    weighted_overlap: float


# --------------------------------------------------------------------------
# Boolean algebra
# --------------------------------------------------------------------------


class BooleanOp(Enum):
    """Supported position-set operations."""

    AND = "and"
    OR = "or"
    SUB = "sub"
    XOR = "xor"


def _require_same_grid(a: Fingerprint, b: Fingerprint) -> None:
    if a.topology != b.topology:
        raise TopologyMismatch(f"{a.topology} != {b.topology}")


def boolean_op(kind: BooleanOp | str, a: Fingerprint, b: Fingerprint) -> Fingerprint:
    """Combine two fingerprints with set semantics.

    ``AND`` intersects, ``OR`` unites, ``SUB`` removes ``b``'s bits from
    ``a``, ``XOR`` keeps bits set in exactly one operand.

    Raises:
        TopologyMismatch: if the operands live on different grids.
    """
    _require_same_grid(a, b)
    kind = BooleanOp(kind)
    sa, sb = a.position_set, b.position_set
    if kind is BooleanOp.AND:
        out = sa & sb
    elif kind is BooleanOp.OR:
        out = sa | sb
    elif kind is BooleanOp.SUB:
        out = sa - sb
    else:
        out = sa ^ sb
    return Fingerprint._trusted(a.topology, tuple(sorted(out)))


# --------------------------------------------------------------------------
# similarity
# --------------------------------------------------------------------------


def overlap_count(a: Fingerprint, b: Fingerprint) -> int:
    """Number of positions set in both fingerprints."""
    _require_same_grid(a, b)
    return len(a.position_set & b.position_set)


def _weighted_overlap(a: Fingerprint, b: Fingerprint, sigma: float) -> float:
    """Overlap fraction that also credits near-miss bits.

    Bits are matched one-to-one.  Exact matches score 1; a pair of unmatched
    bits at grid distance d scores ``exp(-d^2 / (2 sigma^2))``.  Pairs are
    claimed greedily in descending score order, each bit used at most once.
    The total is normalized by ``min(|a|, |b|)`` so the result is in [0, 1],
    equals 1 for identical fingerprints, and never falls below the exact
    overlap fraction.
    """
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return 0.0
    shared = a.position_set & b.position_set
    total = float(len(shared))
    rest_a = sorted(a.position_set - shared)
    rest_b = sorted(b.position_set - shared)
    if rest_a and rest_b:
        cols = a.topology.cols
        pa = np.asarray(rest_a, dtype=np.int64)
        pb = np.asarray(rest_b, dtype=np.int64)
        dr = pa[:, None] // cols - pb[None, :] // cols
        dc = pa[:, None] % cols - pb[None, :] % cols
        kernel = np.exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma))
        k_flat = kernel.ravel()
        # Pairs this far apart cannot move the result at float precision;
        # dropping them keeps the greedy loop short for unrelated inputs.
        candidates = np.nonzero(k_flat > 1e-12)[0]
        order = candidates[np.argsort(-k_flat[candidates], kind="stable")]
        used_a = np.zeros(len(rest_a), dtype=bool)
        used_b = np.zeros(len(rest_b), dtype=bool)
        nb_rest = len(rest_b)
        remaining = min(len(rest_a), len(rest_b))
        for idx in order:
            i, j = divmod(int(idx), nb_rest)
            if used_a[i] or used_b[j]:
                continue
            total += float(k_flat[idx])
            used_a[i] = True
            used_b[j] = True
            remaining -= 1
            if remaining == 0:
                break
    return total / min(na, nb)


def similarity(a: Fingerprint, b: Fingerprint, sigma: float = GAUSS_SIGMA) -> SimilarityReport:
    """Compute every supported similarity metric for a fingerprint pair.

    Args:
        a: first fingerprint.
        b: second fingerprint, same grid as ``a``.
        sigma: Gaussian falloff (in cells) for ``weighted_overlap``; > 0.

    Returns:
        A :class:`SimilarityReport`.  With both operands empty all ratio
        metrics are 0 and both distances are 0.

    Raises:
        TopologyMismatch: if the grids differ.
    """
    _require_same_grid(a, b)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    na, nb = len(a), len(b)
    ov = len(a.position_set & b.position_set)
    union = na + nb - ov
    hamming = na + nb - 2 * ov
    return SimilarityReport(
        overlap_count=ov,
        jaccard=ov / union if union else 0.0,
        dice=2.0 * ov / (na + nb) if na + nb else 0.0,
        cosine=ov / math.sqrt(na * nb) if na and nb else 0.0,
        hamming_distance=hamming,
        euclidean_distance=math.sqrt(hamming),
        weighted_overlap=_weighted_overlap(a, b, sigma),
    )


# --------------------------------------------------------------------------
# sparsity control
# --------------------------------------------------------------------------


def sparsify(stack: WeightedStack, target_count: int) -> Fingerprint:
    """Keep the ``target_count`` heaviest positions of a stack.

    Ties on weight are broken toward the lower position index, so the result
    is fully deterministic.  A stack with fewer set positions than the target
    is returned whole.

    Args:
        stack: accumulated position weights.
        target_count: number of bits to keep, >= 0.
    """
    if target_count < 0:
        raise ValueError("target_count must be >= 0")
    if target_count >= len(stack.weights):
        kept = stack.weights.keys()
    else:
        ranked = sorted(stack.weights.items(), key=lambda item: (-item[1], item[0]))
        kept = (p for p, _ in ranked[:target_count])
    return Fingerprint._trusted(stack.topology, tuple(sorted(kept)))


def subsample(fp: Fingerprint, keep_fraction: float, seed: int) -> Fingerprint:
    """Keep a uniformly random fraction of a fingerprint's bits.

    ``ceil(keep_fraction * |fp|)`` positions are retained, reproducibly for
    a given seed.

    Args:
        fp: fingerprint to thin out; must be nonempty.
        keep_fraction: in (0, 1].
        seed: RNG seed; equal seeds give equal subsets.

    Raises:
        EmptyFingerprint: if ``fp`` has no set bits.
    """
    if len(fp) == 0:
        raise EmptyFingerprint("cannot subsample an empty fingerprint")
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError("keep_fraction must be in (0, 1]")
    keep = math.ceil(keep_fraction * len(fp))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(fp), size=keep, replace=False)
    positions = tuple(sorted(fp.positions[i] for i in chosen))
    return Fingerprint._trusted(fp.topology, positions)


def union_contains(union_fp: Fingerprint, candidate: Fingerprint, min_fraction: float = 1.0) -> bool:
    """Test whether a candidate's bits are (mostly) inside a union fingerprint.

    Returns True iff at least ``min_fraction`` of the candidate's bits are
    set in ``union_fp``.

    Raises:
        EmptyFingerprint: if the candidate has no set bits.
        TopologyMismatch: if the grids differ.
    """
    _require_same_grid(union_fp, candidate)
    if len(candidate) == 0:
        raise EmptyFingerprint("membership test needs a nonempty candidate")
    if not 0.0 <= min_fraction <= 1.0:
        raise ValueError("min_fraction must be in [0, 1]")
    inside = len(candidate.position_set & union_fp.position_set)
    return inside >= min_fraction * len(candidate)


def is_valid_sdr(fp: Fingerprint, max_sparsity: float = MAX_SPARSITY) -> bool:
    """True iff the fingerprint's fill ratio does not exceed ``max_sparsity``."""
    return fp.sparsity <= max_sparsity


# --------------------------------------------------------------------------
# wire formats
# --------------------------------------------------------------------------


def fingerprint_to_json(fp: Fingerprint) -> str:
    """Render the textual exchange form ``{"fingerprint": {"positions": [...]}}``."""
    return json.dumps({"fingerprint": {"positions": list(fp.positions)}})


def fingerprint_from_json(payload: str | dict, topology: GridTopology | None = None) -> Fingerprint:
    """Parse the textual exchange form.

    The JSON shape carries no grid dimensions, so the caller supplies the
    topology (default 128 x 128).

    Raises:
        FormatError: if the payload does not have the expected shape.
    """
    topology = topology or GridTopology()
    try:
        obj = json.loads(payload) if isinstance(payload, str) else payload
        positions = obj["fingerprint"]["positions"]
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise FormatError(f"not a fingerprint payload: {exc}") from exc
    if not isinstance(positions, list) or not all(isinstance(p, int) for p in positions):
        raise FormatError("fingerprint positions must be a list of ints")
    if positions != sorted(set(positions)):
        raise FormatError("fingerprint positions must be strictly ascending")
    try:
        return Fingerprint(topology, tuple(positions))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _write_varint(out: bytearray, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(data: bytes, offset: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        if offset >= len(data):
            raise CorruptFile("varint runs past end of data")
        byte = data[offset]
        offset += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, offset
        shift += 7
        if shift > 63:
            raise CorruptFile("varint too long")


def fingerprint_to_bytes(fp: Fingerprint) -> bytes:
    """Serialize to the compact binary form.

    Layout (little-endian): 4-byte magic, version byte, u32 rows, u32 cols,
    varint bit count, then delta-encoded varint positions (first absolute,
    the rest as gaps to the previous position).
    """
    out = bytearray()
    out += _FP_MAGIC
    out.append(_FP_VERSION)
    out += struct.pack("<II", fp.topology.rows, fp.topology.cols)
    _write_varint(out, len(fp.positions))
    prev = 0
    for i, p in enumerate(fp.positions):
        _write_varint(out, p if i == 0 else p - prev)
        prev = p
    return bytes(out)


def fingerprint_from_bytes(data: bytes) -> Fingerprint:
    """Parse the compact binary form produced by :func:`fingerprint_to_bytes`.

    Raises:
        FormatError: wrong magic or unsupported version.
        CorruptFile: truncated data, trailing garbage, or invalid positions.
    """
    if len(data) < 4 or data[:4] != _FP_MAGIC:
        raise FormatError("bad magic: not a fingerprint blob")
    if len(data) < 5:
        raise CorruptFile("truncated before version byte")
    if data[4] != _FP_VERSION:
        raise FormatError(f"unsupported fingerprint version {data[4]}")
    if len(data) < 13:
        raise CorruptFile("truncated header")
    rows, cols = struct.unpack_from("<II", data, 5)
    try:
        topology = GridTopology(rows, cols)
    except ValueError as exc:
        raise CorruptFile(str(exc)) from exc
    count, offset = _read_varint(data, 13)
    positions = []
    prev = -1
    for i in range(count):
        delta, offset = _read_varint(data, offset)
        value = delta if i == 0 else prev + delta
        if i > 0 and delta == 0:
            raise CorruptFile("zero gap between positions")
        if value >= topology.size:
            raise CorruptFile("position outside grid")
        positions.append(value)
        prev = value
    if offset != len(data):
        raise CorruptFile("trailing bytes after fingerprint")
    return Fingerprint._trusted(topology, tuple(positions))


# --------------------------------------------------------------------------
# packed brute-force scans
# --------------------------------------------------------------------------


class PackedFingerprints:
    """A read-only packed bit matrix for fast one-vs-many comparisons.

    Fingerprints are packed 64 positions per machine word.  A scan ANDs the
    packed query against every row and popcounts the result, which keeps a
    brute-force comparison of one query against 10^5 stored fingerprints
    well under a second on one thread.
    """

    _CHUNK = 16384

    def __init__(self, topology: GridTopology, fingerprints: Sequence[Fingerprint]):
        self.topology = topology
        self._words = (topology.size + 63) // 64
        n = len(fingerprints)
        flat = np.zeros(n * self._words, dtype=np.uint64)
        lengths = np.empty(n, dtype=np.int64)
        all_pos: list[np.ndarray] = []
        row_ids: list[np.ndarray] = []
        for i, fp in enumerate(fingerprints):
            if fp.topology != topology:
                raise TopologyMismatch(f"{fp.topology} != {topology}")
            lengths[i] = len(fp.positions)
            if fp.positions:
                pos = np.asarray(fp.positions, dtype=np.int64)
                all_pos.append(pos)
                row_ids.append(np.full(len(pos), i, dtype=np.int64))
        if all_pos:
            pos = np.concatenate(all_pos)
            rows = np.concatenate(row_ids)
            idx = rows * self._words + (pos >> 6)
            bits = (np.uint64(1) << (pos & 63).astype(np.uint64))
            np.bitwise_or.at(flat, idx, bits)
        self._matrix = flat.reshape(n, self._words)
        self._lengths = lengths

    def __len__(self) -> int:
        return self._matrix.shape[0]

    @property
    def cardinalities(self) -> np.ndarray:
        """Set-bit count per stored fingerprint."""
        return self._lengths.copy()

    def _pack_query(self, query: Fingerprint) -> np.ndarray:
        if query.topology != self.topology:
            raise TopologyMismatch(f"{query.topology} != {self.topology}")
        packed = np.zeros(self._words, dtype=np.uint64)
        if query.positions:
            pos = np.asarray(query.positions, dtype=np.int64)
            words = pos >> 6
            bits = (np.uint64(1) << (pos & 63).astype(np.uint64))
            np.bitwise_or.at(packed, words, bits)
        return packed

    def overlaps(self, query: Fingerprint) -> np.ndarray:
        """Overlap count of the query against every stored fingerprint."""
        packed = self._pack_query(query)
        n = len(self)
        out = np.empty(n, dtype=np.int64)
        for start in range(0, n, self._CHUNK):
            block = self._matrix[start : start + self._CHUNK]
            out[start : start + self._CHUNK] = np.bitwise_count(block & packed).sum(
                axis=1, dtype=np.int64
            )
        return out

    def cosine(self, query: Fingerprint) -> np.ndarray:
        """Cosine similarity of the query against every stored fingerprint."""
        ov = self.overlaps(query).astype(np.float64)
        denom = np.sqrt(self._lengths * len(query)).astype(np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = np.where(denom > 0, ov / denom, 0.0)
        return scores
