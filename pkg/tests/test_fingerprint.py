"""Fingerprint value types, algebra, similarity, sparsity, wire formats."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semfold.errors import (
    CorruptFile,
    EmptyFingerprint,
    FormatError,
    TopologyMismatch,
)
from semfold.fingerprint import (
    GAUSS_SIGMA,
    MAX_SPARSITY,
    BooleanOp,
    Fingerprint,
    GridTopology,
    PackedFingerprints,
    WeightedStack,
    boolean_op,
    fingerprint_from_bytes,
    fingerprint_from_json,
    fingerprint_to_bytes,
    fingerprint_to_json,
    is_valid_sdr,
    overlap_count,
    similarity,
    sparsify,
    subsample,
    union_contains,
)

G4 = GridTopology(4, 4)
G8 = GridTopology(8, 8)


def fp(positions, topology=G4):
    return Fingerprint.from_positions(topology, positions)


# -- topology -----------------------------------------------------------------


def test_topology_roundtrip_and_size():
    t = GridTopology(3, 5)
    assert t.size == 15
    assert t.position(2, 4) == 14
    assert t.coords(14) == (2, 4)
    for p in range(t.size):
        assert t.position(*t.coords(p)) == p


def test_topology_validation():
    with pytest.raises(ValueError):
        GridTopology(0, 4)
    with pytest.raises(ValueError):
        GridTopology(4, -1)


def test_default_topology_is_128_square():
    t = GridTopology()
    assert (t.rows, t.cols, t.size) == (128, 128, 16384)


# -- construction ----------------------------------------------------------------


def test_from_positions_sorts_and_dedups():
    a = Fingerprint.from_positions(G4, [9, 1, 9, 4])
    assert a.positions == (1, 4, 9)
    assert len(a) == 3
    assert 4 in a and 5 not in a


def test_constructor_rejects_bad_positions():
    with pytest.raises(ValueError):
        Fingerprint(G4, (3, 2))  # not ascending
    with pytest.raises(ValueError):
        Fingerprint(G4, (0, 16))  # outside grid
    with pytest.raises(ValueError):
        Fingerprint(G4, (-1,))


def test_sparsity():
    assert fp([0, 1]).sparsity == 2 / 16
    assert fp([]).sparsity == 0.0


# -- algebra ----------------------------------------------------------------------


def test_worked_boolean_example():
    a, b = fp([1, 2, 3, 4]), fp([3, 4, 5, 6])
    assert boolean_op("and", a, b).positions == (3, 4)
    assert boolean_op("or", a, b).positions == (1, 2, 3, 4, 5, 6)
    assert boolean_op("sub", a, b).positions == (1, 2)
    assert boolean_op("xor", a, b).positions == (1, 2, 5, 6)


def test_operator_sugar_matches_boolean_op():
    a, b = fp([1, 2, 3]), fp([2, 3, 5])
    assert (a & b).positions == boolean_op(BooleanOp.AND, a, b).positions
    assert (a | b).positions == boolean_op(BooleanOp.OR, a, b).positions
    assert (a - b).positions == boolean_op(BooleanOp.SUB, a, b).positions
    assert (a ^ b).positions == boolean_op(BooleanOp.XOR, a, b).positions


def test_boolean_op_rejects_mixed_grids():
    with pytest.raises(TopologyMismatch):
        boolean_op("and", fp([1]), fp([1], GridTopology(2, 2)))


# -- similarity ---------------------------------------------------------------------


def test_worked_similarity_report():
    a, b = fp([1, 2, 3, 4]), fp([3, 4, 5, 6])
    r = similarity(a, b)
    assert r.overlap_count == 2
    assert r.jaccard == pytest.approx(2 / 6)
    assert r.dice == pytest.approx(4 / 8)
    assert r.cosine == pytest.approx(2 / 4)
    assert r.hamming_distance == 4
    assert r.euclidean_distance == pytest.approx(2.0)


def test_identical_fingerprints_have_unit_ratios():
    a = fp([0, 5, 9])
    r = similarity(a, a)
    assert r.jaccard == r.dice == r.cosine == r.weighted_overlap == 1.0
    assert r.hamming_distance == 0 and r.euclidean_distance == 0.0


def test_empty_vs_empty_is_defined():
    r = similarity(fp([]), fp([]))
    assert (r.jaccard, r.dice, r.cosine, r.weighted_overlap) == (0, 0, 0, 0)
    assert r.hamming_distance == 0 and r.euclidean_distance == 0.0


def test_weighted_overlap_adjacent_cells():
    # single bits one column apart: one matched pair at distance 1
    a, b = fp([5]), fp([6])
    r = similarity(a, b)
    assert r.overlap_count == 0
    assert r.weighted_overlap == pytest.approx(math.exp(-0.5 / GAUSS_SIGMA**2))


def test_weighted_overlap_distant_cells_is_zero():
    t = GridTopology(64, 64)
    a = Fingerprint.from_positions(t, [0])
    b = Fingerprint.from_positions(t, [t.size - 1])
    assert similarity(a, b).weighted_overlap == pytest.approx(0.0, abs=1e-9)


def test_weighted_overlap_never_below_exact_overlap():
    rng = np.random.default_rng(7)
    t = GridTopology(16, 16)
    for _ in range(50):
        a = Fingerprint.from_positions(t, rng.choice(t.size, 8, replace=False))
        b = Fingerprint.from_positions(t, rng.choice(t.size, 8, replace=False))
        r = similarity(a, b)
        assert r.weighted_overlap >= r.overlap_count / min(len(a), len(b)) - 1e-12
        assert r.weighted_overlap <= 1.0 + 1e-12


def test_similarity_rejects_bad_sigma():
    with pytest.raises(ValueError):
        similarity(fp([1]), fp([2]), sigma=0.0)


# -- sparsity control ----------------------------------------------------------------


def test_sparsify_keeps_heaviest_bits():
    stack = WeightedStack(G4, {3: 2.0, 7: 5.0, 9: 1.0, 12: 4.0})
    assert sparsify(stack, 2).positions == (7, 12)


def test_sparsify_breaks_ties_toward_lower_positions():
    stack = WeightedStack(G4, {5: 1.0, 2: 1.0, 9: 1.0})
    assert sparsify(stack, 2).positions == (2, 5)


def test_sparsify_with_roomy_target_keeps_all():
    stack = WeightedStack(G4, {1: 1.0, 2: 3.0})
    assert sparsify(stack, 10).positions == (1, 2)


def test_subsample_size_and_determinism():
    a = fp(list(range(10)), G8)
    s1 = subsample(a, 0.5, seed=3)
    s2 = subsample(a, 0.5, seed=3)
    assert s1.positions == s2.positions
    assert len(s1) == math.ceil(0.5 * 10)
    assert set(s1.positions) <= set(a.positions)
    assert subsample(a, 1.0, seed=0).positions == a.positions


def test_subsample_input_validation():
    with pytest.raises(EmptyFingerprint):
        subsample(fp([]), 0.5, seed=0)
    with pytest.raises(ValueError):
        subsample(fp([1]), 0.0, seed=0)
    with pytest.raises(ValueError):
        subsample(fp([1]), 1.5, seed=0)


def test_union_contains():
    parts = [fp([1, 2]), fp([5, 9]), fp([12])]
    union = parts[0]
    for part in parts[1:]:
        union = union | part
    for part in parts:
        assert union_contains(union, part)
    assert not union_contains(union, fp([1, 3]))
    assert union_contains(union, fp([1, 3]), min_fraction=0.5)


def test_is_valid_sdr_threshold():
    t = GridTopology(10, 10)
    assert is_valid_sdr(Fingerprint.from_positions(t, range(5)))
    assert not is_valid_sdr(Fingerprint.from_positions(t, range(6)))
    assert MAX_SPARSITY == 0.05


# -- wire formats ------------------------------------------------------------------


def test_json_roundtrip():
    a = fp([0, 3, 15])
    blob = fingerprint_to_json(a)
    assert json.loads(blob) == {"fingerprint": {"positions": [0, 3, 15]}}
    back = fingerprint_from_json(blob, topology=G4)
    assert back.positions == a.positions


def test_json_rejects_bad_payloads():
    with pytest.raises(FormatError):
        fingerprint_from_json("[1, 2]")
    with pytest.raises(FormatError):
        fingerprint_from_json({"fingerprint": {"positions": [2, 1]}}, topology=G4)
    with pytest.raises(FormatError):
        fingerprint_from_json({"fingerprint": {"positions": ["x"]}}, topology=G4)
    with pytest.raises(FormatError):
        fingerprint_from_json({"positions": [1]}, topology=G4)


def test_bytes_roundtrip_including_empty():
    for positions in ([], [0], [1, 2, 3, 4], list(range(0, 16, 3))):
        a = fp(positions)
        back = fingerprint_from_bytes(fingerprint_to_bytes(a))
        assert back.positions == a.positions
        assert back.topology == a.topology


def test_bytes_bad_magic_and_version():
    blob = bytearray(fingerprint_to_bytes(fp([1, 2])))
    with pytest.raises(FormatError):
        fingerprint_from_bytes(b"XXXX" + bytes(blob[4:]))
    blob[4] = 99
    with pytest.raises(FormatError):
        fingerprint_from_bytes(bytes(blob))


def test_bytes_truncation_and_trailing_garbage():
    blob = fingerprint_to_bytes(fp([1, 2, 3]))
    with pytest.raises(CorruptFile):
        fingerprint_from_bytes(blob[:-1])
    with pytest.raises(CorruptFile):
        fingerprint_from_bytes(blob + b"\x00")


def test_bytes_rejects_position_overflow():
    # hand-build a blob claiming a 2x2 grid with a position of 9
    good = fingerprint_to_bytes(Fingerprint.from_positions(GridTopology(2, 2), [1]))
    bad = good[:-1] + bytes([9])
    with pytest.raises(CorruptFile):
        fingerprint_from_bytes(bad)


# -- packed scans --------------------------------------------------------------


def test_packed_matches_reference_metrics():
    rng = np.random.default_rng(11)
    t = GridTopology(16, 16)
    fps = [
        Fingerprint.from_positions(t, rng.choice(t.size, 6, replace=False))
        for _ in range(40)
    ]
    packed = PackedFingerprints(t, fps)
    query = fps[17]
    overlaps = packed.overlaps(query)
    cosines = packed.cosine(query)
    for i, other in enumerate(fps):
        assert overlaps[i] == overlap_count(query, other)
        assert cosines[i] == pytest.approx(similarity(query, other).cosine)


def test_packed_rejects_other_grid():
    t = GridTopology(4, 4)
    packed = PackedFingerprints(t, [Fingerprint.from_positions(t, [1])])
    with pytest.raises(TopologyMismatch):
        packed.overlaps(fp([1], GridTopology(2, 2)))


# -- algebra laws and metric axioms (property-based) ------------------------------------


positions_sets = st.sets(st.integers(min_value=0, max_value=63), max_size=12)


def as_fp(positions):
    return Fingerprint.from_positions(G8, positions)


@settings(max_examples=200, deadline=None)
@given(positions_sets, positions_sets, positions_sets)
def test_algebra_laws(pa, pb, pc):
    a, b, c = as_fp(pa), as_fp(pb), as_fp(pc)
    assert (a & b).positions == (b & a).positions
    assert (a | b).positions == (b | a).positions
    assert (a ^ b).positions == (b ^ a).positions
    assert ((a & b) & c).positions == (a & (b & c)).positions
    assert ((a | b) | c).positions == (a | (b | c)).positions
    assert (a & a).positions == a.positions
    assert (a | a).positions == a.positions
    assert (a & (a | b)).positions == a.positions
    assert (a | (a & b)).positions == a.positions
    assert (a - b).positions == (a - (a & b)).positions
    assert (a ^ b).positions == ((a | b) - (a & b)).positions
    assert (a ^ a).positions == ()
    assert (a - a).positions == ()


@settings(max_examples=200, deadline=None)
@given(positions_sets, positions_sets, positions_sets)
def test_metric_axioms_hamming_and_jaccard(pa, pb, pc):
    a, b, c = as_fp(pa), as_fp(pb), as_fp(pc)

    def hamming(x, y):
        return similarity(x, y).hamming_distance

    def jaccard_distance(x, y):
        # set-metric convention: two empty sets are equal, distance 0
        ov = len(x.position_set & y.position_set)
        union = len(x.position_set | y.position_set)
        return Fraction(1) - (Fraction(ov, union) if union else Fraction(1))

    for dist in (hamming, jaccard_distance):
        assert dist(a, b) >= 0
        assert dist(a, b) == dist(b, a)
        assert (dist(a, b) == 0) == (a.positions == b.positions)
        assert dist(a, c) <= dist(a, b) + dist(b, c)
