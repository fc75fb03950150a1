"""Retina construction, lookup, ranking, and the binary file format."""

import math

import pytest

from semfold.corpus import Snippet, TokenizerConfig, build_vocabulary
from semfold.errors import BuildError, CorruptFile, FormatError, TermNotFound, TopologyMismatch
from semfold.fingerprint import Fingerprint, GridTopology
from semfold.retina import BuildConfig, Retina, RetinaInfo, build_retina
from semfold.som import CellAssignment

GRID = GridTopology(2, 2)


def snip(snippet_id, tokens):
    return Snippet(snippet_id, "d", tuple(tokens))


def worked_retina(weighting="binary", word_cap=4):
    """Three snippets pinned to cells 0..2 of a 2x2 grid.

    cat spans cells {0, 1}, ran {1, 2}, slept {0}, truck {2}.
    """
    snippets = [snip(0, ["cat", "slept"]), snip(1, ["cat", "ran"]), snip(2, ["truck", "ran"])]
    vocab = build_vocabulary(snippets, max_snippet_ratio=1.0)
    assignment = CellAssignment(num_cells=4, snippet_to_cell={0: 0, 1: 1, 2: 2})
    config = BuildConfig(topology=GRID, weighting=weighting, word_cap=word_cap)
    return build_retina(assignment, snippets, vocab, config, name="worked")


def test_worked_binary_build():
    retina = worked_retina()
    assert retina.terms == ("cat", "ran", "slept", "truck")
    assert retina.get_fingerprint("cat").positions == (0, 1)
    assert retina.get_fingerprint("ran").positions == (1, 2)
    assert retina.get_fingerprint("slept").positions == (0,)
    assert retina.get_fingerprint("truck").positions == (2,)
    assert len(retina) == 4 and "cat" in retina and "dog" not in retina


def test_similar_terms_ranking():
    retina = worked_retina()
    ranked = retina.similar_terms(retina.get_fingerprint("cat"), k=4)
    names = [t for t, _ in ranked]
    # cosine against cat {0,1}: cat 1, slept 1/sqrt(2), ran 1/2, truck 0
    assert names == ["cat", "slept", "ran", "truck"]
    assert ranked[0][1] == pytest.approx(1.0)
    assert ranked[1][1] == pytest.approx(1 / math.sqrt(2))
    assert ranked[3][1] == 0.0


def test_similar_terms_validates_input():
    retina = worked_retina()
    with pytest.raises(TopologyMismatch):
        retina.similar_terms(Fingerprint.from_positions(GridTopology(3, 3), [0]))
    with pytest.raises(ValueError):
        retina.similar_terms(retina.get_fingerprint("cat"), k=0)
    assert len(retina.similar_terms(retina.get_fingerprint("cat"), k=99)) == 4


def test_lookup_folds_case_and_phrases():
    retina = worked_retina()
    assert retina.get_fingerprint("CAT") == retina.get_fingerprint("cat")
    with pytest.raises(TermNotFound):
        retina.get_fingerprint("dog")


def test_word_cap_binary_tie_keeps_lower_cell():
    retina = worked_retina(word_cap=1)
    assert retina.get_fingerprint("cat").positions == (0,)
    assert retina.get_fingerprint("ran").positions == (1,)


def test_word_cap_tfidf_keeps_heavier_cell():
    # cat: tf 1 in cell 0, tf 2 in cell 1 -> the repeated mention wins the cap
    snippets = [snip(0, ["cat", "slept"]), snip(1, ["cat", "cat", "ran"]), snip(2, ["truck"])]
    vocab = build_vocabulary(snippets, max_snippet_ratio=1.0)
    assignment = CellAssignment(num_cells=4, snippet_to_cell={0: 0, 1: 1, 2: 2})
    config = BuildConfig(topology=GRID, weighting="tfidf", word_cap=1)
    retina = build_retina(assignment, snippets, vocab, config)
    assert retina.get_fingerprint("cat").positions == (1,)


def test_idf_zero_falls_back_to_presence():
    snippets = [snip(0, ["the", "cat"]), snip(1, ["the", "dog"])]
    vocab = build_vocabulary(snippets, max_snippet_ratio=1.0)
    assignment = CellAssignment(num_cells=4, snippet_to_cell={0: 0, 1: 1})
    retina = build_retina(
        assignment, snippets, vocab, BuildConfig(topology=GRID, word_cap=4)
    )
    assert retina.get_fingerprint("the").positions == (0, 1)


def test_build_config_validation():
    with pytest.raises(ValueError):
        BuildConfig(weighting="squared")
    with pytest.raises(ValueError):
        BuildConfig(word_cap=0)
    assert BuildConfig(topology=GridTopology(128, 128)).effective_word_cap == 409
    assert BuildConfig(topology=GridTopology(2, 2)).effective_word_cap == 1


def test_build_rejects_grid_mismatch():
    snippets = [snip(0, ["cat"])]
    vocab = build_vocabulary(snippets, max_snippet_ratio=1.0)
    assignment = CellAssignment(num_cells=9, snippet_to_cell={0: 0})
    with pytest.raises(BuildError):
        build_retina(assignment, snippets, vocab, BuildConfig(topology=GRID))


def test_build_rejects_unassigned_snippet():
    snippets = [snip(0, ["cat"]), snip(1, ["dog"])]
    vocab = build_vocabulary(snippets, max_snippet_ratio=1.0)
    assignment = CellAssignment(num_cells=4, snippet_to_cell={0: 0})
    with pytest.raises(BuildError):
        build_retina(assignment, snippets, vocab, BuildConfig(topology=GRID))


def test_retina_constructor_checks_fingerprints():
    fp_other = Fingerprint.from_positions(GridTopology(3, 3), [0])
    with pytest.raises(BuildError):
        Retina("r", "", GRID, {"cat": fp_other}, {}, {"cat": 1})
    with pytest.raises(BuildError):
        Retina("r", "", GRID, {"cat": Fingerprint.from_positions(GRID, [])}, {}, {"cat": 1})


def test_info_wire_form():
    info = worked_retina().info()
    assert info == RetinaInfo("worked", "", 4, 2, 2)
    assert info.to_dict() == {
        "retinaName": "worked",
        "description": "",
        "numberOfTermsInRetina": 4,
        "numberOfRows": 2,
        "numberOfColumns": 2,
    }


def test_save_load_round_trip(tmp_path):
    retina = worked_retina()
    path = tmp_path / "worked.retina"
    retina.save(path)
    loaded = Retina.load(path)
    assert loaded == retina
    assert loaded.tokenizer == retina.tokenizer

    again = tmp_path / "again.retina"
    loaded.save(again)
    assert again.read_bytes() == path.read_bytes()
    assert not path.with_suffix(".retina.tmp").exists()


def test_load_rejects_wrong_magic(tmp_path):
    path = tmp_path / "bad.retina"
    path.write_bytes(b"NOTARETI" + b"\x00" * 64)
    with pytest.raises(FormatError):
        Retina.load(path)


def test_load_rejects_unsupported_version(tmp_path):
    retina = worked_retina()
    path = tmp_path / "v.retina"
    retina.save(path)
    data = bytearray(path.read_bytes())
    data[8] = 99
    path.write_bytes(bytes(data))
    with pytest.raises(FormatError):
        Retina.load(path)


def test_load_rejects_truncation(tmp_path):
    retina = worked_retina()
    path = tmp_path / "t.retina"
    retina.save(path)
    whole = path.read_bytes()
    path.write_bytes(whole[: len(whole) - 7])
    with pytest.raises(CorruptFile):
        Retina.load(path)


def test_custom_tokenizer_survives_round_trip(tmp_path):
    snippets = [snip(0, ["new_york", "cat"]), snip(1, ["dog"])]
    vocab = build_vocabulary(snippets, max_snippet_ratio=1.0)
    assignment = CellAssignment(num_cells=4, snippet_to_cell={0: 0, 1: 1})
    tok = TokenizerConfig(phrase_lexicon=frozenset({"new york"}))
    retina = build_retina(
        assignment, snippets, vocab, BuildConfig(topology=GRID, word_cap=4), tokenizer=tok
    )
    assert retina.get_fingerprint("New York").positions == (0,)
    path = tmp_path / "p.retina"
    retina.save(path)
    assert Retina.load(path).get_fingerprint("new york").positions == (0,)
