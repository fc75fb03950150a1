"""Document loading and the full build pipeline."""

import pytest

from semfold.corpus import Document
from semfold.errors import EmptyCorpus
from semfold.fingerprint import GridTopology
from semfold.pipeline import BuildParams, BuildResult, build_from_documents, load_documents
from semfold.som import TrainingSchedule

DOCS = [
    Document("pets", "the cat slept. the dog slept. the cat ran after the dog."),
    Document("cars", "the truck crashed. the engine roared. the truck ran fine."),
    Document("pets2", "a cat chased a dog. the dog barked at the cat."),
    Document("cars2", "the engine of the truck roared. a truck crashed again."),
]

PARAMS = BuildParams(
    topology=GridTopology(4, 4),
    max_snippet_ratio=1.0,
    schedule=TrainingSchedule(epochs=5, seed=0),
    word_cap=8,
)


def test_load_documents_from_directory(tmp_path):
    (tmp_path / "b_second.txt").write_text("second doc.")
    (tmp_path / "a_first.txt").write_text("first doc.")
    (tmp_path / "blank.txt").write_text("   \n")
    (tmp_path / "notes.md").write_text("ignored.")
    docs = load_documents(tmp_path)
    assert [d.doc_id for d in docs] == ["a_first", "b_second"]
    assert docs[0].text == "first doc."


def test_load_documents_from_flat_file(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("first line.\n\n  \nfourth line.\n")
    docs = load_documents(path)
    assert [d.doc_id for d in docs] == ["line-0001", "line-0004"]
    assert docs[1].text == "fourth line."


def test_build_produces_retina_and_diagnostics():
    result = build_from_documents(DOCS, PARAMS)
    assert isinstance(result, BuildResult)
    assert result.snippet_count + result.dropped_snippets == 10
    assert result.dropped_snippets == 0
    assert len(result.retina) > 0
    assert "cat" in result.retina and "truck" in result.retina
    assert sum(result.quality.occupancy) == result.snippet_count


def test_vocabulary_ratio_is_computed_across_documents():
    # 'the' appears in 8 of 10 sentences corpus-wide; the default 0.4 cap
    # drops it even though no single document is checked in isolation
    params = BuildParams(
        topology=GridTopology(4, 4),
        schedule=TrainingSchedule(epochs=5, seed=0),
        word_cap=8,
    )
    retina = build_from_documents(DOCS, params).retina
    assert "the" not in retina
    assert "cat" in retina


def test_all_stopword_snippet_is_dropped_and_counted():
    # 'the' exceeds the ratio cap, so the bare sentence "the." has no terms
    docs = [Document("d", "the cat. the dog. the. the fox. the wolf.")]
    result = build_from_documents(
        docs,
        BuildParams(
            topology=GridTopology(2, 2),
            max_snippet_ratio=0.9,
            schedule=TrainingSchedule(epochs=2, seed=0),
            word_cap=4,
        ),
    )
    assert result.dropped_snippets == 1
    assert result.snippet_count == 4
    assert "the" not in result.retina


def test_build_is_reproducible_per_seed():
    a = build_from_documents(DOCS, PARAMS)
    b = build_from_documents(DOCS, PARAMS)
    assert a.retina == b.retina
    assert a.quality == b.quality


def test_empty_inputs_raise():
    with pytest.raises(EmptyCorpus):
        build_from_documents([], PARAMS)
    with pytest.raises(EmptyCorpus):
        build_from_documents([Document("d", "...")], PARAMS)
