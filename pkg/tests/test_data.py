"""Bundled corpus and experiment datasets: structural guarantees."""

import pytest

from semfold import data
from semfold.corpus import tokenize


def test_toy_corpus_shape():
    docs = data.toy_documents()
    assert len(docs) >= 200
    assert all(doc.text.strip() for doc in docs)
    assert docs[0].doc_id == "toy-0000"


def test_toy_corpus_vocabulary_is_wide_enough():
    docs = data.toy_documents()
    tokens = {t for doc in docs for sent in tokenize(doc.text) for t in sent}
    assert len(tokens) >= 500


def test_experiment_datasets_parse():
    for name in ("fox", "physicists"):
        sentences, queries = data.experiment_dataset(name)
        assert sentences and queries
        answers = data.reference_answers(name)
        assert set(queries) == set(answers)
        assert all(opts for opts in answers.values())


def test_fox_dataset_contents():
    sentences, queries = data.experiment_dataset("fox")
    assert queries == ["fox eat"]
    # the query subject is deliberately absent from the teaching sentences;
    # the answer has to come from fingerprint similarity, not lookup
    assert not any("fox" in s for s in sentences)
    assert data.reference_answers("fox")["fox eat"] >= {"rodent", "squirrel"}


def test_physicists_dataset_contents():
    sentences, queries = data.experiment_dataset("physicists")
    assert len(queries) == 13
    assert any(s.endswith("physicist.") for s in sentences)
    # every query word must appear somewhere in the teaching sentences,
    # except the probe subjects that are meant to be recalled by analogy
    words = {t for s in sentences for chunk in tokenize(s) for t in chunk}
    assert {"be", "like", "physicist", "singer", "fans", "mathematics"} <= words


def test_unknown_experiment_name():
    with pytest.raises(ValueError):
        data.experiment_dataset("owls")
    with pytest.raises(ValueError):
        data.reference_answers("owls")
