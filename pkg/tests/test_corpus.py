"""Tokenizer, snippet cutting, vocabulary filtering."""

import pytest

from semfold.corpus import (
    Document,
    Snippet,
    TokenizerConfig,
    build_vocabulary,
    cut_snippets,
    normalize_term,
    sentence_spans,
    tokenize,
)
from semfold.errors import EmptyCorpus


def snip(snippet_id, tokens, doc_id="d"):
    return Snippet(snippet_id, doc_id, tuple(tokens))


# -- tokenizer -------------------------------------------------------------


def test_tokenize_lowercases_and_splits_sentences():
    assert tokenize("The Cat ran. The DOG slept!") == [
        ["the", "cat", "ran"],
        ["the", "dog", "slept"],
    ]


def test_tokenize_strips_punctuation_and_drops_empty_sentences():
    assert tokenize("well, -- yes... ?! next one.") == [
        ["well", "yes"],
        ["next", "one"],
    ]


def test_tokenize_min_token_length():
    config = TokenizerConfig(min_token_length=2)
    assert tokenize("a bb c ddd.", config) == [["bb", "ddd"]]


def test_tokenize_merges_phrases():
    config = TokenizerConfig(phrase_lexicon=frozenset({"new york"}))
    assert tokenize("I liked New   York a lot.", config) == [
        ["i", "liked", "new_york", "a", "lot"]
    ]


def test_tokenize_prefers_longest_phrase():
    config = TokenizerConfig(
        phrase_lexicon=frozenset({"new york", "new york city"})
    )
    assert tokenize("new york city hall.", config) == [["new_york_city", "hall"]]


def test_sentence_spans_partition_source_text():
    text = "one two. three? four!"
    spans = sentence_spans(text)
    assert [text[a:b].strip(" ") for a, b in spans] == ["one two.", "three?", "four!"]


def test_tokenizer_config_validation():
    with pytest.raises(ValueError):
        TokenizerConfig(min_token_length=0)
    with pytest.raises(ValueError):
        TokenizerConfig(terminators=frozenset())
    with pytest.raises(ValueError):
        TokenizerConfig(terminators=frozenset({".."}))


def test_normalize_term_folds_like_the_tokenizer():
    assert normalize_term("Dog") == "dog"
    assert normalize_term("New  York") == "new_york"


# -- snippets ------------------------------------------------------------------


def test_cut_snippets_singleton_sentences():
    doc = Document("d1", "the cat ran. the dog slept. birds sing.")
    snippets = cut_snippets(doc, snippet_sentences=1)
    assert [s.snippet_id for s in snippets] == [0, 1, 2]
    assert snippets[1].tokens == ("the", "dog", "slept")
    assert all(s.doc_id == "d1" for s in snippets)


def test_cut_snippets_groups_and_keeps_partial_tail():
    doc = Document("d1", "a one. b two. c three.")
    snippets = cut_snippets(doc, snippet_sentences=2)
    assert [s.tokens for s in snippets] == [("a", "one", "b", "two"), ("c", "three")]


def test_cut_snippets_chains_ids_across_documents():
    first = cut_snippets(Document("d1", "one. two."), start_id=0)
    second = cut_snippets(Document("d2", "three."), start_id=len(first))
    assert [s.snippet_id for s in first + second] == [0, 1, 2]


def test_cut_snippets_validation():
    with pytest.raises(ValueError):
        cut_snippets(Document("d", "x."), snippet_sentences=0)
    with pytest.raises(ValueError):
        Snippet(0, "d", ())


# -- vocabulary ------------------------------------------------------------------


def test_vocabulary_counts_and_filters():
    snippets = [
        snip(0, ["cat", "ran"]),
        snip(1, ["cat", "slept"], doc_id="e"),
        snip(2, ["truck", "ran"]),
    ]
    vocab = build_vocabulary(snippets, min_snippet_freq=1, max_snippet_ratio=1.0)
    assert len(vocab) == 4
    assert vocab.snippet_frequency("cat") == 2
    assert vocab.terms["cat"].document_frequency == 2
    assert vocab.terms["truck"].document_frequency == 1
    assert vocab.total_snippets == 3


def test_vocabulary_min_snippet_freq():
    snippets = [snip(0, ["cat", "ran"]), snip(1, ["cat", "slept"])]
    vocab = build_vocabulary(snippets, min_snippet_freq=2, max_snippet_ratio=1.0)
    assert "cat" in vocab and "ran" not in vocab


def test_vocabulary_ratio_cap_is_exclusive_above():
    snippets = [snip(i, ["the", f"w{i}"]) for i in range(4)]
    # 'the' sits in 4/4 snippets; a 0.5 cap drops it, each w_i stays
    vocab = build_vocabulary(snippets, max_snippet_ratio=0.5)
    assert "the" not in vocab
    assert all(f"w{i}" in vocab for i in range(4))
    # at a cap of exactly 1.0 the term survives
    assert "the" in build_vocabulary(snippets, max_snippet_ratio=1.0)


def test_vocabulary_validation():
    with pytest.raises(EmptyCorpus):
        build_vocabulary([])
    with pytest.raises(ValueError):
        build_vocabulary([snip(0, ["x"])], min_snippet_freq=0)
    with pytest.raises(ValueError):
        build_vocabulary([snip(0, ["x"])], max_snippet_ratio=0.0)
