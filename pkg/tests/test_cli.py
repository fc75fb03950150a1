"""Command line interface: exit codes, machine output, file round trips."""

import json

import pytest

from semfold.cli import ENV_RETINA, main

CORPUS = """\
the cat slept. the dog slept. the cat ran after the dog.
the truck crashed. the engine roared. the truck ran fine.
a cat chased a dog. the dog barked at the cat.
the engine of the truck roared. a truck crashed again.
"""


@pytest.fixture(scope="module")
def retina_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus.txt"
    corpus.write_text(CORPUS)
    out = root / "small.retina"
    code = main(
        [
            "build",
            "--corpus",
            str(corpus),
            "--out",
            str(out),
            "--rows",
            "4",
            "--cols",
            "4",
            "--epochs",
            "3",
            "--max-snippet-ratio",
            "1.0",
            "--word-cap",
            "8",
            "--name",
            "small",
        ]
    )
    assert code == 0
    return str(out)


def run_json(capsys, argv):
    code = main(["--machine", *argv])
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    return code, lines


def test_build_reports_quality(retina_path, capsys, tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("cat dog. dog cat. cat ran. dog ran.")
    out = tmp_path / "r.retina"
    code, lines = run_json(
        capsys,
        [
            "build",
            "--corpus",
            str(corpus),
            "--out",
            str(out),
            "--rows",
            "3",
            "--cols",
            "3",
            "--epochs",
            "2",
            "--max-snippet-ratio",
            "1.0",
        ],
    )
    assert code == 0
    (payload,) = lines
    assert payload["terms"] > 0
    assert set(payload) >= {"snippets", "quantization_error", "topographic_error"}
    assert out.exists()


def test_info_outputs_wire_names(retina_path, capsys):
    code, lines = run_json(capsys, ["info", "--retina", retina_path])
    assert code == 0
    (payload,) = lines
    assert payload["retinaName"] == "small"
    assert payload["numberOfRows"] == 4 and payload["numberOfColumns"] == 4


def test_term_and_similar(retina_path, capsys):
    code, lines = run_json(capsys, ["term", "cat", "--retina", retina_path])
    assert code == 0
    positions = lines[0]["fingerprint"]["positions"]
    assert positions and all(0 <= p < 16 for p in positions)

    code, lines = run_json(capsys, ["similar", "cat", "-k", "3", "--retina", retina_path])
    assert code == 0
    ranked = lines[0]["terms"]
    assert ranked[0]["term"] == "cat" and ranked[0]["score"] == pytest.approx(1.0)
    assert len(ranked) == 3


def test_similar_accepts_json_source(retina_path, capsys):
    source = json.dumps({"and": [{"term": "cat"}, {"term": "dog"}]})
    code, lines = run_json(capsys, ["similar", source, "-k", "2", "--retina", retina_path])
    assert code == 0
    assert len(lines[0]["terms"]) <= 2


def test_text_keywords_slices(retina_path, capsys):
    code, lines = run_json(
        capsys, ["text", "the cat and dog.", "--retina", retina_path]
    )
    assert code == 0
    assert lines[0]["known_words"] >= 2

    code, lines = run_json(
        capsys, ["keywords", "cat dog truck.", "--max-k", "2", "--retina", retina_path]
    )
    assert code == 0
    assert 1 <= len(lines[0]["keywords"]) <= 2

    code, lines = run_json(
        capsys, ["slices", "cat dog. truck engine.", "--retina", retina_path]
    )
    assert code == 0
    assert lines[0]["slices"]


def test_expr_and_compare(retina_path, capsys):
    expr = json.dumps({"or": [{"term": "cat"}, {"term": "truck"}]})
    code, lines = run_json(capsys, ["expr", expr, "--retina", retina_path])
    assert code == 0
    assert lines[0]["fingerprint"]["positions"]

    code, lines = run_json(capsys, ["compare", "cat", "cat", "--retina", retina_path])
    assert code == 0
    assert lines[0]["cosine"] == pytest.approx(1.0)
    assert lines[0]["hamming_distance"] == 0


def test_image_writes_ppm(retina_path, capsys, tmp_path):
    out = tmp_path / "cmp.ppm"
    code, lines = run_json(
        capsys,
        ["image", "cat", "dog", "--out", str(out), "--scale", "2", "--retina", retina_path],
    )
    assert code == 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n8 8\n255\n")
    assert lines[0]["bytes"] == len(data)


def test_filter_create_and_classify(retina_path, capsys, tmp_path):
    filter_path = tmp_path / "pets.json"
    code, lines = run_json(
        capsys,
        [
            "filter-create",
            "--label",
            "pets",
            "--positive",
            "the cat slept.",
            "--positive",
            "a cat chased a dog.",
            "--out",
            str(filter_path),
            "--retina",
            retina_path,
        ],
    )
    assert code == 0
    blob = json.loads(filter_path.read_text())
    assert blob["label"] == "pets" and blob["positions"]

    code, lines = run_json(
        capsys,
        ["classify", "--doc", "cat", "--filter", str(filter_path), "--retina", retina_path],
    )
    assert code == 0
    (result,) = lines[0]["results"]
    assert result["label"] == "pets"
    assert isinstance(result["accepted"], bool)


def test_data_errors_exit_1(retina_path, capsys):
    assert main(["term", "zebra", "--retina", retina_path]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert main(["info", "--retina", "/nonexistent/x.retina"]) == 1
    assert main(["similar", "{not json", "--retina", retina_path]) == 1


def test_missing_retina_is_a_data_error(capsys, monkeypatch):
    monkeypatch.delenv(ENV_RETINA, raising=False)
    assert main(["term", "cat"]) == 1
    assert ENV_RETINA in capsys.readouterr().err


def test_env_var_supplies_retina(retina_path, capsys, monkeypatch):
    monkeypatch.setenv(ENV_RETINA, retina_path)
    code, lines = run_json(capsys, ["term", "cat"])
    assert code == 0
    assert lines[0]["term"] == "cat"


def test_flag_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2


def test_human_output_is_not_json(retina_path, capsys):
    assert main(["term", "cat", "--retina", retina_path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("cat:")
