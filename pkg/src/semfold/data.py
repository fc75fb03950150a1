"""Bundled corpus and datasets for the desk-scale inference experiments.

The package ships a small handcrafted reference corpus (animals, vehicles,
professions) sized so a 16x16 map trains in seconds, plus the two
word-sequence datasets used by :func:`semfold.seqmem.run_experiment`:

* ``fox``: three-word animal-diet sentences; the single query asks what a
  fox, never seen as a sentence subject, eats.
* ``physicists``: "X be <profession>" / "X like <object>" sentences over
  physicists, singers and actors; 13 queries ask about unseen people and
  about class words such as "physicists".

``reference_answers`` records the completions the bundled setup is expected
to produce, for use by tests and the CLI transcript check.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .corpus import Document
from .fingerprint import GridTopology
from .pipeline import BuildParams, build_from_documents
from .retina import Retina
from .som import TrainingSchedule

__all__ = [
    "toy_documents",
    "build_toy_retina",
    "experiment_dataset",
    "reference_answers",
    "TOY_ROWS",
    "TOY_COLS",
]

TOY_ROWS = 32
TOY_COLS = 32

_FOX_QUERIES = ["fox eat"]

_FOX_ANSWERS = {"fox eat": {"rodent", "mice", "rabbit", "squirrel"}}

_PHYSICISTS_QUERIES = [
    "eminem be",
    "eminem like",
    "niels bohr be",
    "niels bohr like",
    "albert einstein be",
    "albert einstein like",
    "tom cruise like",
    "angelina jolie like",
    "brad pitt like",
    "physicists like",
    "mathematicians like",
    "actors like",
    "physicists be",
]

_PHYSICISTS_ANSWERS = {
    "eminem be": {"singer"},
    "eminem like": {"fans"},
    "niels bohr be": {"physicist"},
    "niels bohr like": {"mathematics"},
    "albert einstein be": {"physicist"},
    "albert einstein like": {"mathematics"},
    "tom cruise like": {"fans"},
    "angelina jolie like": {"fans"},
    "brad pitt like": {"fans"},
    "physicists like": {"mathematics"},
    "mathematicians like": {"mathematics"},
    "actors like": {"fans"},
    "physicists be": {"physicist"},
}


def _read_data(name: str) -> str:
    return resources.files("semfold").joinpath(f"data/{name}").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _lines(name: str) -> tuple[str, ...]:
    return tuple(line.strip() for line in _read_data(name).splitlines() if line.strip())


def toy_documents() -> list[Document]:
    """The bundled reference corpus, one document per line."""
    return [
        Document(f"toy-{i:04d}", line)
        for i, line in enumerate(_lines("toy_corpus.txt"))
    ]


def build_toy_retina(
    seed: int = 0,
    rows: int = TOY_ROWS,
    cols: int = TOY_COLS,
) -> Retina:
    """Build a word encoder over the bundled corpus.

    Deterministic for equal arguments.  The default 32x32 grid keeps the
    build to a few seconds while giving each word enough distinct cells
    that half its bits still identify it.
    """
    params = BuildParams(
        topology=GridTopology(rows, cols),
        schedule=TrainingSchedule(seed=seed),
        name=f"toy-{rows}x{cols}-seed{seed}",
        description="bundled reference corpus (animals, vehicles, professions)",
    )
    return build_from_documents(toy_documents(), params).retina


def experiment_dataset(name: str) -> tuple[list[str], list[str]]:
    """Sentences and queries for a bundled experiment ("fox"/"physicists")."""
    if name == "fox":
        return list(_lines("experiment_fox.txt")), list(_FOX_QUERIES)
    if name == "physicists":
        return list(_lines("experiment_physicists.txt")), list(_PHYSICISTS_QUERIES)
    raise ValueError(f"unknown experiment {name!r}; choose 'fox' or 'physicists'")


def reference_answers(name: str) -> dict[str, set[str]]:
    """Acceptable completions per query for a bundled experiment."""
    if name == "fox":
        return {q: set(a) for q, a in _FOX_ANSWERS.items()}
    if name == "physicists":
        return {q: set(a) for q, a in _PHYSICISTS_ANSWERS.items()}
    raise ValueError(f"unknown experiment {name!r}; choose 'fox' or 'physicists'")
