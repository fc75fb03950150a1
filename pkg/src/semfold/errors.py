"""Exception types raised across the package.

Every error below derives from :class:`SemfoldError` so callers can catch
the whole family with one clause.  The names describe the failed contract,
not the module that raised it.
"""

from __future__ import annotations

__all__ = [
    "SemfoldError",
    "TopologyMismatch",
    "EmptyFingerprint",
    "EmptyCorpus",
    "EmptyVector",
    "TermNotFound",
    "BuildError",
    "FormatError",
    "CorruptFile",
    "EmptyTextError",
    "EmptyClassError",
    "NoPrediction",
    "ExperimentVocabError",
]


class SemfoldError(Exception):
    """Base class for all package-specific errors."""


class TopologyMismatch(SemfoldError):
    """Two fingerprints with different grid shapes were combined."""


class EmptyFingerprint(SemfoldError):
    """An operation that requires set bits received an empty fingerprint."""


class EmptyCorpus(SemfoldError):
    """A corpus-level operation received zero snippets."""


class EmptyVector(SemfoldError):
    """A snippet produced an all-zero term-weight vector."""


class TermNotFound(SemfoldError):
    """A term is not present in the retina vocabulary."""

    def __init__(self, term: str, detail: str = ""):
        self.term = term
        self.detail = detail
        msg = f"term not in retina: {term!r}"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class BuildError(SemfoldError):
    """Retina construction received inconsistent inputs."""


class FormatError(SemfoldError):
    """A serialized artifact has the wrong magic, version, or field layout."""


class CorruptFile(SemfoldError):
    """A serialized artifact ends prematurely or fails validation mid-parse."""


class EmptyTextError(SemfoldError):
    """A text operation found no usable (in-vocabulary) words."""


class EmptyClassError(SemfoldError):
    """A category filter was requested with no positive example texts."""


class NoPrediction(SemfoldError):
    """Decoding was asked to name a prediction that does not exist."""


class ExperimentVocabError(SemfoldError):
    """An experiment dataset or query uses words missing from the retina."""

    def __init__(self, missing: list[str]):
        self.missing = sorted(missing)
        super().__init__(
            "experiment vocabulary missing from retina: " + ", ".join(self.missing)
        )
