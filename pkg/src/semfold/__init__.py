"""Semantic folding: sparse binary word and text fingerprints on a 2D map.

A reference corpus is folded onto a self-organising grid; every word's
fingerprint is the set of grid cells whose snippets mention it.  Similar
meanings land in nearby cells, so plain set algebra over fingerprints
carries semantics: union aggregates topics, intersection isolates shared
context, overlap counts measure relatedness.

Quick start::

    from semfold import data, similarity

    retina = data.build_toy_retina(seed=0)
    dog = retina.get_fingerprint("dog")
    cat = retina.get_fingerprint("cat")
    print(similarity(dog, cat).cosine)
"""

from .corpus import (
    Document,
    Snippet,
    TokenizerConfig,
    Vocabulary,
    build_vocabulary,
    cut_snippets,
    sentence_spans,
    tokenize,
)
from .errors import (
    BuildError,
    CorruptFile,
    EmptyClassError,
    EmptyCorpus,
    EmptyFingerprint,
    EmptyTextError,
    EmptyVector,
    ExperimentVocabError,
    FormatError,
    NoPrediction,
    SemfoldError,
    TermNotFound,
    TopologyMismatch,
)
from .fingerprint import (
    BooleanOp,
    Fingerprint,
    GridTopology,
    PackedFingerprints,
    SimilarityReport,
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
from .pipeline import BuildParams, BuildResult, build_from_documents, load_documents
from .retina import BuildConfig, Retina, RetinaInfo, build_retina
from .seqmem import (
    AnomalyScore,
    ExperimentTranscript,
    PredictorConfig,
    SequenceMemory,
    decode,
    run_experiment,
)
from .som import MapQualityReport, SomGrid, TrainingSchedule, map_quality, train_som
from .textops import (
    CategoryFilter,
    ClassificationResult,
    Context,
    SliceResult,
    TextFingerprint,
    classify,
    contexts,
    create_category_filter,
    evaluate_expression,
    keywords,
    render_comparison_image,
    slices,
    text_fingerprint,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # fingerprints
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
    # corpus
    "Document",
    "Snippet",
    "TokenizerConfig",
    "Vocabulary",
    "tokenize",
    "sentence_spans",
    "cut_snippets",
    "build_vocabulary",
    # map
    "TrainingSchedule",
    "SomGrid",
    "MapQualityReport",
    "train_som",
    "map_quality",
    # retina
    "Retina",
    "RetinaInfo",
    "BuildConfig",
    "build_retina",
    "BuildParams",
    "BuildResult",
    "build_from_documents",
    "load_documents",
    # text operations
    "TextFingerprint",
    "text_fingerprint",
    "keywords",
    "slices",
    "SliceResult",
    "contexts",
    "Context",
    "evaluate_expression",
    "CategoryFilter",
    "create_category_filter",
    "classify",
    "ClassificationResult",
    "render_comparison_image",
    # sequence memory
    "SequenceMemory",
    "PredictorConfig",
    "AnomalyScore",
    "ExperimentTranscript",
    "decode",
    "run_experiment",
    # errors
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
