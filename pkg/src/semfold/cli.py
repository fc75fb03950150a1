"""Command line entry point.

Subcommands cover the whole engine: building retinas from a corpus,
querying terms and texts, Boolean expressions, comparison (numbers and
images), classification, the two sequence-memory experiments, serving the
REST API, and a brute-force scan benchmark.

Exit codes: 0 success, 1 data/runtime errors, 2 flag errors (argparse).
``--machine`` switches output to one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import data, textops
from .errors import SemfoldError
from .fingerprint import Fingerprint, GridTopology, PackedFingerprints, similarity
from .pipeline import BuildParams, build_from_documents, load_documents
from .retina import Retina
from .seqmem import run_experiment
from .som import TrainingSchedule

ENV_RETINA = "SEMFOLD_RETINA"
ENV_BIND = "SEMFOLD_BIND"


def _emit(args: argparse.Namespace, payload: dict, human: str) -> None:
    if args.machine:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _retina_path(args: argparse.Namespace) -> str:
    path = args.retina or os.environ.get(ENV_RETINA)
    if not path:
        raise SemfoldError(f"no retina given: pass --retina or set {ENV_RETINA}")
    return path


def _load_retina(args: argparse.Namespace) -> Retina:
    return Retina.load(_retina_path(args))


def _fp_payload(fp: Fingerprint) -> dict:
    return {"positions": list(fp.positions)}


def _source_arg(raw: str) -> dict:
    """A compare/classify operand: JSON object, or a bare word as a term."""
    if raw.lstrip().startswith("{"):
        return json.loads(raw)
    return {"term": raw}


def _read_json_arg(raw: str) -> dict:
    if raw == "-":
        raw = sys.stdin.read()
    value = json.loads(raw)
    if not isinstance(value, dict):
        raise SemfoldError("expression must be a JSON object")
    return value


# -- subcommand bodies ---------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    if args.corpus == "toy":
        documents = data.toy_documents()
    else:
        documents = load_documents(args.corpus)
    params = BuildParams(
        topology=GridTopology(args.rows, args.cols),
        snippet_sentences=args.snippet_sentences,
        min_snippet_freq=args.min_snippet_freq,
        max_snippet_ratio=args.max_snippet_ratio,
        schedule=TrainingSchedule(epochs=args.epochs, seed=args.seed),
        word_cap=args.word_cap,
        weighting=args.weighting,
        name=args.name,
        description=args.description,
    )
    result = build_from_documents(documents, params)
    result.retina.save(args.out)
    quality = result.quality
    _emit(
        args,
        {
            "retina": args.out,
            "terms": len(result.retina),
            "snippets": result.snippet_count,
            "dropped_snippets": result.dropped_snippets,
            "quantization_error": quality.quantization_error,
            "topographic_error": quality.topographic_error,
        },
        f"built {args.out}: {len(result.retina)} terms over "
        f"{result.snippet_count} snippets, quantization_error="
        f"{quality.quantization_error:.4f}, topographic_error="
        f"{quality.topographic_error:.4f}",
    )
    return 0


def cmd_info(args: argparse.Namespace) -> int:
    info = _load_retina(args).info().to_dict()
    _emit(
        args,
        info,
        f"{info['retinaName']}: {info['numberOfRows']}x{info['numberOfColumns']}, "
        f"{info['numberOfTermsInRetina']} terms - {info['description']}",
    )
    return 0


def cmd_term(args: argparse.Namespace) -> int:
    fp = _load_retina(args).get_fingerprint(args.word)
    _emit(
        args,
        {"term": args.word, "fingerprint": _fp_payload(fp)},
        f"{args.word}: {len(fp)} bits at {list(fp.positions)}",
    )
    return 0


def cmd_similar(args: argparse.Namespace) -> int:
    retina = _load_retina(args)
    fp = textops.resolve_fingerprint(_source_arg(args.source), retina)
    ranked = retina.similar_terms(fp, k=args.k) if len(fp) else []
    payload = {"terms": [{"term": t, "score": s} for t, s in ranked]}
    lines = "\n".join(f"{s:8.4f}  {t}" for t, s in ranked)
    _emit(args, payload, lines or "(empty fingerprint)")
    return 0


def cmd_contexts(args: argparse.Namespace) -> int:
    retina = _load_retina(args)
    found = textops.contexts(args.word, retina, max_contexts=args.max_contexts)
    payload = {
        "term": args.word,
        "contexts": [{"label": c.label, "terms": list(c.terms)} for c in found],
    }
    lines = "\n".join(f"{c.label}: {', '.join(c.terms)}" for c in found)
    _emit(args, payload, lines or "(no contexts)")
    return 0


def cmd_text(args: argparse.Namespace) -> int:
    result = textops.text_fingerprint(args.text, _load_retina(args), args.sparsity)
    _emit(
        args,
        {
            "fingerprint": _fp_payload(result.fingerprint),
            "known_words": result.known_words,
            "skipped_words": result.skipped_words,
        },
        f"{len(result.fingerprint)} bits ({result.known_words} known, "
        f"{result.skipped_words} skipped words): {list(result.fingerprint.positions)}",
    )
    return 0


def cmd_keywords(args: argparse.Namespace) -> int:
    words = textops.keywords(args.text, _load_retina(args), max_k=args.max_k)
    _emit(args, {"keywords": words}, ", ".join(words) or "(none)")
    return 0


def cmd_slices(args: argparse.Namespace) -> int:
    found = textops.slices(
        args.text,
        _load_retina(args),
        window_sentences=args.window_sentences,
        cut_threshold=args.cut_threshold,
    )
    payload = {
        "slices": [{"text": s.text, "fingerprint": _fp_payload(s.fingerprint)} for s in found]
    }
    lines = "\n".join(f"[{i}] {s.text.strip()}" for i, s in enumerate(found))
    _emit(args, payload, lines or "(no slices)")
    return 0


def cmd_expr(args: argparse.Namespace) -> int:
    fp = textops.evaluate_expression(_read_json_arg(args.expression), _load_retina(args))
    _emit(
        args,
        {"fingerprint": _fp_payload(fp)},
        f"{len(fp)} bits: {list(fp.positions)}",
    )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    retina = _load_retina(args)
    a = textops.resolve_fingerprint(_source_arg(args.a), retina)
    b = textops.resolve_fingerprint(_source_arg(args.b), retina)
    report = similarity(a, b)
    payload = {
        "overlap_count": report.overlap_count,
        "jaccard": report.jaccard,
        "dice": report.dice,
        "cosine": report.cosine,
        "hamming_distance": report.hamming_distance,
        "euclidean_distance": report.euclidean_distance,
        "weighted_overlap": report.weighted_overlap,
    }
    human = "\n".join(f"{k}: {v:.6g}" for k, v in payload.items())
    _emit(args, payload, human)
    return 0


def cmd_image(args: argparse.Namespace) -> int:
    retina = _load_retina(args)
    a = textops.resolve_fingerprint(_source_arg(args.a), retina)
    b = textops.resolve_fingerprint(_source_arg(args.b), retina)
    image = textops.render_comparison_image(a, b, scale=args.scale)
    if args.out == "-":
        sys.stdout.buffer.write(image)
    else:
        with open(args.out, "wb") as handle:
            handle.write(image)
        _emit(
            args,
            {"out": args.out, "bytes": len(image)},
            f"wrote {args.out} ({len(image)} bytes)",
        )
    return 0


def cmd_filter_create(args: argparse.Namespace) -> int:
    retina = _load_retina(args)
    cat = textops.create_category_filter(
        args.label,
        args.positive,
        retina,
        negative_texts=args.negative,
        cutoff=args.cutoff,
    )
    blob = {
        "label": cat.label,
        "positions": list(cat.fingerprint.positions),
        "cutoff": cat.cutoff,
        "rows": retina.topology.rows,
        "cols": retina.topology.cols,
    }
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(blob, handle)
        handle.write("\n")
    _emit(
        args,
        blob,
        f"wrote {args.out}: filter {cat.label!r}, {len(cat.fingerprint)} bits, "
        f"cutoff {cat.cutoff}",
    )
    return 0


def _load_filter(path: str, retina: Retina) -> textops.CategoryFilter:
    with open(path, encoding="utf-8") as handle:
        blob = json.load(handle)
    topology = GridTopology(int(blob["rows"]), int(blob["cols"]))
    fp = Fingerprint.from_positions(topology, [int(p) for p in blob["positions"]])
    return textops.CategoryFilter(str(blob["label"]), fp, float(blob["cutoff"]))


def cmd_classify(args: argparse.Namespace) -> int:
    retina = _load_retina(args)
    doc = textops.resolve_fingerprint(_source_arg(args.doc), retina)
    filters = [_load_filter(path, retina) for path in args.filter]
    results = textops.classify(doc, filters)
    payload = {
        "results": [
            {"label": r.label, "score": r.score, "accepted": r.accepted} for r in results
        ]
    }
    lines = "\n".join(
        f"{r.score:8.4f}  {'accept' if r.accepted else 'reject'}  {r.label}"
        for r in results
    )
    _emit(args, payload, lines or "(no filters)")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServiceConfig, serve

    retina = _load_retina(args)
    bind = args.bind or os.environ.get(ENV_BIND) or "127.0.0.1:8080"
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise SemfoldError(f"bad bind address {bind!r}, expected host:port")
    serve(retina, ServiceConfig(host=host, port=int(port_text), max_body_bytes=args.max_body))
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    retina = None
    if args.rows or args.cols:
        rows = args.rows or data.TOY_ROWS
        cols = args.cols or data.TOY_COLS
        retina = data.build_toy_retina(seed=args.seed, rows=rows, cols=cols)
    transcript = run_experiment(args.name, retina=retina, seed=args.seed)
    for query, answer in transcript.answers:
        _emit(args, {"query": query, "answer": answer}, f"{query} => {answer}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    topology = GridTopology(args.rows, args.cols)
    rng = np.random.default_rng(args.seed)
    bits = max(1, int(0.02 * topology.size))
    fps = [
        Fingerprint.from_positions(
            topology, rng.choice(topology.size, size=bits, replace=False)
        )
        for _ in range(args.count)
    ]
    packed = PackedFingerprints(topology, fps)
    queries = fps[:: max(1, len(fps) // args.queries)][: args.queries]

    start = time.perf_counter()
    for query in queries:
        packed.cosine(query)
    scan_elapsed = time.perf_counter() - start
    per_scan = scan_elapsed / len(queries)

    pair_n = min(args.count, args.pairs)
    start = time.perf_counter()
    for i in range(pair_n):
        similarity(fps[i], fps[(i + 1) % len(fps)])
    pair_elapsed = time.perf_counter() - start

    payload = {
        "documents": args.count,
        "scan_seconds_per_query": per_scan,
        "scans_per_second": 1.0 / per_scan if per_scan else float("inf"),
        "pairwise_per_second": pair_n / pair_elapsed if pair_elapsed else float("inf"),
    }
    _emit(
        args,
        payload,
        f"{args.count} docs: full scan {per_scan * 1000:.1f} ms/query, "
        f"pairwise similarity {payload['pairwise_per_second']:.0f} ops/s",
    )
    return 0


# -- parser ---------------------------------------------------------------------


def _add_retina_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--retina",
        help=f"retina file path (default: ${ENV_RETINA})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semfold", description="semantic folding engine"
    )
    parser.add_argument(
        "--machine", action="store_true", help="emit one JSON object per line"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a retina from a corpus")
    p.add_argument("--corpus", required=True, help="corpus dir/file, or 'toy' for the bundled one")
    p.add_argument("--out", required=True, help="output retina file")
    p.add_argument("--rows", type=int, default=128)
    p.add_argument("--cols", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--snippet-sentences", type=int, default=1)
    p.add_argument("--min-snippet-freq", type=int, default=1)
    p.add_argument("--max-snippet-ratio", type=float, default=0.4)
    p.add_argument("--word-cap", type=int, default=None)
    p.add_argument("--weighting", choices=("tfidf", "binary"), default="tfidf")
    p.add_argument("--name", default="retina")
    p.add_argument("--description", default="")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("info", help="describe a retina file")
    _add_retina_flag(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("term", help="fingerprint of a term")
    p.add_argument("word")
    _add_retina_flag(p)
    p.set_defaults(func=cmd_term)

    p = sub.add_parser("similar", help="nearest terms to a term/text/JSON source")
    p.add_argument("source", help="bare word, or JSON leaf/tree")
    p.add_argument("-k", type=int, default=20)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("contexts", help="sense decomposition of a term")
    p.add_argument("word")
    p.add_argument("--max-contexts", type=int, default=10)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_contexts)

    p = sub.add_parser("text", help="fingerprint of a text")
    p.add_argument("text")
    p.add_argument("--sparsity", type=float, default=textops.TEXT_SPARSITY)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_text)

    p = sub.add_parser("keywords", help="greedy keyword extraction")
    p.add_argument("text")
    p.add_argument("--max-k", type=int, default=10)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_keywords)

    p = sub.add_parser("slices", help="cut a text into topic slices")
    p.add_argument("text")
    p.add_argument("--window-sentences", type=int, default=1)
    p.add_argument("--cut-threshold", type=float, default=0.1)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_slices)

    p = sub.add_parser("expr", help="evaluate a Boolean fingerprint expression")
    p.add_argument("expression", help="JSON tree, or '-' to read stdin")
    _add_retina_flag(p)
    p.set_defaults(func=cmd_expr)

    p = sub.add_parser("compare", help="similarity report for two sources")
    p.add_argument("a")
    p.add_argument("b")
    _add_retina_flag(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("image", help="render a comparison pixmap")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", required=True, help="output .ppm path, or '-' for stdout")
    p.add_argument("--scale", type=int, default=4)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("filter-create", help="build a category filter from texts")
    p.add_argument("--label", required=True)
    p.add_argument("--positive", action="append", required=True, help="repeatable")
    p.add_argument("--negative", action="append", default=[], help="repeatable")
    p.add_argument("--cutoff", type=float, default=0.5)
    p.add_argument("--out", required=True, help="output filter JSON path")
    _add_retina_flag(p)
    p.set_defaults(func=cmd_filter_create)

    p = sub.add_parser("classify", help="score a document against saved filters")
    p.add_argument("--doc", required=True, help="bare text is not assumed; JSON or word")
    p.add_argument("--filter", action="append", required=True, help="filter JSON path, repeatable")
    _add_retina_flag(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("serve", help="run the REST service")
    p.add_argument("--bind", help=f"host:port (default: ${ENV_BIND} or 127.0.0.1:8080)")
    p.add_argument("--max-body", type=int, default=1_000_000)
    _add_retina_flag(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("experiment", help="run a bundled inference experiment")
    p.add_argument("name", choices=("fox", "physicists"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=0, help="toy retina rows (0 = default)")
    p.add_argument("--cols", type=int, default=0, help="toy retina cols (0 = default)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench", help="brute-force scan benchmark")
    p.add_argument("--count", type=int, default=100_000, help="documents in the scan set")
    p.add_argument("--queries", type=int, default=20)
    p.add_argument("--pairs", type=int, default=2_000, help="pairwise similarity sample")
    p.add_argument("--rows", type=int, default=128)
    p.add_argument("--cols", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SemfoldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
