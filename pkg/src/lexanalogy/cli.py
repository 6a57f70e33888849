"""Command-line pipeline driver.

Commands: parse, extract, evaluate, retrofit, relations, annotate-serve,
stats.  A flat ``key = value`` config file supplies paths and parameters;
per-command flags override it.  Every command exits 0 only when all of its
outputs were written.
"""

from __future__ import annotations

import argparse
import logging
import shutil
import sys
from pathlib import Path

import numpy as np

from .annotation import (
    AnnotationSession,
    build_concept_tasks,
    build_synset_tasks,
    extraction_verdicts,
)
from .defgraph import ParseError, parse_definition
from .evaluation import Embedding, evaluate, load_benchmark, write_eval_report
from .extraction import (
    ConceptId,
    ExtractionConfig,
    extract_analogies,
    group_relations,
    read_analogies,
    read_concept_analogies,
    write_analogies,
    write_concept_analogies,
    write_relation_classes,
)
from .lexicon import FrequencyTable, Lexicon, Taxonomy
from .retrofit import KnowledgeGraph, RetrofitConfig, retrofit
from .server import make_server, serve_forever

log = logging.getLogger("lexanalogy")

_DEFAULTS = {
    "lexicon": None,
    "taxonomy": None,
    "freq": None,
    "output_dir": "out",
    "min_freq": 5,
    "concrete_root": "physical|物質",
    "expansion_depth_limit": 8,
    "unordered_args": False,
    "require_full_synset": False,
    "alpha": 1.0,
    "iterations": 10,
    "convergence_eps": 1e-6,
    "port": 8765,
    "seed": 0,
    "jobs": 1,
    "annotators": "",
    "policy": "permissive",
}


class CliError(Exception):
    pass


def load_config(path) -> dict:
    """Parse a flat key = value file: strings, numbers, booleans, # comments."""
    values = dict(_DEFAULTS)
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if value.startswith('"'):
            if not value.endswith('"') or len(value) < 2:
                raise CliError(f"{path}:{lineno}: unterminated string")
            parsed = value[1:-1]
        else:
            value = value.split("#", 1)[0].strip()
            if value.lower() in ("true", "false"):
                parsed = value.lower() == "true"
            else:
                try:
                    parsed = int(value)
                except ValueError:
                    try:
                        parsed = float(value)
                    except ValueError:
                        parsed = value
        if key not in values:
            raise CliError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = parsed
    return values


def _settings(args) -> dict:
    values = load_config(args.config) if args.config else dict(_DEFAULTS)
    if getattr(args, "seed", None) is not None:
        values["seed"] = args.seed
    if getattr(args, "jobs", None) is not None:
        values["jobs"] = args.jobs
    return values


def _require_file(path, what: str) -> Path:
    if path is None:
        raise CliError(f"no {what} configured (flag or config file)")
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} not found: {p}")
    return p


def _load_inputs(settings, args):
    lexicon = Lexicon.load(_require_file(args.lexicon or settings["lexicon"], "lexicon"))
    taxonomy_path = args.taxonomy or settings["taxonomy"]
    root_text = settings["concrete_root"]
    if getattr(args, "concrete_root", None) is not None:
        root_text = args.concrete_root
    if isinstance(root_text, str) and root_text.lower() in ("", "none"):
        root_text = None
    taxonomy = (
        Taxonomy.load(_require_file(taxonomy_path, "taxonomy"))
        if taxonomy_path
        else None
    )
    frequencies = FrequencyTable.load(
        _require_file(args.freq or settings["freq"], "frequency table")
    )
    config = ExtractionConfig(
        concrete_root=ConceptId.parse(root_text) if root_text else None,
        min_freq=args.min_freq if args.min_freq is not None else settings["min_freq"],
        expansion_depth_limit=settings["expansion_depth_limit"],
        unordered_args=settings["unordered_args"],
    )
    return lexicon, taxonomy, frequencies, config


def _out_dir(settings, args) -> Path:
    out = Path(getattr(args, "output_dir", None) or settings["output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands -------------------------------------------------------------------


def cmd_parse(args, settings) -> int:
    try:
        graph = parse_definition(args.definition)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    if args.format == "dot":
        print(graph.to_dot())
    elif args.format == "json":
        import json

        print(json.dumps(graph.to_payload(), ensure_ascii=False, indent=1))
    else:
        print(graph.to_listing())
    return 0


def cmd_extract(args, settings) -> int:
    lexicon, taxonomy, frequencies, config = _load_inputs(settings, args)
    verdicts = None
    if args.verdicts:
        session = AnnotationSession.load(Path(args.verdicts))
        verdicts = extraction_verdicts(session, settings["policy"])
    result = extract_analogies(
        lexicon,
        taxonomy,
        frequencies,
        config,
        verdicts=verdicts,
        jobs=settings["jobs"],
    )
    out = _out_dir(settings, args)
    write_analogies(result.analogies, out / "analogies.tsv")
    write_concept_analogies(result.concept_analogies, out / "concept_analogies.tsv")
    (out / "extraction_report.txt").write_text(result.report.render(), encoding="utf-8")
    log.info(
        "extracted %d analogies (%d concept analogies) -> %s",
        len(result.analogies),
        len(result.concept_analogies),
        out,
    )
    return 0


def cmd_evaluate(args, settings) -> int:
    emb = Embedding.load(_require_file(args.embedding, "embedding"))
    questions = load_benchmark(_require_file(args.benchmark, "benchmark"))
    report = evaluate(
        emb,
        questions,
        require_full_synset=args.require_full_synset
        or settings["require_full_synset"],
    )
    out = _out_dir(settings, args)
    write_eval_report(report, out / "eval_report.tsv")
    print(report.summary())
    return 0


def cmd_retrofit(args, settings) -> int:
    emb_path = _require_file(args.embedding, "embedding")
    emb = Embedding.load(emb_path)
    kg = KnowledgeGraph.load(_require_file(args.kg, "knowledge graph"))
    config = RetrofitConfig(
        alpha=settings["alpha"],
        iterations=args.iterations or settings["iterations"],
        convergence_eps=settings["convergence_eps"],
    )
    fitted, report = retrofit(emb, kg, config)
    out = _out_dir(settings, args)
    out_path = out / "retrofitted.txt"
    if np.array_equal(fitted.matrix, emb.matrix):
        # Nothing moved: keep the output byte-identical to the input.
        shutil.copyfile(emb_path, out_path)
    else:
        fitted.save(out_path)
    report_lines = ["pass\tobjective"]
    report_lines += [
        f"{i + 1}\t{obj!r}" for i, obj in enumerate(report.objective_per_pass)
    ]
    report_lines.append(f"updated_words\t{report.updated_words}")
    (out / "retrofit_report.tsv").write_text(
        "\n".join(report_lines) + "\n", encoding="utf-8"
    )
    log.info("retrofitted %d words in %d passes", report.updated_words, report.passes_run)
    return 0


def cmd_relations(args, settings) -> int:
    analogies = read_analogies(_require_file(args.analogies, "analogies file"))
    classes = group_relations(analogies)
    out = _out_dir(settings, args)
    write_relation_classes(classes, out / "relations.tsv")
    print(f"classes={len(classes)}")
    return 0


def cmd_stats(args, settings) -> int:
    analogies = read_analogies(_require_file(args.analogies, "analogies file"))
    words = set()
    for a in analogies:
        words.update((a.w1, a.w2, a.w3))
        words.update(a.synset)
    classes = group_relations(analogies)
    print(f"analogies={len(analogies)} words={len(words)} relations={len(classes)}")
    return 0


def cmd_annotate_serve(args, settings) -> int:
    session_dir = Path(args.session or Path(settings["output_dir"]) / "session")
    if (session_dir / "session.json").exists():
        session = AnnotationSession.load(session_dir)
        log.info("loaded session with %d tasks from %s", len(session.tasks), session_dir)
    else:
        lexicon = Lexicon.load(
            _require_file(args.lexicon or settings["lexicon"], "lexicon")
        )
        cas = read_concept_analogies(
            _require_file(args.concept_analogies, "concept analogies file")
        )
        tasks = list(build_concept_tasks(cas, lexicon, settings["expansion_depth_limit"]))
        if args.with_synset_tasks:
            freq_path = args.freq or settings["freq"]
            frequencies = (
                FrequencyTable.load(_require_file(freq_path, "frequency table"))
                if freq_path
                else None
            )
            tasks += build_synset_tasks(
                cas, lexicon, frequencies, settings["min_freq"]
            )
        annotators = [
            a.strip()
            for a in (args.annotators or settings["annotators"]).split(",")
            if a.strip()
        ]
        if not annotators:
            raise CliError("no annotators configured")
        session = AnnotationSession(
            tasks, annotators, seed=settings["seed"], directory=session_dir
        )
        log.info("created session with %d tasks in %s", len(tasks), session_dir)
    port = args.port or settings["port"]
    try:
        server = make_server(session, port=port, assets_dir=args.assets)
    except OSError as exc:
        print(f"cannot bind port {port}: {exc}", file=sys.stderr)
        return 1
    bound = server.server_address[1]
    print(f"serving annotation session on http://127.0.0.1:{bound}/", flush=True)
    serve_forever(server)
    return 0


# -- argument wiring --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexanalogy",
        description="Commonsense analogy extraction, benchmarking, and annotation.",
    )
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--seed", type=int, help="seed for shuffled queues")
    parser.add_argument("--jobs", type=int, help="parallel workers for extraction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse one definition string")
    p.add_argument("definition")
    p.add_argument("--format", choices=("listing", "dot", "json"), default="listing")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("extract", help="run the extraction pipeline")
    p.add_argument("--lexicon")
    p.add_argument("--taxonomy")
    p.add_argument("--freq")
    p.add_argument("--output-dir")
    p.add_argument("--min-freq", type=int)
    p.add_argument("--concrete-root", help='taxonomy root filter; "none" disables')
    p.add_argument("--verdicts", help="annotation session directory")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="score an embedding on a benchmark")
    p.add_argument("--embedding", required=True)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--require-full-synset", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("retrofit", help="retrofit an embedding to a knowledge graph")
    p.add_argument("--embedding", required=True)
    p.add_argument("--kg", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--iterations", type=int)
    p.set_defaults(func=cmd_retrofit)

    p = sub.add_parser("relations", help="group analogies into relation classes")
    p.add_argument("--analogies", required=True)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("stats", help="corpus statistics for an analogies file")
    p.add_argument("--analogies", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("annotate-serve", help="serve the annotation API and UI")
    p.add_argument("--session", help="session directory (created when missing)")
    p.add_argument("--lexicon")
    p.add_argument("--freq")
    p.add_argument("--concept-analogies")
    p.add_argument("--with-synset-tasks", action="store_true")
    p.add_argument("--annotators", help="comma-separated annotator ids")
    p.add_argument("--port", type=int)
    p.add_argument("--assets", help="static UI directory")
    p.set_defaults(func=cmd_annotate_serve)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _settings(args)
        return args.func(args, settings)
    except (CliError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
