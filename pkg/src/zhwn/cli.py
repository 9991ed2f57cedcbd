"""Command-line pipeline: build, screen, apply-edits, eval-*, stats, serve.

Every run writes its primary output plus sibling files derived from the
output stem (detail TSV, PNG figure) and a ``<out>.manifest.json`` run
manifest with input/output digests and the config snapshot.  Exit codes:
0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import relatedness, report, similarity
from .config import ToolkitConfig, load_config
from .corrections import EditLog, apply_edits
from .errors import ZhwnError
from .lexicon import BilingualLexicon, classify, load_dictionary, merge, remap, translate_synsets, write_miss_report
from .manifest import RunManifest
from .review import build_queue
from .screening import screen_all, write_outcomes
from .similarity import SenseLookup, evaluate_pairs, load_pairs, params_for
from .store import coverage_report, load_db, load_version_map
from .tokenization import load_stoplist, whitespace_tokens
from .wsd import build_inventory, evaluate_instances, load_instances, load_inventory, load_semeval_task5

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _stem(out: Path) -> Path:
    return out.with_suffix("") if out.suffix else out


def _config(args) -> ToolkitConfig:
    return load_config(args.config) if args.config else ToolkitConfig()


def _write_json(payload, path) -> None:
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n",
                          encoding="utf-8")


def build_parser() -> _Parser:
    parser = _Parser(prog="zhwn", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, wordnet=True, lexicon=True, embeddings=False, out=True):
        if wordnet:
            p.add_argument("--wordnet", required=True, help="directory with data.*/index.* files")
        if lexicon:
            p.add_argument("--lexicon", required=True, help="bilingual lexicon JSONL")
        if embeddings:
            p.add_argument("--embeddings", required=True, help="word2vec text vectors")
        p.add_argument("--config", help="key = value configuration file")
        if out:
            p.add_argument("--out", required=True, help="primary output file")

    p = sub.add_parser("build", help="translate synsets via dictionaries and merge with a base lexicon")
    common(p, lexicon=False)
    p.add_argument("--dict", action="append", required=True, dest="dicts",
                   help="dictionary TSV (repeatable)")
    p.add_argument("--base", help="base lexicon JSONL to merge over")
    p.add_argument("--map", help="version-map TSV applied to the base lexicon")
    p.add_argument("--map-from", default="2.0")
    p.add_argument("--map-to", default="3.0")
    p.add_argument("--label", default="dict")
    p.add_argument("--timestamp", help="pin the build timestamp (ISO 8601) for reproducible output")

    p = sub.add_parser("screen", help="machine screening of candidate lemmas")
    common(p, wordnet=False, embeddings=True)
    p.add_argument("--plot-synset", help="also render the 2D geometry of one synset id")

    p = sub.add_parser("apply-edits", help="replay a correction log over a lexicon")
    common(p, wordnet=False)
    p.add_argument("--log", required=True, help="edit-log JSONL")
    p.add_argument("--wordnet-dir", dest="wordnet", help="optional wordnet for synset checks")

    p = sub.add_parser("eval-relatedness", help="score lemmas against a gloss standard")
    common(p, wordnet=False, embeddings=True)
    p.add_argument("--standard", required=True, help="synset<TAB>gloss TSV")
    p.add_argument("--label", help="standard label (C_gloss180 triggers canonical checks)")
    p.add_argument("--stoplist", help="stopword file for gloss tokenization")

    p = sub.add_parser("eval-similarity", help="conceptual similarity on a word-pair set")
    common(p)
    p.add_argument("--pairs", required=True, help="word1<TAB>word2<TAB>score TSV")
    p.add_argument("--language", choices=("chinese", "english"), default="chinese")

    p = sub.add_parser("eval-wsd", help="word sense disambiguation scoring")
    common(p, embeddings=True)
    p.add_argument("--instances", help="WSD instance JSONL")
    p.add_argument("--semeval-xml", help="lexical-sample XML (alternative to --instances)")
    p.add_argument("--semeval-key", help="gold key file for --semeval-xml")
    p.add_argument("--inventory", help="sense inventory TSV (default: from lexicon)")
    p.add_argument("--pre-segmented", action="store_true",
                   help="sentences are whitespace-tokenized already")

    p = sub.add_parser("stats", help="coverage report for a lexicon over a wordnet")
    common(p)

    p = sub.add_parser("serve", help="run the review HTTP service")
    common(p, out=False)
    p.add_argument("--log", required=True, help="edit-log JSONL (created if missing)")
    p.add_argument("--queue", help="review-queue JSONL")
    p.add_argument("--screening", help="screening outcomes JSONL for stats")
    p.add_argument("--frontend", help="directory with the built review UI")
    p.add_argument("--address", help="host:port (default env ZHWN_ADDR or 127.0.0.1:8710)")
    return parser


def cmd_build(args) -> int:
    cfg = _config(args)
    out = Path(args.out)
    timestamp = args.timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    db = load_db(args.wordnet)
    entries = []
    for path in args.dicts:
        entries.extend(load_dictionary(path))
    lex, misses = translate_synsets(db, entries, label=args.label, built_at=timestamp)

    manifest = RunManifest("build", cfg.as_dict() | {"timestamp": timestamp, "label": args.label})
    manifest.add_input(args.wordnet)
    for path in args.dicts:
        manifest.add_input(path)

    unmapped = []
    if args.base:
        base = BilingualLexicon.load(args.base)
        manifest.add_input(args.base)
        if args.map:
            vmap = load_version_map(args.map, args.map_from, args.map_to)
            manifest.add_input(args.map)
            base, unmapped = remap(base, vmap)
        lex = merge(base, lex, built_at=timestamp)

    classification = classify(db, lex)
    stem = _stem(out)
    lex.save(out)
    write_miss_report(misses, f"{stem}.misses.tsv")
    payload = {
        "lexicon": lex.counts(),
        "classification": classification.counts(),
        "dictionary_misses": len(misses),
        "unmapped_base_synsets": [str(s) for s in unmapped],
    }
    _write_json(payload, f"{stem}.classify.json")
    report.save_classification_figure(classification.counts(), f"{stem}.png")
    for path in (out, f"{stem}.misses.tsv", f"{stem}.classify.json", f"{stem}.png"):
        manifest.add_output(path)
    manifest.write(out)
    counts = lex.counts()
    print(f"build: {counts['synsets']} synsets, {counts['lemmas']} candidates, "
          f"{len(misses)} dictionary misses -> {out}")
    return 0


def cmd_screen(args) -> int:
    from .embeddings import load_embeddings

    cfg = _config(args)
    out = Path(args.out)
    stem = _stem(out)
    lex = BilingualLexicon.load(args.lexicon)
    table = load_embeddings(args.embeddings)
    outcomes, summary = screen_all(lex, table, cfg.screening())
    queue = build_queue(outcomes, lex, cfg.hard_translation())

    write_outcomes(outcomes, out)
    Path(f"{stem}.summary.tsv").write_text(summary.as_tsv(), encoding="utf-8")
    lex.save(f"{stem}.lexicon.jsonl")
    queue.save(f"{stem}.queue.jsonl")
    report.save_screening_figure(outcomes, summary, f"{stem}.png")

    # pca_fit records that the projection was fitted over this run's
    # candidate tokens, not the whole vocabulary
    manifest = RunManifest("screen", cfg.as_dict() | {"pca_fit": "run-candidates"})
    manifest.add_input(args.lexicon)
    manifest.add_input(args.embeddings)
    outputs = [out, f"{stem}.summary.tsv", f"{stem}.lexicon.jsonl", f"{stem}.queue.jsonl", f"{stem}.png"]
    if args.plot_synset:
        wanted = [o for o in outcomes if str(o.synset) == args.plot_synset]
        if not wanted:
            raise ZhwnError(f"no screening outcome for {args.plot_synset}")
        report.save_projection_figure(wanted[0], f"{stem}.{args.plot_synset}.png")
        outputs.append(f"{stem}.{args.plot_synset}.png")
    for path in outputs:
        manifest.add_output(path)
    manifest.write(out)
    total = summary.total()
    print(f"screen: kept {total['kept']}, dropped {total['dropped']}, "
          f"deferred {total['deferred']} (queue {len(queue)}) -> {out}")
    return 0


def cmd_apply_edits(args) -> int:
    cfg = _config(args)
    out = Path(args.out)
    lex = BilingualLexicon.load(args.lexicon)
    log = EditLog.open(args.log)
    db = load_db(args.wordnet) if args.wordnet else None
    result = apply_edits(lex, log.records_after(lex.applied_through), db)
    result.save(out)

    manifest = RunManifest("apply-edits", cfg.as_dict())
    manifest.add_input(args.lexicon)
    manifest.add_input(args.log)
    manifest.add_output(out)
    manifest.write(out)
    print(f"apply-edits: {len(log.records)} edits in log, tip {result.applied_through} -> {out}")
    return 0


def cmd_eval_relatedness(args) -> int:
    from .embeddings import load_embeddings

    cfg = _config(args)
    out = Path(args.out)
    stem = _stem(out)
    lex = BilingualLexicon.load(args.lexicon)
    table = load_embeddings(args.embeddings)
    standard = relatedness.load_standard(args.standard, args.label)
    stoplist = load_stoplist(args.stoplist) if args.stoplist else relatedness.CHINESE_STOPWORDS
    result = relatedness.evaluate(lex, standard, table, stoplist=stoplist)

    relatedness.write_report(result, out)
    Path(f"{stem}.detail.tsv").write_text(result.detail_rows(), encoding="utf-8")
    report.save_relatedness_figure(result, f"{stem}.png")

    manifest = RunManifest("eval-relatedness", cfg.as_dict() | {"standard": standard.label})
    for path in (args.lexicon, args.embeddings, args.standard):
        manifest.add_input(path)
    for path in (out, f"{stem}.detail.tsv", f"{stem}.png"):
        manifest.add_output(path)
    manifest.write(out)
    print(f"eval-relatedness[{standard.label}]: R={result.recall:.4f} "
          f"P={result.precision:.4f} F={result.f:.4f} -> {out}")
    return 0


def cmd_eval_similarity(args) -> int:
    cfg = _config(args)
    out = Path(args.out)
    stem = _stem(out)
    db = load_db(args.wordnet)
    lex = BilingualLexicon.load(args.lexicon)
    pairs = load_pairs(args.pairs)
    lookup = SenseLookup(db, lex, args.language, cfg.eval_pos)
    params = params_for(db, cfg.eval_pos, k=cfg.ic_k)
    result = evaluate_pairs(db, lookup, pairs, params)

    similarity.write_report(result, out)
    Path(f"{stem}.detail.tsv").write_text(result.detail_rows(), encoding="utf-8")
    report.save_similarity_figure(result, f"{stem}.png")

    manifest = RunManifest("eval-similarity", cfg.as_dict() | {"language": args.language})
    for path in (args.wordnet, args.lexicon, args.pairs):
        manifest.add_input(path)
    for path in (out, f"{stem}.detail.tsv", f"{stem}.png"):
        manifest.add_output(path)
    manifest.write(out)
    rho = "undefined" if result.spearman_all is None else f"{result.spearman_all:.4f}"
    print(f"eval-similarity[{pairs.label}]: spearman {rho}, "
          f"{len(result.misses)} misses -> {out}")
    return 0


def cmd_eval_wsd(args) -> int:
    from .embeddings import load_embeddings

    cfg = _config(args)
    out = Path(args.out)
    stem = _stem(out)
    db = load_db(args.wordnet)
    lex = BilingualLexicon.load(args.lexicon)
    table = load_embeddings(args.embeddings)

    if args.instances:
        instances = load_instances(args.instances)
        instance_inputs = [args.instances]
    elif args.semeval_xml and args.semeval_key:
        instances = load_semeval_task5(args.semeval_xml, args.semeval_key)
        instance_inputs = [args.semeval_xml, args.semeval_key]
    else:
        raise ZhwnError("need --instances or both --semeval-xml and --semeval-key")

    if args.inventory:
        inventory = load_inventory(args.inventory)
        instance_inputs.append(args.inventory)
    else:
        inventory = build_inventory(lex, db, sorted({i.target for i in instances}))

    tokenizer = whitespace_tokens if args.pre_segmented else None
    result = evaluate_instances(instances, inventory, lex, db, table,
                                tokenizer=tokenizer, window_width=cfg.wsd_window,
                                representation=cfg.wsd_representation)

    _write_json(result.as_dict(), out)
    Path(f"{stem}.per-type.tsv").write_text(result.per_type_rows(), encoding="utf-8")
    report.save_wsd_figure(result, f"{stem}.png")

    manifest = RunManifest("eval-wsd", cfg.as_dict() | {"pre_segmented": args.pre_segmented})
    for path in [args.wordnet, args.lexicon, args.embeddings] + instance_inputs:
        manifest.add_input(path)
    for path in (out, f"{stem}.per-type.tsv", f"{stem}.png"):
        manifest.add_output(path)
    manifest.write(out)
    print(f"eval-wsd: micro={result.micro:.4f} macro={result.macro:.4f} "
          f"({len(instances)} instances) -> {out}")
    return 0


def cmd_stats(args) -> int:
    cfg = _config(args)
    out = Path(args.out)
    stem = _stem(out)
    db = load_db(args.wordnet)
    lex = BilingualLexicon.load(args.lexicon)
    coverage = coverage_report(db, lex)

    _write_json(coverage.as_dict(), out)
    lines = ["pos\tconcepts\ttranslated\tratio\tlemmas"]
    for pos, row in coverage.per_pos.items():
        lines.append(f"{pos}\t{row.concepts}\t{row.translated}\t{row.ratio:.4f}\t{row.lemmas}")
    total = coverage.total
    lines.append(f"total\t{total.concepts}\t{total.translated}\t{total.ratio:.4f}\t{total.lemmas}")
    Path(f"{stem}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    report.save_coverage_figure(coverage, f"{stem}.png")

    manifest = RunManifest("stats", cfg.as_dict())
    manifest.add_input(args.wordnet)
    manifest.add_input(args.lexicon)
    for path in (out, f"{stem}.tsv", f"{stem}.png"):
        manifest.add_output(path)
    manifest.write(out)
    print(f"stats: {total.translated}/{total.concepts} concepts translated "
          f"(ratio {total.ratio:.4f}) -> {out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    cfg = _config(args)
    state = ServiceState.load(args.wordnet, args.lexicon, args.log,
                              queue_path=args.queue, screening_path=args.screening)
    app = create_app(state, frontend_dir=args.frontend)
    manifest = RunManifest("serve", cfg.as_dict())
    manifest.add_input(args.wordnet)
    manifest.add_input(args.lexicon)
    if os.path.exists(args.log):
        manifest.add_input(args.log)
    manifest.write(f"{args.log}.serve")
    address = args.address or os.environ.get("ZHWN_ADDR", "127.0.0.1:8710")
    host, _, port = address.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8710))
    return 0


_COMMANDS = {
    "build": cmd_build,
    "screen": cmd_screen,
    "apply-edits": cmd_apply_edits,
    "eval-relatedness": cmd_eval_relatedness,
    "eval-similarity": cmd_eval_similarity,
    "eval-wsd": cmd_eval_wsd,
    "stats": cmd_stats,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except ZhwnError as exc:
        print(f"zhwn {args.subcommand}: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"zhwn {args.subcommand}: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
