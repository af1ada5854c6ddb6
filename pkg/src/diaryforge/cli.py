"""
``diaryforge`` command line.

Exit codes: 0 success, 2 usage or input error, 3 insufficient data,
4 internal error. Warnings go to stderr, one summary line to stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import corpus, fixtures, hedonometer as hedo, imagecore, pipeline, similarity as sim
from .config import Config, load_config
from .entities import EntitySpec

log = logging.getLogger("diaryforge")

EXIT_OK, EXIT_USAGE, EXIT_INSUFFICIENT, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _pair(kind):
    def parse(s):
        parts = s.replace("x", ",").split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two values like 51,9, got {s!r}")
        try:
            return [kind(p) for p in parts]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad value {s!r}") from None
    return parse


def _config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", help="JSON file of configuration values")
    g.add_argument("--threshold", type=int)
    g.add_argument("--page-cap", type=int, dest="page_cap")
    g.add_argument("--line-kernel", type=_pair(int), dest="line_kernel", metavar="W,H")
    g.add_argument("--word-kernel", type=_pair(int), dest="word_kernel", metavar="W,H")
    g.add_argument("--line-iterations", type=int, dest="line_iterations")
    g.add_argument("--word-iterations", type=int, dest="word_iterations")
    g.add_argument("--min-area", type=int, dest="min_area")
    g.add_argument("--crop-from", choices=("binary", "gray"), dest="crop_from")
    g.add_argument("--snippet-size", type=_pair(int), dest="snippet_size", metavar="W,H")
    g.add_argument("--ssim-window", type=int, dest="ssim_window")
    g.add_argument("--ssim-gaussian", action="store_const", const=True, dest="ssim_gaussian")
    g.add_argument("--metric", choices=sim.METRICS)
    g.add_argument("--clusters", type=int)
    g.add_argument("--lexicon")
    g.add_argument("--neutral-band", type=_pair(float), dest="neutral_band", metavar="LO,HI")


_CONFIG_KEYS = [f for f in Config.__dataclass_fields__]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diaryforge", description="Handwriting drift and diary sentiment.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment every page into word snippets")
    p.add_argument("corpus_root")
    p.add_argument("--out", required=True)
    _config_flags(p)

    p = sub.add_parser("similarity", help="pairwise matrices for a folder of word snippets")
    p.add_argument("word_folder")
    p.add_argument("--out", required=True)
    p.add_argument("--which", choices=sim.METRICS + ("all",), default="all")
    _config_flags(p)

    p = sub.add_parser("canonical", help="canonical form per period and cross-period comparison")
    p.add_argument("corpus_root")
    p.add_argument("word")
    p.add_argument("--out", required=True)
    p.add_argument("--week", type=int, action="append", help="only use these week folders (repeatable)")
    _config_flags(p)

    p = sub.add_parser("sentiment", help="weekly hedonometer series and yearly statistics")
    p.add_argument("corpus_root")
    p.add_argument("--out", required=True)
    p.add_argument("--entity", help="entity spec JSON {name, aliases}")
    _config_flags(p)

    p = sub.add_parser("entity", help="sentiment of entries mentioning an entity")
    p.add_argument("corpus_root")
    p.add_argument("entity", help="entity spec JSON {name, aliases}")
    p.add_argument("--out", required=True)
    _config_flags(p)

    p = sub.add_parser("report", help="sentiment series beside the canonical similarity heatmap")
    p.add_argument("corpus_root")
    p.add_argument("word")
    p.add_argument("--out", required=True)
    p.add_argument("--week", type=int, action="append")
    _config_flags(p)

    p = sub.add_parser("fixture", help="write a synthetic labelled corpus")
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--years", type=_pair(int), metavar="FIRST,LAST")
    p.add_argument("--weeks", type=int)
    p.add_argument("--gap", type=_pair(int), action="append", metavar="YEAR,WEEK",
                   help="leave out the transcript of this week (repeatable)")
    return parser


def _config(args) -> Config:
    overrides = {k: getattr(args, k) for k in _CONFIG_KEYS if getattr(args, k, None) is not None}
    try:
        return load_config(args.config, overrides)
    except FileNotFoundError as e:
        raise UsageError(f"config file not found: {e.filename}") from None
    except (ValueError, TypeError) as e:
        raise UsageError(f"invalid configuration: {e}") from None


def _layout(root: str) -> corpus.CorpusLayout:
    if not Path(root).is_dir():
        raise UsageError(f"corpus root {root!r} is not a directory")
    return corpus.scan(root)


def _lexicon(cfg: Config) -> hedo.Lexicon:
    if not cfg.lexicon:
        raise UsageError("a lexicon is required (--lexicon or 'lexicon' in --config)")
    path = Path(cfg.lexicon)
    if not path.is_file():
        raise UsageError(f"lexicon file {cfg.lexicon!r} not found")
    try:
        return hedo.load_lexicon(path)
    except hedo.LexiconError as e:
        raise UsageError(f"bad lexicon: {e}") from None


def _entity(path: str) -> EntitySpec:
    if not Path(path).is_file():
        raise UsageError(f"entity spec {path!r} not found")
    try:
        return EntitySpec.from_json(path)
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad entity spec: {e}") from None


def _entries(layout) -> list[hedo.DiaryEntry]:
    try:
        return corpus.load_entries(layout)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _echo(cfg: Config, args, **inputs) -> dict:
    return {"command": args.command, "inputs": inputs, "settings": cfg.as_dict()}


def cmd_segment(args) -> str:
    cfg = _config(args)
    layout = _layout(args.corpus_root)
    by_period = pipeline.segment_corpus(layout, cfg)
    for period in sorted(by_period):
        log.info("%d/%02d week %d: %d snippets", *period, len(by_period[period]))
    corpus.write_outputs(pipeline.segment_artifacts(by_period), args.out,
                         _echo(cfg, args, corpus_root=args.corpus_root))
    total = sum(len(v) for v in by_period.values())
    pages = sum(len(p.images) for p in layout.periods)
    return f"segment: {total} snippets from {pages} pages in {len(by_period)} periods -> {args.out}"


def cmd_similarity(args) -> str:
    cfg = _config(args)
    folder = Path(args.word_folder)
    if not folder.is_dir():
        raise UsageError(f"word folder {args.word_folder!r} is not a directory")
    files = sorted(p for p in folder.iterdir() if p.suffix.lower() in corpus.IMAGE_SUFFIXES)
    if len(files) < 2:
        raise pipeline.InsufficientData(f"need at least 2 snippets in {folder}, found {len(files)}")
    imgs = sim.common_resize([imagecore.read_image(f) for f in files], *cfg.snippet_size)
    metrics = sim.METRICS if args.which == "all" else (args.which,)
    arts = pipeline.similarity_artifacts(imgs, [f.stem for f in files], cfg, metrics=metrics)
    corpus.write_outputs(arts, args.out, _echo(cfg, args, word_folder=args.word_folder, which=args.which))
    return f"similarity: {len(files)} snippets, {len(metrics)} metric(s) -> {args.out}"


def cmd_canonical(args) -> str:
    cfg = _config(args)
    layout = _layout(args.corpus_root)
    forms = pipeline.canonical_forms(pipeline.segment_corpus(layout, cfg), args.word, cfg, args.week)
    if not forms:
        raise pipeline.InsufficientData(f"no period has two or more snippets labelled {args.word!r}")
    corpus.write_outputs(pipeline.canonical_artifacts(forms, args.word, cfg), args.out,
                         _echo(cfg, args, corpus_root=args.corpus_root, word=args.word, weeks=args.week))
    return f"canonical: {len(forms)} canonical forms of {args.word!r} -> {args.out}"


def cmd_sentiment(args) -> str:
    cfg = _config(args)
    lex = _lexicon(cfg)
    spec = _entity(args.entity) if args.entity else None
    entries = _entries(_layout(args.corpus_root))
    if not entries:
        raise pipeline.InsufficientData("no transcripts found")
    arts, series = pipeline.sentiment_artifacts(entries, lex, cfg)
    if spec is not None:
        arts += pipeline.entity_artifacts(entries, spec, lex, series, cfg)
    corpus.write_outputs(arts, args.out, _echo(cfg, args, corpus_root=args.corpus_root, entity=args.entity))
    scored = sum(r.score is not None for r in series)
    return f"sentiment: {len(series)} weeks ({scored} scored) -> {args.out}"


def cmd_entity(args) -> str:
    cfg = _config(args)
    lex = _lexicon(cfg)
    spec = _entity(args.entity)
    entries = _entries(_layout(args.corpus_root))
    if not entries:
        raise pipeline.InsufficientData("no transcripts found")
    series = hedo.weekly_series(entries, lex, cfg.neutral_band)
    arts = pipeline.entity_artifacts(entries, spec, lex, series, cfg)
    corpus.write_outputs(arts, args.out, _echo(cfg, args, corpus_root=args.corpus_root, entity=args.entity))
    return f"entity: {spec.name} -> {args.out}"


def cmd_report(args) -> str:
    cfg = _config(args)
    lex = _lexicon(cfg)
    layout = _layout(args.corpus_root)
    _entries(layout)
    arts = pipeline.report_artifacts(layout, args.word, lex, cfg, args.week)
    corpus.write_outputs(arts, args.out,
                         _echo(cfg, args, corpus_root=args.corpus_root, word=args.word, weeks=args.week))
    return f"report: {args.word!r} -> {args.out}"


def cmd_fixture(args) -> str:
    spec = fixtures.FixtureSpec()
    changes = {}
    if args.years:
        changes["years"] = tuple(range(args.years[0], args.years[1] + 1))
    if args.weeks is not None:
        changes["weeks"] = args.weeks
    if args.gap:
        changes["transcript_gaps"] = tuple(tuple(g) for g in args.gap)
    try:
        from dataclasses import replace
        spec = replace(spec, **changes)
        spec.validate()
    except ValueError as e:
        raise UsageError(f"invalid fixture options: {e}") from None
    layout = fixtures.generate_fixture_corpus(args.seed, spec, args.out)
    return f"fixture: {len(layout.periods)} periods (seed {args.seed}) -> {args.out}"


COMMANDS = {
    "segment": cmd_segment, "similarity": cmd_similarity, "canonical": cmd_canonical,
    "sentiment": cmd_sentiment, "entity": cmd_entity, "report": cmd_report, "fixture": cmd_fixture,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        print(COMMANDS[args.command](args))
        return EXIT_OK
    except UsageError as e:
        print(f"diaryforge: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except pipeline.InsufficientData as e:
        print(f"diaryforge: insufficient data: {e}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except Exception as e:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"diaryforge: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
