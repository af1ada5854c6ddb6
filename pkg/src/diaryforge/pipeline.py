"""
Corpus-level orchestration. Every function here is pure apart from reading
the corpus; outputs come back as :class:`~diaryforge.corpus.Artifact` lists
for :func:`~diaryforge.corpus.write_outputs`.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from . import cluster, corpus, hedonometer as hedo, imagecore, similarity as sim, svgplot
from .config import Config
from .corpus import Artifact, CorpusLayout, PeriodFiles
from .entities import EntitySpec, entity_sentiment, find_mentions
from .segmentation import WordSnippet, segment_page

log = logging.getLogger(__name__)

Period = tuple[int, int, int]


def load_page(path: str | Path, cap: int = imagecore.PAGE_WIDTH_CAP) -> np.ndarray:
    return imagecore.grayscale(imagecore.resize_capped(imagecore.read_image(path), cap))


def segment_period(pf: PeriodFiles, cfg: Config) -> list[WordSnippet]:
    """Segment every page of one week and attach labels from its ``labels.json``."""
    labelled = corpus.read_labels(pf.labels) if pf.labels else {}
    out = []
    for img_path in pf.images:
        page = load_page(img_path, cfg.page_cap)
        snippets = segment_page(page, cfg.segmentation(), img_path.stem, pf.period)
        if img_path.name in labelled:
            snippets = corpus.label_snippets(snippets, labelled[img_path.name])
        out.extend(snippets)
    return out


def segment_corpus(layout: CorpusLayout, cfg: Config) -> dict[Period, list[WordSnippet]]:
    return {pf.period: segment_period(pf, cfg) for pf in layout.periods}


def period_dir(period: Period) -> str:
    year, month, week = period
    return f"{year}/{month:02d}/week{week}"


def segment_artifacts(by_period: dict[Period, list[WordSnippet]]) -> list[Artifact]:
    arts = []
    listing = []
    for period in sorted(by_period):
        for s in by_period[period]:
            rel = f"{period_dir(period)}/{s.label or 'unlabeled'}/{s.name}.png"
            arts.append(Artifact(rel, imagecore.png_bytes(s.image), "segment"))
            listing.append({
                "path": rel, "period": list(period), "page": s.page_id, "line": s.line_index,
                "word": s.word_index, "box": list(s.box), "label": s.label,
            })
    counts = [(*p, len(by_period[p])) for p in sorted(by_period)]
    arts.append(Artifact("snippets.json", (json.dumps(listing, indent=1) + "\n").encode(), "segment"))
    arts.append(Artifact("segment_counts.csv",
                         corpus.csv_bytes(["year", "month", "week", "snippets"], counts), "segment"))
    return arts


def similarity_artifacts(images: Sequence[np.ndarray], labels: Sequence[str], cfg: Config,
                         prefix: str = "", metrics: Sequence[str] = sim.METRICS, producer: str = "similarity") -> list[Artifact]:
    """CSV + SVG per metric and a comparison table against the first image."""
    arts = []
    for metric in metrics:
        m = sim.similarity_matrix(images, metric, labels, cfg.ssim_window, cfg.ssim_gaussian)
        arts.append(Artifact(f"{prefix}{metric}.csv", corpus.matrix_csv(m), producer))
        arts.append(Artifact(f"{prefix}{metric}.svg", svgplot.matrix_heatmap(m).encode(), producer))
    table = sim.comparison_table(images, 0, labels, cfg.ssim_window, cfg.ssim_gaussian)
    arts.append(Artifact(f"{prefix}table.csv", corpus.table_csv(table), producer))
    return arts


def canonical_forms(by_period: dict[Period, list[WordSnippet]], word: str, cfg: Config,
                    weeks: Sequence[int] | None = None) -> list[cluster.CanonicalForm]:
    """One canonical form per period that has at least two snippets labelled ``word``."""
    forms = []
    for period in sorted(by_period):
        if weeks and period[2] not in weeks:
            continue
        group = [s for s in by_period[period] if s.label == word]
        if len(group) < 2:
            log.warning("skipping %s: %d snippet(s) of %r", cluster.period_label(period), len(group), word)
            continue
        forms.append(cluster.canonical_pipeline(
            group, cfg.metric, word, period, tuple(cfg.snippet_size),
            window=cfg.ssim_window, gaussian=cfg.ssim_gaussian, k=cfg.clusters,
        ))
    return forms


def canonical_artifacts(forms: Sequence[cluster.CanonicalForm], word: str, cfg: Config) -> list[Artifact]:
    base = f"canonical/{word}/"
    arts = []
    rows = []
    for f in forms:
        label = cluster.period_label(f.period)
        arts.append(Artifact(f"{base}{label}.png", imagecore.png_bytes(f.image), "canonical"))
        rows.append((*f.period, f.member_count, " ".join(f.members)))
    arts.append(Artifact(f"{base}members.csv",
                         corpus.csv_bytes(["year", "month", "week", "member_count", "members"], rows), "canonical"))
    if len(forms) >= 2:
        labels = [cluster.period_label(f.period) for f in forms]
        arts += similarity_artifacts([f.image for f in forms], labels, cfg, base + "compare_", producer="canonical")
    return arts


def entries_by_period(layout: CorpusLayout) -> dict[Period, hedo.DiaryEntry]:
    by_source = {e.source: e for e in corpus.load_entries(layout)}
    return {pf.period: by_source[str(pf.transcript)] for pf in layout.periods if pf.transcript is not None}


def sentiment_artifacts(entries: Sequence[hedo.DiaryEntry], lex: hedo.Lexicon, cfg: Config) -> tuple[list[Artifact], list[hedo.SentimentRecord]]:
    series = hedo.weekly_series(entries, lex, cfg.neutral_band)
    stats = hedo.year_stats(series) if series else []
    points = [(f"{r.year}-w{r.week_no}", r.score) for r in series]
    arts = [
        Artifact("sentiment/weekly.csv", corpus.series_csv(series), "sentiment"),
        Artifact("sentiment/weekly.svg", svgplot.line_series(points, "Weekly hedonometer score").encode(), "sentiment"),
        Artifact("sentiment/year_stats.csv", corpus.year_stats_csv(stats), "sentiment"),
        Artifact("sentiment/year_stats.svg", svgplot.box_plot(stats, title="Yearly hedonometer scores").encode(), "sentiment"),
    ]
    return arts, series


def entity_artifacts(entries: Sequence[hedo.DiaryEntry], spec: EntitySpec, lex: hedo.Lexicon,
                     series: Sequence[hedo.SentimentRecord], cfg: Config) -> list[Artifact]:
    mentions = find_mentions(entries, spec)
    records = entity_sentiment(entries, spec, lex, cfg.neutral_band)
    stats = hedo.year_stats(series) if series else []
    slug = "".join(ch if ch.isalnum() else "_" for ch in spec.name.lower())
    base = f"entity/{slug}/"
    scatter = [(r.year, r.score, f"{r.year}-w{r.week_no}") for r in records]
    tables = [(f"{r.year} week {r.week_no}", r.top5, r.bottom5) for r in records if r.score is not None][:3]
    svg = svgplot.box_plot(stats, scatter, f"Entries mentioning {spec.name}", tables)
    return [
        Artifact(f"{base}mentions.csv", corpus.entity_csv(spec.name, mentions, records), "entity"),
        Artifact(f"{base}evidence.csv", corpus.evidence_csv(records), "entity"),
        Artifact(f"{base}boxplot.svg", svg.encode(), "entity"),
    ]


def report_artifacts(layout: CorpusLayout, word: str, lex: hedo.Lexicon, cfg: Config,
                     weeks: Sequence[int] | None = None) -> list[Artifact]:
    """Canonical forms of ``word`` per period beside the sentiment of the same periods."""
    by_period = segment_corpus(layout, cfg)
    forms = canonical_forms(by_period, word, cfg, weeks)
    if not forms:
        raise InsufficientData(f"no period has two or more snippets of {word!r}")
    arts = canonical_artifacts(forms, word, cfg)
    entries = entries_by_period(layout)
    points = []
    for f in forms:
        e = entries.get(f.period)
        score = hedo.score_text(e.text, lex, cfg.neutral_band).score if e is not None else None
        points.append((cluster.period_label(f.period), score))
    arts.append(Artifact("report/sentiment.csv",
                         corpus.csv_bytes(["period", "score"], points), "report"))
    labels = [p for p, _ in points]
    if len(forms) >= 2:
        dtw = sim.similarity_matrix([f.image for f in forms], "dtw", labels).values
    else:
        dtw = np.ones((1, 1))
    svg = svgplot.combined(points, labels, dtw, f"Handwriting and sentiment: {word!r}")
    arts.append(Artifact("report/report.svg", svg.encode(), "report"))
    return arts


class InsufficientData(RuntimeError):
    pass
