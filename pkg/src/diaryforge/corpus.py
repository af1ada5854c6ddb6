"""
Corpus layout ``<root>/<year>/<month>/week<k>/`` and persistence of derived outputs.

A week folder holds page images (``.tif``, ``.tiff``, ``.png``), an optional
``transcript.txt`` and an optional ``labels.json`` with labelled word boxes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .hedonometer import DiaryEntry, SentimentRecord, YearStats, clean_text
from .segmentation import BoundingBox, WordSnippet

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".tif", ".tiff", ".png")
TRANSCRIPT = "transcript.txt"
LABELS = "labels.json"
MANIFEST = "manifest.json"

MONTHS = ("january", "february", "march", "april", "may", "june", "july",
          "august", "september", "october", "november", "december")
_WEEK_DIR = re.compile(r"^week\s*([1-5])$", re.IGNORECASE)
_WEEK_HEADER = re.compile(r"^\s*WEEK\s+(\d+)\s*:\s*(.*?)\s*$", re.IGNORECASE)


def parse_month(name: str) -> int | None:
    s = name.strip().lower()
    if s.isdigit():
        m = int(s)
        return m if 1 <= m <= 12 else None
    for i, full in enumerate(MONTHS, start=1):
        if s == full or (len(s) >= 3 and full.startswith(s)):
            return i
    return None


@dataclass(frozen=True)
class PeriodFiles:
    year: int
    month: int
    week: int
    path: Path
    images: tuple[Path, ...]
    transcript: Path | None
    labels: Path | None

    @property
    def period(self) -> tuple[int, int, int]:
        return (self.year, self.month, self.week)

    @property
    def transcript_gap(self) -> bool:
        return self.transcript is None


@dataclass(frozen=True)
class CorpusLayout:
    root: Path
    periods: tuple[PeriodFiles, ...]

    @property
    def gaps(self) -> list[PeriodFiles]:
        return [p for p in self.periods if p.transcript_gap]

    def __len__(self):
        return len(self.periods)


def scan(root: str | Path) -> CorpusLayout:
    """Discover every ``<year>/<month>/week<k>`` folder under ``root``."""
    root = Path(root)
    if not root.is_dir():
        raise OSError(f"corpus root {root} is not a readable directory")
    periods = []
    for ydir in sorted(root.iterdir()):
        if not (ydir.is_dir() and re.fullmatch(r"\d{4}", ydir.name)):
            continue
        for mdir in sorted(ydir.iterdir()):
            month = parse_month(mdir.name) if mdir.is_dir() else None
            if month is None:
                continue
            for wdir in sorted(mdir.iterdir()):
                m = _WEEK_DIR.match(wdir.name)
                if not (m and wdir.is_dir()):
                    continue
                images = tuple(sorted(p for p in wdir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES))
                transcript = wdir / TRANSCRIPT
                labels = wdir / LABELS
                periods.append(PeriodFiles(
                    int(ydir.name), month, int(m.group(1)), wdir, images,
                    transcript if transcript.is_file() else None,
                    labels if labels.is_file() else None,
                ))
    periods.sort(key=lambda p: p.period)
    layout = CorpusLayout(root, tuple(periods))
    for gap in layout.gaps:
        log.warning("no transcript for %d/%02d week %d", *gap.period)
    return layout


def parse_transcript(raw: str) -> tuple[int | None, str, str]:
    """Split an optional ``WEEK <n>: <dates>`` first line from the body; the body is cleaned."""
    lines = raw.splitlines()
    if lines:
        m = _WEEK_HEADER.match(lines[0])
        if m:
            return int(m.group(1)), m.group(2), clean_text("\n".join(lines[1:]))
    return None, "", clean_text(raw)


def split_transcript(raw: str) -> list[tuple[int, str, str]]:
    """Split a transcript stream on ``WEEK <n>:`` marker lines into (week_no, week_date, body)."""
    out = []
    current = None
    body: list[str] = []
    for line in raw.splitlines():
        m = _WEEK_HEADER.match(line)
        if m:
            if current is not None:
                out.append((*current, "\n".join(body).strip()))
            current, body = (int(m.group(1)), m.group(2)), []
        elif current is not None:
            body.append(line)
    if current is not None:
        out.append((*current, "\n".join(body).strip()))
    return out


def load_entries(layout: CorpusLayout) -> list[DiaryEntry]:
    """One cleaned entry per transcript, sorted by (year, week_no)."""
    entries: dict[tuple[int, int], DiaryEntry] = {}
    for p in layout.periods:
        if p.transcript is None:
            continue
        week_no, week_date, text = parse_transcript(p.transcript.read_text(encoding="utf-8"))
        if week_no is None:
            week_no = p.week
        key = (p.year, week_no)
        if key in entries:
            raise ValueError(f"duplicate entry for year {p.year} week {week_no}: "
                             f"{entries[key].source} and {p.transcript}")
        entries[key] = DiaryEntry(p.year, p.month, week_no, week_date, text, str(p.transcript))
    return [entries[k] for k in sorted(entries)]


def read_labels(path: str | Path) -> dict[str, list[dict]]:
    """Labelled word boxes per page file name, from a ``labels.json``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {page: list(items) for page, items in data.get("pages", {}).items()}


def label_snippets(snippets: Sequence[WordSnippet], labelled: Sequence[dict]) -> list[WordSnippet]:
    """Attach the label whose box centre falls inside each snippet box.

    A snippet that contains no labelled centre, or several, stays unlabelled.
    """
    from dataclasses import replace

    centres = [(BoundingBox(*item["box"]).center, item["label"]) for item in labelled]
    out = []
    for s in snippets:
        inside = [lab for (cx, cy), lab in centres if s.box.contains(cx, cy)]
        out.append(replace(s, label=inside[0] if len(inside) == 1 else None))
    return out


# ---------------------------------------------------------------------------
# outputs

@dataclass(frozen=True)
class Artifact:
    path: str
    data: bytes
    producer: str


def write_outputs(artifacts: Iterable[Artifact], out_root: str | Path, config: dict | None = None) -> dict:
    """Write every artifact under ``out_root`` plus a ``manifest.json`` of path/sha256/producer."""
    out_root = Path(out_root)
    files = {}
    for a in artifacts:
        rel = Path(a.path).as_posix()
        if rel.startswith("/") or ".." in Path(rel).parts:
            raise ValueError(f"artifact path {a.path!r} escapes the output root")
        if rel in files:
            raise ValueError(f"duplicate artifact path {rel!r}")
        files[rel] = a
    out_root.mkdir(parents=True, exist_ok=True)
    entries = []
    for rel in sorted(files):
        a = files[rel]
        dest = out_root / rel
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_bytes(a.data)
        entries.append({"path": rel, "sha256": hashlib.sha256(a.data).hexdigest(), "producer": a.producer})
    manifest = {"config": config or {}, "files": entries}
    (out_root / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue().encode("utf-8")


def matrix_csv(m) -> bytes:
    return csv_bytes(["label", *m.labels], ([lab, *map(float, row)] for lab, row in zip(m.labels, m.values)))


def read_matrix_csv(data: bytes | str) -> tuple[list[str], list[list[float]]]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = list(csv.reader(io.StringIO(text)))
    labels = rows[0][1:]
    return labels, [[float(x) for x in r[1:]] for r in rows[1:]]


def table_csv(table) -> bytes:
    return csv_bytes(["label", "mse", "ssim", "dtw"], ((r.label, r.mse, r.ssim, r.dtw) for r in table.rows))


def series_csv(records: Sequence[SentimentRecord]) -> bytes:
    return csv_bytes(
        ["year", "month", "week_no", "week_date", "score", "in_vocab", "total"],
        ((r.year, r.month, r.week_no, r.week_date, r.score, r.in_vocab_tokens, r.total_tokens) for r in records),
    )


def year_stats_csv(stats: Sequence[YearStats]) -> bytes:
    return csv_bytes(
        ["year", "min", "q1", "median", "q3", "max", "mean", "count"],
        ((s.year, s.min, s.q1, s.median, s.q3, s.max, s.mean, s.count) for s in stats),
    )


def entity_csv(entity: str, mentions, records: Sequence[SentimentRecord]) -> bytes:
    scores = {r.key: r.score for r in records}
    return csv_bytes(
        ["entity", "year", "week_no", "count", "score"],
        ((entity, m.year, m.week_no, m.count, scores.get(m.key)) for m in mentions),
    )


def evidence_csv(records: Sequence[SentimentRecord]) -> bytes:
    rows = []
    for r in records:
        for rank in range(max(len(r.top5), len(r.bottom5))):
            top = r.top5[rank] if rank < len(r.top5) else ("", None)
            bottom = r.bottom5[rank] if rank < len(r.bottom5) else ("", None)
            rows.append((r.year, r.week_no, rank + 1, top[0], top[1], bottom[0], bottom[1]))
    return csv_bytes(["year", "week_no", "rank", "top_word", "top_score", "bottom_word", "bottom_score"], rows)
