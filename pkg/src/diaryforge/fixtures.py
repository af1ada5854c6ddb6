"""
Deterministic synthetic diary corpus.

Pages carry procedurally drawn "stamps" of the five target words with a
per-year drift in slant and size, per-instance jitter of the stroke control
points, and optionally one planted outlier (a heavy, scribbled-over copy)
per word group. Ground truth goes to each week's ``labels.json``.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from . import corpus, imagecore

TARGET_WORDS = ("the", "of", "to", "in", "a")

# 10 words with made-up happiness scores, used by the fixture transcripts
FIXTURE_LEXICON = {
    "love": 8.42, "happy": 8.3, "friend": 7.66, "garden": 7.04, "walk": 6.62,
    "tea": 6.22, "rain": 4.04, "tired": 3.34, "sad": 2.38, "war": 1.8,
}
FILLER = ("went", "town", "wrote", "letters", "morning", "evening", "meeting",
          "house", "road", "came", "home", "dorothea", "trá", "mór", "after")

# Strokes in x-height units: baseline y=0, x-height y=1, y grows upwards.
_LETTERS = {
    "t": ([(0.3, 1.8), (0.3, 0.1), (0.45, 0.0), (0.65, 0.05)], [(0.0, 1.0), (0.65, 1.0)]),
    "h": ([(0.0, 1.8), (0.0, 0.0)], [(0.0, 0.6), (0.25, 0.95), (0.55, 1.0), (0.75, 0.7), (0.75, 0.0)]),
    "e": ([(0.05, 0.5), (0.75, 0.55), (0.65, 0.9), (0.4, 1.0), (0.12, 0.8), (0.0, 0.4),
           (0.15, 0.08), (0.45, 0.0), (0.8, 0.15)],),
    "o": ([(0.4, 1.0), (0.1, 0.85), (0.0, 0.45), (0.15, 0.08), (0.45, 0.0), (0.72, 0.15),
           (0.8, 0.55), (0.65, 0.92), (0.4, 1.0)],),
    "f": ([(0.8, 1.6), (0.55, 1.8), (0.3, 1.55), (0.3, -0.8)], [(0.0, 1.0), (0.7, 1.0)]),
    "i": ([(0.1, 1.0), (0.1, 0.08), (0.3, 0.0)],),
    "n": ([(0.0, 1.0), (0.0, 0.0)], [(0.0, 0.6), (0.25, 0.95), (0.5, 1.0), (0.7, 0.7), (0.7, 0.0)]),
    "a": ([(0.7, 0.8), (0.45, 1.0), (0.12, 0.85), (0.0, 0.4), (0.18, 0.02), (0.5, 0.05), (0.7, 0.4)],
          [(0.72, 1.0), (0.72, 0.08), (0.9, 0.0)]),
}
_ADVANCE = {"t": 0.7, "h": 0.85, "e": 0.85, "o": 0.85, "f": 0.8, "i": 0.35, "n": 0.8, "a": 0.95}


@dataclass(frozen=True)
class FixtureSpec:
    years: tuple[int, ...] = (1917, 1918, 1919, 1920, 1921)
    month: int = 10
    weeks: int = 4
    words: tuple[str, ...] = TARGET_WORDS
    inliers_per_word: int = 6
    outliers_per_word: int = 1
    words_per_line: int = 7
    extra_words: int = 0
    x_height: int = 16
    stroke: int = 3
    jitter: float = 0.04
    drift: float = 0.06
    word_gap: tuple[int, int] = (14, 20)
    line_pitch: int = 78
    margin: int = 40
    page_width: int = 1000
    paper_noise: float = 4.0
    specks: int = 6
    entity: str = "Dorothy"
    entity_entries: int = 15
    transcript_words: int = 60
    transcript_gaps: tuple[tuple[int, int], ...] = ()
    happy_with_entity: tuple[str, ...] = ("love", "happy", "friend")

    def validate(self):
        if self.weeks < 1 or self.weeks > 5:
            raise ValueError("weeks must be in 1..5")
        if any(not (1000 <= y <= 9999) for y in self.years):
            raise ValueError("years must be 4-digit")
        if any(set(w) - set(_LETTERS) for w in self.words):
            raise ValueError(f"words may only use the letters {''.join(sorted(_LETTERS))}")
        if self.inliers_per_word < 0 or self.outliers_per_word < 0 or self.words_per_line < 1:
            raise ValueError("word counts must be non-negative and words_per_line >= 1")


@dataclass(frozen=True)
class Stamp:
    label: str
    box: tuple[int, int, int, int]
    line: int
    word: int
    outlier: bool


@dataclass(frozen=True)
class FixturePage:
    image: np.ndarray = field(repr=False)
    stamps: tuple[Stamp, ...]


def _word_strokes(word: str) -> list[list[tuple[float, float]]]:
    """Letter strokes laid out left to right, joined by baseline ligatures."""
    strokes = []
    x = 0.0
    prev_end = None
    for ch in word:
        letter = [[(px + x, py) for px, py in s] for s in _LETTERS[ch]]
        if prev_end is not None:
            start = min((p for s in letter for p in s), key=lambda p: (p[1] > 0.5, p[0]))
            strokes.append([prev_end, (start[0], min(start[1], 0.3))])
        strokes.extend(letter)
        last = [p for s in letter for p in s if p[1] < 0.3]
        prev_end = max(last, key=lambda p: p[0]) if last else (x + _ADVANCE[ch], 0.0)
        x += _ADVANCE[ch]
    return strokes


def render_word(
    word: str,
    rng: np.random.Generator | None = None,
    x_height: int = 16,
    stroke: int = 3,
    slant: float = 0.2,
    scale: float = 1.0,
    jitter: float = 0.0,
    outlier: bool = False,
) -> np.ndarray:
    """Boolean ink mask of one handwritten-looking word, cropped tight."""
    strokes = _word_strokes(word)
    if jitter > 0 and rng is not None:
        strokes = [[(px + rng.normal(0, jitter), py + rng.normal(0, jitter)) for px, py in s] for s in strokes]
    size = x_height * scale
    width = stroke
    if outlier:
        size *= 1.25
        width = stroke + 2
    pts = [[((px + slant * py) * size, -py * size) for px, py in s] for s in strokes]
    if outlier:
        # a scribble struck through the word
        xs = [p[0] for s in pts for p in s]
        lo, hi = min(xs), max(xs)
        zig = []
        for i in range(9):
            zig.append((lo + (hi - lo) * i / 8, -size * (1.3 if i % 2 else -0.2)))
        pts.append(zig)
    allp = np.array([p for s in pts for p in s])
    pad = width + 2
    ox, oy = -allp[:, 0].min() + pad, -allp[:, 1].min() + pad
    w = int(np.ceil(allp[:, 0].max() + ox + pad))
    h = int(np.ceil(allp[:, 1].max() + oy + pad))
    im = Image.new("L", (w, h), 0)
    draw = ImageDraw.Draw(im)
    for s in pts:
        seq = [(px + ox, py + oy) for px, py in s]
        draw.line(seq, fill=255, width=width, joint="curve")
        r = width / 2
        for px, py in (seq[0], seq[-1]):
            draw.ellipse([px - r, py - r, px + r, py + r], fill=255)
    mask = np.array(im) > 0
    ys, xs = np.nonzero(mask)
    return mask[ys.min():ys.max() + 1, xs.min():xs.max() + 1]


def _year_style(spec: FixtureSpec, year: int) -> tuple[float, float]:
    k = spec.years.index(year) if year in spec.years else 0
    return 0.15 + spec.drift * k, 1.0 + 0.5 * spec.drift * k


def render_page(spec: FixtureSpec, rng: np.random.Generator, year: int, labels: list[str] | None = None,
                outlier_flags: list[bool] | None = None) -> FixturePage:
    """Lay out stamps line by line on a paper-coloured RGB page."""
    if labels is None:
        labels, outlier_flags = [], []
        for w in spec.words:
            labels += [w] * (spec.inliers_per_word + spec.outliers_per_word)
            outlier_flags += [False] * spec.inliers_per_word + [True] * spec.outliers_per_word
        labels += [str(rng.choice(spec.words)) for _ in range(spec.extra_words)]
        outlier_flags += [False] * spec.extra_words
        order = rng.permutation(len(labels))
        labels = [labels[i] for i in order]
        outlier_flags = [outlier_flags[i] for i in order]
    outlier_flags = outlier_flags or [False] * len(labels)

    slant, scale = _year_style(spec, year)
    masks = [render_word(w, rng, spec.x_height, spec.stroke, slant, scale, spec.jitter, o)
             for w, o in zip(labels, outlier_flags)]

    n_lines = max(1, -(-len(labels) // spec.words_per_line))
    height = 2 * spec.margin + n_lines * spec.line_pitch
    paper = np.array([236, 226, 204], dtype=np.float64)
    ink = np.array([52, 38, 30], dtype=np.float64)
    page = np.broadcast_to(paper, (height, spec.page_width, 3)).copy()
    if spec.paper_noise > 0:
        page += rng.normal(0, spec.paper_noise, page.shape[:2])[..., None]
    inkmask = np.zeros((height, spec.page_width), dtype=bool)

    stamps = []
    for li in range(n_lines):
        x = spec.margin
        base = spec.margin + li * spec.line_pitch + int(spec.line_pitch * 0.6)
        row = range(li * spec.words_per_line, min(len(labels), (li + 1) * spec.words_per_line))
        for wi, idx in enumerate(row):
            m = masks[idx]
            h, w = m.shape
            # words sit on the baseline; descenders and the scribble may poke below
            y = base - int(round(h * 0.75)) + int(rng.integers(-2, 3))
            y = max(1, min(y, height - h - 1))
            if x + w >= spec.page_width - 1:
                raise ValueError("line too long for page width; lower words_per_line")
            inkmask[y:y + h, x:x + w] |= m
            stamps.append(Stamp(labels[idx], (x, y, w, h), li, wi, bool(outlier_flags[idx])))
            x += w + int(rng.integers(spec.word_gap[0], spec.word_gap[1] + 1))

    page[inkmask] = ink
    # dirt specks in the margins, too small to survive the area filter
    for _ in range(spec.specks):
        sx = int(rng.integers(2, spec.page_width - 4))
        sy = int(rng.integers(2, max(3, spec.margin // 2 - 2)))
        page[sy:sy + 2, sx:sx + 2] = ink
    return FixturePage(np.clip(np.rint(page), 0, 255).astype(np.uint8), tuple(stamps))


def week_dates(year: int, month: int, week: int) -> tuple[int, str]:
    """Week-of-year number and a ``d-d Mon yyyy`` label for the k-th week of a month."""
    start = dt.date(year, month, 1 + 7 * (week - 1))
    end = start + dt.timedelta(days=6)
    week_no = (start.timetuple().tm_yday - 1) // 7 + 1
    return week_no, f"{start.day}-{end.day} {start.strftime('%b')} {year}"


def _transcript(spec: FixtureSpec, rng: np.random.Generator, with_entity: bool) -> str:
    vocab = list(FIXTURE_LEXICON) + list(FILLER) + list(TARGET_WORDS)
    words = [str(rng.choice(vocab)) for _ in range(spec.transcript_words)]
    if with_entity:
        pos = int(rng.integers(0, len(words)))
        words[pos:pos] = ["met", spec.entity] + list(spec.happy_with_entity)
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def generate_fixture_corpus(seed: int, spec: FixtureSpec | None = None, root: str | Path = "fixture") -> corpus.CorpusLayout:
    """Write a synthetic corpus under ``root`` and return its scanned layout.

    Also writes ``lexicon.csv`` and an entity spec ``entity.json`` at the root.
    """
    spec = spec or FixtureSpec()
    spec.validate()
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    periods = [(y, spec.month, k) for y in spec.years for k in range(1, spec.weeks + 1)]
    pick = np.random.default_rng([seed, 0])
    n_entity = min(spec.entity_entries, len(periods))
    entity_periods = {periods[i] for i in pick.choice(len(periods), n_entity, replace=False)}

    for period in periods:
        year, month, week = period
        rng = np.random.default_rng([seed, year, month, week])
        wdir = root / str(year) / f"{month:02d}" / f"week{week}"
        wdir.mkdir(parents=True, exist_ok=True)
        page = render_page(spec, rng, year)
        name = "page_01.png"
        imagecore.write_png(wdir / name, page.image)
        truth = {"pages": {name: [
            {"box": list(s.box), "label": s.label, "line": s.line, "word": s.word, "outlier": s.outlier}
            for s in page.stamps
        ]}}
        (wdir / corpus.LABELS).write_text(json.dumps(truth, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        if (year, week) in spec.transcript_gaps:
            continue
        week_no, dates = week_dates(year, month, week)
        body = _transcript(spec, rng, period in entity_periods)
        (wdir / corpus.TRANSCRIPT).write_text(f"WEEK {week_no}: {dates}\n{body}\n", encoding="utf-8")

    lex_rows = "".join(f"{w},{s}\n" for w, s in sorted(FIXTURE_LEXICON.items()))
    (root / "lexicon.csv").write_text("word,happiness\n" + lex_rows, encoding="utf-8")
    entity = {"name": spec.entity, "aliases": [spec.entity.lower()]}
    (root / "entity.json").write_text(json.dumps(entity, indent=1) + "\n", encoding="utf-8")
    return corpus.scan(root)
