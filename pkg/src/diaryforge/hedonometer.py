"""Lexicon-based happiness scoring of diary transcripts."""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

log = logging.getLogger(__name__)

SCORE_MIN, SCORE_MAX = 1.0, 9.0
APOSTROPHES = "'’"


class LexiconError(ValueError):
    pass


class Lexicon(Mapping[str, float]):
    """Immutable word -> happiness mapping, scores in [1, 9]."""

    def __init__(self, scores: Mapping[str, float] | Iterable[tuple[str, float]] = ()):
        items = scores.items() if isinstance(scores, Mapping) else scores
        table: dict[str, float] = {}
        for word, score in items:
            key = normalize_word(word)
            if not key:
                raise LexiconError("empty word in lexicon")
            if key in table:
                raise LexiconError(f"duplicate word {key!r}")
            score = float(score)
            if not SCORE_MIN <= score <= SCORE_MAX:
                raise LexiconError(f"score {score} for {key!r} outside [1, 9]")
            table[key] = score
        self._table = table

    def __getitem__(self, word):
        return self._table[word]

    def __iter__(self):
        return iter(self._table)

    def __len__(self):
        return len(self._table)

    def __repr__(self):
        return f"Lexicon({len(self)} words)"


def normalize_word(word: str) -> str:
    return unicodedata.normalize("NFC", unicodedata.normalize("NFC", word.strip()).casefold())


def load_lexicon(source: str | Path | io.TextIOBase) -> Lexicon:
    """Read a ``word,happiness`` CSV. Errors name the offending line."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as fh:
            return load_lexicon(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header[:2]] != ["word", "happiness"]:
        raise LexiconError(f"line 1: expected header 'word,happiness', got {header!r}")
    table: dict[str, float] = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise LexiconError(f"line {line}: expected 2 columns, got {len(row)}")
        word = normalize_word(row[0])
        if not word:
            raise LexiconError(f"line {line}: empty word")
        try:
            score = float(row[1])
        except ValueError:
            raise LexiconError(f"line {line}: bad score {row[1]!r}") from None
        if not (SCORE_MIN <= score <= SCORE_MAX):
            raise LexiconError(f"line {line}: score {score} for {word!r} outside [1, 9]")
        if word in table:
            raise LexiconError(f"line {line}: duplicate word {word!r}")
        table[word] = score
    return Lexicon(table)


def clean_text(raw: str) -> str:
    """Lowercase, keep letters, digits, apostrophes and internal hyphens; squeeze whitespace."""
    text = normalize_word(raw)
    out = []
    for i, ch in enumerate(text):
        if ch.isalnum() or ch in APOSTROPHES:
            out.append(ch)
        elif ch == "-" and 0 < i < len(text) - 1 and text[i - 1].isalnum() and text[i + 1].isalnum():
            out.append(ch)
        else:
            out.append(" ")
    return " ".join("".join(out).split())


class TextScore(NamedTuple):
    score: float | None
    in_vocab: int
    total: int


def _matched(tokens: Iterable[str], lex: Mapping[str, float], neutral_band=None) -> list[tuple[str, float]]:
    hits = [(t, lex[t]) for t in tokens if t in lex]
    if neutral_band is not None:
        lo, hi = neutral_band
        hits = [(t, s) for t, s in hits if not lo < s < hi]
    return hits


def score_text(text: str, lex: Mapping[str, float], neutral_band: tuple[float, float] | None = None) -> TextScore:
    """Mean lexicon score over in-vocabulary tokens, counting repeats.

    ``neutral_band=(lo, hi)`` drops words scoring strictly inside the band.
    """
    tokens = text.split()
    hits = _matched(tokens, lex, neutral_band)
    if not hits:
        return TextScore(None, 0, len(tokens))
    return TextScore(math.fsum(s for _, s in hits) / len(hits), len(hits), len(tokens))


def top_bottom(
    text: str, lex: Mapping[str, float], k: int = 5, neutral_band=None
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """The ``k`` happiest and ``k`` saddest distinct words; ties sort alphabetically."""
    distinct = dict(_matched(text.split(), lex, neutral_band))
    top = sorted(distinct.items(), key=lambda ws: (-ws[1], ws[0]))[:k]
    bottom = sorted(distinct.items(), key=lambda ws: (ws[1], ws[0]))[:k]
    return top, bottom


@dataclass(frozen=True)
class DiaryEntry:
    year: int
    month: int
    week_no: int
    week_date: str = ""
    text: str = ""
    source: str = ""

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.year, self.month, self.week_no)


@dataclass(frozen=True)
class SentimentRecord:
    year: int
    month: int
    week_no: int
    week_date: str
    score: float | None
    in_vocab_tokens: int
    total_tokens: int
    top5: tuple[tuple[str, float], ...] = field(default=())
    bottom5: tuple[tuple[str, float], ...] = field(default=())

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.year, self.month, self.week_no)


def score_entry(entry: DiaryEntry, lex: Mapping[str, float], k: int = 5, neutral_band=None) -> SentimentRecord:
    s = score_text(entry.text, lex, neutral_band)
    top, bottom = top_bottom(entry.text, lex, k, neutral_band)
    return SentimentRecord(
        entry.year, entry.month, entry.week_no, entry.week_date,
        s.score, s.in_vocab, s.total, tuple(top), tuple(bottom),
    )


def weekly_series(entries: Sequence[DiaryEntry], lex: Mapping[str, float], neutral_band=None) -> list[SentimentRecord]:
    """One record per entry, sorted by (year, week_no). Unscored weeks keep ``score=None``."""
    seen: dict[tuple[int, int], DiaryEntry] = {}
    for e in entries:
        k = (e.year, e.week_no)
        if k in seen:
            raise ValueError(f"duplicate entry for year {e.year} week {e.week_no}")
        seen[k] = e
    return [score_entry(seen[k], lex, neutral_band=neutral_band) for k in sorted(seen)]


@dataclass(frozen=True)
class YearStats:
    year: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    count: int


def quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    """Quartiles by inclusive linear interpolation."""
    if len(values) == 1:
        v = float(values[0])
        return v, v, v
    q1, med, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return q1, med, q3


def year_stats(series: Sequence[SentimentRecord]) -> list[YearStats]:
    if not series:
        raise ValueError("year_stats needs a non-empty series")
    by_year: dict[int, list[float]] = {}
    for r in series:
        by_year.setdefault(r.year, [])
        if r.score is not None:
            by_year[r.year].append(r.score)
    out = []
    for year in sorted(by_year):
        vals = sorted(by_year[year])
        if not vals:
            log.warning("year %d has no scored weeks; omitted from year stats", year)
            continue
        q1, med, q3 = quartiles(vals)
        out.append(YearStats(year, vals[0], q1, med, q3, vals[-1], math.fsum(vals) / len(vals), len(vals)))
    return out
