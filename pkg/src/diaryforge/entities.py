"""Named-entity mentions in transcripts and entity-conditioned sentiment."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .hedonometer import DiaryEntry, SentimentRecord, clean_text, score_entry


@dataclass(frozen=True)
class EntitySpec:
    name: str
    aliases: tuple[str, ...]

    def __post_init__(self):
        aliases = tuple(self.aliases)
        object.__setattr__(self, "aliases", aliases)
        if not aliases:
            raise ValueError(f"entity {self.name!r} needs at least one alias")
        folded = [clean_text(a) for a in aliases]
        if any(not f for f in folded):
            raise ValueError(f"entity {self.name!r} has an empty alias")
        if len(set(folded)) != len(folded):
            raise ValueError(f"entity {self.name!r} has duplicate aliases")

    @classmethod
    def from_json(cls, source: str | Path | Mapping) -> "EntitySpec":
        if isinstance(source, Mapping):
            data = source
        else:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        name = data.get("name")
        aliases = data.get("aliases")
        if not isinstance(name, str) or not isinstance(aliases, list):
            raise ValueError('entity spec must look like {"name": "...", "aliases": ["..."]}')
        return cls(name, tuple(aliases))


@dataclass(frozen=True)
class EntityMention:
    entity: str
    year: int
    month: int
    week_no: int
    alias: str
    offset: int
    count: int

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.year, self.month, self.week_no)


def _token_starts(text: str) -> list[tuple[str, int]]:
    out, pos = [], 0
    for tok in text.split(" "):
        if tok:
            out.append((tok, pos))
        pos += len(tok) + 1
    return out


def find_mentions(entries: Sequence[DiaryEntry], spec: EntitySpec) -> list[EntityMention]:
    """Whole-token, case-insensitive alias matches; one record per entry that mentions the entity.

    ``count`` is the number of distinct token positions at which some alias
    starts, so overlapping aliases are never double counted at one position.
    """
    patterns = sorted({tuple(clean_text(a).split()) for a in spec.aliases})
    mentions = []
    for e in entries:
        toks = _token_starts(clean_text(e.text))
        words = [t for t, _ in toks]
        hits: dict[int, tuple[str, ...]] = {}
        for pat in patterns:
            n = len(pat)
            for i in range(len(words) - n + 1):
                if tuple(words[i:i + n]) == pat:
                    # the longest alias wins when several start here
                    if i not in hits or len(pat) > len(hits[i]) or (len(pat) == len(hits[i]) and pat < hits[i]):
                        hits[i] = pat
        if hits:
            first = min(hits)
            mentions.append(EntityMention(
                spec.name, e.year, e.month, e.week_no, " ".join(hits[first]), toks[first][1], len(hits),
            ))
    return mentions


def entity_sentiment(
    entries: Sequence[DiaryEntry], spec: EntitySpec, lex: Mapping[str, float], neutral_band=None
) -> list[SentimentRecord]:
    """Sentiment records, with top/bottom word evidence, for entries mentioning ``spec``."""
    keys = {m.key for m in find_mentions(entries, spec)}
    picked = sorted((e for e in entries if e.key in keys), key=lambda e: (e.year, e.week_no))
    return [score_entry(e, lex, neutral_band=neutral_band) for e in picked]
