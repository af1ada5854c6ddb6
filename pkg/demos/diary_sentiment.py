# Weekly happiness scores for the synthetic diary, plus entries naming an entity.

import tempfile
from pathlib import Path

from diaryforge import corpus, fixtures, hedonometer as hedo
from diaryforge.entities import EntitySpec, entity_sentiment

root = Path(tempfile.mkdtemp(prefix="sentiment-"))
layout = fixtures.generate_fixture_corpus(8, fixtures.FixtureSpec(transcript_gaps=((1918, 3),)), root)
lex = hedo.load_lexicon(root / "lexicon.csv")
entries = corpus.load_entries(layout)
print(len(entries), "transcribed weeks,", len(layout.gaps), "gap(s)")

series = hedo.weekly_series(entries, lex)
for r in series[:6]:
    print(f"  {r.year} week {r.week_no:2d} ({r.week_date:>14}): {r.score:.3f} from {r.in_vocab_tokens} words")
print("  ...")

print("\nyear   min    q1  median   q3    max   mean")
for s in hedo.year_stats(series):
    print(f"{s.year} {s.min:5.2f} {s.q1:5.2f} {s.median:6.2f} {s.q3:5.2f} {s.max:5.2f} {s.mean:6.2f}")

spec = EntitySpec.from_json(root / "entity.json")
records = entity_sentiment(entries, spec, lex)
overall = sum(r.score for r in series) / len(series)
ent_mean = sum(r.score for r in records) / len(records)
print(f"\n{len(records)} entries mention {spec.name}: mean {ent_mean:.3f} vs overall {overall:.3f}")
best = max(records, key=lambda r: r.score)
print(f"happiest one, {best.year} week {best.week_no}:")
print("  top   ", ", ".join(f"{w} {s}" for w, s in best.top5))
print("  bottom", ", ".join(f"{w} {s}" for w, s in best.bottom5))
