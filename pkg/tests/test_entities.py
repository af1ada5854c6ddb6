import pytest
from hypothesis import given, settings, strategies as st

from diaryforge import corpus, hedonometer as hedo
from diaryforge.entities import EntitySpec, entity_sentiment, find_mentions
from diaryforge.fixtures import FIXTURE_LEXICON

LEX = hedo.Lexicon(FIXTURE_LEXICON)


def entry(text, week=1, year=1917):
    return hedo.DiaryEntry(year, 10, week, "", hedo.clean_text(text))


def test_single_mention():
    ms = find_mentions([entry("met Dorothy today")], EntitySpec("Dorothy", ("Dorothy",)))
    assert len(ms) == 1 and ms[0].count == 1 and ms[0].offset == 4 and ms[0].alias == "dorothy"


def test_whole_token_rule():
    spec = EntitySpec("Dorothy", ("dorothy",))
    assert find_mentions([entry("dorothea wrote"), entry("dorothys hat")], spec) == []


def test_multi_token_alias():
    spec = EntitySpec("Tramore", ("Tramore", "Trá Mór"))
    ms = find_mentions([entry("went to trá mór and then TRAMORE again")], spec)
    assert ms[0].count == 2 and ms[0].alias == "trá mór"


def test_overlapping_aliases_count_once():
    spec = EntitySpec("Dorothy", ("dorothy", "dorothy price"))
    ms = find_mentions([entry("dorothy price came")], spec)
    assert ms[0].count == 1 and ms[0].alias == "dorothy price"


def test_spec_validation(tmp_path):
    with pytest.raises(ValueError):
        EntitySpec("x", ())
    with pytest.raises(ValueError):
        EntitySpec("x", ("a", "A"))
    with pytest.raises(ValueError):
        EntitySpec.from_json({"name": "x"})
    p = tmp_path / "e.json"
    p.write_text('{"name": "Dorothy", "aliases": ["dorothy", "dot"]}', encoding="utf-8")
    assert EntitySpec.from_json(p).aliases == ("dorothy", "dot")


def test_no_matches_no_records():
    spec = EntitySpec("Dorothy", ("dorothy",))
    assert entity_sentiment([entry("love tea")], spec, LEX) == []


def test_single_match_record_equals_score():
    e = entry("met dorothy love rain tea")
    rec = entity_sentiment([e, entry("war", 2)], EntitySpec("Dorothy", ("dorothy",)), LEX)
    assert len(rec) == 1
    s = hedo.score_text(e.text, LEX)
    assert (rec[0].score, rec[0].in_vocab_tokens) == (s.score, s.in_vocab)
    assert rec[0].top5[0] == ("love", 8.42)


texts = st.lists(st.sampled_from(["dorothy", "dot", "dorothea", "love", "war", "the", "dot", "price"]), max_size=15)


@settings(max_examples=100)
@given(st.lists(texts, min_size=1, max_size=6), st.permutations(["dorothy", "dot", "dorothy price"]))
def test_alias_order_and_monotonicity(docs, aliases):
    entries = [entry(" ".join(d), week=i + 1) for i, d in enumerate(docs)]
    full = find_mentions(entries, EntitySpec("D", tuple(aliases)))
    assert full == find_mentions(entries, EntitySpec("D", tuple(sorted(aliases))))
    fewer = find_mentions(entries, EntitySpec("D", tuple(aliases[:1])))
    assert sum(m.count for m in fewer) <= sum(m.count for m in full)
    recs = entity_sentiment(entries, EntitySpec("D", tuple(aliases)), LEX)
    assert [r.key for r in recs] == [m.key for m in full]


def test_fixture_entity_entries_score_higher(fixture_corpus):
    entries = corpus.load_entries(fixture_corpus)
    spec = EntitySpec.from_json(fixture_corpus.root / "entity.json")
    recs = [r for r in entity_sentiment(entries, spec, LEX) if r.score is not None]
    series = [r for r in hedo.weekly_series(entries, LEX) if r.score is not None]
    assert recs
    assert sum(r.score for r in recs) / len(recs) > sum(r.score for r in series) / len(series)
