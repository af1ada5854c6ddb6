import io

import pytest
from hypothesis import given, settings, strategies as st

from diaryforge import hedonometer as hedo
from diaryforge.fixtures import FIXTURE_LEXICON

LEX = hedo.Lexicon(FIXTURE_LEXICON)


def lexicon_file(text):
    return hedo.load_lexicon(io.StringIO(text))


# lexicon

def test_load_lexicon():
    lex = lexicon_file("word,happiness\ngood,7.0\nbad,3.0\n")
    assert len(lex) == 2 and lex["good"] == 7.0


def test_load_lexicon_duplicate_names_line():
    with pytest.raises(hedo.LexiconError, match="line 3"):
        lexicon_file("word,happiness\ngood,7.0\nGood,6.0\n")


def test_load_lexicon_range():
    with pytest.raises(hedo.LexiconError):
        lexicon_file("word,happiness\nbliss,9.5\n")


def test_load_lexicon_bad_header_and_value():
    with pytest.raises(hedo.LexiconError):
        lexicon_file("term,score\ngood,7\n")
    with pytest.raises(hedo.LexiconError):
        lexicon_file("word,happiness\ngood,seven\n")


def test_load_lexicon_from_path(tmp_path):
    p = tmp_path / "lex.csv"
    p.write_text("word,happiness\nTrá,6.5\n", encoding="utf-8")
    assert hedo.load_lexicon(p)["trá"] == 6.5


def test_lexicon_is_read_only():
    with pytest.raises(TypeError):
        LEX["love"] = 1.0


# cleaning

def test_clean_text_examples():
    assert hedo.clean_text("Went to  Trá Mór!!") == "went to trá mór"
    assert hedo.clean_text("") == ""
    assert hedo.clean_text("don't--stop") == "don't stop"
    assert hedo.clean_text("well-known -dash- end-") == "well-known dash end"


@given(st.text())
def test_clean_text_idempotent(s):
    once = hedo.clean_text(s)
    assert hedo.clean_text(once) == once


# scoring

def test_score_mean():
    lex = hedo.Lexicon({"x": 8, "y": 2})
    assert hedo.score_text("x y", lex).score == 5.0


def test_score_all_oov():
    s = hedo.score_text("nothing here matches", LEX)
    assert s.score is None and s.in_vocab == 0 and s.total == 3


def test_score_repeats_count():
    lex = hedo.Lexicon({"a": 5, "happy": 8})
    assert hedo.score_text("a happy happy day", lex) == (7.0, 3, 4)


def test_neutral_band():
    lex = hedo.Lexicon({"a": 5, "happy": 8, "sad": 2})
    assert hedo.score_text("a happy sad", lex, neutral_band=(4, 6)).score == 5.0
    assert hedo.score_text("a", lex, neutral_band=(4, 6)).score is None


words = st.lists(st.sampled_from(sorted(FIXTURE_LEXICON) + ["dorothy", "the", "trá", "xyz"]), max_size=40)


@settings(max_examples=200)
@given(words, st.sampled_from(["dorothy", "qqq", "mór"]))
def test_duplication_and_oov_neutrality(ws, oov):
    text = " ".join(ws)
    base = hedo.score_text(text, LEX).score
    if base is not None:
        assert 1 <= base <= 9
        assert hedo.score_text(text + " " + text, LEX).score == base
    assert hedo.score_text(text + " " + oov, LEX).score == base


# top / bottom

def test_top_bottom_short():
    top, bottom = hedo.top_bottom("love tea rain", LEX)
    assert len(top) == len(bottom) == 3


def test_top_bottom_empty():
    assert hedo.top_bottom("", LEX) == ([], [])


def test_top_bottom_ranking():
    lex = hedo.Lexicon({"a": 9, "b": 8, "c": 7, "d": 2, "e": 1, "f": 5, "g": 5})
    top, bottom = hedo.top_bottom("a b c d e f g", lex)
    assert [s for _, s in top] == [9, 8, 7, 5, 5]
    assert [s for _, s in bottom] == [1, 2, 5, 5, 7]
    assert [w for w, _ in top] == ["a", "b", "c", "f", "g"]


@given(st.lists(st.sampled_from(sorted(FIXTURE_LEXICON)), unique=True, min_size=10, max_size=10))
def test_top_bottom_disjoint(ws):
    top, bottom = hedo.top_bottom(" ".join(ws), LEX)
    assert not {w for w, _ in top} & {w for w, _ in bottom}


# series and stats

def entry(year, week, text, month=10):
    return hedo.DiaryEntry(year, month, week, f"w{week}", text)


def test_weekly_series_order_and_absent():
    entries = [entry(1918, 3, "love"), entry(1917, 44, "war"), entry(1917, 2, "")]
    series = hedo.weekly_series(entries, LEX)
    assert [(r.year, r.week_no) for r in series] == [(1917, 2), (1917, 44), (1918, 3)]
    assert series[0].score is None and series[1].score == 1.8


def test_weekly_series_duplicate():
    with pytest.raises(ValueError):
        hedo.weekly_series([entry(1917, 1, "a"), entry(1917, 1, "b")], LEX)


def test_series_matches_individual_scores():
    import random

    rnd = random.Random(4)
    vocab = sorted(FIXTURE_LEXICON) + ["walked", "to", "the", "town"]
    entries = [entry(1920, k, " ".join(rnd.choice(vocab) for _ in range(30))) for k in range(1, 53)]
    series = hedo.weekly_series(entries, LEX)
    assert len(series) == 52
    for r, e in zip(series, entries):
        assert r.score == hedo.score_text(e.text, LEX).score
    stats = hedo.year_stats(series)[0]
    scores = [hedo.score_text(e.text, LEX).score for e in entries]
    assert stats.mean == pytest.approx(sum(scores) / len(scores), abs=1e-12)


def record(year, score, week=1):
    return hedo.SentimentRecord(year, 10, week, "", score, 1, 1)


def test_year_stats_inclusive_quartiles():
    s = hedo.year_stats([record(1917, v, i) for i, v in enumerate([6.0, 4.0, 5.0])])[0]
    assert (s.min, s.q1, s.median, s.q3, s.max) == (4.0, 4.5, 5.0, 5.5, 6.0)


def test_year_stats_single():
    s = hedo.year_stats([record(1917, 5.2)])[0]
    assert (s.min, s.q1, s.median, s.q3, s.max, s.mean) == (5.2,) * 6


@given(st.lists(st.floats(1, 9), min_size=2, max_size=30))
def test_quartiles_formula(vals):
    xs = sorted(vals)
    n = len(xs)

    def q(p):
        pos = p * (n - 1)
        lo = int(pos)
        hi = min(lo + 1, n - 1)
        return xs[lo] + (xs[hi] - xs[lo]) * (pos - lo)

    got = hedo.quartiles(xs)
    for g, p in zip(got, (0.25, 0.5, 0.75)):
        assert g == pytest.approx(q(p), abs=1e-12)


def test_year_stats_skips_unscored_year(caplog):
    stats = hedo.year_stats([record(1917, None), record(1918, 6.0)])
    assert [s.year for s in stats] == [1918]
    assert "1917" in caplog.text
