import json
import string

import pytest
from hypothesis import given, settings, strategies as st

from morphseg.corpus import (
    CLASS1, CLASS2, DatasetTooSmallError, Document, Entry, LabelScheme, SchemeError, WordStats,
    assign_classes, dataset_to_tsv, extract_complex_words, merge_stats, preprocess, read_dataset,
    read_documents, split_dataset, split_sizes,
)

STARS = LabelScheme("neg", "pos", frozenset({"1", "2"}), frozenset({"4", "5"}))


def test_preprocess_repeats():
    assert preprocess("niiiiice") == ["niiice"]
    assert preprocess("Nice niiice") == ["nice", "niiice"]


def test_preprocess_links_and_digits():
    assert preprocess("visit http://x.co now2") == ["visit"]
    assert preprocess("see www.example.com and HTTPS://a.b") == ["see", "and"]


def test_preprocess_splits_on_non_letters():
    assert preprocess("super-bizarre, isn't it?") == ["super", "bizarre", "isn", "t", "it"]


@given(st.text(string.ascii_letters + " .,-!'1", max_size=60))
def test_preprocess_idempotent(text):
    once = preprocess(text)
    assert preprocess(" ".join(once)) == once


def test_scheme_rejects_overlap():
    with pytest.raises(SchemeError):
        LabelScheme("a", "b", frozenset({"1", "3"}), frozenset({"3"}))
    with pytest.raises(SchemeError):
        LabelScheme("a", "b", frozenset(), frozenset({"3"}))


def test_document_label_required():
    with pytest.raises(ValueError):
        Document("text", "")


def test_text_level_counts(res):
    stats = extract_complex_words([Document("superbizarre superbizarre", "1")], STARS, res)
    s = stats["superbizarre"]
    assert (s.count_class1, s.count_class2, s.total_frequency) == (1, 0, 2)


def test_neutral_label_skipped(res):
    stats = extract_complex_words([Document("superbizarre", "3")], STARS, res)
    assert stats == {}


def test_stems_contribute_nothing(res):
    assert extract_complex_words([Document("bizarre lock the qwxz", "1")], STARS, res) == {}


def test_workers_agree(res):
    docs = [Document(f"superbizarre unlockable {'antimicrosoft' if i % 3 else 'tribalize'}", str(1 + i % 5))
            for i in range(60)]
    one = extract_complex_words(docs, STARS, res)
    many = extract_complex_words(docs, STARS, res, workers=2, chunk_size=7)
    assert one == many


def test_merge_is_commutative():
    a = {"x": WordStats("x", 1, 0, 2)}
    b = {"x": WordStats("x", 0, 2, 3), "y": WordStats("y", 1, 1, 2)}
    assert merge_stats([a, b]) == merge_stats([b, a])
    assert merge_stats([a, b])["x"] == WordStats("x", 1, 2, 5)


def stats_from(fracs):
    return {w: WordStats(w, round(f * 10), 10 - round(f * 10), 1) for w, f in fracs.items()}


def test_tertiles_three():
    out = assign_classes(stats_from({"a": 1.0, "b": 0.5, "c": 0.0}))
    assert [(e.word, e.label) for e in out] == [("a", CLASS1), ("c", CLASS2)]


def test_tertiles_six():
    words = dict(zip("abcdef", (1.0, 0.9, 0.6, 0.5, 0.2, 0.0)))
    out = assign_classes(stats_from(words))
    assert {e.word for e in out if e.label == CLASS1} == {"a", "b"}
    assert {e.word for e in out if e.label == CLASS2} == {"e", "f"}


def test_tertiles_ties_by_word():
    out = assign_classes(stats_from({w: 0.5 for w in "fedcba"}))
    assert [(e.word, e.label) for e in out] == [("a", CLASS1), ("b", CLASS1), ("e", CLASS2), ("f", CLASS2)]


def test_too_small():
    with pytest.raises(DatasetTooSmallError):
        assign_classes(stats_from({"a": 1.0, "b": 0.0}))


@given(st.integers(3, 400))
def test_class_balance(n):
    out = assign_classes(stats_from({f"w{i:04d}": (i % 11) / 10 for i in range(n)}))
    c1 = sum(e.label == CLASS1 for e in out)
    assert c1 == len(out) - c1 == n // 3


def entries(n):
    return [Entry(f"w{i}", CLASS1 if i % 2 else CLASS2, i + 1) for i in range(n)]


def test_split_ten():
    ds = split_dataset(entries(10), seed=4)
    assert [len(ds.split(s)) for s in ("train", "dev", "test")] == [6, 2, 2]


def test_split_six():
    assert split_sizes(6) == (4, 1, 1)


def test_split_deterministic():
    assert split_dataset(entries(30), 9).entries == split_dataset(entries(30), 9).entries


def test_split_seeds_differ():
    splits = {tuple(sorted((e.word, e.split) for e in split_dataset(entries(5), s).entries)) for s in range(20)}
    assert len(splits) > 1


@given(st.integers(1, 500))
def test_split_proportions(n):
    tr, dv, te = split_sizes(n)
    assert tr + dv + te == n
    for got, frac in zip((tr, dv, te), (0.6, 0.2, 0.2)):
        assert abs(got - frac * n) <= 1


@settings(max_examples=30)
@given(st.integers(1, 80), st.integers(0, 10**6))
def test_split_partitions_words(n, seed):
    ds = split_dataset(entries(n), seed)
    assert sorted(ds.words()) == sorted(e.word for e in entries(n))


def test_dataset_round_trip(tmp_path):
    ds = split_dataset(entries(12), 1, STARS)
    p = tmp_path / "d.tsv"
    p.write_text(dataset_to_tsv(ds), encoding="utf-8")
    assert p.read_text().splitlines()[0] == "word\tclass\tfrequency\tsplit"
    back = read_dataset(p, STARS)
    assert back.entries == ds.entries


def test_read_documents(tmp_path):
    p = tmp_path / "c.jsonl"
    recs = [{"body": "hello", "stars": 5.0}, {"body": "x", "stars": ""}, {"body": "y", "stars": 2}]
    p.write_text("\n".join(json.dumps(r) for r in recs) + "\n\n")
    docs = list(read_documents(p, "body", "stars"))
    assert docs == [Document("hello", "5"), Document("y", "2")]


def test_read_documents_bad_record(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"text": "a"}\n')
    with pytest.raises(ValueError, match="1"):
        list(read_documents(p))


def test_every_dataset_word_derivable(res):
    from morphseg.derivational import segment_derivational
    words = ["superbizarre", "unlockable", "antimicrosoft", "tribalize", "applausive", "promosque"]
    docs = [Document(" ".join(words[i:] + words[:i]), str(1 + i % 5)) for i in range(12)]
    stats = extract_complex_words(docs, STARS, res)
    for w in stats:
        assert segment_derivational(w, res.affixes, res.stems) is not None
