import string

import pytest
from hypothesis import given, settings, strategies as st

from morphseg.vocab import (
    AffixValidationError, StemSet, VocabFormatError, Vocabulary, build_stem_set, data_path,
    is_alphabetic, load_affix_inventory, load_vocabulary, read_word_list, validate_affixes,
)


def write(tmp_path, name, lines):
    p = tmp_path / name
    p.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return p


def test_ids_follow_line_order(tmp_path):
    v = load_vocabulary(write(tmp_path, "v.txt", ["the", "super", "##ize"]))
    assert [v.lookup(t) for t in ("the", "super", "##ize")] == [0, 1, 2]
    assert v.token(2) == "##ize"
    assert v.is_continuation("##ize") and not v.is_continuation("super")


def test_duplicate_token_names_both_lines(tmp_path):
    with pytest.raises(VocabFormatError, match="super.*1.*3|line 3"):
        load_vocabulary(write(tmp_path, "v.txt", ["super", "the", "super"]))


def test_empty_vocab_rejected(tmp_path):
    with pytest.raises(VocabFormatError):
        load_vocabulary(write(tmp_path, "v.txt", []))


def test_fixture_size():
    v = load_vocabulary(data_path("bert-base-uncased-vocab.txt"))
    assert len(v) == 30522
    assert v.token(0) == "[PAD]" and "[UNK]" in v


def test_shipped_affixes_validate(res):
    assert len(res.affixes.prefixes) == 46
    assert len(res.affixes.suffixes) == 44
    assert {"super", "anti", "non"} <= res.affixes.prefixes
    assert "ize" in res.affixes.suffixes


def test_missing_affix_named(toy):
    with pytest.raises(AffixValidationError, match="mega"):
        validate_affixes(["mega"], [], toy.vocab)
    with pytest.raises(AffixValidationError, match="ment"):
        validate_affixes([], ["ment"], toy.vocab)


def test_non_alphabetic_affix(toy):
    with pytest.raises((AffixValidationError, VocabFormatError)):
        validate_affixes(["un-"], [], toy.vocab)


def test_empty_prefix_file(tmp_path, toy):
    inv = load_affix_inventory(write(tmp_path, "p.txt", []), write(tmp_path, "s.txt", ["ize"]), toy.vocab)
    assert inv.prefixes == frozenset() and inv.suffixes == {"ize"}


def test_word_list_skips_comments(tmp_path):
    p = write(tmp_path, "w.txt", ["# header", "", "The", "  and "])
    assert read_word_list(p) == ["the", "and"]


def test_stem_filter_example():
    v = Vocabulary.from_tokens(["the", "superb", "##ize", "anti", "bizarre"])
    inv = validate_affixes(["anti"], ["ize"], v)
    assert set(build_stem_set(v, inv, {"the"})) == {"superb", "bizarre"}


def test_length_boundary():
    v = Vocabulary.from_tokens(["run", "runs", "##ize"])
    inv = validate_affixes([], ["ize"], v)
    assert set(build_stem_set(v, inv, ())) == {"runs"}


def test_stem_set_invariants(res):
    stops = set(read_word_list(data_path("stopwords-en.txt")))
    for s in res.stems:
        assert len(s) > 3 and is_alphabetic(s)
        assert s in res.vocab and not res.vocab.is_continuation(s)
        assert s not in stops and s not in res.affixes.strings


def test_stem_count_near_reference(res):
    assert abs(len(res.stems) - 20259) <= 0.01 * 20259


tokens = st.lists(st.text(string.ascii_lowercase, min_size=1, max_size=6), min_size=1, max_size=40, unique=True)


@given(tokens)
def test_lookup_round_trip(toks):
    v = Vocabulary.from_tokens(toks)
    assert all(v.token(v.lookup(t)) == t for t in toks)
    assert sorted(v.index.values()) == list(range(len(toks)))


@settings(max_examples=50)
@given(tokens, st.randoms(use_true_random=False))
def test_stem_set_order_independent(toks, rnd):
    shuffled = list(toks)
    rnd.shuffle(shuffled)
    inv = validate_affixes([], [], Vocabulary.from_tokens(toks))
    a = build_stem_set(Vocabulary.from_tokens(toks), inv, ())
    b = build_stem_set(Vocabulary.from_tokens(shuffled), inv, ())
    assert a == b and isinstance(a, StemSet)
