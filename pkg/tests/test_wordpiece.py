import string

import pytest
from hypothesis import given, strategies as st

from morphseg.vocab import Vocabulary
from morphseg.wordpiece import UNKNOWN, segment_wordpiece

GOLDEN = {
    "applausive": "app ##laus ##ive",
    "superannoying": "super ##ann ##oy ##ing",
    "overseasoned": "overseas ##oned",
    "isotopize": "iso ##top ##ize",
    "antimicrosoft": "anti ##mic ##ros ##oft",
    "inkinetic": "ink ##ine ##tic",
    "prematuration": "prem ##at ##uration",
    "nonmultiplayer": "non ##mu ##lt ##ip ##layer",
    "promosque": "promo ##sque",
    "finalize": "final ##ize",
    "mobilize": "mob ##ili ##ze",
    "tribalize": "tribal ##ize",
    "templatize": "te ##mp ##lat ##ize",
    "stabilize": "stabilize",
}


@pytest.mark.parametrize("word,expected", sorted(GOLDEN.items()))
def test_golden(res, word, expected):
    assert str(segment_wordpiece(word, res.vocab)) == expected


def test_empty_word_rejected(res):
    with pytest.raises(ValueError):
        segment_wordpiece("", res.vocab)


def test_unknown_when_no_match():
    v = Vocabulary.from_tokens(["[UNK]", "ab", "##c"])
    assert segment_wordpiece("abd", v) is UNKNOWN or segment_wordpiece("abd", v).is_unknown
    assert segment_wordpiece("abd", v).tokens == ("[UNK]",)


def test_too_long(res):
    assert segment_wordpiece("a" * 101, res.vocab).is_unknown
    assert not segment_wordpiece("a" * 100, res.vocab, max_chars=100).is_unknown


def test_boundaries(res):
    wp = segment_wordpiece("templatize", res.vocab)
    assert wp.boundaries() == [0, 2, 4, 7, 10]
    assert wp.pieces() == ["te", "mp", "lat", "ize"]


words = st.text(string.ascii_lowercase, min_size=1, max_size=20)


@given(words)
def test_round_trip_and_membership(res, word):
    wp = segment_wordpiece(word, res.vocab)
    if wp.is_unknown:
        return
    assert "".join(wp.pieces()) == word
    assert not wp.tokens[0].startswith("##")
    assert all(t.startswith("##") for t in wp.tokens[1:])
    assert all(t in res.vocab for t in wp.tokens)


small = Vocabulary.from_tokens(["a", "ab", "abc", "b", "##a", "##b", "##c", "##bc", "c"])


@given(st.text("abc", min_size=1, max_size=10))
def test_first_token_is_longest_prefix(word):
    wp = segment_wordpiece(word, small)
    if wp.is_unknown:
        return
    candidates = [t for t in small.entries if not t.startswith("##") and word.startswith(t)]
    assert wp.tokens[0] == max(candidates, key=len)
