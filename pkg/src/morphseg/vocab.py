"""Token inventories: the WordPiece vocabulary, the affix inventory and the stem set."""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

CONTINUATION_PREFIX = "##"
UNKNOWN_TOKEN = "[UNK]"

_ALPHA = re.compile(r"[a-z]+")


class VocabFormatError(ValueError):
    """Raised when a vocabulary, affix or stopword file is malformed."""


class AffixValidationError(ValueError):
    """Raised when an affix has no matching token in the vocabulary."""


def is_alphabetic(s: str) -> bool:
    """ASCII a-z only; digits, diacritics and punctuation disqualify."""
    return _ALPHA.fullmatch(s) is not None


@dataclass(frozen=True)
class Vocabulary:
    entries: tuple[str, ...]
    index: Mapping[str, int] = field(repr=False)
    continuation_prefix: str = CONTINUATION_PREFIX

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Vocabulary":
        entries = tuple(tokens)
        index: dict[str, int] = {}
        for i, tok in enumerate(entries):
            if tok in index:
                raise VocabFormatError(
                    f"duplicate token {tok!r} at line {i + 1} (first seen at line {index[tok] + 1})"
                )
            index[tok] = i
        if not entries:
            raise VocabFormatError("vocabulary is empty")
        return cls(entries, index)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: object) -> bool:
        return token in self.index

    def lookup(self, token: str) -> int:
        return self.index[token]

    def token(self, token_id: int) -> str:
        return self.entries[token_id]

    def is_continuation(self, token: str) -> bool:
        return token.startswith(self.continuation_prefix)

    def has_initial(self, piece: str) -> bool:
        return piece in self.index and not piece.startswith(self.continuation_prefix)

    def has_continuation(self, piece: str) -> bool:
        return self.continuation_prefix + piece in self.index

    def word_initial_tokens(self) -> list[str]:
        return [t for t in self.entries if not t.startswith(self.continuation_prefix)]


@dataclass(frozen=True)
class AffixInventory:
    prefixes: frozenset[str]
    suffixes: frozenset[str]

    def __post_init__(self):
        for a in (*self.prefixes, *self.suffixes):
            if not is_alphabetic(a):
                raise VocabFormatError(f"affix {a!r} is not lowercase alphabetic")

    @property
    def strings(self) -> frozenset[str]:
        return self.prefixes | self.suffixes

    @cached_property
    def ordered_prefixes(self) -> tuple[str, ...]:
        return tuple(sorted(self.prefixes))

    @cached_property
    def ordered_suffixes(self) -> tuple[str, ...]:
        return tuple(sorted(self.suffixes))


@dataclass(frozen=True)
class StemSet:
    stems: frozenset[str]

    def __contains__(self, word: object) -> bool:
        return word in self.stems

    def __len__(self) -> int:
        return len(self.stems)

    @cached_property
    def ordered(self) -> tuple[str, ...]:
        return tuple(sorted(self.stems))

    def __iter__(self):
        return iter(self.ordered)


def _read_lines(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def read_word_list(path: str | Path) -> list[str]:
    """One entry per line, lowercased; blank lines and ``#`` comments dropped."""
    words = []
    for line in _read_lines(path):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.append(line.lower())
    return words


def load_vocabulary(path: str | Path) -> Vocabulary:
    lines = _read_lines(path)
    if not lines:
        raise VocabFormatError(f"{path}: empty vocabulary file")
    # Bracketed specials ([UNK], [CLS], ...) keep their case; everything else is lowercased.
    tokens = [t if t.startswith("[") and t.endswith("]") else t.lower() for t in lines]
    try:
        return Vocabulary.from_tokens(tokens)
    except VocabFormatError as e:
        raise VocabFormatError(f"{path}: {e}") from None


def validate_affixes(prefixes: Iterable[str], suffixes: Iterable[str], vocab: Vocabulary) -> AffixInventory:
    inv = AffixInventory(frozenset(prefixes), frozenset(suffixes))
    for p in sorted(inv.prefixes):
        if not vocab.has_initial(p):
            raise AffixValidationError(f"prefix {p!r} is not a word-initial token of the vocabulary")
    for s in sorted(inv.suffixes):
        if not vocab.has_continuation(s):
            raise AffixValidationError(
                f"suffix {s!r} is missing from the vocabulary as {CONTINUATION_PREFIX + s!r}"
            )
    return inv


def load_affix_inventory(prefix_file: str | Path, suffix_file: str | Path, vocab: Vocabulary) -> AffixInventory:
    return validate_affixes(read_word_list(prefix_file), read_word_list(suffix_file), vocab)


def build_stem_set(vocab: Vocabulary, affixes: AffixInventory, stopwords: Iterable[str]) -> StemSet:
    """Word-initial, fully alphabetic tokens longer than three characters that are
    neither stopwords nor affix strings."""
    excluded = set(stopwords) | affixes.strings
    stems = frozenset(
        t for t in vocab.entries
        if len(t) > 3 and is_alphabetic(t) and t not in excluded
    )
    return StemSet(stems)


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


# -- packaged resources ------------------------------------------------------

def data_path(name: str) -> Path:
    return Path(str(resources.files("morphseg") / "data" / name))


DEFAULT_VOCAB = "bert-base-uncased-vocab.txt"
DEFAULT_PREFIXES = "prefixes.txt"
DEFAULT_SUFFIXES = "suffixes.txt"
DEFAULT_STOPWORDS = "stopwords-en.txt"


@dataclass(frozen=True)
class Resources:
    """Everything the two segmenters need, loaded once."""

    vocab: Vocabulary
    affixes: AffixInventory
    stems: StemSet
    stopwords_sha256: str = ""

    @classmethod
    def load(
        cls,
        vocab: str | Path | None = None,
        prefixes: str | Path | None = None,
        suffixes: str | Path | None = None,
        stopwords: str | Path | None = None,
    ) -> "Resources":
        vocab = vocab or data_path(DEFAULT_VOCAB)
        prefixes = prefixes or data_path(DEFAULT_PREFIXES)
        suffixes = suffixes or data_path(DEFAULT_SUFFIXES)
        stopwords = stopwords or data_path(DEFAULT_STOPWORDS)
        v = load_vocabulary(vocab)
        inv = load_affix_inventory(prefixes, suffixes, v)
        stems = build_stem_set(v, inv, read_word_list(stopwords))
        return cls(v, inv, stems, file_sha256(stopwords))


_default: Resources | None = None


def default_resources() -> Resources:
    """BERT-base-uncased vocabulary with the shipped affix and stopword lists (cached)."""
    global _default
    if _default is None:
        _default = Resources.load()
    return _default


def write_stems(stems: StemSet, path: str | Path) -> None:
    Path(path).write_text("".join(s + "\n" for s in stems), encoding="utf-8")


def token_ids(tokens: Sequence[str], vocab: Vocabulary) -> list[int]:
    return [vocab.lookup(t) for t in tokens]
