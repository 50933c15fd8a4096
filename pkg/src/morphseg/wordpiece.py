"""Greedy longest-match-first WordPiece segmentation of single words."""
from __future__ import annotations

from dataclasses import dataclass

from .vocab import UNKNOWN_TOKEN, Vocabulary

MAX_CHARS = 100


@dataclass(frozen=True)
class WordPieceSegmentation:
    tokens: tuple[str, ...]
    is_unknown: bool = False

    def __str__(self) -> str:
        return " ".join(self.tokens)

    def pieces(self, prefix: str = "##") -> list[str]:
        """Tokens with the continuation marker stripped."""
        return [t[len(prefix):] if i and t.startswith(prefix) else t for i, t in enumerate(self.tokens)]

    def boundaries(self, prefix: str = "##") -> list[int]:
        """Character offsets of every token start plus the word end."""
        out = [0]
        for p in self.pieces(prefix):
            out.append(out[-1] + len(p))
        return out


UNKNOWN = WordPieceSegmentation((UNKNOWN_TOKEN,), True)


def segment_wordpiece(word: str, vocab: Vocabulary, max_chars: int = MAX_CHARS) -> WordPieceSegmentation:
    if not word:
        raise ValueError("cannot segment an empty word")
    if len(word) > max_chars:
        return UNKNOWN
    cp = vocab.continuation_prefix
    tokens = []
    start = 0
    n = len(word)
    while start < n:
        end = n
        match = None
        while start < end:
            piece = word[start:end]
            if start > 0:
                piece = cp + piece
            if piece in vocab.index:
                match = piece
                break
            end -= 1
        if match is None:
            return UNKNOWN
        tokens.append(match)
        start = end
    return WordPieceSegmentation(tuple(tokens))
