"""Derivational segmentation by breadth-first affix removal.

A word is peeled one affix at a time.  Level ``i`` of the search holds every
string reachable by removing exactly ``i`` affixes; the search stops at the
first level containing a known stem.  Suffix removal undoes the common English
spelling changes (dropped ``e``, doubled consonant, ``y`` -> ``i``), so the
stem of ``isotopize`` comes out as ``isotope``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from .vocab import AffixInventory, StemSet, Vocabulary

MAX_DEPTH = 4
MIN_REMAINDER = 2
VOWELS = frozenset("aeiou")
HYPHEN = "-"


class SerializationError(KeyError):
    pass


class Rule(str, Enum):
    """Spelling change applied when a suffix attaches to a base."""

    IDENTITY = "identity"
    E_DELETION = "e_deletion"  # isotope + ize -> isotopize
    DOUBLING = "doubling"  # run + er -> runner
    Y_TO_I = "y_to_i"  # happy + ness -> happiness


def attach_suffix(base: str, suffix: str, rule: Rule = Rule.IDENTITY) -> str:
    if rule is Rule.E_DELETION:
        return base[:-1] + suffix
    if rule is Rule.DOUBLING:
        return base + base[-1] + suffix
    if rule is Rule.Y_TO_I:
        return base[:-1] + "i" + suffix
    return base + suffix


def strip_prefix(word: str, prefix: str) -> str | None:
    if word.startswith(prefix) and len(word) - len(prefix) >= MIN_REMAINDER:
        return word[len(prefix):]
    return None


def suffix_candidates(word: str, suffix: str) -> dict[str, Rule]:
    """Possible bases of ``word`` once ``suffix`` is removed, each with the rule
    that maps it back onto ``word``.  Empty if the word lacks the suffix."""
    if not suffix or not word.endswith(suffix):
        return {}
    r = word[: len(word) - len(suffix)]
    out: dict[str, Rule] = {}
    if len(r) >= MIN_REMAINDER:
        out[r] = Rule.IDENTITY
    if suffix[0] in VOWELS and len(r) + 1 >= MIN_REMAINDER:
        out.setdefault(r + "e", Rule.E_DELETION)
    if len(r) >= 2 and r[-1] == r[-2] and r[-1] not in VOWELS and len(r) - 1 >= MIN_REMAINDER:
        out.setdefault(r[:-1], Rule.DOUBLING)
    if r.endswith("i") and len(r) >= MIN_REMAINDER:
        out.setdefault(r[:-1] + "y", Rule.Y_TO_I)
    return out


def strip_suffix(word: str, suffix: str) -> set[str]:
    return set(suffix_candidates(word, suffix))


@dataclass(frozen=True)
class Step:
    """One affix removal.  ``rule`` is only meaningful for suffixes."""

    role: str  # "prefix" | "suffix"
    affix: str
    rule: Rule = Rule.IDENTITY


@dataclass(frozen=True)
class History:
    steps: tuple[Step, ...] = ()

    @property
    def n_suffixes(self) -> int:
        return sum(s.role == "suffix" for s in self.steps)

    def extend(self, step: Step) -> "History":
        return History(self.steps + (step,))

    def signature(self) -> tuple:
        return tuple((s.role, s.affix, s.rule.value) for s in self.steps)

    def sort_key(self) -> tuple:
        return (self.n_suffixes, self.signature())


@dataclass(frozen=True)
class DerivationalSegmentation:
    prefixes: tuple[str, ...]  # outermost first
    stem: str
    suffixes: tuple[str, ...]  # innermost first
    rules: tuple[Rule, ...] = ()  # one per suffix, innermost first

    def __post_init__(self):
        if not self.rules:
            object.__setattr__(self, "rules", (Rule.IDENTITY,) * len(self.suffixes))
        if len(self.rules) != len(self.suffixes):
            raise ValueError("one spelling rule per suffix required")
        if not self.prefixes and not self.suffixes:
            raise ValueError("a derivative needs at least one affix")

    @property
    def depth(self) -> int:
        return len(self.prefixes) + len(self.suffixes)

    @property
    def outermost_affix(self) -> tuple[str, str]:
        """(role, affix) used for per-affix grouping; prefixes take precedence."""
        if self.prefixes:
            return "prefix", self.prefixes[0]
        return "suffix", self.suffixes[-1]

    def compose(self) -> str:
        word = self.stem
        for suf, rule in zip(self.suffixes, self.rules):
            word = attach_suffix(word, suf, rule)
        return "".join(self.prefixes) + word

    @classmethod
    def from_history(cls, stem: str, history: History) -> "DerivationalSegmentation":
        # history is in removal order: outermost affix first
        prefixes = tuple(s.affix for s in history.steps if s.role == "prefix")
        sufs = [s for s in history.steps if s.role == "suffix"][::-1]
        return cls(prefixes, stem, tuple(s.affix for s in sufs), tuple(s.rule for s in sufs))


def compose_history(base: str, history: History) -> str:
    """Re-apply removed affixes to ``base``, innermost (last removed) first."""
    word = base
    for step in reversed(history.steps):
        if step.role == "prefix":
            word = step.affix + word
        else:
            word = attach_suffix(word, step.affix, step.rule)
    return word


@dataclass
class Frontier:
    """Strings reachable after removing the same number of affixes, each with
    the removal history that produced it."""

    words: dict[str, History] = field(default_factory=dict)
    depth: int = 0

    @classmethod
    def start(cls, word: str) -> "Frontier":
        return cls({word: History()}, 0)

    def __contains__(self, word: object) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)

    def members(self) -> set[str]:
        return set(self.words)


def _plausible(base: str, affixes: AffixInventory, stems) -> bool:
    # A respelled base must either be a stem or still end in a suffix that a
    # later step will remove.  Prefixes can always be peeled first, so this
    # never hides a reachable stem; it only keeps strings like "unlocke" out.
    return base in stems or any(base.endswith(s) for s in affixes.suffixes)


def _removals(word: str, affixes: AffixInventory, stems=None) -> Iterator[tuple[str, Step]]:
    for p in affixes.ordered_prefixes:
        rest = strip_prefix(word, p)
        if rest is not None:
            yield rest, Step("prefix", p)
    for s in affixes.ordered_suffixes:
        if word.endswith(s):
            for base, rule in suffix_candidates(word, s).items():
                if rule is not Rule.IDENTITY and stems is not None and not _plausible(base, affixes, stems):
                    continue
                yield base, Step("suffix", s, rule)


def frontier_step(frontier: Frontier, affixes: AffixInventory, stems: StemSet | None = None) -> Frontier:
    """Remove one more affix from every member.  With ``stems`` given, respelled
    bases are pruned as described in :func:`_plausible`."""
    nxt: dict[str, History] = {}
    for word, hist in frontier.words.items():
        for base, step in _removals(word, affixes, stems):
            h = hist.extend(step)
            old = nxt.get(base)
            # a word reached twice keeps the history with fewer suffixes
            if old is None or h.sort_key() < old.sort_key():
                nxt[base] = h
    return Frontier(nxt, frontier.depth + 1)


def segment_derivational(
    word: str,
    affixes: AffixInventory,
    stems: StemSet | Iterable[str],
    max_depth: int = MAX_DEPTH,
) -> DerivationalSegmentation | None:
    """Shallowest segmentation of ``word`` into prefixes, a known stem and
    suffixes, or ``None`` if no stem is reachable within ``max_depth`` removals.

    Ties at the stopping level go to the candidate with fewest suffixes, then
    to the alphabetically first stem.
    """
    frontier = Frontier.start(word)
    for _ in range(max_depth):
        frontier = frontier_step(frontier, affixes, stems)
        if not frontier.words:
            return None
        hits = [w for w in frontier.words if w in stems]
        if hits:
            best = min(hits, key=lambda w: (frontier.words[w].n_suffixes, w))
            return DerivationalSegmentation.from_history(best, frontier.words[best])
    return None


def serialize_delbert(seg: DerivationalSegmentation, vocab: Vocabulary) -> list[str]:
    """Token sequence with each prefix followed by a hyphen, the stem as a
    word-initial token and suffixes as continuation tokens."""
    cp = vocab.continuation_prefix
    tokens: list[str] = []
    for p in seg.prefixes:
        tokens += [p, HYPHEN]
    tokens.append(seg.stem)
    tokens += [cp + s for s in seg.suffixes]
    for t in tokens:
        if t not in vocab.index:
            raise SerializationError(f"token {t!r} is not in the vocabulary")
    return tokens


def token_roles(seg: DerivationalSegmentation) -> list[str]:
    """Role of each serialized token: prefix, hyphen, stem or suffix."""
    roles: list[str] = []
    for _ in seg.prefixes:
        roles += ["prefix", "hyphen"]
    roles.append("stem")
    roles += ["suffix"] * len(seg.suffixes)
    return roles
