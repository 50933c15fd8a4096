"""Generators for synthetic words, vocabularies and corpora.

Used by the test-suite and the demo scripts; everything is driven by an
explicit seed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import CLASS1, CLASS2, Entry, LabelScheme, LabeledDataset, split_dataset
from .derivational import VOWELS, DerivationalSegmentation, Rule, attach_suffix
from .vocab import Resources, Vocabulary, build_stem_set, validate_affixes

CONSONANTS = "bcdfghjklmnprstvw"
VOWEL_LETTERS = "aeiou"


# -- random derivatives over a real inventory --------------------------------

def applicable_rules(base: str, suffix: str) -> list[Rule]:
    rules = [Rule.IDENTITY]
    if base.endswith("e") and suffix[0] in VOWELS:
        rules.append(Rule.E_DELETION)
    if base[-1] not in VOWELS and base[-1] != "y":
        rules.append(Rule.DOUBLING)
    if base.endswith("y"):
        rules.append(Rule.Y_TO_I)
    return rules


def random_derivative(resources: Resources, rng: np.random.Generator, max_affixes: int = 3) -> DerivationalSegmentation:
    """A stem from the stem set with 1..max_affixes random affixes and spelling rules."""
    stems = resources.stems.ordered
    prefixes = resources.affixes.ordered_prefixes
    suffixes = resources.affixes.ordered_suffixes
    stem = stems[rng.integers(len(stems))]
    n = int(rng.integers(1, max_affixes + 1))
    n_pre = int(rng.integers(0, n + 1)) if prefixes and suffixes else (n if prefixes else 0)
    pre = tuple(prefixes[rng.integers(len(prefixes))] for _ in range(n_pre))
    sufs, rules = [], []
    base = stem
    for _ in range(n - n_pre):
        s = suffixes[rng.integers(len(suffixes))]
        options = applicable_rules(base, s)
        rule = options[rng.integers(len(options))]
        sufs.append(s)
        rules.append(rule)
        base = attach_suffix(base, s, rule)
    return DerivationalSegmentation(pre, stem, tuple(sufs), tuple(rules))


def random_derivatives(resources: Resources, n: int, seed: int, max_affixes: int = 3) -> list[DerivationalSegmentation]:
    rng = np.random.default_rng(seed)
    return [random_derivative(resources, rng, max_affixes) for _ in range(n)]


# -- prefix-identity task with a fusing vocabulary ---------------------------

CLASS1_PREFIXES = ("qa", "xo", "zi", "zu")
CLASS2_PREFIXES = ("qi", "qo", "xa", "zo")


@dataclass
class PrefixTask:
    resources: Resources
    dataset: LabeledDataset
    scheme: LabelScheme
    onsets: dict[str, str]  # stem -> onset fused into the WordPiece token
    tails: dict[str, str]  # stem -> remainder after the onset


def prefix_task(n_words: int = 2000, seed: int = 20210801, n_tails: int = 25) -> PrefixTask:
    """Words ``prefix + stem`` whose class is fixed by the prefix.

    Every stem occurs once with a class-1 prefix and once with a class-2
    prefix, so stems carry no class signal.  The vocabulary holds the bare
    prefixes and stems (so derivational segmentation is exact) but also one
    fused token ``prefix + onset`` per word, which greedy WordPiece prefers:
    ``zu|balemo`` becomes ``zubal ##emo``.  A fused token occurs in exactly
    one word, so the prefix is never visible to WordPiece features of an
    unseen word.
    """
    if n_words % 2:
        raise ValueError("n_words must be even")
    rng = np.random.default_rng(seed)
    n_stems = n_words // 2
    all_onsets = [c1 + v + c2 for c1 in CONSONANTS for v in VOWEL_LETTERS for c2 in CONSONANTS]
    if n_stems > len(all_onsets):
        raise ValueError(f"at most {2 * len(all_onsets)} words supported")
    onsets = [all_onsets[i] for i in rng.choice(len(all_onsets), n_stems, replace=False)]
    tail_pool = sorted({v1 + c + v2 for v1 in VOWEL_LETTERS for c in CONSONANTS for v2 in VOWEL_LETTERS})
    tail_pool = [tail_pool[i] for i in rng.choice(len(tail_pool), n_tails, replace=False)]

    stems, stem_onset, stem_tail = [], {}, {}
    for o in onsets:
        t = tail_pool[rng.integers(n_tails)]
        s = o + t
        stems.append(s)
        stem_onset[s] = o
        stem_tail[s] = t

    entries = []
    fused = []
    for s in stems:
        for cls, pool in ((CLASS1, CLASS1_PREFIXES), (CLASS2, CLASS2_PREFIXES)):
            p = pool[rng.integers(len(pool))]
            entries.append(Entry(p + s, cls, int(rng.integers(1, 1000))))
            fused.append(p + stem_onset[s])

    tokens = ["[PAD]", "[UNK]", "-"]
    tokens += sorted(CLASS1_PREFIXES + CLASS2_PREFIXES)
    tokens += sorted(stems)
    tokens += sorted(set(fused))
    tokens += sorted({"##" + t for t in tail_pool})
    vocab = Vocabulary.from_tokens(tokens)
    affixes = validate_affixes(CLASS1_PREFIXES + CLASS2_PREFIXES, (), vocab)
    res = Resources(vocab, affixes, build_stem_set(vocab, affixes, ()))

    scheme = LabelScheme("c1", "c2", frozenset({"c1"}), frozenset({"c2"}))
    dataset = split_dataset(entries, seed, scheme)
    return PrefixTask(res, dataset, scheme, stem_onset, stem_tail)


# -- labeled corpus ----------------------------------------------------------

FILLER = (
    "the this product was really quite very and it but not for with from about "
    "after all what when where good bad time thing item order box day night"
).split()


def synthetic_corpus(
    class1_words: Sequence[str],
    class2_words: Sequence[str],
    n_docs: int,
    seed: int,
    neutral_words: Sequence[str] = (),
    labels1: Sequence[str] = ("1", "2"),
    labels2: Sequence[str] = ("4", "5"),
    other_labels: Sequence[str] = ("3",),
    purity: float = 0.85,
    words_per_doc: int = 12,
) -> list[dict]:
    """Documents whose complex words lean towards one label set.

    Each document draws a label; class-biased words appear in documents of
    their class with probability ``purity``.  Records are plain dicts with
    ``text`` and ``label`` fields.
    """
    rng = np.random.default_rng(seed)
    all_labels = list(labels1) + list(labels2) + list(other_labels)
    docs = []
    for _ in range(n_docs):
        label = all_labels[rng.integers(len(all_labels))]
        side = 1 if label in labels1 else 2 if label in labels2 else 0
        words = [FILLER[rng.integers(len(FILLER))] for _ in range(words_per_doc)]
        for _ in range(int(rng.integers(1, 4))):
            r = rng.random()
            if side == 0 or (neutral_words and r < 0.2):
                pool = neutral_words or (list(class1_words) + list(class2_words))
            else:
                home = class1_words if side == 1 else class2_words
                away = class2_words if side == 1 else class1_words
                pool = home if rng.random() < purity else away
            words.insert(int(rng.integers(len(words) + 1)), pool[rng.integers(len(pool))])
        docs.append({"text": " ".join(words), "label": label})
    return docs


def write_jsonl(records: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


NEGATIVE_PREFIXES = ("anti", "de", "mis", "non", "un")


def prefix_biased_words(
    resources: Resources, n_class1: int, n_class2: int, seed: int,
    class1_prefixes: Sequence[str] = NEGATIVE_PREFIXES,
) -> tuple[list[str], list[str]]:
    """Derivable prefixed words from ``resources``, split by whether the
    outermost prefix is in ``class1_prefixes``."""
    from .derivational import segment_derivational

    rng = np.random.default_rng(seed)
    c1: list[str] = []
    c2: list[str] = []
    seen = set()
    for _ in range(200 * (n_class1 + n_class2)):
        if len(c1) >= n_class1 and len(c2) >= n_class2:
            break
        w = random_derivative(resources, rng, max_affixes=2).compose()
        if w in seen:
            continue
        seen.add(w)
        seg = segment_derivational(w, resources.affixes, resources.stems)
        if seg is None or not seg.prefixes:
            continue
        bucket = c1 if seg.prefixes[0] in class1_prefixes else c2
        if len(bucket) < (n_class1 if bucket is c1 else n_class2):
            bucket.append(w)
    return c1, c2


def suffixed_words(resources: Resources, n: int, seed: int) -> list[str]:
    """Derivable words whose segmentation has suffixes only."""
    from .derivational import segment_derivational

    rng = np.random.default_rng(seed)
    out: list[str] = []
    seen = set()
    for _ in range(200 * n):
        if len(out) >= n:
            break
        w = random_derivative(resources, rng, max_affixes=2).compose()
        if w in seen:
            continue
        seen.add(w)
        seg = segment_derivational(w, resources.affixes, resources.stems)
        if seg is not None and not seg.prefixes:
            out.append(w)
    return out
