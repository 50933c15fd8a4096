"""Weakly supervised datasets of complex words built from labeled documents."""
from __future__ import annotations

import json
import math
import os
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .derivational import DerivationalSegmentation, segment_derivational
from .vocab import Resources, is_alphabetic

CLASS1 = "class1"
CLASS2 = "class2"
SPLITS = ("train", "dev", "test")
SPLIT_FRACTIONS = (0.6, 0.2, 0.2)

_URL = re.compile(r"^(?:https?://|www\.)", re.IGNORECASE)
_DIGIT = re.compile(r"\d")
_REPEAT = re.compile(r"([^\W\d_])\1{3,}")
_WORD = re.compile(r"[^\W\d_]+")


class DatasetTooSmallError(ValueError):
    pass


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    text: str
    label: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("document label must be non-empty")


@dataclass(frozen=True)
class LabelScheme:
    class1_name: str
    class2_name: str
    class1_labels: frozenset[str]
    class2_labels: frozenset[str]

    def __post_init__(self):
        if not self.class1_labels or not self.class2_labels:
            raise SchemeError("both classes need at least one corpus label")
        overlap = self.class1_labels & self.class2_labels
        if overlap:
            raise SchemeError(f"labels assigned to both classes: {sorted(overlap)}")

    def classify(self, label: str) -> str | None:
        if label in self.class1_labels:
            return CLASS1
        if label in self.class2_labels:
            return CLASS2
        return None

    def name(self, cls: str) -> str:
        return self.class1_name if cls == CLASS1 else self.class2_name

    def from_name(self, name: str) -> str:
        if name == self.class1_name:
            return CLASS1
        if name == self.class2_name:
            return CLASS2
        raise SchemeError(f"unknown class name {name!r}")


@dataclass
class WordStats:
    word: str
    count_class1: int = 0
    count_class2: int = 0
    total_frequency: int = 0

    @property
    def fraction(self) -> float:
        return self.count_class1 / (self.count_class1 + self.count_class2)

    def merge(self, other: "WordStats") -> None:
        self.count_class1 += other.count_class1
        self.count_class2 += other.count_class2
        self.total_frequency += other.total_frequency


@dataclass(frozen=True)
class Entry:
    word: str
    label: str  # CLASS1 or CLASS2
    frequency: int
    split: str = ""

    @property
    def y(self) -> int:
        return 1 if self.label == CLASS1 else 0


@dataclass
class LabeledDataset:
    entries: list[Entry]
    scheme: LabelScheme | None = None

    def split(self, name: str) -> list[Entry]:
        return [e for e in self.entries if e.split == name]

    def words(self) -> list[str]:
        return [e.word for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


# -- preprocessing -----------------------------------------------------------

def preprocess(text: str) -> list[str]:
    """Lowercased word tokens with hyperlinks and digit-bearing strings removed
    and letter runs longer than three cut to three."""
    kept = [t for t in text.split() if not _URL.match(t) and not _DIGIT.search(t)]
    s = " ".join(kept).lower()
    s = _REPEAT.sub(r"\1\1\1", s)
    return _WORD.findall(s)


def accept_all(doc: Document) -> bool:
    return True


# -- extraction --------------------------------------------------------------

class Segmenter:
    """Memoizing wrapper around :func:`segment_derivational`."""

    def __init__(self, resources: Resources, max_depth: int = 4):
        self.resources = resources
        self.max_depth = max_depth
        self._cache: dict[str, DerivationalSegmentation | None] = {}

    def __call__(self, word: str) -> DerivationalSegmentation | None:
        try:
            return self._cache[word]
        except KeyError:
            pass
        seg = None
        if is_alphabetic(word):
            seg = segment_derivational(word, self.resources.affixes, self.resources.stems, self.max_depth)
        self._cache[word] = seg
        return seg


def _count(docs: Iterable[Document], scheme: LabelScheme, segment: Segmenter,
           doc_filter: Callable[[Document], bool]) -> dict[str, WordStats]:
    stats: dict[str, WordStats] = {}
    for doc in docs:
        cls = scheme.classify(doc.label)
        if cls is None or not doc_filter(doc):
            continue
        counts = Counter(w for w in preprocess(doc.text) if segment(w) is not None)
        for w, c in counts.items():
            ws = stats.get(w)
            if ws is None:
                ws = stats[w] = WordStats(w)
            if cls == CLASS1:
                ws.count_class1 += 1
            else:
                ws.count_class2 += 1
            ws.total_frequency += c
    return stats


def merge_stats(parts: Iterable[Mapping[str, WordStats]]) -> dict[str, WordStats]:
    out: dict[str, WordStats] = {}
    for part in parts:
        for w, ws in part.items():
            if w in out:
                out[w].merge(ws)
            else:
                out[w] = WordStats(w, ws.count_class1, ws.count_class2, ws.total_frequency)
    return out


def _count_chunk(args):
    docs, scheme, resources, max_depth = args
    return _count(docs, scheme, Segmenter(resources, max_depth), accept_all)


def _chunks(it: Iterable, size: int) -> Iterator[list]:
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def extract_complex_words(
    docs: Iterable[Document],
    scheme: LabelScheme,
    resources: Resources,
    doc_filter: Callable[[Document], bool] = accept_all,
    max_depth: int = 4,
    workers: int = 1,
    chunk_size: int = 5000,
) -> dict[str, WordStats]:
    """Per derivable word: how many class-1 and class-2 texts contain it, and
    how often it occurs overall.  Documents outside both label sets are skipped."""
    if workers <= 1:
        return _count(docs, scheme, Segmenter(resources, max_depth), doc_filter)
    docs = (d for d in docs if doc_filter(d))
    jobs = ((chunk, scheme, resources, max_depth) for chunk in _chunks(docs, chunk_size))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return merge_stats(pool.map(_count_chunk, jobs))


# -- labeling and splitting --------------------------------------------------

def assign_classes(stats: Mapping[str, WordStats]) -> list[Entry]:
    """Rank words by class-1 text fraction; top third -> class 1, bottom third
    -> class 2, middle third dropped."""
    n = len(stats)
    if n < 3:
        raise DatasetTooSmallError(f"need at least 3 complex words, got {n}")
    ranked = sorted(stats.values(), key=lambda s: (-s.fraction, s.word))
    k = n // 3
    top = [Entry(s.word, CLASS1, s.total_frequency) for s in ranked[:k]]
    bottom = [Entry(s.word, CLASS2, s.total_frequency) for s in ranked[n - k:]]
    return top + bottom


def split_sizes(n: int) -> tuple[int, int, int]:
    n_train = math.floor(n * SPLIT_FRACTIONS[0] + 0.5)
    n_dev = math.floor(n * SPLIT_FRACTIONS[1] + 0.5)
    n_dev = min(n_dev, n - n_train)
    return n_train, n_dev, n - n_train - n_dev


def split_dataset(entries: Sequence[Entry], seed: int, scheme: LabelScheme | None = None) -> LabeledDataset:
    if not entries:
        raise DatasetTooSmallError("cannot split an empty dataset")
    order = np.random.default_rng(seed).permutation(len(entries))
    n_train, n_dev, _ = split_sizes(len(entries))
    out = []
    for rank, i in enumerate(order):
        e = entries[int(i)]
        split = "train" if rank < n_train else "dev" if rank < n_train + n_dev else "test"
        out.append(Entry(e.word, e.label, e.frequency, split))
    return LabeledDataset(out, scheme)


# -- file formats ------------------------------------------------------------

def _label_str(v) -> str:
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    return str(v)


def read_documents(path: str | Path, text_field: str = "text", label_field: str = "label") -> Iterator[Document]:
    """Line-delimited JSON records; blank lines and records with an empty label are skipped."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                text, label = rec[text_field], rec[label_field]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise ValueError(f"{path}:{lineno}: bad record ({e})") from None
            label = _label_str(label)
            if label:
                yield Document(str(text or ""), label)


DATASET_HEADER = ("word", "class", "frequency", "split")


def dataset_to_tsv(ds: LabeledDataset) -> str:
    rows = ["\t".join(DATASET_HEADER)]
    for e in ds.entries:
        name = ds.scheme.name(e.label) if ds.scheme else e.label
        rows.append(f"{e.word}\t{name}\t{e.frequency}\t{e.split}")
    return "\n".join(rows) + "\n"


def read_dataset(path: str | Path, scheme: LabelScheme) -> LabeledDataset:
    """Inverse of :func:`dataset_to_tsv`; class names are resolved through ``scheme``."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != DATASET_HEADER:
            raise ValueError(f"{path}: expected header {DATASET_HEADER}, got {tuple(header)}")
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns")
            word, name, freq, split = parts
            if split not in SPLITS:
                raise ValueError(f"{path}:{lineno}: unknown split {split!r}")
            entries.append(Entry(word, scheme.from_name(name), int(freq), split))
    return LabeledDataset(entries, scheme)


def worker_count() -> int:
    """Worker cap from ``MORPHSEG_THREADS``; defaults to the CPU count."""
    env = os.environ.get("MORPHSEG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1
