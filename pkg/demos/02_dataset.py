"""Weakly labeled complex words from a labeled corpus.

A toy review corpus is generated where words with negative prefixes lean
towards low star ratings.  Every derivable word is ranked by the share of
low-rated texts that contain it; the top and bottom thirds become the two
classes and are split 60/20/20.
"""
from collections import Counter

from morphseg import LabelScheme, assign_classes, default_resources, extract_complex_words, split_dataset
from morphseg.corpus import Document, preprocess
from morphseg.synthetic import prefix_biased_words, synthetic_corpus

print(preprocess("Sooooo unbelievable!!! see http://example.com, 10/10"))

res = default_resources()
neg, pos = prefix_biased_words(res, 60, 120, seed=1)
records = synthetic_corpus(neg, pos, n_docs=1500, seed=2)
docs = [Document(r["text"], r["label"]) for r in records]
print(f"\n{len(docs)} documents, labels {sorted(Counter(d.label for d in docs).items())}")

scheme = LabelScheme("negative", "positive", frozenset({"1", "2"}), frozenset({"4", "5"}))
stats = extract_complex_words(docs, scheme, res)
entries = assign_classes(stats)
ds = split_dataset(entries, seed=0, scheme=scheme)
print(f"{len(stats)} complex words, {len(ds)} kept after dropping the middle third")
for split in ("train", "dev", "test"):
    part = ds.split(split)
    print(f"  {split:<5} {len(part):>4} words, {sum(e.label == 'class1' for e in part)} negative")

top = sorted(stats.values(), key=lambda s: (-s.fraction, s.word))[:5]
print("\nmost negative:", ", ".join(f"{s.word} ({s.fraction:.2f})" for s in top))
