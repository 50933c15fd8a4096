"""From predictions to reports.

Runs the command-line pipeline end to end in a temporary directory: build a
dataset, train derivational and WordPiece probes, then compare them.  The
analysis writes one CSV per report plus summary.txt.
"""
import tempfile
from pathlib import Path

from morphseg import default_resources
from morphseg.cli import main
from morphseg.synthetic import prefix_biased_words, suffixed_words, synthetic_corpus, write_jsonl

res = default_resources()
neg, pos = prefix_biased_words(res, 120, 240, seed=7)
suf = suffixed_words(res, 120, seed=8)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    write_jsonl(synthetic_corpus(neg + suf[:60], pos + suf[60:], 3000, seed=11), tmp / "corpus.jsonl")
    (tmp / "run.cfg").write_text(
        "corpus = corpus.jsonl\n"
        "output_dir = out\n"
        "class1_name = negative\nclass1_labels = 1, 2\n"
        "class2_name = positive\nclass2_labels = 4, 5\n"
        "seeds = 0-9\n"
    )
    cfg = str(tmp / "run.cfg")
    for argv in (["build-dataset"], ["probe"], ["probe", "--kind", "wordpiece"], ["analyze"]):
        print(f"\n$ morphseg {' '.join(argv)} --config run.cfg")
        main(argv + ["--config", cfg])

    print("\nreports:", ", ".join(sorted(p.name for p in (tmp / "out").glob("*.csv"))))
    print("\ntop of error_ranking.csv:")
    print("".join((tmp / "out" / "error_ranking.csv").read_text().splitlines(True)[:6]))
