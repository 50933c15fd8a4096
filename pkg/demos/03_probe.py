"""Does the segmentation keep the class signal?

On a generated task the class of a word is fixed by its prefix, while every
stem shows up once in each class.  The vocabulary contains a fused
prefix+onset token for each word, so WordPiece never exposes the prefix.
A linear probe over derivational tokens recovers the rule; over WordPiece
tokens it is left guessing.  Ablating the stem costs nothing here, ablating
the affixes costs everything.
"""
import numpy as np

from morphseg import Featurizer, Hyperparams, grid_search, segment_wordpiece
from morphseg.synthetic import prefix_task

task = prefix_task(n_words=2000, seed=20210801)
w = task.dataset.entries[0].word
print(f"example: {w!r} -> WordPiece {segment_wordpiece(w, task.resources.vocab)}")

hp = Hyperparams(epochs=(1, 5, 10, 20), learning_rates=(0.03, 0.1, 0.3))
seeds = range(5)
for kind, mode in [("derivational", "full"), ("derivational", "stem_ablated"),
                   ("derivational", "affix_ablated"), ("wordpiece", "full")]:
    r = grid_search(task.dataset, Featurizer(task.resources, kind, mode), hp, seeds)
    test = [r.per_seed[s]["test"].f1 for s in seeds]
    print(f"{kind:>12} {mode:<14} best {r.best.name:<10} test F1 {np.mean(test):.3f} +- {np.std(test):.3f}")
