"""Linear probe over bag-of-token features.

A logistic regression trained by plain mini-batch gradient descent stands in
for a finetuned language model: it sees only which tokens a segmentation
produces, so it measures how much class information survives segmentation.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.special import expit

from .corpus import Entry, LabeledDataset, worker_count
from .derivational import segment_derivational, serialize_delbert, token_roles
from .vocab import Resources
from .wordpiece import segment_wordpiece

KINDS = ("wordpiece", "derivational")
MODES = ("full", "stem_ablated", "affix_ablated")
DEFAULT_EPOCHS = tuple(range(1, 21))
DEFAULT_LEARNING_RATES = (0.01, 0.03, 0.1, 0.3)
DEFAULT_BATCH_SIZE = 64


class ProbeConfigError(ValueError):
    pass


class TrainingError(ValueError):
    pass


def check_kind_mode(kind: str, mode: str) -> None:
    if kind not in KINDS:
        raise ProbeConfigError(f"unknown segmentation kind {kind!r}")
    if mode not in MODES:
        raise ProbeConfigError(f"unknown ablation mode {mode!r}")
    if kind == "wordpiece" and mode != "full":
        # WordPiece tokens carry no stem/affix roles to ablate
        raise ProbeConfigError(f"mode {mode!r} is only defined for derivational features")


@dataclass(frozen=True)
class FeatureVector:
    counts: Mapping[int, int]

    def names(self, resources: Resources) -> dict[str, int]:
        """Counts keyed by token string (reserved ids by their symbolic names)."""
        n = len(resources.vocab)
        reserved = {n: "SHARED_STEM", n + 1: "SHARED_PREFIX", n + 2: "SHARED_SUFFIX"}
        return {reserved.get(i) or resources.vocab.token(i): c for i, c in self.counts.items()}


class Featurizer:
    """Maps words to token-count features for one (kind, mode) pair.

    Feature ids are vocabulary ids followed by three reserved ids for the
    shared stem, prefix and suffix placeholders used in ablations.
    """

    def __init__(self, resources: Resources, kind: str = "derivational", mode: str = "full",
                 keep_hyphen: bool = True, max_depth: int = 4):
        check_kind_mode(kind, mode)
        self.resources = resources
        self.kind = kind
        self.mode = mode
        self.keep_hyphen = keep_hyphen
        self.max_depth = max_depth
        n = len(resources.vocab)
        self.shared_stem, self.shared_prefix, self.shared_suffix = n, n + 1, n + 2
        self.size = n + 3
        self._cache: dict[str, FeatureVector | None] = {}

    def _tokens(self, word: str) -> list[int] | None:
        vocab = self.resources.vocab
        if self.kind == "wordpiece":
            wp = segment_wordpiece(word, vocab)
            if wp.is_unknown:
                return None
            return [vocab.lookup(t) for t in wp.tokens]
        seg = segment_derivational(word, self.resources.affixes, self.resources.stems, self.max_depth)
        if seg is None:
            return None
        ids = []
        for tok, role in zip(serialize_delbert(seg, vocab), token_roles(seg)):
            if role == "hyphen" and not self.keep_hyphen:
                continue
            if role == "stem" and self.mode == "stem_ablated":
                ids.append(self.shared_stem)
            elif role == "prefix" and self.mode == "affix_ablated":
                ids.append(self.shared_prefix)
            elif role == "suffix" and self.mode == "affix_ablated":
                ids.append(self.shared_suffix)
            else:
                ids.append(vocab.lookup(tok))
        return ids

    def __call__(self, word: str) -> FeatureVector | None:
        """Features for ``word``, or ``None`` if it cannot be segmented."""
        if word not in self._cache:
            ids = self._tokens(word)
            if ids is None:
                self._cache[word] = None
            else:
                counts: dict[int, int] = {}
                for i in ids:
                    counts[i] = counts.get(i, 0) + 1
                self._cache[word] = FeatureVector(counts)
        return self._cache[word]


def featurize(word: str, kind: str, mode: str, resources: Resources) -> FeatureVector | None:
    return Featurizer(resources, kind, mode)(word)


def design_matrix(entries: Sequence[Entry], featurizer: Featurizer) -> tuple[sparse.csr_matrix, np.ndarray, list[str]]:
    """CSR feature matrix, 0/1 targets (1 = class 1) and the words kept.
    Words the featurizer cannot segment are dropped."""
    rows, cols, vals, ys, words = [], [], [], [], []
    for e in entries:
        fv = featurizer(e.word)
        if fv is None:
            continue
        r = len(words)
        for i, c in sorted(fv.counts.items()):
            rows.append(r)
            cols.append(i)
            vals.append(c)
        ys.append(e.y)
        words.append(e.word)
    X = sparse.csr_matrix((np.asarray(vals, dtype=float), (rows, cols)), shape=(len(words), featurizer.size))
    return X, np.asarray(ys, dtype=float), words


# -- model -------------------------------------------------------------------

@dataclass
class ProbeModel:
    weights: np.ndarray
    bias: float
    mode: str = "full"
    kind: str = "derivational"

    def predict_proba(self, X) -> np.ndarray:
        """Probability of class 1 for each row."""
        return expit(X @ self.weights + self.bias)

    def to_text(self) -> str:
        lines = [
            "# morphseg linear probe",
            f"kind={self.kind}",
            f"mode={self.mode}",
            f"features={len(self.weights)}",
        ]
        lines += [repr(float(w)) for w in self.weights]
        lines.append(repr(float(self.bias)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ProbeModel":
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        header = dict(ln.split("=", 1) for ln in lines[:3])
        n = int(header["features"])
        values = [float(v) for v in lines[3:]]
        if len(values) != n + 1:
            raise ValueError(f"expected {n} weights and a bias, found {len(values)} values")
        return cls(np.asarray(values[:n]), values[n], header["mode"], header["kind"])

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ProbeModel":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def bce_loss_and_grad(w: np.ndarray, b: float, X, y: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Mean binary cross-entropy of a logistic model and its gradient."""
    z = X @ w + b
    # log(1 + e^z) - y z, written stably
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    g = expit(z) - y
    return loss, np.asarray(X.T @ g).ravel() / len(y), float(g.mean())


def fit_logistic(
    X, y: np.ndarray, epochs: int, learning_rate: float, batch_size: int = DEFAULT_BATCH_SIZE, seed: int = 0,
    on_epoch: Callable[[int, np.ndarray, float], None] | None = None,
) -> tuple[np.ndarray, float]:
    """Mini-batch gradient descent from zero weights; ``seed`` only drives shuffling."""
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    rng = np.random.default_rng(seed)
    for epoch in range(1, epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            Xb = X[idx]
            g = expit(Xb @ w + b) - y[idx]
            w -= learning_rate * np.asarray(Xb.T @ g).ravel() / len(idx)
            b -= learning_rate * float(g.mean())
        if on_epoch is not None:
            on_epoch(epoch, w, b)
    return w, b


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    learning_rate: float
    batch_size: int = DEFAULT_BATCH_SIZE
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.learning_rate <= 0 or self.batch_size < 1:
            raise ProbeConfigError(f"invalid training configuration {self}")

    @property
    def name(self) -> str:
        return f"e{self.epochs}_lr{self.learning_rate:g}"


@dataclass(frozen=True)
class Hyperparams:
    epochs: tuple[int, ...] = DEFAULT_EPOCHS
    learning_rates: tuple[float, ...] = DEFAULT_LEARNING_RATES
    batch_size: int = DEFAULT_BATCH_SIZE
    seed: int = 0

    def __post_init__(self):
        if not self.epochs or not self.learning_rates:
            raise ProbeConfigError("hyperparameter grids must be non-empty")
        if any(lr <= 0 for lr in self.learning_rates) or any(e < 1 for e in self.epochs):
            raise ProbeConfigError("epochs and learning rates must be positive")

    def configs(self) -> list[TrainConfig]:
        return [TrainConfig(e, lr, self.batch_size, self.seed)
                for lr, e in itertools.product(self.learning_rates, sorted(self.epochs))]


def _check_targets(y: np.ndarray) -> None:
    if len(y) == 0:
        raise TrainingError("training split is empty")
    if y.min() == y.max():
        raise TrainingError("training split contains a single class")


def train_probe(dataset: LabeledDataset, featurizer: Featurizer, config: TrainConfig) -> ProbeModel:
    X, y, _ = design_matrix(dataset.split("train"), featurizer)
    _check_targets(y)
    w, b = fit_logistic(X, y, config.epochs, config.learning_rate, config.batch_size, config.seed)
    return ProbeModel(w, b, featurizer.mode, featurizer.kind)


# -- evaluation --------------------------------------------------------------

@dataclass
class Metrics:
    f1: float
    accuracy: float
    per_word_likelihood: dict[str, float] = field(default_factory=dict)


def f1_score(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """F1 with class 1 as the positive class."""
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    if tp + fp + fn == 0:
        return 1.0
    return 2 * tp / (2 * tp + fp + fn)


def score(y: np.ndarray, p: np.ndarray, words: Sequence[str]) -> Metrics:
    pred = (p > 0.5).astype(float)
    likelihood = np.where(y == 1, p, 1.0 - p)
    return Metrics(
        f1_score(y, pred),
        float(np.mean(pred == y)) if len(y) else 0.0,
        {w: float(l) for w, l in zip(words, likelihood)},
    )


def evaluate(model: ProbeModel, entries: Sequence[Entry], featurizer: Featurizer) -> Metrics:
    X, y, words = design_matrix(entries, featurizer)
    return score(y, model.predict_proba(X), words)


# -- grid search -------------------------------------------------------------

@dataclass
class GridResult:
    best: TrainConfig
    # (epochs, learning_rate) -> seed -> dev metrics
    dev: dict[tuple[int, float], dict[int, Metrics]]
    # seed -> split -> metrics, for the best configuration
    per_seed: dict[int, dict[str, Metrics]]
    models: dict[int, ProbeModel]

    def summary(self) -> list[tuple[int, float, float, float]]:
        """(epochs, learning_rate, mean dev F1, std dev F1) per configuration."""
        out = []
        for (e, lr), runs in self.dev.items():
            f1s = np.array([m.f1 for m in runs.values()])
            out.append((e, lr, float(f1s.mean()), float(f1s.std())))
        return out


def grid_search(
    dataset: LabeledDataset,
    featurizer: Featurizer,
    hp: Hyperparams,
    seeds: Sequence[int],
    workers: int | None = None,
) -> GridResult:
    """Pick (epochs, learning rate) by mean dev F1 across ``seeds``.

    Each (learning rate, seed) pair is trained once for the largest epoch
    count and evaluated after every epoch on the grid; ties keep the earlier
    grid point (smaller learning rate, then fewer epochs).
    """
    if not seeds:
        raise ProbeConfigError("seed list is empty")
    Xtr, ytr, _ = design_matrix(dataset.split("train"), featurizer)
    _check_targets(ytr)
    Xdev, ydev, wdev = design_matrix(dataset.split("dev"), featurizer)
    epoch_grid = sorted(set(hp.epochs))
    max_epochs = epoch_grid[-1]

    def run(lr: float, seed: int) -> dict[int, Metrics]:
        snaps: dict[int, Metrics] = {}

        def on_epoch(ep, w, b):
            if ep in epoch_grid:
                snaps[ep] = score(ydev, expit(Xdev @ w + b), wdev)

        fit_logistic(Xtr, ytr, max_epochs, lr, hp.batch_size, seed, on_epoch)
        return snaps

    jobs = [(lr, s) for lr in hp.learning_rates for s in seeds]
    workers = workers or worker_count()
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda j: run(*j), jobs))
    else:
        results = [run(*j) for j in jobs]

    dev: dict[tuple[int, float], dict[int, Metrics]] = {}
    for (lr, seed), snaps in zip(jobs, results):
        for ep in epoch_grid:
            dev.setdefault((ep, lr), {})[seed] = snaps[ep]

    best_key, best_f1 = None, -math.inf
    for lr in hp.learning_rates:
        for ep in epoch_grid:
            f1 = float(np.mean([m.f1 for m in dev[(ep, lr)].values()]))
            if f1 > best_f1:
                best_key, best_f1 = (ep, lr), f1
    best = TrainConfig(best_key[0], best_key[1], hp.batch_size, hp.seed)

    per_seed: dict[int, dict[str, Metrics]] = {}
    models: dict[int, ProbeModel] = {}
    for seed in seeds:
        cfg = TrainConfig(best.epochs, best.learning_rate, best.batch_size, seed)
        w, b = fit_logistic(Xtr, ytr, cfg.epochs, cfg.learning_rate, cfg.batch_size, seed)
        model = ProbeModel(w, b, featurizer.mode, featurizer.kind)
        models[seed] = model
        per_seed[seed] = {split: evaluate(model, dataset.split(split), featurizer) for split in ("dev", "test")}
    return GridResult(best, dev, per_seed, models)
