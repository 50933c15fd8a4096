"""Segmentation-quality statistics and model comparisons.

Covers WordPiece validity rates per affix, accuracy by frequency bin,
per-affix accuracy deltas between two probes, Welch's t-test, simple OLS
regression and likelihood-difference error ranking.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .derivational import DerivationalSegmentation
from .stats import f_sf, t_sf_two_sided
from .wordpiece import WordPieceSegmentation

LOW_MAX = 5
MID_MAX = 500
BINS = ("low", "mid", "high")


class DegenerateSampleError(ValueError):
    pass


class MismatchedWordsError(ValueError):
    pass


# -- validity ----------------------------------------------------------------

def check_validity(word: str, wp: WordPieceSegmentation, ds: DerivationalSegmentation) -> bool:
    """True iff WordPiece keeps the stem intact: the stem occupies its own
    surface span unchanged and that span is exactly one WordPiece token."""
    if wp.is_unknown:
        return False
    start = sum(len(p) for p in ds.prefixes)
    end = start + len(ds.stem)
    if word[start:end] != ds.stem:
        # a spelling change (isotop|ize) already truncated the stem
        return False
    bounds = wp.boundaries()
    if start not in bounds or end not in bounds:
        return False
    return bounds.index(end) - bounds.index(start) == 1


@dataclass
class AffixGroup:
    role: str
    affix: str
    n_words: int
    n_invalid: int

    @property
    def error_rate(self) -> float:
        return self.n_invalid / self.n_words


@dataclass
class ValidityReport:
    groups: list[AffixGroup]
    prefix_mean: float | None
    prefix_std: float | None
    suffix_mean: float | None
    suffix_std: float | None

    def rate(self, role: str, affix: str) -> float:
        for g in self.groups:
            if g.role == role and g.affix == affix:
                return g.error_rate
        raise KeyError((role, affix))


def _mean_std(values: Sequence[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return float(arr.mean()), std


def validity_report(items: Iterable[tuple[str, WordPieceSegmentation, DerivationalSegmentation]]) -> ValidityReport:
    """Per outermost affix (prefixes take precedence), the share of words whose
    WordPiece segmentation breaks the stem.  Role means are unweighted over affixes."""
    counts: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for word, wp, ds in items:
        c = counts[ds.outermost_affix]
        c[0] += 1
        c[1] += not check_validity(word, wp, ds)
    groups = [AffixGroup(r, a, n, bad) for (r, a), (n, bad) in sorted(counts.items())]
    pm, ps = _mean_std([g.error_rate for g in groups if g.role == "prefix"])
    sm, ss = _mean_std([g.error_rate for g in groups if g.role == "suffix"])
    return ValidityReport(groups, pm, ps, sm, ss)


# -- frequency bins ----------------------------------------------------------

def frequency_bin(f: int) -> str:
    if f <= LOW_MAX:
        return "low"
    if f <= MID_MAX:
        return "mid"
    return "high"


@dataclass
class FrequencyBinReport:
    # model -> bin -> accuracy; empty bins are absent
    accuracy: dict[str, dict[str, float]]
    counts: dict[str, int]


def frequency_bins(
    frequencies: Mapping[str, int],
    correctness: Mapping[str, Mapping[str, float]],
) -> FrequencyBinReport:
    """``correctness[model][word]`` is the share of runs that got ``word`` right."""
    by_bin: dict[str, list[str]] = {b: [] for b in BINS}
    for w, f in frequencies.items():
        by_bin[frequency_bin(f)].append(w)
    acc: dict[str, dict[str, float]] = {}
    for model, corr in correctness.items():
        acc[model] = {}
        for b, words in by_bin.items():
            words = [w for w in words if w in corr]
            if words:
                acc[model][b] = float(np.mean([corr[w] for w in words]))
    return FrequencyBinReport(acc, {b: len(ws) for b, ws in by_bin.items()})


# -- significance tests ------------------------------------------------------

@dataclass(frozen=True)
class StatTestResult:
    statistic: float
    degrees_of_freedom: float
    p_value: float
    effect_size: float


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> StatTestResult:
    """Two-sided Welch's t-test with Welch-Satterthwaite degrees of freedom.
    The effect size is Cohen's d using the pooled standard deviation."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    n1, n2 = len(x), len(y)
    if n1 < 2 or n2 < 2:
        raise DegenerateSampleError("each sample needs at least two values")
    v1, v2 = x.var(ddof=1), y.var(ddof=1)
    if v1 == 0 and v2 == 0:
        raise DegenerateSampleError("both samples have zero variance")
    se1, se2 = v1 / n1, v2 / n2
    diff = x.mean() - y.mean()
    t = diff / math.sqrt(se1 + se2)
    df = (se1 + se2) ** 2 / (se1 ** 2 / (n1 - 1) + se2 ** 2 / (n2 - 1))
    pooled = math.sqrt(((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2))
    return StatTestResult(float(t), float(df), t_sf_two_sided(float(t), float(df)), float(diff / pooled))


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float
    f_statistic: float
    p_value: float
    n: int

    @property
    def df(self) -> tuple[int, int]:
        return 1, self.n - 2


def ols_regression(x: Sequence[float], y: Sequence[float]) -> RegressionResult:
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    n = len(xs)
    if n != len(ys):
        raise ValueError("x and y differ in length")
    if n < 3:
        raise DegenerateSampleError("regression needs at least three points")
    dx = xs - xs.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        raise DegenerateSampleError("x is constant")
    dy = ys - ys.mean()
    syy = float(dy @ dy)
    sxy = float(dx @ dy)
    slope = sxy / sxx
    intercept = float(ys.mean() - slope * xs.mean())
    r2 = 0.0 if syy == 0 else min(1.0, sxy * sxy / (sxx * syy))
    if r2 >= 1.0:
        f, p = math.inf, 0.0
    else:
        f = r2 * (n - 2) / (1.0 - r2)
        p = f_sf(f, 1, n - 2)
    return RegressionResult(slope, intercept, r2, f, p, n)


# -- model comparisons -------------------------------------------------------

def mean_over_seeds(per_seed: Mapping[int, Mapping[str, float]]) -> dict[str, float]:
    """Average word -> value mappings over seeds (words missing in a seed are skipped)."""
    acc: dict[str, list[float]] = defaultdict(list)
    for seed in sorted(per_seed):
        for w, v in per_seed[seed].items():
            acc[w].append(v)
    return {w: float(np.mean(vs)) for w, vs in acc.items()}


def correctness(per_seed_likelihood: Mapping[int, Mapping[str, float]]) -> dict[str, float]:
    """Share of seeds whose model gave the true class likelihood above 0.5."""
    return mean_over_seeds({s: {w: float(p > 0.5) for w, p in m.items()} for s, m in per_seed_likelihood.items()})


@dataclass
class AffixDelta:
    role: str
    affix: str
    n_words: int
    accuracy_a: float
    accuracy_b: float

    @property
    def delta(self) -> float:
        return self.accuracy_a - self.accuracy_b


def affix_deltas(
    segmentations: Mapping[str, DerivationalSegmentation],
    correct_a: Mapping[str, float],
    correct_b: Mapping[str, float],
) -> list[AffixDelta]:
    """Accuracy of model A minus model B per outermost affix."""
    groups: dict[tuple[str, str], list[str]] = defaultdict(list)
    for w, seg in segmentations.items():
        if w in correct_a and w in correct_b:
            groups[seg.outermost_affix].append(w)
    out = []
    for (role, affix), words in sorted(groups.items()):
        out.append(AffixDelta(
            role, affix, len(words),
            float(np.mean([correct_a[w] for w in words])),
            float(np.mean([correct_b[w] for w in words])),
        ))
    return out


@dataclass(frozen=True)
class RankedWord:
    word: str
    likelihood_a: float
    likelihood_b: float

    @property
    def difference(self) -> float:
        return self.likelihood_a - self.likelihood_b


def rank_error_examples(likelihood_a: Mapping[str, float], likelihood_b: Mapping[str, float]) -> list[RankedWord]:
    """Words ordered by how much more likely model A finds the true class than model B."""
    a, b = set(likelihood_a), set(likelihood_b)
    if a != b:
        diff = sorted(a ^ b)
        raise MismatchedWordsError(f"word sets differ in {len(diff)} words: {diff[:20]}")
    rows = [RankedWord(w, likelihood_a[w], likelihood_b[w]) for w in a]
    rows.sort(key=lambda r: (-r.difference, r.word))
    return rows
