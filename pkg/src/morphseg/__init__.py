"""Derivational segmentation of English complex words, WordPiece comparison,
weakly supervised datasets, linear probes and analysis statistics."""
from .analysis import (
    FrequencyBinReport, RegressionResult, StatTestResult, ValidityReport, check_validity,
    frequency_bins, ols_regression, rank_error_examples, validity_report, welch_t_test,
)
from .corpus import (
    Document, Entry, LabeledDataset, LabelScheme, WordStats, assign_classes, extract_complex_words,
    preprocess, split_dataset,
)
from .derivational import (
    DerivationalSegmentation, Frontier, Rule, attach_suffix, frontier_step, segment_derivational,
    serialize_delbert, strip_prefix, strip_suffix,
)
from .probe import Featurizer, Hyperparams, ProbeModel, TrainConfig, evaluate, featurize, grid_search, train_probe
from .vocab import (
    AffixInventory, Resources, StemSet, Vocabulary, build_stem_set, default_resources, load_affix_inventory,
    load_vocabulary, validate_affixes,
)
from .wordpiece import WordPieceSegmentation, segment_wordpiece

__version__ = "0.1.0"

__all__ = [
    "AffixInventory", "DerivationalSegmentation", "Document", "Entry", "Featurizer", "FrequencyBinReport",
    "Frontier", "Hyperparams", "LabelScheme", "LabeledDataset", "ProbeModel", "RegressionResult", "Resources",
    "Rule", "StatTestResult", "StemSet", "TrainConfig", "ValidityReport", "Vocabulary", "WordPieceSegmentation",
    "WordStats", "assign_classes", "attach_suffix", "build_stem_set", "check_validity", "default_resources",
    "evaluate", "extract_complex_words", "featurize", "frequency_bins", "frontier_step", "grid_search",
    "load_affix_inventory", "load_vocabulary", "ols_regression", "preprocess", "rank_error_examples",
    "segment_derivational", "segment_wordpiece", "serialize_delbert", "split_dataset", "strip_prefix",
    "strip_suffix", "train_probe", "validate_affixes", "validity_report", "welch_t_test",
]
