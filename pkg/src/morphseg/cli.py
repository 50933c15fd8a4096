"""``morphseg`` command-line entry point.

Subcommands: segment, build-vocab, build-dataset, probe, analyze.
Exit status is 0 on success, 2 for bad input or missing resources and 3 when
the data has the wrong shape (too few words, a single-class split).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from . import analysis as an
from .config import ConfigError, RunConfig, load_config, parse_float_list, parse_int_list
from .corpus import (
    DatasetTooSmallError, LabeledDataset, SchemeError, assign_classes, dataset_to_tsv,
    extract_complex_words, read_dataset, read_documents, split_dataset, worker_count,
)
from .derivational import SerializationError, segment_derivational, serialize_delbert
from .probe import Featurizer, Hyperparams, ProbeConfigError, TrainingError, grid_search
from .vocab import (
    DEFAULT_PREFIXES, DEFAULT_SUFFIXES, DEFAULT_VOCAB, AffixValidationError, Resources,
    VocabFormatError, data_path, file_sha256,
)
from .wordpiece import segment_wordpiece

EXIT_INPUT = 2
EXIT_SHAPE = 3
NONE_MARK = "<none>"
PREDICTIONS_HEADER = ("model", "word", "seed", "split", "likelihood")


class InputError(Exception):
    pass


# -- helpers -----------------------------------------------------------------

def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    def cell(v):
        if isinstance(v, float):
            return repr(v)
        s = str(v)
        return f'"{s}"' if "," in s else s
    lines = [",".join(header)] + [",".join(cell(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _hash(p: Path | None, default: str) -> str:
    return file_sha256(p if p is not None else data_path(default))


def _resources(cfg: RunConfig) -> Resources:
    return Resources.load(cfg.vocab, cfg.prefixes, cfg.suffixes, cfg.stopwords)


def _resource_record(cfg: RunConfig, res: Resources) -> dict:
    return {
        "vocab_sha256": _hash(cfg.vocab, DEFAULT_VOCAB),
        "prefixes_sha256": _hash(cfg.prefixes, DEFAULT_PREFIXES),
        "suffixes_sha256": _hash(cfg.suffixes, DEFAULT_SUFFIXES),
        "stopwords_sha256": res.stopwords_sha256,
        "vocab_size": len(res.vocab),
        "n_prefixes": len(res.affixes.prefixes),
        "n_suffixes": len(res.affixes.suffixes),
        "n_stems": len(res.stems),
    }


def model_name(kind: str, mode: str) -> str:
    return f"{kind}_{mode}"


# -- config assembly ---------------------------------------------------------

def _config(args) -> RunConfig:
    cfg = load_config(getattr(args, "config", None))
    path = lambda v: Path(v) if v is not None else None  # noqa: E731
    over = {
        "vocab": path(getattr(args, "vocab", None)),
        "prefixes": path(getattr(args, "prefixes", None)),
        "suffixes": path(getattr(args, "suffixes", None)),
        "stopwords": path(getattr(args, "stopwords", None)),
        "corpus": path(getattr(args, "corpus", None)),
        "output_dir": path(getattr(args, "output_dir", None)),
        "dataset": path(getattr(args, "dataset", None)),
        "split_seed": getattr(args, "split_seed", None),
        "max_depth": getattr(args, "max_depth", None),
        "kind": getattr(args, "kind", None),
        "mode": getattr(args, "probe_mode", None),
    }
    seeds = getattr(args, "seeds", None)
    if seeds is not None:
        over["seeds"] = parse_int_list(seeds)
    cfg = cfg.with_overrides(**over)
    hp = cfg.hyperparams
    epochs, lrs, bs = getattr(args, "epochs", None), getattr(args, "learning_rates", None), getattr(args, "batch_size", None)
    if epochs or lrs or bs:
        cfg = cfg.with_overrides(hyperparams=Hyperparams(
            parse_int_list(epochs) if epochs else hp.epochs,
            parse_float_list(lrs) if lrs else hp.learning_rates,
            bs or hp.batch_size,
        ))
    return cfg


# -- commands ----------------------------------------------------------------

def cmd_segment(args) -> int:
    cfg = _config(args).validate()
    words = list(args.words)
    if args.word_file:
        fh = sys.stdin if args.word_file == "-" else open(args.word_file, encoding="utf-8")
        with fh:
            words += [ln.strip() for ln in fh if ln.strip()]
    if not words:
        return 0
    res = _resources(cfg)
    out = []
    for w in words:
        w = w.lower()
        if args.mode == "wordpiece":
            out.append(f"{w}\t{segment_wordpiece(w, res.vocab)}")
            continue
        seg = segment_derivational(w, res.affixes, res.stems, cfg.max_depth)
        try:
            rendered = " ".join(serialize_delbert(seg, res.vocab)) if seg else NONE_MARK
        except SerializationError:
            rendered = NONE_MARK
        out.append(f"{w}\t{rendered}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_build_vocab(args) -> int:
    cfg = _config(args).validate()
    res = _resources(cfg)
    out = cfg.output_dir
    write_atomic(out / "stems.txt", "".join(s + "\n" for s in res.stems))
    write_atomic(out / "stems.provenance.json", _json(_resource_record(cfg, res)))
    print(f"{len(res.stems)} stems written to {out / 'stems.txt'}")
    return 0


def cmd_build_dataset(args) -> int:
    cfg = _config(args).validate(need=("corpus", "scheme"))
    res = _resources(cfg)
    try:
        docs = read_documents(cfg.corpus, cfg.text_field, cfg.label_field)
        stats = extract_complex_words(docs, cfg.scheme, res, max_depth=cfg.max_depth, workers=worker_count())
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read corpus {cfg.corpus}: {e}") from None
    entries = assign_classes(stats)
    ds = split_dataset(entries, cfg.split_seed, cfg.scheme)
    path = cfg.dataset_path
    write_atomic(path, dataset_to_tsv(ds))
    sizes = {s: len(ds.split(s)) for s in ("train", "dev", "test")}
    record = {
        "corpus_sha256": file_sha256(cfg.corpus),
        "dataset_sha256_of_content": None,
        "split_seed": cfg.split_seed,
        "max_depth": cfg.max_depth,
        "scheme": {
            "class1": [cfg.scheme.class1_name, sorted(cfg.scheme.class1_labels)],
            "class2": [cfg.scheme.class2_name, sorted(cfg.scheme.class2_labels)],
        },
        "text_field": cfg.text_field,
        "label_field": cfg.label_field,
        "n_complex_words": len(stats),
        "n_entries": len(ds),
        "split_sizes": sizes,
        "resources": _resource_record(cfg, res),
    }
    record["dataset_sha256_of_content"] = file_sha256(path)
    write_atomic(path.with_name(path.name + ".provenance.json"), _json(record))
    print(f"{len(ds)} entries ({sizes['train']}/{sizes['dev']}/{sizes['test']}) written to {path}")
    return 0


def _load_dataset(cfg: RunConfig) -> LabeledDataset:
    cfg.validate(need=("dataset", "scheme"))
    try:
        return read_dataset(cfg.dataset_path, cfg.scheme)
    except SchemeError as e:
        raise InputError(f"{cfg.dataset_path}: {e}") from None


def _check_splits(ds: LabeledDataset) -> None:
    for split in ("train", "dev", "test"):
        labels = {e.label for e in ds.split(split)}
        if len(labels) < 2:
            raise TrainingError(f"{split} split has {len(ds.split(split))} words and {len(labels)} class(es)")


def cmd_probe(args) -> int:
    cfg = _config(args).validate()
    ds = _load_dataset(cfg)
    _check_splits(ds)
    res = _resources(cfg)
    feat = Featurizer(res, cfg.kind, cfg.mode, cfg.keep_hyphen, cfg.max_depth)
    result = grid_search(ds, feat, cfg.hyperparams, cfg.seeds)
    name = model_name(cfg.kind, cfg.mode)
    out = cfg.output_dir

    best = result.best
    rows = []
    for split in ("dev", "test"):
        for seed in cfg.seeds:
            m = result.per_seed[seed][split]
            rows.append((best.name, seed, split, m.f1, m.accuracy))
    write_atomic(out / f"metrics_{name}.csv", _csv(("config", "seed", "split", "f1", "accuracy"), rows))

    grid = [(e, lr, mean, std) for e, lr, mean, std in result.summary()]
    write_atomic(out / f"grid_{name}.csv", _csv(("epochs", "learning_rate", "mean_dev_f1", "std_dev_f1"), grid))

    for seed, model in result.models.items():
        write_atomic(out / "models" / name / f"seed{seed}.txt", model.to_text())

    preds = ["\t".join(PREDICTIONS_HEADER)]
    for seed in cfg.seeds:
        for split in ("dev", "test"):
            lik = result.per_seed[seed][split].per_word_likelihood
            for w in sorted(lik):
                preds.append(f"{name}\t{w}\t{seed}\t{split}\t{lik[w]!r}")
    write_atomic(out / f"predictions_{name}.tsv", "\n".join(preds) + "\n")

    f1 = [result.per_seed[s]["test"].f1 for s in cfg.seeds]
    print(f"{name}: best {best.name}, mean test F1 {sum(f1) / len(f1):.4f} over {len(f1)} seeds")
    return 0


def read_predictions(path: str | Path) -> tuple[str, dict[int, dict[str, float]]]:
    """Model name and seed -> word -> true-class likelihood."""
    per_seed: dict[int, dict[str, float]] = defaultdict(dict)
    names = set()
    with open(path, encoding="utf-8") as fh:
        header = tuple(fh.readline().rstrip("\n").split("\t"))
        if header != PREDICTIONS_HEADER:
            raise InputError(f"{path}: expected header {PREDICTIONS_HEADER}, got {header}")
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 5:
                raise InputError(f"{path}:{lineno}: expected 5 columns")
            try:
                per_seed[int(parts[2])][parts[1]] = float(parts[4])
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad seed or likelihood") from None
            names.add(parts[0])
    if len(names) != 1:
        raise InputError(f"{path}: expected predictions of one model, found {sorted(names)}")
    return names.pop(), dict(per_seed)


def _default_predictions(cfg: RunConfig) -> list[Path]:
    found = [cfg.output_dir / f"predictions_{model_name(k, 'full')}.tsv" for k in ("derivational", "wordpiece")]
    return [p for p in found if p.exists()]


def cmd_analyze(args) -> int:
    cfg = _config(args).validate()
    ds = _load_dataset(cfg)
    paths = [Path(p) for p in args.predictions] if args.predictions else _default_predictions(cfg)
    if not paths:
        raise InputError("no prediction files given or found in the output directory")
    if len(paths) > 2:
        raise InputError("analyze compares at most two models")
    for p in paths:
        if not p.exists():
            raise InputError(f"predictions file not found: {p}")
    models = [read_predictions(p) for p in paths]
    if len(models) == 2 and models[0][0] == models[1][0]:
        models = [(models[0][0] + "_a", models[0][1]), (models[1][0] + "_b", models[1][1])]
    res = _resources(cfg)
    out = cfg.output_dir
    notes: list[str] = []

    segs, wps = {}, {}
    for e in ds.entries:
        seg = segment_derivational(e.word, res.affixes, res.stems, cfg.max_depth)
        if seg is not None:
            segs[e.word] = seg
            wps[e.word] = segment_wordpiece(e.word, res.vocab)
    report = an.validity_report((w, wps[w], segs[w]) for w in sorted(segs))
    write_atomic(out / "validity.csv", _csv(
        ("role", "affix", "n_words", "error_rate"),
        [(g.role, g.affix, g.n_words, g.error_rate) for g in report.groups],
    ))

    eval_words = {e.word for e in ds.entries if e.split in ("dev", "test")}
    label = {e.word: ds.scheme.name(e.label) for e in ds.entries}
    freq = {e.word: e.frequency for e in ds.entries if e.word in eval_words}
    correct = {name: an.correctness(ps) for name, ps in models}
    bins = an.frequency_bins(freq, correct)
    rows = []
    for name, _ in models:
        for b in an.BINS:
            if b in bins.accuracy[name]:
                rows.append((name, b, bins.counts[b], bins.accuracy[name][b]))
    write_atomic(out / "frequency_bins.csv", _csv(("model", "bin", "n_words", "accuracy"), rows))

    delta_path, ttest_path = out / "affix_deltas.csv", out / "ttest.csv"
    reg_path, rank_path = out / "regression.csv", out / "error_ranking.csv"
    if len(models) < 2:
        notes.append("single model: affix deltas, t-test, regression and error ranking skipped")
        for p in (delta_path, ttest_path, reg_path, rank_path):
            if p.exists():
                p.unlink()
    else:
        (name_a, ps_a), (name_b, ps_b) = models
        ca, cb = correct[name_a], correct[name_b]
        shared = sorted(set(ca) & set(cb) & set(segs))
        dropped = len((set(ca) | set(cb)) - set(shared))
        if dropped:
            notes.append(f"{dropped} words lack predictions from one model or a derivational segmentation; excluded")
        deltas = an.affix_deltas({w: segs[w] for w in shared}, ca, cb)
        write_atomic(delta_path, _csv(
            ("role", "affix", "n_words", f"accuracy_{name_a}", f"accuracy_{name_b}", "delta"),
            [(d.role, d.affix, d.n_words, d.accuracy_a, d.accuracy_b, d.delta) for d in deltas],
        ))

        pre = [d.delta for d in deltas if d.role == "prefix"]
        suf = [d.delta for d in deltas if d.role == "suffix"]
        header = ("sample_a", "sample_b", "n_a", "n_b", "statistic", "df", "p_value", "cohens_d")
        try:
            t = an.welch_t_test(pre, suf)
            trow = [("prefix_delta", "suffix_delta", len(pre), len(suf), t.statistic, t.degrees_of_freedom, t.p_value, t.effect_size)]
        except an.DegenerateSampleError as e:
            if len(pre) >= 2 and len(suf) >= 2 and len(set(pre) | set(suf)) == 1:
                # identical constant samples: no difference to test
                trow = [("prefix_delta", "suffix_delta", len(pre), len(suf), 0.0, float(len(pre) + len(suf) - 2), 1.0, 0.0)]
                notes.append("t-test: all deltas equal; reported t = 0, p = 1")
            else:
                trow = []
                notes.append(f"t-test skipped: {e}")
        write_atomic(ttest_path, _csv(header, trow))

        rate = {g.affix: g.error_rate for g in report.groups if g.role == "prefix"}
        pts = [(rate[d.affix], d.delta) for d in deltas if d.role == "prefix" and d.affix in rate]
        header = ("predictor", "response", "n", "slope", "intercept", "r_squared", "f_statistic", "p_value")
        try:
            r = an.ols_regression([x for x, _ in pts], [y for _, y in pts])
            rrow = [("prefix_error_rate", "prefix_delta", r.n, r.slope, r.intercept, r.r_squared, r.f_statistic, r.p_value)]
        except an.DegenerateSampleError as e:
            rrow = []
            notes.append(f"regression skipped: {e}")
        write_atomic(reg_path, _csv(header, rrow))

        la = {w: v for w, v in an.mean_over_seeds(ps_a).items() if w in shared}
        lb = {w: v for w, v in an.mean_over_seeds(ps_b).items() if w in shared}
        ranked = an.rank_error_examples(la, lb)
        write_atomic(rank_path, _csv(
            ("word", "class", "derivational_tokens", f"likelihood_{name_a}", "wordpiece_tokens",
             f"likelihood_{name_b}", "difference"),
            [(r.word, label[r.word], " ".join(serialize_delbert(segs[r.word], res.vocab)), r.likelihood_a,
              str(wps[r.word]), r.likelihood_b, r.difference) for r in ranked],
        ))

    summary = _summary(report, bins, models, out, notes)
    write_atomic(out / "summary.txt", summary)
    sys.stdout.write(summary)
    return 0


def _fmt(v: float | None) -> str:
    return "n/a" if v is None else f"{v:.3f}"


def _summary(report: an.ValidityReport, bins: an.FrequencyBinReport, models, out: Path, notes: list[str]) -> str:
    lines = [
        "WordPiece stem-validity errors by outermost affix",
        f"  prefixes: mean {_fmt(report.prefix_mean)}, sd {_fmt(report.prefix_std)}",
        f"  suffixes: mean {_fmt(report.suffix_mean)}, sd {_fmt(report.suffix_std)}",
        "Accuracy by frequency bin (dev + test)",
    ]
    for name, _ in models:
        acc = bins.accuracy[name]
        lines.append(f"  {name}: " + ", ".join(f"{b} {acc[b]:.3f} (n={bins.counts[b]})" for b in an.BINS if b in acc))
    for fname in ("ttest.csv", "regression.csv"):
        p = out / fname
        if p.exists():
            rows = p.read_text(encoding="utf-8").splitlines()
            if len(rows) > 1:
                lines.append(f"{fname[:-4]}: " + ", ".join(f"{k}={v}" for k, v in zip(rows[0].split(","), rows[1].split(","))))
    lines += [f"note: {n}" for n in notes]
    return "\n".join(lines) + "\n"


# -- argument parsing --------------------------------------------------------

def _resource_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--vocab")
    p.add_argument("--prefixes")
    p.add_argument("--suffixes")
    p.add_argument("--stopwords")
    p.add_argument("--max-depth", type=int)


def _probe_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=("wordpiece", "derivational"))
    p.add_argument("--mode", dest="probe_mode", choices=("full", "stem_ablated", "affix_ablated"))
    p.add_argument("--seeds", help="e.g. 0-19 or 1,2,3")
    p.add_argument("--epochs", help="e.g. 1-20")
    p.add_argument("--learning-rates", help="comma separated")
    p.add_argument("--batch-size", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morphseg", description="Derivational segmentation and probing tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="print segmentations of words")
    _resource_flags(p)
    p.add_argument("--mode", choices=("derivational", "wordpiece"), default="derivational")
    p.add_argument("--word-file", help="one word per line; '-' for stdin")
    p.add_argument("words", nargs="*")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("build-vocab", help="write the stem set and its provenance")
    _resource_flags(p)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("build-dataset", help="extract and label complex words from a corpus")
    _resource_flags(p)
    p.add_argument("--corpus")
    p.add_argument("--output-dir")
    p.add_argument("--dataset", help="output TSV (default: OUTPUT_DIR/dataset.tsv)")
    p.add_argument("--split-seed", type=int)
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("probe", help="grid-search and train linear probes")
    _resource_flags(p)
    _probe_flags(p)
    p.add_argument("--dataset")
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("analyze", help="validity, frequency and comparison reports")
    _resource_flags(p)
    p.add_argument("--dataset")
    p.add_argument("--output-dir")
    p.add_argument("--predictions", nargs="+", help="one or two predictions TSVs (model A first)")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatasetTooSmallError, TrainingError, an.DegenerateSampleError) as e:
        print(f"morphseg: {e}", file=sys.stderr)
        return EXIT_SHAPE
    except (InputError, ConfigError, SchemeError, ProbeConfigError, VocabFormatError,
            AffixValidationError, an.MismatchedWordsError, OSError, ValueError) as e:
        print(f"morphseg: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
