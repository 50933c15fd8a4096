"""Key-value run configuration.

Format: one ``key = value`` per line, ``#`` starts a comment.  Relative paths
resolve against the directory of the config file.  Lists are comma separated;
integer ranges may be written ``1-20``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus import LabelScheme, SchemeError
from .probe import DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS, DEFAULT_LEARNING_RATES, Hyperparams, check_kind_mode


class ConfigError(ValueError):
    pass


PATH_KEYS = ("vocab", "prefixes", "suffixes", "stopwords", "corpus", "output_dir", "dataset")
KNOWN_KEYS = set(PATH_KEYS) | {
    "text_field", "label_field",
    "class1_name", "class1_labels", "class2_name", "class2_labels",
    "split_seed", "max_depth", "kind", "mode",
    "epochs", "learning_rates", "batch_size", "seeds", "keep_hyphen",
}


def parse_kv(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def parse_int_list(s: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in s.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if not part.startswith("-") else (part, part)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def parse_float_list(s: str) -> tuple[float, ...]:
    return tuple(float(p) for p in s.split(",") if p.strip())


def _labels(s: str) -> frozenset[str]:
    return frozenset(p.strip() for p in s.split(",") if p.strip())


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


@dataclass(frozen=True)
class RunConfig:
    vocab: Path | None = None
    prefixes: Path | None = None
    suffixes: Path | None = None
    stopwords: Path | None = None
    corpus: Path | None = None
    output_dir: Path = Path(".")
    dataset: Path | None = None
    text_field: str = "text"
    label_field: str = "label"
    scheme: LabelScheme | None = None
    split_seed: int = 0
    max_depth: int = 4
    kind: str = "derivational"
    mode: str = "full"
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    seeds: tuple[int, ...] = tuple(range(20))
    keep_hyphen: bool = True

    @property
    def dataset_path(self) -> Path:
        return self.dataset or self.output_dir / "dataset.tsv"

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self

    def validate(self, need: tuple[str, ...] = ()) -> "RunConfig":
        """Check that every path in ``need`` (plus any configured resource file) exists."""
        for key in PATH_KEYS:
            p = getattr(self, key)
            if key == "dataset":
                continue
            if key == "output_dir" or p is None:
                if key in need and p is None:
                    raise ConfigError(f"missing required setting {key!r}")
                continue
            if not Path(p).exists():
                raise ConfigError(f"{key}: no such file {p}")
        if "dataset" in need and not self.dataset_path.exists():
            raise ConfigError(f"dataset: no such file {self.dataset_path}")
        if "scheme" in need and self.scheme is None:
            raise ConfigError("label scheme (class1_labels/class2_labels) not configured")
        if not self.seeds:
            raise ConfigError("seed list is empty")
        try:
            check_kind_mode(self.kind, self.mode)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        return self


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    kv = parse_kv(text, str(path))
    base = path.parent
    kw: dict = {}
    for key in PATH_KEYS:
        if key in kv:
            kw[key] = base / kv[key]
    for key in ("text_field", "label_field", "kind", "mode"):
        if key in kv:
            kw[key] = kv[key]
    try:
        for key in ("split_seed", "max_depth"):
            if key in kv:
                kw[key] = int(kv[key])
        if "seeds" in kv:
            kw["seeds"] = parse_int_list(kv["seeds"])
        if "keep_hyphen" in kv:
            kw["keep_hyphen"] = _bool(kv["keep_hyphen"])
        hp = Hyperparams(
            parse_int_list(kv["epochs"]) if "epochs" in kv else DEFAULT_EPOCHS,
            parse_float_list(kv["learning_rates"]) if "learning_rates" in kv else DEFAULT_LEARNING_RATES,
            int(kv.get("batch_size", DEFAULT_BATCH_SIZE)),
        )
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from None
    kw["hyperparams"] = hp
    if "class1_labels" in kv or "class2_labels" in kv:
        try:
            kw["scheme"] = LabelScheme(
                kv.get("class1_name", "class1"),
                kv.get("class2_name", "class2"),
                _labels(kv.get("class1_labels", "")),
                _labels(kv.get("class2_labels", "")),
            )
        except SchemeError as e:
            raise ConfigError(f"{path}: {e}") from None
    return RunConfig(**kw)
