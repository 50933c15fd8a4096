import hashlib
import json

import pytest

from morphseg.cli import main
from morphseg.synthetic import prefix_biased_words, suffixed_words, synthetic_corpus, write_jsonl

NINE = ["superbizarre", "unlockable", "antimicrosoft", "tribalize", "applausive",
        "promosque", "isotopize", "nonmultiplayer", "prematuration"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_config(path, **kv):
    base = {
        "corpus": "corpus.jsonl", "output_dir": "out",
        "class1_name": "negative", "class1_labels": "1, 2",
        "class2_name": "positive", "class2_labels": "4, 5",
        "split_seed": "3", "seeds": "0-2", "epochs": "1-5", "learning_rates": "0.1, 0.3",
    }
    base.update(kv)
    path.write_text("# test run\n" + "".join(f"{k} = {v}\n" for k, v in base.items()))
    return path


@pytest.fixture
def nine(tmp_path):
    docs = []
    for i, w in enumerate(NINE):
        docs += [{"text": f"a {w} here", "label": 1}] * (9 - i) + [{"text": w, "label": 5}] * i
    docs.append({"text": "superbizarre", "label": 3})
    write_jsonl(docs, tmp_path / "corpus.jsonl")
    return write_config(tmp_path / "run.cfg")


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory, res):
    d = tmp_path_factory.mktemp("pipe")
    c1, c2 = prefix_biased_words(res, 120, 240, seed=7)
    suf = suffixed_words(res, 120, seed=8)
    c1, c2 = c1 + suf[:60], c2 + suf[60:]
    write_jsonl(synthetic_corpus(c1, c2, 3000, seed=11), d / "corpus.jsonl")
    return write_config(d / "run.cfg")


def digest(directory):
    return {p.relative_to(directory).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(directory.rglob("*")) if p.is_file()}


# -- segment -----------------------------------------------------------------

def test_segment_derivational(capsys):
    code, out, _ = run(capsys, "segment", "--mode", "derivational", "superbizarre", "xylophone")
    assert code == 0
    assert out == "superbizarre\tsuper - bizarre\nxylophone\t<none>\n"


def test_segment_wordpiece(capsys):
    code, out, _ = run(capsys, "segment", "--mode", "wordpiece", "finalize")
    assert (code, out) == (0, "finalize\tfinal ##ize\n")


def test_segment_empty(capsys):
    assert run(capsys, "segment") == (0, "", "")


def test_segment_word_file(tmp_path, capsys):
    f = tmp_path / "w.txt"
    f.write_text("Tribalize\n\napplausive\n")
    code, out, _ = run(capsys, "segment", "--word-file", f)
    assert out.splitlines() == ["tribalize\ttribal ##ize", "applausive\tapplause ##ive"]


def test_segment_missing_resource(tmp_path, capsys):
    code, _, err = run(capsys, "segment", "--vocab", tmp_path / "nope.txt", "word")
    assert code == 2 and "nope.txt" in err


def test_segment_bad_vocab(tmp_path, capsys):
    v = tmp_path / "v.txt"
    v.write_text("a\na\n")
    assert run(capsys, "segment", "--vocab", v, "word")[0] == 2


# -- build-vocab -------------------------------------------------------------

def test_build_vocab(tmp_path, capsys):
    code, _, _ = run(capsys, "build-vocab", "--output-dir", tmp_path)
    assert code == 0
    stems = (tmp_path / "stems.txt").read_text().split()
    rec = json.loads((tmp_path / "stems.provenance.json").read_text())
    assert len(stems) == rec["n_stems"] and stems == sorted(stems)
    assert len(rec["stopwords_sha256"]) == 64


# -- build-dataset -----------------------------------------------------------

def test_nine_word_corpus(nine, capsys):
    code, _, _ = run(capsys, "build-dataset", "--config", nine)
    assert code == 0
    rows = (nine.parent / "out" / "dataset.tsv").read_text().splitlines()
    assert rows[0] == "word\tclass\tfrequency\tsplit"
    body = [r.split("\t") for r in rows[1:]]
    assert len(body) == 6
    assert sorted(r[3] for r in body) == ["dev", "test", "train", "train", "train", "train"]
    assert {r[0] for r in body if r[1] == "negative"} == set(NINE[:3])
    assert {r[0] for r in body if r[1] == "positive"} == set(NINE[-3:])
    freq = {r[0]: int(r[2]) for r in body}
    assert freq["superbizarre"] == 9  # the neutral document is skipped
    rec = json.loads((nine.parent / "out" / "dataset.tsv.provenance.json").read_text())
    assert rec["split_seed"] == 3 and len(rec["corpus_sha256"]) == 64
    assert rec["resources"]["stopwords_sha256"]


def test_build_dataset_rerun_identical(nine, capsys):
    run(capsys, "build-dataset", "--config", nine)
    first = digest(nine.parent / "out")
    run(capsys, "build-dataset", "--config", nine)
    assert digest(nine.parent / "out") == first


def test_overlapping_labels(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.cfg", class2_labels="2, 5")
    (tmp_path / "corpus.jsonl").write_text("")
    code, _, err = run(capsys, "build-dataset", "--config", cfg)
    assert code == 2 and "both classes" in err


def test_missing_corpus(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.cfg")
    assert run(capsys, "build-dataset", "--config", cfg)[0] == 2


def test_malformed_corpus(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.cfg")
    (tmp_path / "corpus.jsonl").write_text("{not json\n")
    assert run(capsys, "build-dataset", "--config", cfg)[0] == 2


def test_too_small(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.cfg")
    write_jsonl([{"text": "superbizarre unlockable", "label": 1}], tmp_path / "corpus.jsonl")
    assert run(capsys, "build-dataset", "--config", cfg)[0] == 3


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "build-vocab", "--config", cfg)[0] == 2


# -- probe and analyze -------------------------------------------------------

def test_probe_config_error(pipeline, capsys):
    code, _, err = run(capsys, "probe", "--config", pipeline, "--kind", "wordpiece", "--mode", "stem_ablated")
    assert code == 2 and "stem_ablated" in err


def test_probe_missing_dataset(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.cfg")
    assert run(capsys, "probe", "--config", cfg)[0] == 2


def test_probe_single_class(nine, capsys):
    run(capsys, "build-dataset", "--config", nine)
    # six entries: dev and test hold one word each
    assert run(capsys, "probe", "--config", nine)[0] == 3


def test_full_pipeline(pipeline, capsys):
    out = pipeline.parent / "out"
    assert run(capsys, "build-dataset", "--config", pipeline)[0] == 0
    assert run(capsys, "probe", "--config", pipeline, "--seeds", "0-19", "--epochs", "5",
               "--learning-rates", "0.3")[0] == 0
    rows = (out / "metrics_derivational_full.csv").read_text().splitlines()
    assert rows[0] == "config,seed,split,f1,accuracy"
    assert sum(",dev," in r for r in rows) == 20 and sum(",test," in r for r in rows) == 20
    assert (out / "models" / "derivational_full" / "seed0.txt").exists()

    code, stdout, _ = run(capsys, "analyze", "--config", pipeline)
    assert code == 0 and "single model" in stdout
    assert not (out / "affix_deltas.csv").exists() and not (out / "error_ranking.csv").exists()

    assert run(capsys, "probe", "--config", pipeline, "--kind", "wordpiece")[0] == 0
    assert run(capsys, "analyze", "--config", pipeline)[0] == 0
    for name in ("validity", "frequency_bins", "affix_deltas", "ttest", "regression", "error_ranking"):
        assert (out / f"{name}.csv").exists(), name
    ranking = (out / "error_ranking.csv").read_text().splitlines()
    assert ranking[0].startswith("word,class,derivational_tokens,likelihood_derivational_full,wordpiece_tokens")


def test_identical_models(pipeline, capsys):
    out = pipeline.parent / "out"
    run(capsys, "build-dataset", "--config", pipeline)
    run(capsys, "probe", "--config", pipeline)
    p = out / "predictions_derivational_full.tsv"
    code, _, _ = run(capsys, "analyze", "--config", pipeline, "--predictions", p, p)
    assert code == 0
    deltas = [r.split(",")[-1] for r in (out / "affix_deltas.csv").read_text().splitlines()[1:]]
    assert deltas and all(float(d) == 0.0 for d in deltas)
    ttest = (out / "ttest.csv").read_text().splitlines()
    assert float(dict(zip(ttest[0].split(","), ttest[1].split(",")))["statistic"]) == 0.0


def test_analyze_missing_predictions(pipeline, capsys):
    run(capsys, "build-dataset", "--config", pipeline)
    code, _, err = run(capsys, "analyze", "--config", pipeline, "--predictions", pipeline.parent / "none.tsv")
    assert code == 2 and "none.tsv" in err
