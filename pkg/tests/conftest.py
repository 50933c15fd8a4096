import pytest

from morphseg.vocab import Vocabulary, build_stem_set, default_resources, validate_affixes, Resources


@pytest.fixture(scope="session")
def res():
    return default_resources()


@pytest.fixture
def toy():
    """A handful of tokens, enough for hand-traced segmentations."""
    tokens = ["[PAD]", "[UNK]", "-", "the", "un", "lock", "super", "superb", "bizarre", "anti",
              "happy", "tribal", "##able", "##ize", "##ness", "##al", "##s", "re", "read"]
    vocab = Vocabulary.from_tokens(tokens)
    affixes = validate_affixes(["un", "super", "anti", "re"], ["able", "ize", "ness", "al"], vocab)
    return Resources(vocab, affixes, build_stem_set(vocab, affixes, ["the"]))


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``with criterion(3, "stem-set scale") as note: ...``; anything
    assigned to ``note.detail`` is appended to the line.
    """
    import contextlib
    import time
    from types import SimpleNamespace

    @contextlib.contextmanager
    def record(number, title, budget=None):
        note = SimpleNamespace(detail="")
        t0 = time.perf_counter()
        try:
            yield note
        except BaseException as e:
            ACCEPTANCE[number] = f"FAIL  {number}. {title}: {note.detail or type(e).__name__} {e}".strip()
            raise
        elapsed = time.perf_counter() - t0
        if budget is not None and elapsed > budget:
            ACCEPTANCE[number] = f"FAIL  {number}. {title}: {elapsed:.2f}s exceeds {budget}s budget"
            pytest.fail(f"criterion {number} took {elapsed:.2f}s (budget {budget}s)")
        ACCEPTANCE[number] = f"PASS  {number}. {title} ({elapsed:.2f}s) {note.detail}".rstrip()
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n].splitlines()[0])
