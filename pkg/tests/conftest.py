"""Shared fixtures: enumerated builtin groups and optional corpus files."""

from pathlib import Path

import pytest

from pgaut.cli import builtin_texts
from pgaut.engine import enumerate_group
from pgaut.presentation import parse_corpus

REPO = Path(__file__).resolve().parent.parent


def load_texts(texts):
    groups = {}
    for text in texts:
        for pres in parse_corpus(text):
            groups[pres.name] = enumerate_group(pres)
    return groups


@pytest.fixture(scope="session")
def builtin():
    """name -> Group for every packaged presentation, shared so cached
    automorphism stores survive across tests."""
    return load_texts(builtin_texts())


def _corpus_groups(fname):
    path = REPO / "corpus" / fname
    if not path.exists():
        pytest.skip(f"corpus file {fname} not present")
    return load_texts([path.read_text()])


@pytest.fixture(scope="session")
def corpus32():
    return _corpus_groups("order32.pc")


@pytest.fixture(scope="session")
def corpus81():
    return _corpus_groups("order81.pc")


@pytest.fixture(scope="session")
def corpus256():
    return _corpus_groups("order256.pc")
