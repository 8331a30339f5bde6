from pathlib import Path

import pytest

from argrec import bundle as B
from argrec.corpus.loader import load_corpus, load_units, read_split
from argrec.corpus.parser import parse_unit
from argrec.typesys.index import build_type_index
from argrec.typesys.resolve import UnitContext

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
SCENARIO = FIXTURES / "scenario"
REDUCTION = FIXTURES / "reduction"


@pytest.fixture(scope="session")
def corpus_units():
    return load_corpus(CORPUS / "manifest.txt")


@pytest.fixture(scope="session")
def corpus_index(corpus_units):
    return build_type_index(corpus_units)


@pytest.fixture(scope="session")
def corpus_trained(corpus_units, corpus_index):
    """Model trained on the whole fixture corpus (for pipeline properties)."""
    return B.train(corpus_units, index=corpus_index)


@pytest.fixture(scope="session")
def corpus_split():
    split = read_split(CORPUS / "split.txt")
    return load_units(split.train), load_units(split.test)


@pytest.fixture(scope="session")
def split_trained(corpus_split):
    return B.train(corpus_split[0])


@pytest.fixture(scope="session")
def scenario_split():
    split = read_split(SCENARIO / "split.txt")
    return load_units(split.train), load_units(split.test)


@pytest.fixture(scope="session")
def reduction_units():
    return load_corpus(REDUCTION / "manifest.txt")


def unit_ctx(source, path="T.java", extra=(), strict=False):
    """Parse `source` (plus extra sources) and return (unit, ctx)."""
    u = parse_unit(source, path)
    others = [parse_unit(s, f"X{i}.java") for i, s in enumerate(extra)]
    index = build_type_index([u] + others)
    return u, UnitContext(u, index, strict)
