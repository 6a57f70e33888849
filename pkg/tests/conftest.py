from pathlib import Path

import pytest

from lexanalogy import FrequencyTable, Lexicon, Taxonomy

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def sample_lexicon() -> Lexicon:
    return Lexicon.load(FIXTURES / "sample_lexicon.tsv")


@pytest.fixture(scope="session")
def timber_steed():
    return (
        Lexicon.load(FIXTURES / "timber_steed" / "lexicon.tsv"),
        Taxonomy.load(FIXTURES / "timber_steed" / "taxonomy.tsv"),
        FrequencyTable.load(FIXTURES / "timber_steed" / "freq.tsv"),
    )


@pytest.fixture(scope="session")
def kinship():
    return (
        Lexicon.load(FIXTURES / "kinship" / "lexicon.tsv"),
        Taxonomy.load(FIXTURES / "kinship" / "taxonomy.tsv"),
        FrequencyTable.load(FIXTURES / "kinship" / "freq.tsv"),
    )
