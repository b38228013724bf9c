import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from colorlie.corpus import (
    four_dim_ternary,
    four_dim_ternary_negated_twists,
    zero_algebra,
    zero_algebra_singular_twists,
)

DATA_DIR = pathlib.Path(__file__).parent.parent / "src" / "colorlie" / "data"
CORPUS = DATA_DIR / "ternary_z2.json"
CONSTRUCTED = DATA_DIR / "constructed_z2.json"


@pytest.fixture(scope="session")
def ternary4():
    return four_dim_ternary()


@pytest.fixture(scope="session")
def ternary4_neg():
    return four_dim_ternary_negated_twists()


@pytest.fixture(scope="session")
def abelian2():
    return zero_algebra(2, 3)


@pytest.fixture(scope="session")
def abelian_singular():
    return zero_algebra_singular_twists(2, 3)


@pytest.fixture(scope="session")
def corpus_path():
    assert CORPUS.exists()
    return str(CORPUS)


@pytest.fixture(scope="session")
def constructed_path():
    assert CONSTRUCTED.exists()
    return str(CONSTRUCTED)
