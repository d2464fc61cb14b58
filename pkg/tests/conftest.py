import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import superstore_csv  # noqa: E402

from medley.dataset import load_csv


@pytest.fixture(scope="session")
def superstore_bytes() -> bytes:
    return superstore_csv()


@pytest.fixture(scope="session")
def superstore(superstore_bytes):
    return load_csv(superstore_bytes, dataset_id="superstore")
