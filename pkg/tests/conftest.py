import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ccskg.config import bundled_config_path, bundled_data_dir, load_config  # noqa: E402
from ccskg.pipeline import build  # noqa: E402
from ccskg.vocab import Vocabulary  # noqa: E402

DATA = bundled_data_dir()


@pytest.fixture(scope="session")
def vocab():
    return Vocabulary()


@pytest.fixture(scope="session")
def fixture_build():
    """The bundled fixture built once; tests must not mutate its store."""
    return build(load_config(bundled_config_path()))


@pytest.fixture
def fresh_build():
    return build(load_config(bundled_config_path()))


@pytest.fixture(scope="session")
def data_dir():
    return DATA
