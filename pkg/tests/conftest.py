import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from camlens.fixtures import build_fixture_image, build_fixture_model
from camlens.model import load_model


@pytest.fixture(scope="session")
def fixture_model():
    manifest, blob = build_fixture_model()
    return load_model(manifest, blob)


@pytest.fixture(scope="session")
def fixture_image():
    return build_fixture_image()
