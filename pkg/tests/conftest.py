import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cforge.domains import make_catalog_kb


@pytest.fixture(scope="session")
def catalog_kb():
    """One shared catalog KB; it is immutable, so sharing is safe."""
    return make_catalog_kb()
