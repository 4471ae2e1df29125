from __future__ import annotations

import pytest

from provcube.cube.processes import default_registry


@pytest.fixture(scope="session")
def registry():
    return default_registry()
