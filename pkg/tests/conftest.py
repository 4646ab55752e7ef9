import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture
def benjamin_params():
    """The Benjamin instance used throughout the verification runs."""
    from benj.model import ModelParams

    return ModelParams(m=1, r=0.5, gamma=1.0, delta=1.0, q=1)


@pytest.fixture
def kdv_params():
    """gamma = 0 reduction with a long domain, for solitary-wave work."""
    from benj.model import ModelParams

    return ModelParams(m=1, r=0.5, gamma=0.0, delta=1.0, q=1, domain_scale=8.0)
