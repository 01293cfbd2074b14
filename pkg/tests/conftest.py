import hypothesis
import pytest

from uavlc.channel import VlcParams

hypothesis.settings.register_profile(
    "default", max_examples=50, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")


@pytest.fixture
def table1():
    """Reference parameter set used throughout the experiments."""
    return VlcParams()
