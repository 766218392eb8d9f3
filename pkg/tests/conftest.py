import random

import pytest
from hypothesis import HealthCheck, settings

from weakind.table_model import Shape

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_minor_set(shape: Shape, rng: random.Random, p: float = 0.5):
    return [a for a in shape.all_anchors() if rng.random() < p]


@pytest.fixture
def rng():
    return random.Random(12345)
