import random

import pytest
from hypothesis import settings

from conicgroups.residue import Modulus

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

P61 = 2**61 - 1
P31 = 2**31 - 1


@pytest.fixture
def F7():
    return Modulus.prime(7)


@pytest.fixture
def rng():
    return random.Random(20240917)
