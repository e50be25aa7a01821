import os

import pytest
from hypothesis import HealthCheck, settings

from exact_algebra import enter_session, exit_session

settings.register_profile(
    'llct',
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.register_profile('llct-full', max_examples=500, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'llct'))

Q = 3


@pytest.fixture(autouse=True)
def residue_session():
    """Every test computes over the residue field with q = 3 unless it opens its own session."""
    token = enter_session(Q)
    yield Q
    exit_session(token)
