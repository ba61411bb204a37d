"""Shared fixtures and hypothesis settings for the suite."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from ternpow import cf_log3_2

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cf14():
    return cf_log3_2(14)


@pytest.fixture(scope="session")
def cf40():
    return cf_log3_2(40)
