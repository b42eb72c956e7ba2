import os

import pytest
from hypothesis import HealthCheck, settings

from skewcalc import kernels

settings.register_profile(
    "default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run a test once per importable rewriting kernel."""
    mod = kernels.backends()[request.param]
    monkeypatch.setattr(kernels, "WordReducer", mod.WordReducer)
    monkeypatch.setattr(kernels, "substitute", mod.substitute)
    monkeypatch.setattr(kernels, "free_mul", mod.free_mul)
    return request.param
