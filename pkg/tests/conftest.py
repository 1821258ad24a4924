from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from linsets.fields import build_tower

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_TOWERS = [(2, (1, 2, 4)), (3, (1, 2)), (2, (1, 3, 6)), (5, (1, 2)), (3, (1, 3))]


@pytest.fixture(params=SMALL_TOWERS, ids=lambda t: f"p{t[0]}-{'.'.join(map(str, t[1]))}")
def tower(request):
    p, degs = request.param
    return build_tower(p, degs)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)
