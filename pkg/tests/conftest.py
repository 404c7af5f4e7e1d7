import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from featsub.model import Catalogue, Subscription

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def record(criterion: int, ok: bool, detail: str = ""):
        ACCEPTANCE[criterion] = (ok, detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@st.composite
def subscriptions(draw, max_features=6, max_user=5, max_weight=4, max_catalogue=None):
    """Small random subscription over a random catalogue (mutexes allowed)."""
    n = draw(st.integers(1, max_catalogue or max_features + 2))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    hard = draw(st.sets(st.sampled_from(pairs), max_size=min(len(pairs), 3 * n))) if pairs else set()
    feats = draw(st.sets(st.integers(1, n), min_size=1, max_size=min(n, max_features)))
    fpairs = [(i, j) for i in sorted(feats) for j in sorted(feats) if i != j]
    user = draw(st.sets(st.sampled_from(fpairs), max_size=min(len(fpairs), max_user))) if fpairs else set()
    fw = {f: draw(st.integers(1, max_weight)) for f in sorted(feats)}
    pw = {p: draw(st.integers(1, max_weight)) for p in sorted(user)}
    return Subscription(Catalogue(n, frozenset(hard)), frozenset(feats), frozenset(user), fw, pw)
