import pytest

from zmut import laurent, mutation

MUTATION_LOG = {"count": 0}


@pytest.fixture(autouse=True)
def normalization_is_preserved(monkeypatch):
    """Every mutation run by any test must send normalized input to normalized output."""
    original = mutation.mutate

    def checked(f, d):
        g = original(f, d)
        MUTATION_LOG["count"] += 1
        if laurent.is_normalized(f):
            assert laurent.is_normalized(g), f"mutation by {d} broke normalization of {f}"
        return g

    monkeypatch.setattr(mutation, "mutate", checked)
    yield


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        status, title = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")
