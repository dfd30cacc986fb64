import pytest

from shoi import simplex

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record the outcome of one acceptance criterion for the summary."""
    results = request.config.stash[ACCEPTANCE]

    def record(number: int, title: str):
        results[number] = (title, None)

        def done(ok: bool, detail: str = ""):
            results[number] = (title, (ok, detail))

        return done

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    number = getattr(item.function, "criterion", None)
    if number is None or rep.when != "call":
        return
    results = item.config.stash[ACCEPTANCE]
    title, _ = results.get(number, (item.name, None))
    detail = "" if rep.passed else rep.longreprtext.strip().splitlines()[-1][:160]
    results[number] = (title, (rep.passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[ACCEPTANCE]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, outcome = results[number]
        if outcome is None:
            line = f"criterion {number}: NOT RUN  {title}"
        else:
            ok, detail = outcome
            line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
            if not ok and detail:
                line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session", autouse=True)
def strong_duality_audit():
    """Every Optimal LP outcome of the whole run carried a duality certificate."""
    before = dict(simplex.STATS)
    yield
    optimal = simplex.STATS["optimal"] - before["optimal"]
    certified = simplex.STATS["certified"] - before["certified"]
    assert optimal == certified, f"{optimal} optimal LP outcomes but {certified} carried a duality certificate"


def pytest_collection_modifyitems(session, config, items):
    """Run the solver-property criterion last so its counters see the whole run."""
    last = [i for i in items if getattr(getattr(i, "function", None), "criterion", None) == 6]
    items[:] = [i for i in items if i not in last] + last
