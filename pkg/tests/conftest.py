import hypothesis
import pytest

from omlsym.catalog import standard_catalog

hypothesis.settings.register_profile("fast", max_examples=20)
hypothesis.settings.register_profile("thorough", max_examples=500)

CATALOG_NAMES = list(standard_catalog())
SMALL_NAMES = [n for n, L in standard_catalog().items() if L.size <= 24]

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_RESULTS = {}


@pytest.fixture(params=CATALOG_NAMES)
def any_lattice(request):
    return standard_catalog()[request.param]


@pytest.fixture(params=SMALL_NAMES)
def small_lattice(request):
    return standard_catalog()[request.param]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed, seconds = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({seconds:.2f} s)")
