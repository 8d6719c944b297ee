import itertools

import pytest

from liquidproxy import kernels


def brute_models(formula, m):
    """Independent oracle: evaluate the formula on every valuation."""
    from liquidproxy.logic import evaluate
    return [v for v in itertools.product((0, 1), repeat=m) if evaluate(formula, v)]


@pytest.fixture(params=["python", "compiled"])
def backend(request):
    if request.param == "compiled" and kernels.compiled is None:
        pytest.skip("compiled extension not built")
    return getattr(kernels, request.param)


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
