from pathlib import Path

import pytest

from bsymbol.code import validate_params
from bsymbol.field import FieldSpec, build_field, default_spec

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# towers fixed by the worked examples
SPEC_1B = FieldSpec(2, 1, 4, (1, 1), (1, 1, 0, 0, 1))          # gamma^4 + gamma + 1
SPEC_1C = FieldSpec(2, 2, 3, (1, 1, 1), (2, 1, 1, 1))          # gamma^3 + gamma^2 + gamma + alpha

# acceptance criterion lines, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def code(p, t, r, N, spec=None):
    return validate_params(build_field(spec or default_spec(p, t, r)), N)


@pytest.fixture(scope="session")
def ex_a():
    return code(3, 1, 4, 2)


@pytest.fixture(scope="session")
def ex_b():
    return code(2, 1, 4, 3, SPEC_1B)


@pytest.fixture(scope="session")
def ex_c():
    return code(2, 2, 3, 9, SPEC_1C)


@pytest.fixture(scope="session")
def ex_d():
    return code(5, 1, 5, 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
