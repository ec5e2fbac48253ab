import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sgbeam.spectrum import compute_spectrum  # noqa: E402

# First six eigenvalues from extended-precision Chebyshev collocation
# (tests/oracles.py, 36 points, 60 digits), frozen here.
ORACLE_LAMBDAS = {
    0.5: [9.812308358091698, 85.12239162724926, 352.02977697370704,
          952.4553120658823, 2012.7074901421283, 3664.783308190827],
    1.0: [12.604102460450957, 115.76037449615426, 490.6687475193275,
          1338.159928466079, 2835.9630147994962, 5170.751399131737],
    2.0: [16.770687656136307, 160.25502741696027, 688.7357792316105,
          1886.1573460271113, 4003.2444110376427, 7304.012646390191],
}


@pytest.fixture(scope="session")
def basis1():
    return compute_spectrum(1.0, 30)


@pytest.fixture(scope="session")
def bases():
    return {z: compute_spectrum(z, 20) for z in (0.5, 1.0, 2.0)}


ACCEPTANCE_LINES = []


def record(criterion, passed, detail):
    """Store one acceptance result; all of them are printed at the end of the run."""
    line = f"criterion {criterion:<3} {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
