from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


def schoolbook_mul(a: int, b: int) -> int:
    """Polynomial product over GF(2) reduced by x^8+x^4+x^3+x+1, bit by bit."""
    p = 0
    for i in range(8):
        if b >> i & 1:
            p ^= a << i
    for bit in range(15, 7, -1):
        if p >> bit & 1:
            p ^= 0x11B << (bit - 8)
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
