import warnings

import pytest

from nsgamma.dynamics import FragmentParams, NarrowResonanceWarning
from nsgamma.shape import Polarizability
from nsgamma.units import Energy, Length


@pytest.fixture
def xe140():
    return FragmentParams.xe140_defaults()


def make_params(hw2=2.2, hw3=2.8, b2=0.7, b3=0.7, g2=0.0032910597845, g3=0.0032910597845, kappa=5.0 / 0.49):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NarrowResonanceWarning)
        return FragmentParams(
            Energy(hw2), Energy(hw3), b2, b3, Energy(g2), Energy(g3), Polarizability(Length(kappa))
        )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
