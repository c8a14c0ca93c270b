import math

import numpy as np
import pytest
from hypothesis import strategies as st

from spinpair.bloch import BasisSpec, SingleQubitState
from spinpair.pairstate import PairKind, PairState

polar = st.floats(0.0, math.pi, allow_nan=False)
azimuth = st.floats(0.0, 2 * math.pi, allow_nan=False, exclude_max=True)
weight = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def bases(draw):
    return BasisSpec(draw(polar), draw(azimuth))


@st.composite
def qubits(draw):
    return SingleQubitState.from_angles(draw(polar), draw(azimuth))


@st.composite
def pairs(draw, kind=None):
    p = draw(weight)
    k = kind or draw(st.sampled_from(list(PairKind)))
    return PairState(k, p, math.sqrt(1.0 - p * p), draw(azimuth))


@pytest.fixture
def rng():
    return np.random.default_rng(20260916)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
