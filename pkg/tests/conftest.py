import math

import pytest
from hypothesis import strategies as st

from photon_mediation.fock import PureState
from photon_mediation.network import build_fig1
from photon_mediation.postselect import run_protocol

RAILS4 = ("r0", "r1", "r2", "r3")


@pytest.fixture(scope="session")
def fig1():
    return build_fig1()


@pytest.fixture(scope="session")
def protocol(fig1):
    return run_protocol(fig1)


def eq7_state():
    s6, s3 = math.sqrt(6), math.sqrt(3)
    rails = ("A1", "B1", "A2", "B2", "A3", "B3")
    return PureState(rails, {
        (1, 0, 0, 1, 0, 1): 1j / s6,
        (0, 1, 1, 0, 1, 0): 1 / s6,
        (0, 1, 1, 0, 0, 1): 1j / s3,
        (0, 1, 0, 1, 0, 1): -1 / s3,
    })


_amp = st.complex_numbers(min_magnitude=0.05, max_magnitude=2.0, allow_nan=False, allow_infinity=False)
_occ = st.tuples(*[st.integers(0, 2)] * 4).filter(lambda o: sum(o) <= 3)


@st.composite
def small_states(draw, rails=RAILS4):
    terms = draw(st.dictionaries(_occ, _amp, min_size=1, max_size=5))
    s = PureState(rails, terms)
    return s / s.norm
