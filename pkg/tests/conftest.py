import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from fsa_lab.automaton import Automaton


def make_automaton(nq, na, nb, delta_codes, omega_codes):
    Q = [f"q{i}" for i in range(nq)]
    A = [str(i) for i in range(na)]
    B = [str(i) for i in range(nb)]
    delta = {Q[i]: {A[a]: Q[delta_codes[i][a]] for a in range(na)} for i in range(nq)}
    omega = {Q[i]: B[omega_codes[i]] for i in range(nq)}
    return Automaton(A, Q, B, Q[0], delta, omega=omega)


def random_automaton(rng, nq, na=2, nb=2):
    d = rng.integers(nq, size=(nq, na)).tolist()
    o = rng.integers(nb, size=nq).tolist()
    return make_automaton(nq, na, nb, d, o)


@st.composite
def automata(draw, max_states=4, max_letters=2, max_outputs=2):
    nq = draw(st.integers(1, max_states))
    na = draw(st.integers(1, max_letters))
    nb = draw(st.integers(1, max_outputs))
    d = [[draw(st.integers(0, nq - 1)) for _ in range(na)] for _ in range(nq)]
    o = [draw(st.integers(0, nb - 1)) for _ in range(nq)]
    return make_automaton(nq, na, nb, d, o)


def all_words(alphabet, n):
    return [list(w) for w in itertools.product(alphabet, repeat=n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
