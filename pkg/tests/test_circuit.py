import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import automata, make_automaton
from fsa_lab import _kernels as K
from fsa_lab.automaton import as_transducer, builtin, output_trace, run_transducer
from fsa_lab.circuit import (Circuit, CircuitBuilder, circuit_from_dict, cost, full_family,
                             knowledge_closure, knowledge_gate, load_circuit, logical_depth,
                             physical_depth, single_wire, synth_prefix, synth_standard)
from fsa_lab.delay import settle
from fsa_lab.errors import ContractError, GuardrailError, UnsupportedSemanticsError


def decoded(C, word):
    return settle(C, word).decoded


def test_single_wire_depths():
    C = single_wire(5)
    assert logical_depth(C) == 2
    assert physical_depth(C) == 7
    assert physical_depth(C.with_coeff(Fraction(1, 2))) == Fraction(9, 2)


def test_parity_physical_depth_grows():
    for n in (16, 32, 64):
        assert physical_depth(synth_standard(builtin("PARITY"), n)) >= n - 1


def test_last1_physical_depth_constant():
    assert len({physical_depth(synth_standard(builtin("LAST1"), n)) for n in (4, 16, 64)}) == 1


def test_prefix_depth_logarithmic():
    d = [logical_depth(synth_prefix(builtin("SERIAL_ADD"), n)) for n in (8, 16, 32, 64)]
    assert len({b - a for a, b in zip(d, d[1:])}) == 1


@pytest.mark.parametrize("name", ["PARITY", "SERIAL_ADD", "LAST1", "FIRSTLAST"])
def test_circuits_simulate_the_automaton(name):
    M = builtin(name)
    for n in (1, 2, 4):
        circuits = [synth_standard(M, n), synth_standard(M, n, "full"), synth_prefix(M, n)]
        for C in circuits:
            C.validate()
        for x in itertools.product(M.input_alphabet, repeat=n):
            want = output_trace(M, x)
            for C in circuits:
                assert decoded(C, x) == want


@settings(max_examples=40, deadline=None)
@given(automata(max_states=4, max_letters=3), st.integers(1, 4))
def test_standard_circuit_random(M, n):
    C = synth_standard(M, n)
    C.validate()
    rng = np.random.default_rng(n)
    for _ in range(10):
        x = [M.input_alphabet[a] for a in rng.integers(len(M.input_alphabet), size=n)]
        prof = settle(C, x)
        assert prof.decoded == output_trace(M, x)
        # exactly one output letter rises per step
        assert (np.isfinite(prof.outputs).sum(axis=1) == 1).all()


@settings(max_examples=30, deadline=None)
@given(automata(max_states=3, max_letters=2), st.integers(1, 5))
def test_closure_and_full_settle_alike(M, n):
    Cc, Cf = synth_standard(M, n), synth_standard(M, n, "full")
    for x in itertools.product(M.input_alphabet, repeat=n):
        assert np.array_equal(settle(Cc, x).settle_times, settle(Cf, x).settle_times)


def test_transducer_circuits_both_directions():
    for direction in ("ltr", "rtl"):
        T = as_transducer(builtin("SERIAL_ADD"), direction)
        C = synth_standard(T, 5)
        for x in itertools.product(T.input_alphabet, repeat=3):
            x = list(x) + ["00", "11"]
            assert decoded(C, x) == run_transducer(T, x)


def test_settle_never_gets_shorter_with_wire_cost():
    M = builtin("SERIAL_ADD")
    C0 = synth_standard(M, 16, wire_coeff=0)
    C1 = synth_standard(M, 16, wire_coeff=1)
    x = ["01"] * 15 + ["11"]
    assert settle(C1, x).delay >= settle(C0, x).delay


def test_knowledge_gate_rises_for_true_sets():
    M = builtin("FIRSTLAST")
    C = synth_standard(M, 4)
    fam = knowledge_closure(M)
    x = list("1001")
    prof = settle(C, x)
    q = M.initial
    for m, a in enumerate(x, 1):
        q = M.delta[q][a]
        for S in fam.subsets:
            g = knowledge_gate(C, m, S)
            if g < 0 or q in S:
                continue
            assert not np.isfinite(prof.rise[g])


def test_full_family_guardrail():
    n = 13
    M = make_automaton(n, 1, 2, [[(i + 1) % n] for i in range(n)], [i % 2 for i in range(n)])
    with pytest.raises(GuardrailError) as e:
        full_family(M)
    assert e.value.cap > 0


def test_not_on_signal_rejected():
    b = CircuitBuilder(1)
    x = b.single(K.INPUT, 1, ("in",))
    y = b.single(K.INPUT, 1, ("in",))
    nx = b.single(K.NOT, 1, ("not",), x)
    o0 = b.single(K.OUTPUT, 1, ("out",), nx)
    o1 = b.single(K.OUTPUT, 1, ("out",), y)
    kind, src, pos = b.arrays()
    C = Circuit(kind, src, pos, 1, ("0", "1"), ("0", "1"),
                np.array([[x, y]]), np.array([[o0, o1]]))
    C.validate()
    with pytest.raises(UnsupportedSemanticsError):
        settle(C, ["0"])


def test_validate_rejects_bad_fan_in():
    C = single_wire(1)
    src = C.src.copy()
    src[-1, 1] = 0
    bad = Circuit(C.kind, src, C.pos, C.n, C.input_alphabet, C.output_alphabet,
                  C.input_map, C.output_map)
    with pytest.raises(ContractError):
        bad.validate()


def test_json_roundtrip(tmp_path):
    C = synth_standard(builtin("FIRSTLAST"), 5, wire_coeff=Fraction(3, 2))
    C.save(tmp_path / "c.json")
    D = load_circuit(tmp_path / "c.json")
    assert D.dumps() == C.dumps()
    assert physical_depth(D) == physical_depth(C)
    assert cost(D) == cost(C)
    assert circuit_from_dict(C.to_dict()).n == 5


def test_cost_linear_for_standard():
    g1, w1 = cost(synth_standard(builtin("SERIAL_ADD"), 32))
    g2, w2 = cost(synth_standard(builtin("SERIAL_ADD"), 64))
    assert g2 <= 2 * g1 + 8
    assert w2 <= 2 * w1 + 8


def test_closure_family_within_full_family():
    M = builtin("SERIAL_ADD")
    fam = knowledge_closure(M)
    assert all(S for S in fam.subsets)
    assert set(fam.subsets) <= set(full_family(M).subsets)
