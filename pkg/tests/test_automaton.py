import json

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import automata
from fsa_lab.automaton import (Automaton, Transducer, as_transducer, builtin, dumps_machine,
                               load_machine, machine_from_dict, machine_to_dict, output_trace,
                               resolve, run, run_transducer, run_transducer_codes, save_machine,
                               CATALOG_NAMES, LTR, RTL)
from fsa_lab.errors import InputValidationError, ParseError


def test_catalog_names():
    assert set(CATALOG_NAMES) == {"PARITY", "SERIAL_ADD", "LAST1", "FIRSTLAST"}
    for name in CATALOG_NAMES:
        assert isinstance(builtin(name), Automaton)


def test_parity_trace():
    assert output_trace(builtin("PARITY"), list("1101")) == ["1", "0", "0", "1"]


def test_serial_add_trace():
    # 3 + 1 = 4 written least significant first: 11 + 10 -> 001
    x = ["11", "10", "00"]
    assert output_trace(builtin("SERIAL_ADD"), x) == ["0", "0", "1"]


def test_last1_and_firstlast():
    assert output_trace(builtin("LAST1"), list("0110")) == list("0110")
    assert output_trace(builtin("FIRSTLAST"), list("10011")) == list("10011")
    assert output_trace(builtin("FIRSTLAST"), list("00011")) == list("00000")


def test_run_returns_final_state():
    M = builtin("PARITY")
    assert run(M, "E", list("111")) == "O"


def test_bad_letter_rejected():
    with pytest.raises(InputValidationError):
        output_trace(builtin("PARITY"), ["2"])


def test_undefined_transition_is_parse_error():
    with pytest.raises(ParseError):
        Automaton(["0"], ["a"], ["0"], "a", {"a": {}}, omega={"a": "0"})
    with pytest.raises(ParseError):
        Automaton(["0"], ["a"], ["0"], "a", {"a": {"0": "b"}}, omega={"a": "0"})


def test_load_reports_line(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"type": "moore",\n "states": [}', encoding="utf-8")
    with pytest.raises(ParseError, match="line 2"):
        load_machine(p)


def test_resolve_unknown():
    with pytest.raises(ParseError):
        resolve("NO_SUCH_MACHINE")


def test_file_roundtrip(tmp_path):
    M = builtin("SERIAL_ADD")
    save_machine(M, tmp_path / "s.json")
    N = load_machine(tmp_path / "s.json")
    assert dumps_machine(N) == dumps_machine(M)


@settings(max_examples=60, deadline=None)
@given(automata())
def test_dict_roundtrip(M):
    d = machine_to_dict(M)
    N = machine_from_dict(json.loads(json.dumps(d)))
    assert machine_to_dict(N) == d


def test_transducer_directions():
    T = as_transducer(builtin("PARITY"), RTL)
    # scanning right to left, position i sees the parity of x[i:]
    assert run_transducer(T, list("1101")) == ["1", "0", "1", "1"]
    assert run_transducer(T.with_direction(LTR), list("1101")) == ["1", "0", "0", "1"]


@settings(max_examples=40, deadline=None)
@given(automata(max_letters=3))
def test_code_runner_matches_scalar(M):
    T = as_transducer(M, RTL)
    rng = np.random.default_rng(len(M.states))
    X = rng.integers(len(M.input_alphabet), size=(5, 7))
    Y = run_transducer_codes(T, X)
    for x, y in zip(X, Y):
        word = [M.input_alphabet[a] for a in x]
        assert [T.output_alphabet[b] for b in y] == run_transducer(T, word)


def test_transducer_type():
    T = as_transducer(builtin("LAST1"))
    assert isinstance(T, Transducer)
    assert T.direction == LTR
