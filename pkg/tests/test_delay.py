import io
import itertools
from math import log2

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import automata
from fsa_lab.automaton import builtin
from fsa_lab.circuit import logical_depth, synth_prefix, synth_standard
from fsa_lab.delay import (CSV_FIELDS, GrowthFit, dependence_set_bruteforce,
                           dependence_set_exact, fit_growth, max_suffix_determination,
                           read_csv, settle, settle_codes, simulate_average, suffix_determination,
                           uniform_words, uniforms, write_csv)
from fsa_lab.errors import ContractError, GuardrailError

NS = [64, 128, 256, 512, 1024, 2048, 4096]


# ---------------------------------------------------------------- RNG

def test_uniforms_reproducible_and_independent_of_batching():
    a = uniforms(7, range(10), 5)
    b = np.vstack([uniforms(7, [t], 5) for t in range(10)])
    assert np.array_equal(a, b)
    assert ((a >= 0) & (a < 1)).all()
    assert not np.array_equal(uniforms(7, [0], 5), uniforms(8, [0], 5))


def test_uniform_words_range():
    X = uniform_words(4, 100, 3, range(50))
    assert X.shape == (50, 100)
    assert set(np.unique(X)) == {0, 1, 2, 3}


# ------------------------------------------------------------ settle

def test_settle_example():
    C = synth_standard(builtin("LAST1"), 3)
    prof = settle(C, list("101"))
    assert prof.decoded == ["1", "0", "1"]
    assert np.isfinite(prof.settle_times).all()


def test_batch_matches_scalar():
    M = builtin("SERIAL_ADD")
    C = synth_standard(M, 12)
    X = uniform_words(4, 12, 1, range(30))
    delays, bad = settle_codes(C, X)
    assert not bad.any()
    for x, d in zip(X, delays):
        assert settle(C, [M.input_alphabet[a] for a in x]).delay == d


# ------------------------------------------------------ suffix forcing

def forced_suffix_oracle(M, x, m):
    """Shortest j whose last-j-letter suffix forces output m, scanning all start states."""
    target = M.omega[_run_from(M, M.initial, x[:m])]
    for j in range(m):
        ends = {_run_from(M, q, x[m - j:m]) for q in M.states}
        if all(M.omega[e] == target for e in ends):
            return j
    return m


def _run_from(M, q, w):
    for a in w:
        q = M.delta[q][a]
    return q


def carry_run_value(x, m):
    """Suffix length needed by the serial adder at step m, from the carry rule."""
    for r, i in enumerate(range(m - 2, -1, -1)):
        if x[i] in ("00", "11"):
            return r + 2
    return m


def test_suffix_examples():
    assert suffix_determination(builtin("LAST1"), list("0110"), 3) == 1
    assert suffix_determination(builtin("PARITY"), list("0110"), 3) == 3


def test_serial_add_carry_rule():
    M = builtin("SERIAL_ADD")
    for x in itertools.product(M.input_alphabet, repeat=4):
        for m in range(1, 5):
            assert suffix_determination(M, list(x), m) == carry_run_value(x, m)


@settings(max_examples=40, deadline=None)
@given(automata(max_states=5, max_letters=3), st.integers(1, 8), st.integers(0, 1000))
def test_suffix_kernel_matches_oracle(M, n, seed):
    X = uniform_words(len(M.input_alphabet), n, seed, range(8))
    got = max_suffix_determination(M, X)
    for x, g in zip(X, got):
        word = [M.input_alphabet[a] for a in x]
        want = max(forced_suffix_oracle(M, word, m) for m in range(1, n + 1))
        assert g == want
        assert want == max(suffix_determination(M, word, m) for m in range(1, n + 1))


# -------------------------------------------------------- dependence

def test_dependence_examples():
    assert dependence_set_exact(builtin("PARITY"), 5, 5) == {1, 2, 3, 4, 5}
    assert dependence_set_exact(builtin("FIRSTLAST"), 5, 5) == {1, 5}
    assert dependence_set_bruteforce(builtin("LAST1"), 6, 6) == {6}
    assert dependence_set_bruteforce(builtin("PARITY"), 4, 2) == {1, 2}
    assert dependence_set_bruteforce(builtin("SERIAL_ADD"), 5, 5) == {1, 2, 3, 4, 5}


def test_bruteforce_guardrail():
    with pytest.raises(GuardrailError) as e:
        dependence_set_bruteforce(builtin("SERIAL_ADD"), 11, 11)
    assert e.value.cap == 2 ** 20


@settings(max_examples=60, deadline=None)
@given(automata(max_states=3, max_letters=2), st.integers(1, 9), st.data())
def test_dependence_exact_matches_bruteforce(M, n, data):
    m = data.draw(st.integers(1, n))
    assert dependence_set_exact(M, n, m) == dependence_set_bruteforce(M, n, m)


@pytest.mark.parametrize("name", ["SERIAL_ADD", "FIRSTLAST", "PARITY"])
def test_settle_respects_wire_distance(name):
    M = builtin(name)
    n = 6
    C = synth_standard(M, n)
    worst = np.zeros(n)
    for x in itertools.product(M.input_alphabet, repeat=n):
        worst = np.maximum(worst, settle(C, x).settle_times)
    for m in range(1, n + 1):
        dep = dependence_set_exact(M, n, m)
        assert worst[m - 1] >= max(m - i for i in dep)


@pytest.mark.parametrize("name", ["SERIAL_ADD", "FIRSTLAST", "PARITY", "LAST1"])
def test_logical_depth_at_least_log_dependence(name):
    M = builtin(name)
    for n in (4, 16, 64):
        d = len(dependence_set_exact(M, n, n))
        for C in (synth_standard(M, n), synth_prefix(M, n)):
            assert logical_depth(C) >= log2(d)


# --------------------------------------------------------- simulation

def test_simulation_deterministic():
    M = builtin("SERIAL_ADD")
    a = simulate_average(M, 64, 200, seed=5, name="SERIAL_ADD")
    b = simulate_average(M, 64, 200, seed=5, name="SERIAL_ADD")
    assert np.array_equal(a.delays, b.delays)
    assert write_csv([a]) == write_csv([b])
    assert a.bad_steps == 0


def test_parity_average_is_linear():
    r = simulate_average(builtin("PARITY"), 128, 100, seed=2)
    assert r.summary["mean"] >= 0.9 * 127


def test_last1_max_constant():
    maxima = {simulate_average(builtin("LAST1"), n, 100, seed=3).summary["max"]
              for n in (16, 128, 512)}
    assert len(maxima) == 1


def test_zeckendorf_input_model():
    r = simulate_average(builtin("LAST1"), 32, 50, "zeckendorf", seed=1)
    assert r.model == "zeckendorf"
    with pytest.raises(ContractError):
        simulate_average(builtin("SERIAL_ADD"), 8, 10, "zeckendorf")


def test_trials_must_be_positive():
    with pytest.raises(ContractError):
        simulate_average(builtin("LAST1"), 8, 0)


def test_csv_roundtrip():
    M = builtin("LAST1")
    rs = [simulate_average(M, n, 20, seed=1, name="LAST1") for n in (8, 16)]
    text = write_csv(rs, comments=["fit Constant"])
    rows = read_csv(text)
    assert [int(r["n"]) for r in rows] == [8, 16]
    assert list(rows[0]) == list(CSV_FIELDS)
    for r, res in zip(rows, rs):
        assert float(r["mean"]) == res.summary["mean"]
        assert float(r["tail_d8"]) == res.summary["tail_d8"]
    assert text.endswith("# fit Constant\n")
    buf = io.StringIO()
    write_csv(rs, buf)
    assert read_csv(buf.getvalue()) == read_csv(write_csv(rs))


# ------------------------------------------------------------ fitting

def test_fit_examples():
    f = fit_growth([(n, 7.0) for n in NS])
    assert (f.model, round(f.coefficient, 9)) == ("Constant", 7.0)
    f = fit_growth([(n, 3 * log2(n)) for n in NS])
    assert (f.model, round(f.coefficient, 9)) == ("Log", 3.0)
    rng = np.random.default_rng(0)
    f = fit_growth([(n, 0.5 * n * (1 + 0.01 * rng.uniform(-1, 1))) for n in NS])
    assert f.model == "Linear"
    assert isinstance(f, GrowthFit) and f.describe().startswith("fit Linear")


def test_fit_needs_points():
    with pytest.raises(ContractError):
        fit_growth([(64, 1), (128, 1), (256, 1)])
    with pytest.raises(ContractError):
        fit_growth([(64, 1), (70, 1), (80, 1), (90, 1)])


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["Constant", "Log", "Linear"]), st.floats(0.5, 50))
def test_fit_recovers_exact_models(model, c):
    f = {"Constant": lambda n: c, "Log": lambda n: c * log2(n), "Linear": lambda n: c * n}[model]
    fit = fit_growth([(n, f(n)) for n in NS])
    assert fit.model == model
    assert fit.coefficient == pytest.approx(c)


@pytest.mark.parametrize("name", ["SERIAL_ADD", "PARITY", "LAST1", "FIRSTLAST"])
def test_settle_bounded_by_forcing_suffix(name):
    M = builtin(name)
    nA = len(M.input_alphabet)

    def sample(n, seed):
        X = uniform_words(nA, n, seed, range(2000))
        return settle_codes(synth_standard(M, n), X)[0], max_suffix_determination(M, X)

    # calibrate an affine envelope once on small sizes
    parts = [sample(n, 1) for n in (8, 16)]
    d = np.concatenate([p[0] for p in parts])
    s = np.concatenate([p[1] for p in parts])
    vals = np.unique(s)
    top = {v: d[s == v].max() for v in vals}
    c2 = max([(top[v] - top[vals[0]]) / (v - vals[0]) for v in vals[1:]], default=0.0)
    c1 = float((d - c2 * s).max())
    for n in (64, 256, 1024):
        d, s = sample(n, 2)
        assert (d <= c1 + c2 * s + 1e-9).all()
