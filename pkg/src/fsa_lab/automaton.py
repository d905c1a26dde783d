"""Moore automata, letter-to-letter transducers, and the built-in catalog.

States and letters are named by strings.  Internally every machine keeps
dense integer tables (``delta_table[q, a]`` and friends) so the hot loops in
the other modules never touch dictionaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import InputValidationError, ParseError

Word = Sequence[str]
LTR = "ltr"
RTL = "rtl"


def _check_names(kind: str, names: Sequence[str]) -> tuple[str, ...]:
    names = tuple(str(x) for x in names)
    if not names:
        raise ParseError(f"{kind} must be non-empty")
    if len(set(names)) != len(names):
        raise ParseError(f"{kind} contains duplicates")
    return names


def _table(kind, states, alphabet, mapping, targets) -> np.ndarray:
    index = {s: i for i, s in enumerate(targets)}
    table = np.empty((len(states), len(alphabet)), dtype=np.int64)
    for i, q in enumerate(states):
        row = mapping.get(q)
        if row is None:
            raise ParseError(f"{kind} has no row for state {q!r}")
        for j, a in enumerate(alphabet):
            if a not in row:
                raise ParseError(f"{kind} undefined at ({q!r}, {a!r})")
            target = str(row[a])
            if target not in index:
                raise ParseError(f"{kind}({q!r}, {a!r}) = {target!r} is not declared")
            table[i, j] = index[target]
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class _Machine:
    input_alphabet: tuple[str, ...]
    states: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    initial: str
    delta: Mapping[str, Mapping[str, str]]
    delta_table: np.ndarray = field(init=False, repr=False, compare=False)
    letter_index: dict = field(init=False, repr=False, compare=False)
    state_index: dict = field(init=False, repr=False, compare=False)
    output_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        A = _check_names("input alphabet", self.input_alphabet)
        Q = _check_names("state set", self.states)
        B = _check_names("output alphabet", self.output_alphabet)
        object.__setattr__(self, "input_alphabet", A)
        object.__setattr__(self, "states", Q)
        object.__setattr__(self, "output_alphabet", B)
        if self.initial not in Q:
            raise ParseError(f"initial state {self.initial!r} is not declared")
        object.__setattr__(self, "delta_table", _table("delta", Q, A, self.delta, Q))
        delta = {q: {a: str(self.delta[q][a]) for a in A} for q in Q}
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "letter_index", {a: i for i, a in enumerate(A)})
        object.__setattr__(self, "state_index", {q: i for i, q in enumerate(Q)})
        object.__setattr__(self, "output_index", {b: i for i, b in enumerate(B)})

    @property
    def q0(self) -> int:
        return self.state_index[self.initial]

    def encode(self, x: Iterable[str]) -> np.ndarray:
        """Map a word to letter indices, rejecting foreign letters."""
        out = []
        for pos, a in enumerate(x):
            i = self.letter_index.get(a)
            if i is None:
                raise InputValidationError(
                    f"letter {a!r} at position {pos + 1} is not in the input alphabet")
            out.append(i)
        return np.asarray(out, dtype=np.int64)

    def state_id(self, q: str) -> int:
        try:
            return self.state_index[q]
        except KeyError:
            raise InputValidationError(f"unknown state {q!r}") from None


@dataclass(frozen=True)
class Automaton(_Machine):
    """Moore machine (A, Q, B, q0, delta, omega)."""

    omega: Mapping[str, str] = field(default_factory=dict)
    omega_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        super().__post_init__()
        table = np.empty(len(self.states), dtype=np.int64)
        for i, q in enumerate(self.states):
            if q not in self.omega:
                raise ParseError(f"omega undefined at {q!r}")
            b = str(self.omega[q])
            if b not in self.output_index:
                raise ParseError(f"omega({q!r}) = {b!r} is not declared")
            table[i] = self.output_index[b]
        table.setflags(write=False)
        object.__setattr__(self, "omega_table", table)
        object.__setattr__(self, "omega", {q: str(self.omega[q]) for q in self.states})


@dataclass(frozen=True)
class Transducer(_Machine):
    """Mealy machine emitting one output letter per consumed input letter."""

    lam: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    direction: str = LTR
    lambda_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if self.direction not in (LTR, RTL):
            raise ParseError(f"direction must be 'ltr' or 'rtl', got {self.direction!r}")
        table = _table("lambda", self.states, self.input_alphabet, self.lam, self.output_alphabet)
        object.__setattr__(self, "lambda_table", table)
        object.__setattr__(self, "lam", {
            q: {a: str(self.lam[q][a]) for a in self.input_alphabet} for q in self.states})

    def with_direction(self, direction: str) -> "Transducer":
        return Transducer(self.input_alphabet, self.states, self.output_alphabet,
                          self.initial, self.delta, lam=self.lam, direction=direction)


Machine = Union[Automaton, Transducer]


def run(M: _Machine, q: str, x: Word) -> str:
    """Return delta*(q, x)."""
    s = M.state_id(q)
    table = M.delta_table
    for a in M.encode(x):
        s = table[s, a]
    return M.states[s]


def output_trace(M: Automaton, x: Word) -> list[str]:
    """Letter m is omega(q0 x[1..m]); no output before the first input."""
    s = M.q0
    out = []
    for a in M.encode(x):
        s = M.delta_table[s, a]
        out.append(M.output_alphabet[M.omega_table[s]])
    return out


def run_transducer(T: Transducer, x: Word) -> list[str]:
    """Run T in its declared direction; output keeps the input's positions."""
    codes = T.encode(x)
    if T.direction == RTL:
        codes = codes[::-1]
    s = T.q0
    out = []
    for a in codes:
        out.append(T.output_alphabet[T.lambda_table[s, a]])
        s = T.delta_table[s, a]
    if T.direction == RTL:
        out.reverse()
    return out


def run_transducer_codes(T: Transducer, X: np.ndarray) -> np.ndarray:
    """Vectorised run over a batch of encoded words, shape (batch, length)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    cols = range(X.shape[1])
    if T.direction == RTL:
        cols = reversed(cols)
    out = np.empty_like(X)
    s = np.full(X.shape[0], T.q0, dtype=np.int64)
    for j in cols:
        a = X[:, j]
        out[:, j] = T.lambda_table[s, a]
        s = T.delta_table[s, a]
    return out


def as_transducer(M: Automaton, direction: str = LTR) -> Transducer:
    """Degenerate Mealy view with lambda(q, a) = omega(delta(q, a))."""
    lam = {q: {a: M.omega[M.delta[q][a]] for a in M.input_alphabet} for q in M.states}
    return Transducer(M.input_alphabet, M.states, M.output_alphabet, M.initial,
                      M.delta, lam=lam, direction=direction)


# ---------------------------------------------------------------- catalog

def _parity() -> Automaton:
    return Automaton(("0", "1"), ("E", "O"), ("0", "1"), "E",
                     {"E": {"0": "E", "1": "O"}, "O": {"0": "O", "1": "E"}},
                     omega={"E": "0", "O": "1"})


def _serial_add() -> Automaton:
    A = ("00", "01", "10", "11")
    Q = tuple(f"({c},{s})" for c in (0, 1) for s in (0, 1))
    delta = {}
    for c in (0, 1):
        for s in (0, 1):
            row = {}
            for a in A:
                t = int(a[0]) + int(a[1]) + c
                row[a] = f"({t // 2},{t % 2})"
            delta[f"({c},{s})"] = row
    omega = {q: q[3] for q in Q}
    return Automaton(A, Q, ("0", "1"), "(0,0)", delta, omega=omega)


def _last1() -> Automaton:
    return Automaton(("0", "1"), ("z", "o"), ("0", "1"), "z",
                     {q: {"0": "z", "1": "o"} for q in ("z", "o")},
                     omega={"z": "0", "o": "1"})


def _firstlast() -> Automaton:
    delta = {"I": {"0": "F0", "1": "Fo"}, "F0": {"0": "F0", "1": "F0"},
             "Fz": {"0": "Fz", "1": "Fo"}, "Fo": {"0": "Fz", "1": "Fo"}}
    omega = {"I": "0", "F0": "0", "Fz": "0", "Fo": "1"}
    return Automaton(("0", "1"), ("I", "F0", "Fz", "Fo"), ("0", "1"), "I", delta, omega=omega)


_CATALOG = {"PARITY": _parity, "SERIAL_ADD": _serial_add,
            "LAST1": _last1, "FIRSTLAST": _firstlast}
CATALOG_NAMES = tuple(_CATALOG)


def builtin(name: str) -> Automaton:
    try:
        return _CATALOG[name]()
    except KeyError:
        raise ParseError(f"unknown builtin {name!r}; known: {', '.join(_CATALOG)}") from None


# -------------------------------------------------------------------- I/O

def machine_to_dict(M: Machine) -> dict:
    d = {"type": "moore" if isinstance(M, Automaton) else "mealy"}
    if isinstance(M, Transducer):
        d["direction"] = M.direction
    d.update(input_alphabet=list(M.input_alphabet), output_alphabet=list(M.output_alphabet),
             states=list(M.states), initial=M.initial,
             delta={q: dict(M.delta[q]) for q in M.states})
    if isinstance(M, Automaton):
        d["omega"] = dict(M.omega)
    else:
        d["lambda"] = {q: dict(M.lam[q]) for q in M.states}
    return d


def machine_from_dict(d: Mapping) -> Machine:
    try:
        kind = d["type"]
        common = (d["input_alphabet"], d["states"], d["output_alphabet"], str(d["initial"]),
                  d["delta"])
        if kind == "moore":
            return Automaton(*common, omega=d["omega"])
        if kind == "mealy":
            return Transducer(*common, lam=d["lambda"], direction=d.get("direction", LTR))
    except KeyError as e:
        raise ParseError(f"missing field {e.args[0]!r}") from None
    except (TypeError, AttributeError) as e:
        raise ParseError(f"malformed machine description: {e}") from None
    raise ParseError(f"type must be 'moore' or 'mealy', got {kind!r}")


def dumps_machine(M: Machine) -> str:
    return json.dumps(machine_to_dict(M), indent=2, ensure_ascii=False) + "\n"


def load_machine(path: Union[str, Path]) -> Machine:
    text = Path(path).read_text(encoding="utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    try:
        return machine_from_dict(d)
    except ParseError as e:
        raise ParseError(f"{path}: {e}") from None


def save_machine(M: Machine, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_machine(M), encoding="utf-8")


def resolve(source: str) -> Machine:
    """A builtin name or a path to a machine file."""
    if source in _CATALOG:
        return builtin(source)
    if not Path(source).exists():
        raise ParseError(f"{source!r} is neither a builtin nor an existing file")
    return load_machine(source)
