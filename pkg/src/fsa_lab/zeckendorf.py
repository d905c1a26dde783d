"""Zeckendorf addition by three letter-to-letter passes, and its statistics.

A Zeckendorf word of size n lists digits a_n ... a_2 (most significant
first) with value sum a_i F_i and no two adjacent ones.  Adding two such
words position-wise gives a digit-sum word over {0, 1, 2}; two leading
zeros are prepended so the normalized sum always fits.

Each position then reads the window (d_i, d_{i-1}, d_{i-2}) of its own
digit and the two below it.  A letter-to-letter pass cannot look ahead,
and the window is what lets the first pass know how a run of zeros ends.
The passes are

1. most significant first: carries 2s and 3s downward with the rewrites
   0200 -> 1001, 0300 -> 1101, 021 -> 110, 012 -> 101, leaving a 0/1 word
   plus a flag marking a pending +1 at the next lower position;
2. least significant first: settles those flags and labels every 1 as the
   bottom of its run of ones, the one just above the bottom, or other;
3. most significant first: rewrites each run of ones (11 -> 100 from the
   top) using the run's parity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from . import _kernels as K
from .automaton import (LTR, RTL, Transducer, load_machine, machine_to_dict,
                        run_transducer, run_transducer_codes, save_machine)
from .circuit import Circuit, CircuitBuilder, knowledge_closure
from .classify import reduce_transducer
from .delay import SimResult, settle_codes, uniforms
from .errors import InputValidationError, PipelineContractError


# ---------------------------------------------------------------- numbers

def fib(i: int) -> int:
    if i < 0:
        raise InputValidationError("fib needs i >= 0")
    return _fib(i)


@lru_cache(maxsize=None)
def _fib(i: int) -> int:
    a, b = 0, 1
    for _ in range(i):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class ZeckWord:
    """Digits a_n ... a_2, most significant first."""

    digits: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.digits)
        if any(x not in (0, 1) for x in d):
            raise InputValidationError("Zeckendorf digits must be 0 or 1")
        if any(d[i] and d[i + 1] for i in range(len(d) - 1)):
            raise InputValidationError("Zeckendorf words have no adjacent ones")
        object.__setattr__(self, "digits", d)

    @property
    def n(self) -> int:
        return len(self.digits) + 1

    @property
    def value(self) -> int:
        return zeck_decode(self)

    @classmethod
    def parse(cls, text: str) -> "ZeckWord":
        text = text.strip()
        if not text or any(c not in "01" for c in text):
            raise InputValidationError(f"{text!r} is not a 0/1 digit string")
        return cls(tuple(int(c) for c in text))

    def padded(self, n: int) -> "ZeckWord":
        if n < self.n:
            raise InputValidationError(f"cannot shrink a size-{self.n} word to {n}")
        return ZeckWord((0,) * (n - self.n) + self.digits)

    def stripped(self) -> str:
        return "".join(map(str, self.digits)).lstrip("0") or "0"

    def __str__(self) -> str:
        return "".join(map(str, self.digits))


def zeck_encode(M: int, n: int) -> ZeckWord:
    """Greedy representation of M with digits a_n ... a_2."""
    if n < 1:
        raise InputValidationError("n must be at least 1")
    if not 0 <= M <= fib(n + 1) - 1:
        raise InputValidationError(f"{M} is outside [0, F_{n + 1} - 1] = [0, {fib(n + 1) - 1}]")
    digits = []
    for i in range(n, 1, -1):
        if fib(i) <= M:
            digits.append(1)
            M -= fib(i)
        else:
            digits.append(0)
    return ZeckWord(tuple(digits))


def zeck_decode(w: ZeckWord) -> int:
    n = w.n
    return sum(fib(n - k) for k, x in enumerate(w.digits) if x)


def width_for(M: int) -> int:
    """Smallest n with M <= F_{n+1} - 1."""
    n = 1
    while fib(n + 1) - 1 < M:
        n += 1
    return n


def zeck_add_oracle(a: ZeckWord, b: ZeckWord) -> ZeckWord:
    n = max(a.n, b.n)
    return zeck_encode(zeck_decode(a) + zeck_decode(b), n + 2)


def valid_words(n: int) -> Iterator[ZeckWord]:
    """All size-n words in increasing value order."""
    for M in range(fib(n + 1)):
        yield zeck_encode(M, n)


@dataclass(frozen=True)
class DigitSumWord:
    """Position-wise sum of two equal-size words, letters in {0, 1, 2}."""

    letters: tuple[int, ...]

    def __post_init__(self):
        if any(x not in (0, 1, 2) for x in self.letters):
            raise InputValidationError("digit sums lie in {0, 1, 2}")


def digit_sum(a: ZeckWord, b: ZeckWord) -> DigitSumWord:
    if a.n != b.n:
        raise InputValidationError(f"operand sizes differ ({a.n} vs {b.n})")
    return DigitSumWord(tuple(x + y for x, y in zip(a.digits, b.digits)))


# ------------------------------------------------------------ pass rules

_REWRITES = {(0, 2, 0): ((1, 0, 0), 1), (0, 3, 0): ((1, 1, 0), 1),
             (0, 2, 1): ((1, 1, 0), 0), (0, 1, 2): ((1, 0, 1), 0)}


def windows(d: Sequence[int]) -> list[tuple[int, int, int]]:
    z = list(d) + [0, 0]
    return [tuple(z[k:k + 3]) for k in range(len(d))]


def valid_windows() -> list[tuple[int, int, int]]:
    """Windows that occur in digit-sum words: a 2 always has zero neighbours."""
    out = []
    for w in product(range(3), repeat=3):
        if all(not (w[i] == 2 and ((i > 0 and w[i - 1]) or (i < 2 and w[i + 1])))
               for i in range(3)):
            out.append(w)
    return out


def _carry_step(s, letter):
    # s: carries still owed to the current, next and next-but-one positions,
    # plus the two digits they were computed against
    m1, m2, m3, ex, ey = s
    x, y, z = letter
    if (x, y) != (ex, ey):
        m1 = m2 = m3 = 0
    c = [x + m1, y + m2, z + m3]
    push = 0
    if tuple(c) in _REWRITES:
        new, push = _REWRITES[tuple(c)]
        c = list(new)
    return (c[1] - y, c[2] - z, push, y, z), (min(c[0], 1), int(c[1] > y))


def _role_step(L, letter):
    # L: length of the run of ones seen so far below, capped at 2
    b, f = letter
    if L == 0 and f:
        return (2, (1, "o")) if b else (1, (1, "b"))
    if b:
        return min(L + 1, 2), (1, {0: "b", 1: "s", 2: "o"}[L])
    if L == 2:
        return 1, (1, "b")
    return 0, (0, "-")


def _parity_step(s, letter):
    h, role = letter
    if not h:
        return "N", 0
    dist = 0 if s == "N" else (s + 1) % 2
    out = {"b": int(dist % 2 == 0), "s": 0, "o": int(dist % 2 == 1)}[role]
    return ("N" if role == "b" else dist), out


def _window_name(w) -> str:
    return "".join(map(str, w))


_FLAG_NAMES = {(0, 0): "0", (0, 1): "0+", (1, 0): "1", (1, 1): "1+"}
_ROLE_NAMES = {(0, "-"): "0", (1, "b"): "1b", (1, "s"): "1s", (1, "o"): "1o"}


def tabulate(step: Callable, start, alphabet: Sequence, in_name: Callable, out_name: Callable,
             state_name: Callable, direction: str) -> Transducer:
    """Transducer on the states reachable from start under step."""
    seen = {start: None}
    order = [start]
    for s in order:
        for a in alphabet:
            t, _ = step(s, a)
            if t not in seen:
                seen[t] = None
                order.append(t)
    outs = sorted({out_name(step(s, a)[1]) for s in order for a in alphabet})
    delta = {state_name(s): {in_name(a): state_name(step(s, a)[0]) for a in alphabet}
             for s in order}
    lam = {state_name(s): {in_name(a): out_name(step(s, a)[1]) for a in alphabet}
           for s in order}
    return Transducer([in_name(a) for a in alphabet], [state_name(s) for s in order], outs,
                      state_name(start), delta, lam=lam, direction=direction)


def _tuple_name(s) -> str:
    return "".join(map(str, s)) if isinstance(s, tuple) else str(s)


def build_passes(minimize: bool = True) -> list[Transducer]:
    p1 = tabulate(_carry_step, (0, 0, 0, 0, 0), valid_windows(), _window_name,
                  lambda o: _FLAG_NAMES[o], _tuple_name, LTR)
    p2 = tabulate(_role_step, 0, list(_FLAG_NAMES), lambda o: _FLAG_NAMES[o],
                  lambda o: _ROLE_NAMES[o], lambda s: f"L{s}", RTL)
    p3 = tabulate(_parity_step, "N", list(_ROLE_NAMES), lambda o: _ROLE_NAMES[o],
                  str, lambda s: f"P{s}", LTR)
    passes = [p1, p2, p3]
    if minimize:
        passes = [reduce_transducer(p) for p in passes]
    return passes


# --------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class Pipeline:
    passes: tuple[Transducer, Transducer, Transducer]
    padding: int = 2

    def __post_init__(self):
        if len(self.passes) != 3:
            raise PipelineContractError("a pipeline has exactly three passes")
        if [p.direction for p in self.passes] not in ([LTR, RTL, LTR], [RTL, LTR, RTL]):
            raise PipelineContractError("pass directions must alternate")
        for k in range(2):
            extra = set(self.passes[k].output_alphabet) - set(self.passes[k + 1].input_alphabet)
            if extra:
                raise PipelineContractError(
                    f"pass {k + 1} emits {sorted(extra)} outside pass {k + 2}'s input alphabet")
        if set(self.passes[2].output_alphabet) - {"0", "1"}:
            raise PipelineContractError("the last pass must emit binary digits")

    @property
    def directions(self) -> list[str]:
        return [p.direction for p in self.passes]

    def zero_letters(self) -> list[str]:
        """The zero letter entering each pass."""
        z = ["000"]
        for T in self.passes[:2]:
            z.append(T.lam[T.initial][z[-1]])
        return z

    def letters(self, d: Sequence[int]) -> list[str]:
        return [_window_name(w) for w in windows(d)]

    def run_digits(self, d: Sequence[int]) -> list[int]:
        word = self.letters(d)
        for k, T in enumerate(self.passes):
            bad = [a for a in word if a not in T.letter_index]
            if bad:
                raise PipelineContractError(f"pass {k + 1} received letter {bad[0]!r}")
            word = run_transducer(T, word)
        return [int(a) for a in word]

    def _code_maps(self):
        maps = []
        for k in range(2):
            T, U = self.passes[k], self.passes[k + 1]
            maps.append(np.array([U.letter_index.get(b, -1) for b in T.output_alphabet]))
        win = np.full(27, -1, dtype=np.int64)
        for w in product(range(3), repeat=3):
            name = _window_name(w)
            if name in self.passes[0].letter_index:
                win[w[0] * 9 + w[1] * 3 + w[2]] = self.passes[0].letter_index[name]
        return win, maps

    def run_batch(self, D: np.ndarray) -> np.ndarray:
        """Vectorised run over digit-sum rows (already padded), MSB first."""
        win, maps = self._code_maps()
        D = np.asarray(D, dtype=np.int64)
        Z = np.concatenate([D, np.zeros((D.shape[0], 2), dtype=np.int64)], axis=1)
        X = win[Z[:, :-2] * 9 + Z[:, 1:-1] * 3 + Z[:, 2:]]
        if (X < 0).any():
            raise PipelineContractError("digit-sum word contains an impossible window")
        for k, T in enumerate(self.passes):
            Y = run_transducer_codes(T, X)
            if k < 2:
                X = maps[k][Y]
                if (X < 0).any():
                    raise PipelineContractError(f"pass {k + 1} output left pass {k + 2}'s alphabet")
        out = np.array([int(b) for b in self.passes[2].output_alphabet])
        return out[Y]

    # descriptor -------------------------------------------------------
    def export(self, directory) -> Path:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        files = []
        for k, T in enumerate(self.passes, 1):
            name = f"pass{k}.json"
            save_machine(T, d / name)
            files.append(name)
        desc = {"passes": files, "directions": self.directions, "padding": self.padding,
                "combine": "window3"}
        path = d / "pipeline.json"
        path.write_text(json.dumps(desc, indent=2) + "\n", encoding="utf-8")
        return path


def default_pipeline() -> Pipeline:
    return _default()


@lru_cache(maxsize=1)
def _default() -> Pipeline:
    return Pipeline(tuple(build_passes()))


def load_pipeline(path) -> Pipeline:
    from .errors import ParseError
    path = Path(path)
    if path.is_dir():
        path = path / "pipeline.json"
    try:
        desc = json.loads(path.read_text(encoding="utf-8"))
        files = desc["passes"]
        dirs = desc["directions"]
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise ParseError(f"{path}: bad pipeline descriptor ({e})") from None
    passes = []
    for f, dr in zip(files, dirs):
        T = load_machine(path.parent / f)
        if not isinstance(T, Transducer):
            raise ParseError(f"{f}: pipeline passes must be mealy machines")
        passes.append(T.with_direction(dr))
    return Pipeline(tuple(passes), int(desc.get("padding", 2)))


def pipeline_add(a: ZeckWord, b: ZeckWord, P: Optional[Pipeline] = None) -> ZeckWord:
    P = P or default_pipeline()
    d = (0,) * P.padding + digit_sum(a, b).letters
    return ZeckWord(tuple(P.run_digits(d)))


# ------------------------------------------------------ reset properties

@dataclass
class PropertyResult:
    name: str
    pass_index: Optional[int]
    holds: bool
    counterexample: Optional[list[str]] = None

    def line(self) -> str:
        where = "" if self.pass_index is None else f" pass {self.pass_index}"
        verdict = "PASS" if self.holds else "FAIL"
        tail = "" if self.holds else f" counterexample={self.counterexample}"
        return f"{verdict} {self.name}{where}{tail}"


def _reach_words(T: Transducer) -> dict[int, list[str]]:
    words = {T.q0: []}
    order = [T.q0]
    for s in order:
        for a, name in enumerate(T.input_alphabet):
            t = int(T.delta_table[s, a])
            if t not in words:
                words[t] = words[s] + [name]
                order.append(t)
    return words


def check_reset_properties(P: Pipeline, extra: int = 8) -> list[PropertyResult]:
    """Reset, zero-run shrink and five-zero composite checks, exhaustively.

    Words are listed in each pass's processing order.
    """
    report = []
    zeros = P.zero_letters()
    for k, T in enumerate(P.passes):
        R = 3 if k == 0 else 2
        zin = T.letter_index[zeros[k]]
        zout = T.lam[T.initial][zeros[k]]
        reach = _reach_words(T)
        bad_reset = bad_shrink = None
        for s, w in reach.items():
            t = s
            for _ in range(R):
                t = int(T.delta_table[t, zin])
            if t != T.q0 and bad_reset is None:
                bad_reset = w + [zeros[k]] * R
            for z in range(R, R + extra + 1):
                t, outs = s, []
                for _ in range(z):
                    outs.append(T.output_alphabet[T.lambda_table[t, zin]])
                    t = int(T.delta_table[t, zin])
                trailing = len(outs) - next((i + 1 for i in range(z - 1, -1, -1)
                                             if outs[i] != zout), 0)
                if trailing < z - (R - 1) and bad_shrink is None:
                    bad_shrink = w + [zeros[k]] * z
        report.append(PropertyResult(f"reset by {R} zeros", k + 1, bad_reset is None, bad_reset))
        report.append(PropertyResult(f"{R}+ zeros in give z-{R - 1}+ zeros out", k + 1,
                                     bad_shrink is None, bad_shrink))
    report.append(_composite(P))
    return report


def _composite(P: Pipeline) -> PropertyResult:
    """Five zero digits reset every pass inside the block."""
    T1, T2, T3 = P.passes
    r1, r2, r3 = _reach_words(T1), _reach_words(T2), _reach_words(T3)
    for x1, x2 in product(range(3), repeat=2):
        block = [(0, 0, 0)] * 3 + [(0, 0, x1), (0, x1, x2)]
        names = [_window_name(w) for w in block]
        if any(nm not in T1.letter_index for nm in names):
            continue
        for s1, w1 in r1.items():
            t, o1, after = s1, [], []
            for nm in names:
                a = T1.letter_index[nm]
                o1.append(T1.output_alphabet[T1.lambda_table[t, a]])
                t = int(T1.delta_table[t, a])
                after.append(t)
            if after[2] != T1.q0:
                return PropertyResult("five zeros reset all passes", 1, False, w1 + names)
            for s2, w2 in r2.items():
                t, o2, after = s2, [None] * 5, [None] * 5
                for i in range(4, -1, -1):
                    a = T2.letter_index[o1[i]]
                    o2[i] = T2.output_alphabet[T2.lambda_table[t, a]]
                    t = int(T2.delta_table[t, a])
                    after[i] = t
                if after[2] != T2.q0:
                    return PropertyResult("five zeros reset all passes", 2, False,
                                          w2 + o1[::-1])
                for s3, w3 in r3.items():
                    t, ok = s3, False
                    for i in range(5):
                        t = int(T3.delta_table[t, T3.letter_index[o2[i]]])
                        ok |= i >= 2 and t == T3.q0
                    if not ok:
                        return PropertyResult("five zeros reset all passes", 3, False, w3 + o2)
    return PropertyResult("five zeros reset all passes", None, True)


# ----------------------------------------------------------------- sampler

def _chain_probs(n: int) -> list[float]:
    """p[0] = Pr[a_2 = 1]; p[k-2] = Pr[a_k = 1 | a_{k-1} = 0] for k >= 3."""
    out = [fib(n - 1) / fib(n + 1)]
    out += [fib(n - k + 1) / fib(n - k + 3) for k in range(3, n + 1)]
    return out


def chain_fractions(n: int) -> list[Fraction]:
    out = [Fraction(fib(n - 1), fib(n + 1))]
    out += [Fraction(fib(n - k + 1), fib(n - k + 3)) for k in range(3, n + 1)]
    return out


def markov_batch(n: int, seed: int, trials: Sequence[int]) -> np.ndarray:
    """Rows of digits a_n ... a_2 (most significant first), one per trial."""
    if n < 2:
        raise InputValidationError("markov sampling needs n >= 2")
    probs = _chain_probs(n)
    U = uniforms(seed, trials, n - 1)
    T = U.shape[0]
    out = np.zeros((T, n - 1), dtype=np.int64)
    prev = np.zeros(T, dtype=bool)
    # column j holds a_{j+2}; sampled from a_2 upward
    for j in range(n - 1):
        bit = ~prev & (U[:, j] < probs[j])
        out[:, j] = bit
        prev = bit
    return out[:, ::-1].copy()


def markov_sample(n: int, seed: int, trial: int = 0) -> ZeckWord:
    return ZeckWord(tuple(int(x) for x in markov_batch(n, seed, [trial])[0]))


def word_probability(w: ZeckWord) -> Fraction:
    """Exact probability of w under the chain, as a product of transitions."""
    n = w.n
    probs = chain_fractions(n)
    low_first = w.digits[::-1]
    p = Fraction(1)
    prev = 0
    for j, x in enumerate(low_first):
        if prev:
            if x:
                return Fraction(0)
            prev = 0
            continue
        p *= probs[j] if x else 1 - probs[j]
        prev = x
    return p


def zero_run_probability(n: int, lo: int, hi: int) -> Fraction:
    """Pr[a_lo = ... = a_hi = 0], multiplying the chain's conditional steps."""
    if not 2 <= lo <= hi <= n:
        raise InputValidationError(f"need 2 <= lo <= hi <= {n}")
    probs = chain_fractions(n)
    # dist[x] = Pr[current digit = x, constraint so far], walking a_2 upward
    dist = {0: 1 - probs[0], 1: probs[0]}
    if lo == 2:
        dist[1] = Fraction(0)
    for k in range(3, hi + 1):
        p = probs[k - 2]
        one = dist[0] * p
        dist = {0: dist[0] * (1 - p) + dist[1], 1: one if k < lo else Fraction(0)}
    return dist[0] + dist[1]


def marginal(n: int, k: int) -> Fraction:
    """Pr[a_k = 1] for a uniform size-n word."""
    return Fraction(fib(k - 1) * fib(n - k + 1), fib(n + 1))


# ------------------------------------------------------------ delay circuit

def pipeline_circuit(n: int, P: Optional[Pipeline] = None, encoding: str = "closure",
                     wire_coeff=1, pad: bool = False) -> Circuit:
    """Three chained standard passes over size-n operands on one line.

    Inputs are digit-sum letters at positions 1..n+1 (most significant
    first, padding included).  Window letters are ANDs of the one-hot digit
    inputs at i, i+1, i+2; each later pass reads the previous pass's output
    signals at the same position.
    """
    P = P or default_pipeline()
    L = n - 1 + P.padding
    b = CircuitBuilder(L)
    digits = ("0", "1", "2")
    inp = np.empty((L, 3), dtype=np.int64)
    for m in range(1, L + 1):
        for j, dname in enumerate(digits):
            inp[m - 1, j] = b.single(K.INPUT, m, ("in", m, dname))
    one = b.single(K.CONST1, L, ("combine", 0, "const"))
    T1 = P.passes[0]
    win = np.full((L, len(T1.input_alphabet)), -1, dtype=np.int64)
    for m in range(1, L + 1):
        for a, name in enumerate(T1.input_alphabet):
            x, y, z = (int(c) for c in name)
            lower = []
            for off, digit in ((1, y), (2, z)):
                if m + off <= L:
                    lower.append(int(inp[m + off - 1, digit]))
                elif digit:
                    lower = None
                    break
                else:
                    lower.append(one)
            if lower is None:
                continue
            g = b.single(K.AND, m, ("combine", m, "low", name), lower[0], lower[1])
            win[m - 1, a] = b.single(K.AND, m, ("combine", m, "window", name),
                                     int(inp[m - 1, x]), g)
    ext = win
    for k, T in enumerate(P.passes):
        family = knowledge_closure(T)
        if encoding == "full":
            from .circuit import full_family
            family = full_family(T)
        info = b.add_pass(T, family, knowledge_closure(T), ext, T.direction,
                          emit_outputs=(k == 2), label=f"p{k + 1}", pad=pad)
        if k < 2:
            U = P.passes[k + 1]
            # letters the previous pass never emits stay at -1 (never rise)
            ext = np.full((L, len(U.input_alphabet)), -1, dtype=np.int64)
            for j, c in enumerate(U.input_alphabet):
                if c in T.output_alphabet:
                    ext[:, j] = info["out"][:, T.output_alphabet.index(c)]
    kind, src, pos = b.arrays()
    C = Circuit(kind, src, pos, L, digits, P.passes[2].output_alphabet, inp, info["out"],
                tagger=b.tagger(), extras={"passes": b.passes})
    return C.with_coeff(wire_coeff)


def operand_pairs(n: int, seed: int, trials: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Two independent uniform operands per trial (substreams 2t and 2t+1)."""
    t = np.asarray(list(trials), dtype=np.int64)
    return markov_batch(n, seed, 2 * t), markov_batch(n, seed, 2 * t + 1)


def padded_sums(A: np.ndarray, B: np.ndarray, padding: int = 2) -> np.ndarray:
    S = A + B
    return np.concatenate([np.zeros((S.shape[0], padding), dtype=np.int64), S], axis=1)


def pipeline_delay_sim(n: int, trials: int, seed: int, wire_coeff=1, chunk: int = 64,
                       circuit: Optional[Circuit] = None, check: bool = True) -> SimResult:
    """End-to-end settle delays of the chained circuit on sampled operands."""
    if trials < 1:
        raise InputValidationError("trials must be at least 1")
    C = circuit if circuit is not None else pipeline_circuit(n, wire_coeff=wire_coeff)
    delays = np.empty(trials, dtype=np.float64)
    bad = 0
    for lo in range(0, trials, chunk):
        ids = range(lo, min(trials, lo + chunk))
        A, B = operand_pairs(n, seed, ids)
        d, b = settle_codes(C, padded_sums(A, B))
        delays[lo:lo + len(ids)] = d
        bad += int(b.sum())
    if check and bad:
        raise PipelineContractError(f"{bad} output positions failed to settle one-hot")
    return SimResult("ZECKENDORF", n, trials, "zeckendorf", seed, delays,
                     float(C.wire_coeff), bad)


__all__ = [
    "fib", "ZeckWord", "DigitSumWord", "zeck_encode", "zeck_decode", "zeck_add_oracle",
    "valid_words", "digit_sum", "windows", "valid_windows", "build_passes", "tabulate",
    "Pipeline", "default_pipeline", "load_pipeline", "pipeline_add", "PropertyResult",
    "check_reset_properties", "markov_sample", "markov_batch", "word_probability",
    "chain_fractions", "marginal", "zero_run_probability", "pipeline_circuit",
    "pipeline_delay_sim", "operand_pairs", "padded_sums", "width_for",
]
