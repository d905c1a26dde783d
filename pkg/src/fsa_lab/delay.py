"""Timed settling, dependence analysis, Monte-Carlo delay and growth fits.

Rise times follow monotone completion: an AND gate rises one unit after
its last input arrives, an OR gate one unit after its first, and a wire of
length l adds coefficient * l.  Rise times are float64 (exact for the
integer and dyadic coefficients used in practice); Never is +inf.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from math import log2
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from .automaton import Automaton, Transducer, output_trace
from .circuit import Circuit, synth_standard
from .classify import _split_layers
from .errors import GuardrailError, InputValidationError, UnsupportedSemanticsError

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
BRUTE_CAP = 1 << 20
TAIL_FACTORS = (2, 4, 8)
CSV_FIELDS = ("automaton", "n", "trials", "seed", "model", "mean", "p50", "p90", "p99",
              "max", "tail_d2", "tail_d4", "tail_d8")


# ------------------------------------------------------------------ random

def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, trials: Sequence[int], count: int) -> np.ndarray:
    """Doubles in [0, 1): row t is the splitmix64 substream for (seed, trial t).

    The seed is mixed before the trial index is added so that neighbouring
    seeds do not share substreams.
    """
    with np.errstate(over="ignore"):
        t = np.asarray(trials, dtype=np.uint64)[:, None]
        base = _mix(_mix(np.array([seed % (1 << 64)], dtype=np.uint64)) + t)
        k = np.arange(1, count + 1, dtype=np.uint64)[None, :]
        v = _mix(base + k * GAMMA)
    return (v >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def uniform_words(n_letters: int, n: int, seed: int, trials: Sequence[int]) -> np.ndarray:
    u = uniforms(seed, trials, n)
    return np.minimum((u * n_letters).astype(np.int64), n_letters - 1)


# ------------------------------------------------------------------ settle

@dataclass
class SettleProfile:
    rise: np.ndarray            # per gate, inf = Never
    outputs: np.ndarray         # (n, |B|) rise of every output gate
    decoded: list[str]
    settle_times: np.ndarray    # per step, rise of the correct output

    @property
    def delay(self) -> float:
        return float(self.settle_times.max()) if self.settle_times.size else 0.0


def _check_monotone(C: Circuit) -> None:
    nots = np.flatnonzero(C.kind == K.NOT)
    if nots.size and (C.kind[C.src[nots, 0]] != K.CONST1).any():
        g = int(nots[np.flatnonzero(C.kind[C.src[nots, 0]] != K.CONST1)[0]])
        raise UnsupportedSemanticsError(
            f"NOT gate {g} is fed by a non-constant signal; only monotone circuits settle")


def _codes(C: Circuit, x) -> np.ndarray:
    index = {a: i for i, a in enumerate(C.input_alphabet)}
    try:
        codes = np.array([index[a] for a in x], dtype=np.int64)
    except KeyError as e:
        raise InputValidationError(f"letter {e.args[0]!r} is not in the input alphabet") from None
    if codes.size != C.n:
        raise InputValidationError(f"word has length {codes.size}, circuit expects {C.n}")
    return codes


def settle(C: Circuit, x) -> SettleProfile:
    """Rise time of every gate for input word x."""
    _check_monotone(C)
    kind, s0, s1, pos = C.arrays()
    rise = K.settle_one(kind, s0, s1, pos, float(C.wire_coeff), C.input_map, _codes(C, x))
    outs = rise[C.output_map]
    decoded = [C.output_alphabet[int(np.argmin(row))] if np.isfinite(row).any() else "?"
               for row in outs]
    return SettleProfile(rise, outs, decoded, outs.min(axis=1))


def settle_codes(C: Circuit, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Settle delays for a batch of encoded words, plus non-one-hot step counts."""
    _check_monotone(C)
    K.configure_threads()
    kind, s0, s1, pos = C.arrays()
    X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.int64)
    return K.settle_batch(kind, s0, s1, pos, float(C.wire_coeff), C.input_map, C.output_map, X)


# ------------------------------------------------------------ suffix forcing

def _good_masks(M: Automaton) -> np.ndarray:
    om = M.omega_table
    masks = np.zeros(len(M.states), dtype=np.uint64)
    for q in range(len(M.states)):
        masks[q] = np.uint64(sum(1 << p for p in range(len(M.states)) if om[p] == om[q]))
    return masks


def suffix_determination(M: Automaton, x, m: int) -> int:
    """Shortest j such that the last j of the first m inputs force output m."""
    codes = M.encode(x)
    if not 1 <= m <= codes.size:
        raise InputValidationError(f"m must lie in 1..{codes.size}")
    dt = M.delta_table
    q = M.q0
    for a in codes[:m]:
        q = dt[q, a]
    good = {p for p in range(len(M.states)) if M.omega_table[p] == M.omega_table[q]}
    for j in range(m):
        S = set(range(len(M.states)))
        for a in codes[m - j:m]:
            S = {int(dt[s, a]) for s in S}
        if S <= good:
            return j
    return m


def max_suffix_determination(M: Automaton, X: np.ndarray) -> np.ndarray:
    """max over m of suffix_determination for every encoded row of X."""
    if len(M.states) > 64:
        raise GuardrailError("bitmask kernel handles at most 64 states", 64)
    X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.int64)
    return K.suffix_determination_batch(M.delta_table, _good_masks(M), X, M.q0)


# ------------------------------------------------------------- dependence

def dependence_set_exact(M: Automaton, n: int, m: int) -> set[int]:
    """Positions i whose letter can change output m (words of length n)."""
    if not 1 <= m <= n:
        raise InputValidationError("need 1 <= m <= n")
    dt = M.delta_table
    nA = len(M.input_alphabet)
    layers = _split_layers(M, m)
    level = {M.q0}
    found = set()
    for i in range(1, m + 1):
        split = layers[m - i]
        for q in level:
            succ = dt[q]
            if any(split[succ[a], succ[b]] for a in range(nA) for b in range(a + 1, nA)):
                found.add(i)
                break
        level = {int(dt[q, a]) for q in level for a in range(nA)}
    return found


def _all_words(nA: int, n: int) -> np.ndarray:
    if nA ** n > BRUTE_CAP:
        raise GuardrailError(f"{nA}^{n} words exceed the enumeration cap {BRUTE_CAP}", BRUTE_CAP)
    idx = np.arange(nA ** n, dtype=np.int64)
    pw = nA ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // pw[None, :]) % nA


def outputs_at(M: Automaton, X: np.ndarray, m: int) -> np.ndarray:
    s = np.full(X.shape[0], M.q0, dtype=np.int64)
    for j in range(m):
        s = M.delta_table[s, X[:, j]]
    return M.omega_table[s]


def dependence_set_bruteforce(M: Automaton, n: int, m: int) -> set[int]:
    """Same set as dependence_set_exact, by enumerating every word of length n."""
    if not 1 <= m <= n:
        raise InputValidationError("need 1 <= m <= n")
    nA = len(M.input_alphabet)
    X = _all_words(nA, n)
    out = outputs_at(M, X, m)
    ids = np.arange(X.shape[0])
    found = set()
    for i in range(1, n + 1):
        step = nA ** (n - i)
        digit = X[:, i - 1]
        for b in range(nA):
            other = ids + (b - digit) * step
            if (out != out[other]).any():
                found.add(i)
                break
    return found


# -------------------------------------------------------------- simulation

Sampler = Callable[[int, int, Sequence[int]], np.ndarray]


@dataclass
class SimResult:
    automaton: str
    n: int
    trials: int
    model: str
    seed: int
    delays: np.ndarray
    wire_coeff: float = 1.0
    bad_steps: int = 0
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise InputValidationError("trials must be at least 1")
        self.summary = summarize(self.delays, self.n)

    def tail(self, d: float) -> float:
        return float((self.delays > d * log2(max(self.n, 2))).mean())

    def csv_row(self) -> dict:
        s = self.summary
        row = {"automaton": self.automaton, "n": self.n, "trials": self.trials,
               "seed": self.seed, "model": self.model}
        for k in ("mean", "p50", "p90", "p99", "max"):
            row[k] = _fmt(s[k])
        for d in TAIL_FACTORS:
            row[f"tail_d{d}"] = _fmt(s[f"tail_d{d}"])
        return row


def _fmt(v: float) -> str:
    return repr(float(v))


def summarize(delays: np.ndarray, n: int) -> dict:
    d = np.asarray(delays, dtype=np.float64)
    q = np.quantile(d, [0.5, 0.9, 0.99])
    out = {"mean": float(d.mean()), "p50": float(q[0]), "p90": float(q[1]),
           "p99": float(q[2]), "max": float(d.max())}
    scale = log2(max(n, 2))
    for f in TAIL_FACTORS:
        out[f"tail_d{f}"] = float((d > f * scale).mean())
    return out


def write_csv(results: Sequence[SimResult], stream=None, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.csv_row())
    for c in comments:
        buf.write(f"# {c}\n")
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_csv(text: str) -> list[dict]:
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(rows))


def simulate_circuit(C: Circuit, sampler: Sampler, trials: int, seed: int,
                     chunk: int = 256) -> tuple[np.ndarray, int]:
    """Settle delays of C over sampled words, in trial order."""
    delays = np.empty(trials, dtype=np.float64)
    bad = 0
    for lo in range(0, trials, chunk):
        ids = range(lo, min(trials, lo + chunk))
        X = sampler(C.n, seed, ids)
        d, b = settle_codes(C, X)
        delays[lo:lo + len(ids)] = d
        bad += int(b.sum())
    return delays, bad


def simulate_average(M: Union[Automaton, Transducer], n: int, trials: int,
                     model: Union[str, Sampler] = "uniform", seed: int = 0,
                     wire_coeff=1, encoding: str = "closure", name: str = "",
                     circuit: Optional[Circuit] = None) -> SimResult:
    """Monte-Carlo settle delays of the standard circuit for M."""
    if trials < 1:
        raise InputValidationError("trials must be at least 1")
    C = circuit if circuit is not None else synth_standard(M, n, encoding, wire_coeff)
    if isinstance(model, str):
        sampler, label = _named_sampler(M, model), model
    else:
        sampler, label = model, getattr(model, "__name__", "custom")
    delays, bad = simulate_circuit(C, sampler, trials, seed)
    return SimResult(name or "custom", n, trials, label, seed, delays, float(C.wire_coeff), bad)


def _named_sampler(M, model: str) -> Sampler:
    nA = len(M.input_alphabet)
    if model == "uniform":
        return lambda n, seed, ids: uniform_words(nA, n, seed, ids)
    if model == "zeckendorf":
        if not {"0", "1"} <= set(M.input_alphabet):
            raise InputValidationError("the zeckendorf model needs letters '0' and '1'")
        from .zeckendorf import markov_batch
        zero, one = M.letter_index["0"], M.letter_index["1"]

        def zeck(n, seed, ids):
            bits = markov_batch(n, seed, ids)
            return np.where(bits == 1, one, zero)
        return zeck
    raise InputValidationError(f"unknown input model {model!r}")


# ----------------------------------------------------------------- fitting

MODELS = ("Constant", "Log", "Linear")


@dataclass
class GrowthFit:
    model: str
    coefficient: float
    scores: dict

    def describe(self) -> str:
        parts = ", ".join(f"{k}={v:.4g}" for k, v in self.scores.items())
        return f"fit {self.model} coefficient={self.coefficient:.6g} scores: {parts}"


def fit_growth(points: Sequence[tuple[float, float]]) -> GrowthFit:
    """Pick value ~ c*f(n) for f in {1, log2 n, n} by normalized residual."""
    pts = sorted(points)
    if len(pts) < 4:
        raise InputValidationError("need at least 4 points")
    ns = np.array([p[0] for p in pts], dtype=np.float64)
    vs = np.array([p[1] for p in pts], dtype=np.float64)
    if len(set(ns)) != len(ns) or ns.min() <= 0:
        raise InputValidationError("n values must be distinct and positive")
    if ns.max() < 8 * ns.min():
        raise InputValidationError("n values must span at least three doublings")
    norm = float((vs ** 2).sum()) or 1.0
    scores, coefs = {}, {}
    for name, f in zip(MODELS, (np.ones_like(ns), np.log2(ns), ns)):
        c = float((vs * f).sum() / (f * f).sum())
        scores[name] = float(((vs - c * f) ** 2).sum() / norm)
        coefs[name] = c
    best = min(MODELS, key=lambda k: (round(scores[k], 12), MODELS.index(k)))
    return GrowthFit(best, coefs[best], scores)


__all__ = [
    "SettleProfile", "SimResult", "GrowthFit", "settle", "settle_codes",
    "suffix_determination", "max_suffix_determination", "dependence_set_exact",
    "dependence_set_bruteforce", "simulate_average", "simulate_circuit", "fit_growth",
    "uniforms", "uniform_words", "write_csv", "read_csv", "summarize", "CSV_FIELDS",
]
