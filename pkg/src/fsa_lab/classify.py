"""Structural properties of automata: reachability, reduction, ergodicity,
synchronization, definiteness and the pumping witnesses behind the delay
lower bounds.

All searches are breadth-first with letters tried in declared order, so
every returned word is deterministic.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field
from math import comb, gcd
from typing import Optional

import numpy as np

from .automaton import Automaton, Transducer, output_trace, run
from .errors import ContractError


@dataclass(frozen=True)
class Verdict:
    """Definiteness order: ``k`` is None for Infinite."""

    k: Optional[int]

    @property
    def finite(self) -> bool:
        return self.k is not None

    def __str__(self) -> str:
        return "Infinite" if self.k is None else f"Finite({self.k})"


INFINITE = Verdict(None)


def _letters(M, codes) -> list[str]:
    return [M.input_alphabet[a] for a in codes]


# ------------------------------------------------------------ reachability

def _bfs_words(M, start: int) -> dict[int, tuple[int, ...]]:
    words = {start: ()}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for a in range(len(M.input_alphabet)):
            t = int(M.delta_table[s, a])
            if t not in words:
                words[t] = words[s] + (a,)
                queue.append(t)
    return words


def reachable_states(M) -> dict[str, list[str]]:
    """Reachable states, each with a shortest word from q0 reaching it."""
    found = _bfs_words(M, M.q0)
    return {M.states[s]: _letters(M, w) for s, w in sorted(found.items())}


def _path(M, src: int, dst: int) -> Optional[tuple[int, ...]]:
    return _bfs_words(M, src).get(dst)


def distinguishing_word(M: Automaton, q1: str, q2: str) -> Optional[list[str]]:
    """Shortest w with omega(q1 w) != omega(q2 w), or None."""
    om, dt = M.omega_table, M.delta_table
    start = (M.state_id(q1), M.state_id(q2))
    seen = {start: ()}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        if om[p] != om[q]:
            return _letters(M, seen[(p, q)])
        for a in range(len(M.input_alphabet)):
            nxt = (int(dt[p, a]), int(dt[q, a]))
            if nxt not in seen:
                seen[nxt] = seen[(p, q)] + (a,)
                queue.append(nxt)
    return None


def _partition(n_states: int, signature0, dt: np.ndarray) -> list[int]:
    """Moore-style refinement; block ids are numbered by first member."""
    block = list(signature0)
    while True:
        sig = [(block[s], tuple(block[t] for t in dt[s])) for s in range(n_states)]
        ids: dict = {}
        new = [ids.setdefault(x, len(ids)) for x in sig]
        if len(ids) == len(set(block)):
            return new
        block = new


def reduce(M: Automaton) -> Automaton:
    """Drop unreachable states and merge indistinguishable ones."""
    keep = sorted(_bfs_words(M, M.q0))
    local = {s: i for i, s in enumerate(keep)}
    dt = np.array([[local[int(t)] for t in M.delta_table[s]] for s in keep], dtype=np.int64)
    om = [int(M.omega_table[s]) for s in keep]
    block = _partition(len(keep), om, dt)
    reps: dict[int, int] = {}
    for i, b in enumerate(block):
        reps.setdefault(b, i)
    name = {b: M.states[keep[i]] for b, i in reps.items()}
    states = [name[b] for b in sorted(reps)]
    delta = {name[b]: {a: name[block[dt[i, j]]] for j, a in enumerate(M.input_alphabet)}
             for b, i in reps.items()}
    omega = {name[b]: M.output_alphabet[om[i]] for b, i in reps.items()}
    return Automaton(M.input_alphabet, states, M.output_alphabet, name[block[local[M.q0]]],
                     delta, omega=omega)


def reduce_transducer(T: Transducer) -> Transducer:
    """Minimal equivalent transducer (reachable part, merged by output behaviour)."""
    keep = sorted(_bfs_words(T, T.q0))
    local = {s: i for i, s in enumerate(keep)}
    dt = np.array([[local[int(t)] for t in T.delta_table[s]] for s in keep], dtype=np.int64)
    lam = [tuple(int(b) for b in T.lambda_table[s]) for s in keep]
    ids: dict = {}
    block = _partition(len(keep), [ids.setdefault(x, len(ids)) for x in lam], dt)
    reps: dict[int, int] = {}
    for i, b in enumerate(block):
        reps.setdefault(b, i)
    name = {b: T.states[keep[i]] for b, i in reps.items()}
    A = T.input_alphabet
    delta = {name[b]: {a: name[block[dt[i, j]]] for j, a in enumerate(A)}
             for b, i in reps.items()}
    out = {name[b]: {a: T.output_alphabet[lam[i][j]] for j, a in enumerate(A)}
           for b, i in reps.items()}
    return Transducer(A, [name[b] for b in sorted(reps)], T.output_alphabet,
                      name[block[local[T.q0]]], delta, lam=out, direction=T.direction)


# ---------------------------------------------------------------- ergodicity

def _sccs(n: int, succ: list[list[int]]) -> list[int]:
    """Iterative Tarjan; returns the component id of every vertex."""
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            if i < len(succ[v]):
                work.append((v, i + 1))
                w = succ[v][i]
                if index[w] < 0:
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            for w in succ[v]:
                if comp[w] < 0 and on_stack[w]:
                    low[v] = min(low[v], low[w])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def is_ergodic(M) -> tuple[bool, int]:
    """(strongly connected with period 1, period of q0's component).

    A component without any cycle reports period 1 by convention.
    """
    n = len(M.states)
    succ = [sorted(set(int(t) for t in M.delta_table[s])) for s in range(n)]
    comp = _sccs(n, succ)
    c0 = comp[M.q0]
    members = [s for s in range(n) if comp[s] == c0]
    level = {M.q0: 0}
    queue = deque([M.q0])
    while queue:
        s = queue.popleft()
        for t in succ[s]:
            if comp[t] == c0 and t not in level:
                level[t] = level[s] + 1
                queue.append(t)
    g = 0
    for s in members:
        for t in succ[s]:
            if comp[t] == c0:
                g = gcd(g, level[s] + 1 - level[t])
    period = g if g else 1
    strongly = len(members) == n
    return strongly and period == 1, period


# ------------------------------------------------------------- synchronizing

def _merge_codes(M, p: int, q: int) -> Optional[tuple[int, ...]]:
    dt = M.delta_table
    start = (min(p, q), max(p, q))
    seen = {start: ()}
    queue = deque([start])
    while queue:
        u, v = queue.popleft()
        if u == v:
            return seen[(u, v)]
        for a in range(len(M.input_alphabet)):
            x, y = int(dt[u, a]), int(dt[v, a])
            nxt = (min(x, y), max(x, y))
            if nxt not in seen:
                seen[nxt] = seen[(u, v)] + (a,)
                queue.append(nxt)
    return None


def mergeable(M, q1: str, q2: str) -> Optional[list[str]]:
    """Shortest w with q1 w = q2 w, or None."""
    w = _merge_codes(M, M.state_id(q1), M.state_id(q2))
    return None if w is None else _letters(M, w)


def _image(M, S, word) -> set[int]:
    S = set(S)
    for a in word:
        S = {int(M.delta_table[s, a]) for s in S}
    return S


def is_synchronizable(M) -> Optional[list[str]]:
    """Synchronizing word by iterated pair merging, or None.

    When q0 is reachable from the synchronized state the word is extended
    into a resetting word (every state ends in q0).
    """
    n = len(M.states)
    for p in range(n):
        for q in range(p + 1, n):
            if _merge_codes(M, p, q) is None:
                return None
    S = set(range(n))
    word: tuple[int, ...] = ()
    while len(S) > 1:
        p, q = sorted(S)[:2]
        w = _merge_codes(M, p, q)
        word += w
        S = _image(M, S, w)
    (target,) = S
    tail = _path(M, target, M.q0)
    if tail is not None:
        word += tail
    return _letters(M, word)


# --------------------------------------------------------------- pair graph

def _pair_tables(M: Automaton):
    """Ordered pairs of distinct states, their successors and omega-splits."""
    n = len(M.states)
    dt = M.delta_table
    nA = len(M.input_alphabet)
    succ = {}
    for p in range(n):
        for q in range(n):
            if p != q:
                succ[(p, q)] = [(int(dt[p, a]), int(dt[q, a])) for a in range(nA)]
    split = {pq for pq in succ if M.omega_table[pq[0]] != M.omega_table[pq[1]]}
    return succ, split


def _infinite_pairs(M: Automaton) -> set:
    """Pairs admitting arbitrarily long distinguishing suffixes.

    A pair qualifies when it reaches a pair-graph cycle from which an
    omega-split pair is reachable.
    """
    succ, split = _pair_tables(M)
    nodes = list(succ)
    idx = {pq: i for i, pq in enumerate(nodes)}
    adj = [[idx[t] for t in succ[pq] if t[0] != t[1]] for pq in nodes]
    comp = _sccs(len(nodes), adj)
    size: dict[int, int] = {}
    for c in comp:
        size[c] = size.get(c, 0) + 1
    cyclic = [size[comp[i]] > 1 or i in adj[i] for i in range(len(nodes))]
    radj: list[list[int]] = [[] for _ in nodes]
    for i, out in enumerate(adj):
        for j in out:
            radj[j].append(i)

    def backward(seeds):
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            j = queue.popleft()
            for i in radj[j]:
                if i not in seen:
                    seen.add(i)
                    queue.append(i)
        return seen

    reaches_split = backward([idx[pq] for pq in split])
    pumping = [i for i in range(len(nodes)) if cyclic[i] and i in reaches_split]
    return {nodes[i] for i in backward(pumping)}


def _same_length_pairs(M: Automaton) -> set:
    """Pairs (p, q) both reached from q0 by words of one common length."""
    dt = M.delta_table
    nA = len(M.input_alphabet)
    start = (M.q0, M.q0)
    seen = {start}
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        for a in range(nA):
            for b in range(nA):
                nxt = (int(dt[p, a]), int(dt[q, b]))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return seen


def _split_layers(M: Automaton, depth: int) -> list[np.ndarray]:
    """layers[k][p, q] is True iff some word of length exactly k splits p, q."""
    om = M.omega_table
    dt = M.delta_table
    cur = om[:, None] != om[None, :]
    layers = [cur]
    for _ in range(depth):
        nxt = np.zeros_like(cur)
        for a in range(len(M.input_alphabet)):
            col = dt[:, a]
            nxt |= cur[np.ix_(col, col)]
        layers.append(nxt)
        cur = nxt
    return layers


def definiteness_order(M: Automaton) -> Verdict:
    """Exact minimal k, or Infinite; computed on the reduced machine."""
    R = reduce(M)
    if _non_definite_core(R) is not None:
        return INFINITE
    bound = comb(len(R.states), 2) + 1
    pairs = _same_length_pairs(R)
    P = np.zeros((len(R.states),) * 2, dtype=bool)
    for p, q in pairs:
        P[p, q] = True
    layers = _split_layers(R, bound)
    for k, layer in enumerate(layers):
        if not (layer & P).any():
            return Verdict(k)
    raise AssertionError("pair criterion and iterative deepening disagree")


def _non_definite_core(M: Automaton):
    """(x, a, b, p_pair) with q0 x a, q0 x b an infinitely splittable pair."""
    inf = _infinite_pairs(M)
    if not inf:
        return None
    nA = len(M.input_alphabet)
    dt = M.delta_table
    for q, x in sorted(_bfs_words(M, M.q0).items(), key=lambda kv: (len(kv[1]), kv[1])):
        for a in range(nA):
            for b in range(nA):
                if a != b and (int(dt[q, a]), int(dt[q, b])) in inf:
                    return x, a, b
    return None


def _long_reachable(M) -> dict[int, tuple[tuple, tuple, tuple]]:
    """States reachable from a reachable cycle: state -> (f, g, h).

    q0 f = q0 f g (g non-empty) and q0 f g h is the state.
    """
    reach = _bfs_words(M, M.q0)
    out: dict[int, tuple[tuple, tuple, tuple]] = {}
    for c, f in sorted(reach.items(), key=lambda kv: (len(kv[1]), kv[1])):
        g = None
        for a in range(len(M.input_alphabet)):
            back = _path(M, int(M.delta_table[c, a]), c)
            if back is not None and (g is None or len(back) + 1 < len(g)):
                g = (a,) + back
        if g is None:
            continue
        for p, h in _bfs_words(M, c).items():
            if p not in out or len(f) + len(g) + len(h) < sum(map(len, out[p])):
                out[p] = (f, g, h)
    return out


def _longest_split(M: Automaton, pair) -> int:
    """Longest distinguishing suffix of a pair not in the infinite set."""
    succ, split = _pair_tables(M)
    memo: dict = {}

    def longest(pq):
        if pq[0] == pq[1]:
            return -1
        if pq in memo:
            return memo[pq]
        memo[pq] = -1
        best = 0 if pq in split else -1
        for t in succ[pq]:
            sub = longest(t)
            if sub >= 0:
                best = max(best, sub + 1)
        memo[pq] = best
        return best

    return longest(pair)


def gen_definiteness_order(M: Automaton) -> Verdict:
    """Infinite, or a certified upper bound k <= |Q|^2 + |Q| + 1."""
    R = reduce(M)
    inf = _infinite_pairs(R)
    nA = len(R.input_alphabet)
    dt = R.delta_table
    longest = 0
    for p in _long_reachable(R):
        for a in range(nA):
            for b in range(nA):
                pair = (int(dt[p, a]), int(dt[p, b]))
                if a == b or pair[0] == pair[1]:
                    continue
                if pair in inf:
                    return INFINITE
                longest = max(longest, _longest_split(R, pair) + 1)
    k = max(len(R.states), longest)
    definite = definiteness_order(R)
    if definite.finite:
        k = min(k, definite.k)
    return Verdict(k)


# ---------------------------------------------------------------- witnesses

@dataclass
class PumpWitness:
    f: list[str]
    g: Optional[list[str]]
    h: list[str]
    a: str
    b: str
    s: list[str]
    t: list[str]
    u: list[str]
    sigma: Optional[int] = None

    @property
    def x(self) -> list[str]:
        return self.f + (self.g or []) + self.h

    @property
    def y(self) -> list[str]:
        return self.s + self.t + self.u

    @property
    def gamma(self) -> int:
        return len(self.g or [])

    @property
    def tau(self) -> int:
        return len(self.t)

    @property
    def rho(self) -> int:
        return len(self.x) + 1 + len(self.y)

    lam = rho

    def pumped(self, j: int) -> tuple[list[str], list[str]]:
        """x a s t^j u and x b s t^j u."""
        tail = self.s + self.t * j + self.u
        return self.x + [self.a] + tail, self.x + [self.b] + tail

    def family(self, m: int) -> tuple[list[list[str]], list[list[str]]]:
        """The 2(m+1) equal-length words c_l, d_l for l = 0..m."""
        if not self.g:
            raise ContractError("family words need a non-empty g")
        v = self.g * self.tau
        w = self.t * self.gamma
        cs, ds = [], []
        for l in range(m + 1):
            head = self.f + self.g + v * l + self.h
            tail = self.s + self.t + w * (m - l) + self.u
            cs.append(head + [self.a] + tail)
            ds.append(head + [self.b] + tail)
        return cs, ds

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(gamma=self.gamma, tau=self.tau, rho=self.rho)
        d["lambda"] = self.rho
        return d


def _final(M: Automaton, word: list[str]) -> str:
    return M.omega[run(M, M.initial, word)]


def _pair_tail(M: Automaton, pair, inf):
    """(s, t, u): reach a pumping pair, loop on it, then split outputs."""
    succ, split = _pair_tables(M)
    seen = {pair: ()}
    queue = deque([pair])
    while queue:
        pq = queue.popleft()
        if pq in inf:
            loop = None
            for a, t in enumerate(succ[pq]):
                if t[0] == t[1]:
                    continue
                back = _pair_path(succ, t, lambda z, pq=pq: z == pq)
                if back is not None and (loop is None or len(back) + 1 < len(loop)):
                    loop = (a,) + back
            if loop is not None:
                end = _pair_path(succ, pq, lambda z: z in split)
                if end is not None:
                    return seen[pq], loop, end
        for a, t in enumerate(succ[pq]):
            if t[0] != t[1] and t not in seen:
                seen[t] = seen[pq] + (a,)
                queue.append(t)
    raise AssertionError("pair has no pumping continuation")


def _pair_path(succ, src, goal):
    """Shortest letter path in the pair graph from src to a pair meeting goal."""
    seen = {src: ()}
    queue = deque([src])
    while queue:
        pq = queue.popleft()
        if goal(pq):
            return seen[pq]
        for a, t in enumerate(succ[pq]):
            if t[0] != t[1] and t not in seen:
                seen[t] = seen[pq] + (a,)
                queue.append(t)
    return None


def _check_pumped(M: Automaton, w: PumpWitness) -> None:
    for j in range(3):
        c, d = w.pumped(j)
        if _final(M, c) == _final(M, d):
            raise AssertionError(f"pumped words agree at j={j}")


def witness_non_definite(M: Automaton) -> PumpWitness:
    """x, a, b, s, t, u with x a s t^j u and x b s t^j u split for every j."""
    core = _non_definite_core(M)
    if core is None:
        raise ContractError("automaton is definite; no non-definiteness witness exists")
    x, a, b = core
    q = run(M, M.initial, _letters(M, x))
    p = M.state_id(q)
    dt = M.delta_table
    pair = (int(dt[p, a]), int(dt[p, b]))
    s, t, u = _pair_tail(M, pair, _infinite_pairs(M))
    L = lambda c: _letters(M, c)
    w = PumpWitness(f=L(x), g=None, h=[], a=M.input_alphabet[a], b=M.input_alphabet[b],
                    s=L(s), t=L(t), u=L(u))
    _attach_sigma(M, w)
    _check_pumped(M, w)
    return w


def witness_non_gen_definite(M: Automaton, m: int = 2) -> PumpWitness:
    """f, g, h, a, b, s, t, u for the length-preserving pumping family."""
    inf = _infinite_pairs(M)
    dt = M.delta_table
    nA = len(M.input_alphabet)
    for p, (f, g, h) in sorted(_long_reachable(M).items(),
                               key=lambda kv: (sum(map(len, kv[1])), kv[0])):
        for a in range(nA):
            for b in range(nA):
                pair = (int(dt[p, a]), int(dt[p, b]))
                if a != b and pair in inf:
                    s, t, u = _pair_tail(M, pair, inf)
                    L = lambda c: _letters(M, c)
                    w = PumpWitness(f=L(f), g=L(g), h=L(h), a=M.input_alphabet[a],
                                    b=M.input_alphabet[b], s=L(s), t=L(t), u=L(u))
                    _attach_sigma(M, w)
                    _check_pumped(M, w)
                    for mm in range(max(m, 2) + 1):
                        check_family(M, w, mm)
                    return w
    raise ContractError("automaton is generalized definite; no witness exists")


def check_family(M: Automaton, w: PumpWitness, m: int) -> None:
    """Assert the c_l / d_l words have equal length and split into two classes."""
    cs, ds = w.family(m)
    length = w.rho + w.gamma * w.tau * m
    if any(len(c) != length for c in cs + ds):
        raise AssertionError("family words have unequal lengths")
    good, bad = _final(M, w.x + [w.a] + w.y), _final(M, w.x + [w.b] + w.y)
    if good == bad:
        raise AssertionError("base words do not split")
    if any(_final(M, c) != good for c in cs) or any(_final(M, d) != bad for d in ds):
        raise AssertionError("family outputs do not split by c/d")


def _attach_sigma(M: Automaton, w: PumpWitness) -> None:
    r = is_synchronizable(M)
    if r is not None and all(run(M, q, r) == M.initial for q in M.states):
        w.sigma = len(r) + w.rho


# ------------------------------------------------------------------- report

@dataclass
class ClassificationReport:
    reachable_count: int
    is_reduced: bool
    is_ergodic: bool
    period: int
    definite: Verdict
    generalized_definite: Verdict
    synchronizable: bool
    reset_word: Optional[list[str]]
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "reachable_count": self.reachable_count,
            "is_reduced": self.is_reduced,
            "is_ergodic": self.is_ergodic,
            "period": self.period,
            "definite": str(self.definite),
            "generalized_definite": str(self.generalized_definite),
            "synchronizable": self.synchronizable,
            "reset_word": self.reset_word,
            "witnesses": {k: v.to_dict() for k, v in self.witnesses.items()},
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def classify(M: Automaton) -> ClassificationReport:
    R = reduce(M)
    ergodic, period = is_ergodic(R)
    definite = definiteness_order(R)
    general = gen_definiteness_order(R)
    reset = is_synchronizable(R)
    witnesses = {}
    if not definite.finite:
        witnesses["definite"] = witness_non_definite(R)
    if not general.finite:
        witnesses["generalized_definite"] = witness_non_gen_definite(R)
    return ClassificationReport(
        reachable_count=len(_bfs_words(M, M.q0)),
        is_reduced=len(R.states) == len(M.states),
        is_ergodic=ergodic, period=period,
        definite=definite, generalized_definite=general,
        synchronizable=reset is not None, reset_word=reset,
        witnesses=witnesses)


def check_reset_word(M, w: list[str]) -> bool:
    """True iff w sends every state to one common state."""
    return len({run(M, q, w) for q in M.states}) == 1


__all__ = [
    "Verdict", "INFINITE", "PumpWitness", "ClassificationReport", "reachable_states",
    "distinguishing_word", "reduce", "reduce_transducer", "is_ergodic", "mergeable",
    "is_synchronizable", "definiteness_order", "gen_definiteness_order",
    "witness_non_definite", "witness_non_gen_definite", "check_family", "classify",
    "check_reset_word", "output_trace",
]
