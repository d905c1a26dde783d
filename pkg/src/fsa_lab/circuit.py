"""Positioned gate circuits simulating n automaton steps.

Two constructions are provided.  The standard circuit keeps one module per
step on a line; module m carries monotone knowledge signals, one per state
subset T, that rise once the inputs seen so far prove the current state
lies in T.  The prefix circuit composes one-hot transition functions in a
balanced tree and trades wire length for logarithmic gate depth.

Gates live in flat numpy arrays (kind, two sources, position).  Source -1
means unused.  Ids are topological by construction.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from .automaton import Automaton, Transducer, LTR, RTL
from .errors import ContractError, GuardrailError, InputValidationError, ParseError

FAMILY_CAP = 4096
FULL_STATE_CAP = 12

Machine = Union[Automaton, Transducer]


# ------------------------------------------------------------------ circuit

@dataclass
class Circuit:
    kind: np.ndarray
    src: np.ndarray                 # (G, 2) int64
    pos: np.ndarray
    n: int
    input_alphabet: tuple[str, ...]
    output_alphabet: tuple[str, ...]
    input_map: np.ndarray           # (n, |A|) gate ids, row m-1 is step m
    output_map: np.ndarray          # (n, |B|)
    wire_coeff: Fraction = Fraction(1)
    tagger: Callable[[int], tuple] = field(default=lambda g: (), repr=False)
    extras: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return int(self.kind.size)

    def tag(self, g: int) -> tuple:
        return self.tagger(int(g))

    def with_coeff(self, coeff) -> "Circuit":
        c = Fraction(coeff)
        if c < 0:
            raise InputValidationError("wire coefficient must be non-negative")
        return Circuit(self.kind, self.src, self.pos, self.n, self.input_alphabet,
                       self.output_alphabet, self.input_map, self.output_map, c,
                       self.tagger, self.extras)

    def arrays(self):
        return self.kind, self.src[:, 0], self.src[:, 1], self.pos

    def max_gates_per_position(self) -> int:
        p = self.pos - self.pos.min()
        return int(np.bincount(p).max())

    # validation --------------------------------------------------------
    def validate(self) -> None:
        """Check arities, topological order and the one-hot terminal maps."""
        G = len(self)
        ids = np.arange(G)
        arity = np.select([self.kind <= K.CONST1, (self.kind == K.NOT) | (self.kind == K.OUTPUT)],
                          [0, 1], 2)
        used = (self.src >= 0).sum(axis=1)
        if (used != arity).any():
            g = int(np.flatnonzero(used != arity)[0])
            raise ContractError(f"gate {g} ({K.KIND_NAMES[self.kind[g]]}) has wrong fan-in")
        for j in range(2):
            s = self.src[:, j]
            if ((s >= ids) & (s >= 0)).any():
                raise ContractError("gate sources are not topologically ordered")
        if self.input_map.shape != (self.n, len(self.input_alphabet)):
            raise ContractError("input map has the wrong shape")
        if self.output_map.shape != (self.n, len(self.output_alphabet)):
            raise ContractError("output map has the wrong shape")
        if (self.kind[self.input_map] != K.INPUT).any():
            raise ContractError("input map points at non-INPUT gates")
        if (self.kind[self.output_map] != K.OUTPUT).any():
            raise ContractError("output map points at non-OUTPUT gates")

    # serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        gates = []
        for g in range(len(self)):
            fan = [int(s) for s in self.src[g] if s >= 0]
            gates.append({"id": g, "kind": K.KIND_NAMES[self.kind[g]], "fan_in": fan,
                          "position": int(self.pos[g]), "tag": _tag_text(self.tag(g))})
        inputs = [{"step": m + 1, "letter": a, "gate": int(self.input_map[m, j])}
                  for m in range(self.n) for j, a in enumerate(self.input_alphabet)]
        outputs = [{"step": m + 1, "letter": b, "gate": int(self.output_map[m, j])}
                   for m in range(self.n) for j, b in enumerate(self.output_alphabet)]
        return {"n": self.n, "wire_coeff": str(self.wire_coeff),
                "input_alphabet": list(self.input_alphabet),
                "output_alphabet": list(self.output_alphabet),
                "gates": gates, "inputs": inputs, "outputs": outputs}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def _tag_text(tag: tuple) -> str:
    return ":".join(str(t) for t in tag)


def circuit_from_dict(d: dict) -> Circuit:
    try:
        gates = d["gates"]
        G = len(gates)
        kind = np.empty(G, dtype=np.int8)
        src = np.full((G, 2), -1, dtype=np.int64)
        pos = np.empty(G, dtype=np.int64)
        tags = []
        for i, g in enumerate(gates):
            if g["id"] != i:
                raise ParseError(f"gate ids must be 0..{G - 1} in order (entry {i})")
            kind[i] = K.KIND_NAMES.index(g["kind"])
            for j, s in enumerate(g["fan_in"][:2]):
                src[i, j] = s
            pos[i] = g["position"]
            tags.append(tuple(str(g.get("tag", "")).split(":")))
        A, B, n = tuple(d["input_alphabet"]), tuple(d["output_alphabet"]), int(d["n"])
        imap = np.full((n, len(A)), -1, dtype=np.int64)
        omap = np.full((n, len(B)), -1, dtype=np.int64)
        for e in d["inputs"]:
            imap[e["step"] - 1, A.index(e["letter"])] = e["gate"]
        for e in d["outputs"]:
            omap[e["step"] - 1, B.index(e["letter"])] = e["gate"]
        C = Circuit(kind, src, pos, n, A, B, imap, omap, Fraction(d.get("wire_coeff", "1")),
                    tagger=lambda g: tags[g])
    except (KeyError, ValueError, TypeError, IndexError) as e:
        raise ParseError(f"malformed circuit description: {e!r}") from None
    C.validate()
    return C


def load_circuit(path) -> Circuit:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    return circuit_from_dict(d)


# ------------------------------------------------------------ static metrics

def logical_depth(C: Circuit) -> int:
    """Longest INPUT/CONST1 -> OUTPUT path counted in gates."""
    kind, s0, s1, _ = C.arrays()
    depth = K.logical_depths(kind, s0, s1)
    outs = C.kind == K.OUTPUT
    return int(depth[outs].max()) if outs.any() else 0


def physical_depth(C: Circuit) -> Fraction:
    """Longest path weighted by gates plus coefficient times wire length."""
    kind, s0, s1, pos = C.arrays()
    val, gates, wire = K.physical_depths(kind, s0, s1, pos, float(C.wire_coeff))
    outs = np.flatnonzero(C.kind == K.OUTPUT)
    if outs.size == 0:
        return Fraction(0)
    best = outs[np.argmax(val[outs])]
    return Fraction(int(gates[best])) + C.wire_coeff * int(wire[best])


def cost(C: Circuit) -> tuple[int, Fraction]:
    """(gate count, total wire length in line units)."""
    total = 0
    for j in range(2):
        s = C.src[:, j]
        used = s >= 0
        total += int(np.abs(C.pos[used] - C.pos[s[used]]).sum())
    return len(C), Fraction(total)


# ---------------------------------------------------------- knowledge sets

def _mask_image(M: Machine, mask: int, a: int) -> int:
    out = 0
    col = M.delta_table[:, a]
    q = 0
    while mask:
        if mask & 1:
            out |= 1 << int(col[q])
        mask >>= 1
        q += 1
    return out


def _mask_names(M: Machine, mask: int) -> frozenset:
    return frozenset(M.states[q] for q in range(len(M.states)) if mask >> q & 1)


def _mask_label(M: Machine, mask: int) -> str:
    return "{" + ",".join(M.states[q] for q in range(len(M.states)) if mask >> q & 1) + "}"


def _closure_masks(M: Machine) -> list[int]:
    full = (1 << len(M.states)) - 1
    seeds = [1 << M.q0] + [_mask_image(M, full, a) for a in range(len(M.input_alphabet))]
    seen: set[int] = set()
    stack = [s for s in seeds if s != full]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        if len(seen) > FAMILY_CAP:
            raise GuardrailError(f"knowledge family exceeds {FAMILY_CAP} subsets", FAMILY_CAP)
        for a in range(len(M.input_alphabet)):
            t = _mask_image(M, s, a)
            if t != full and t not in seen:
                stack.append(t)
    return sorted(seen, key=lambda s: (bin(s).count("1"), _bits(s)))


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(q for q in range(mask.bit_length()) if mask >> q & 1)


@dataclass(frozen=True)
class KnowledgeFamily:
    """Non-empty proper state subsets closed under letter images."""

    masks: tuple[int, ...]
    states: tuple[str, ...]

    @property
    def subsets(self) -> list[frozenset]:
        return [frozenset(self.states[q] for q in _bits(s)) for s in self.masks]

    def __len__(self) -> int:
        return len(self.masks)


def knowledge_closure(M: Machine) -> KnowledgeFamily:
    return KnowledgeFamily(tuple(_closure_masks(M)), M.states)


def full_family(M: Machine) -> KnowledgeFamily:
    nq = len(M.states)
    if nq > FULL_STATE_CAP or (1 << nq) - 2 > FAMILY_CAP:
        raise GuardrailError(f"full subset family needs 2^{nq}-2 signals; cap is {FAMILY_CAP}",
                             FAMILY_CAP)
    masks = sorted(range(1, (1 << nq) - 1), key=lambda s: (bin(s).count("1"), _bits(s)))
    return KnowledgeFamily(tuple(masks), M.states)


# ------------------------------------------------------- module templates

_LOCAL, _PREV, _EXT = 1, 2, 3


class _Template:
    """Gate list of one module, with sources relative to the module."""

    def __init__(self):
        self.kind: list[int] = []
        self.ref: list[tuple] = []      # ((type, idx), (type, idx))
        self.tags: list[tuple] = []
        self.sig: list[int] = []        # local id per family member, -1 if absent
        self.out: list[int] = []        # local id per output letter (-1 absent)
        self.inputs: list[int] = []     # local INPUT ids when inputs are own
        self.const = -1

    def add(self, kind, r0=(0, -1), r1=(0, -1), tag=()) -> tuple:
        self.kind.append(kind)
        self.ref.append((r0, r1))
        self.tags.append(tag)
        return (_LOCAL, len(self.kind) - 1)

    def tree(self, leaves: list, depth: int, tag: tuple) -> tuple:
        """OR tree with every leaf at exactly the given depth."""
        if depth == 0:
            assert len(leaves) == 1
            return leaves[0]
        half = 1 << (depth - 1)
        if len(leaves) <= half:
            g = self.tree(leaves, depth - 1, tag)
            return self.add(K.OR, g, g, tag)
        cut = (len(leaves) + 1) // 2
        return self.add(K.OR, self.tree(leaves[:cut], depth - 1, tag),
                        self.tree(leaves[cut:], depth - 1, tag), tag)

    def finish(self):
        self.kind_arr = np.asarray(self.kind, dtype=np.int8)
        typ = np.zeros((len(self.kind), 2), dtype=np.int64)
        idx = np.full((len(self.kind), 2), -1, dtype=np.int64)
        for g, (r0, r1) in enumerate(self.ref):
            typ[g] = (r0[0], r1[0])
            idx[g] = (r0[1], r1[1])
        self.typ, self.idx = typ, idx
        self.size = len(self.kind)
        return self


def _depth_for(count: int) -> int:
    return max(0, ceil(log2(count))) if count > 1 else 0


class _PassPlan:
    """Per-machine data shared by every module of one standard pass.

    A target is a map letter -> U_a; its signal is the OR, over family sets
    S inside some U_a, of AND(OR of the letters a with S inside U_a, S's
    previous signal).  Knowledge of T uses U_a = pre_a(T); Mealy output b
    uses U_a = {q : lambda(q, a) = b}.  Every tree is padded so all leaves
    sit at one depth, fixed per pass, which makes rise times a function of
    how many trailing inputs are needed and nothing else.
    """

    def __init__(self, M: Machine, family: KnowledgeFamily, closure: KnowledgeFamily,
                 own_inputs: bool, emit_outputs: bool, label: str, pad: bool = True):
        self.M = M
        self.pad = pad
        self.masks = list(family.masks)
        self.index = {s: i for i, s in enumerate(self.masks)}
        self.full = (1 << len(M.states)) - 1
        self.nA = len(M.input_alphabet)
        self.own_inputs = own_inputs
        self.emit_outputs = emit_outputs
        self.label = label
        self.mealy = isinstance(M, Transducer)
        nq = len(M.states)
        dt = M.delta_table
        self.pre = [[self._pre(a, T) for a in range(self.nA)] for T in self.masks]
        if self.mealy:
            lt = M.lambda_table
            self.emit = [[sum(1 << q for q in range(nq) if lt[q, a] == b)
                          for a in range(self.nA)] for b in range(len(M.output_alphabet))]
        else:
            om = M.omega_table
            self.omega_sets = [sum(1 << q for q in range(nq) if om[q] == b)
                               for b in range(len(M.output_alphabet))]
        # padding depths must agree between encodings: take the larger of the
        # closure family's leaf count and, when the full family is feasible,
        # its leaf count
        cm = list(closure.masks)
        know = [self._leaf_count(cm, [self._pre(a, T) for a in range(self.nA)]) for T in cm]
        outs = [self._leaf_count(cm, row) for row in self.emit] if self.mealy else []
        if nq <= FULL_STATE_CAP:
            for T in range(1, self.full):
                know.append(len({self._pre(a, T) for a in range(self.nA)} - {0}))
            if self.mealy:
                outs += [len(set(row) - {0}) for row in self.emit]
        self.d_know = _depth_for(max(know, default=1))
        self.d_emit = _depth_for(max(outs, default=1))
        sub_counts = ([len(_maximal_within(cm, U)) for U in self.omega_sets if 0 < U < self.full]
                      if not self.mealy else [])
        self.d_sub = _depth_for(max(sub_counts, default=1))
        self.d_let = _depth_for(self.nA)
        self._maximal: dict[int, list[int]] = {}
        self._cache: dict[tuple, _Template] = {}

    def _pre(self, a: int, T: int) -> int:
        col = self.M.delta_table[:, a]
        return sum(1 << q for q in range(len(col)) if T >> int(col[q]) & 1)

    def _leaf_count(self, masks, Us) -> int:
        keys = set()
        for U in Us:
            if U == self.full:
                keys.add(-1)
            elif U:
                keys.update(_maximal_within(masks, U))
        return len(keys)

    def maximal(self, U: int) -> list[int]:
        if U not in self._maximal:
            self._maximal[U] = [self.index[s] for s in _maximal_within(self.masks, U)]
        return self._maximal[U]

    def template(self, prev_avail: tuple, ext_avail: tuple) -> _Template:
        key = (prev_avail, ext_avail)
        if key not in self._cache:
            self._cache[key] = self._build(prev_avail, ext_avail).finish()
        return self._cache[key]

    def _build(self, prev_avail, ext_avail) -> _Template:
        M, tp = self.M, _Template()
        A, B = M.input_alphabet, M.output_alphabet
        if not self.pad:
            tp.tree = lambda leaves, depth, tag, _t=tp.tree: _t(leaves, _depth_for(len(leaves)), tag)
        if self.own_inputs:
            ins = []
            for a in range(self.nA):
                ref = tp.add(K.INPUT, tag=("in", A[a]))
                tp.inputs.append(ref[1])
                ins.append(ref)
        else:
            ins = [(_EXT, a) if ext_avail[a] else None for a in range(self.nA)]
        const = tp.add(K.CONST1, tag=("const",))
        tp.const = const[1]

        groups: dict[tuple, tuple] = {}

        def letters(group: tuple) -> tuple:
            if group not in groups:
                groups[group] = tp.tree([ins[a] for a in group], self.d_let,
                                        ("any", "".join(f"[{A[a]}]" for a in group)))
            return groups[group]

        terms: dict[tuple, tuple] = {}

        def target(Us, depth: int, tag: tuple) -> Optional[tuple]:
            by_key: dict[int, list[int]] = {}
            for a, U in enumerate(Us):
                if ins[a] is None or not U:
                    continue
                keys = [-1] if U == self.full else [i for i in self.maximal(U) if prev_avail[i]]
                for k in keys:
                    by_key.setdefault(k, []).append(a)
            leaves = []
            for k in sorted(by_key):
                group = tuple(by_key[k])
                if (k, group) not in terms:
                    src = const if k < 0 else (_PREV, k)
                    label = "Q" if k < 0 else _mask_label(M, self.masks[k])
                    terms[(k, group)] = tp.add(K.AND, letters(group), src, ("term", label))
                leaves.append(terms[(k, group)])
            return tp.tree(leaves, depth, tag) if leaves else None

        sig = []
        for i, T in enumerate(self.masks):
            g = target(self.pre[i], self.d_know, ("know", _mask_label(M, T)))
            sig.append(-1 if g is None else g[1])
        tp.sig = sig
        tp.sig_avail = tuple(s >= 0 for s in sig)

        for b in range(len(B)):
            if self.mealy:
                y = target(self.emit[b], self.d_emit, ("emit", B[b]))
            else:
                U = self.omega_sets[b]
                if U == self.full:
                    y = const
                else:
                    leaves = [(_LOCAL, sig[i]) for i in self.maximal(U) if sig[i] >= 0] if U else []
                    y = tp.tree(leaves, self.d_sub, ("sub", _mask_label(M, U))) if leaves else None
            if self.emit_outputs:
                if y is None:
                    y = tp.add(K.NOT, const, tag=("never", B[b]))
                y = tp.add(K.OUTPUT, y, tag=("out", B[b]))
            tp.out.append(-1 if y is None else y[1])
        return tp


def _maximal_within(masks: Sequence[int], U: int) -> list[int]:
    inside = [s for s in masks if s & ~U == 0]
    return [s for s in inside if not any(t != s and s & ~t == 0 for t in inside)]


# ------------------------------------------------------------- assembly

@dataclass
class _Run:
    base: int
    count: int
    tpl: _Template
    positions: np.ndarray
    label: str


class CircuitBuilder:
    """Accumulates passes of standard modules laid out on one line."""

    def __init__(self, n: int):
        if n < 1:
            raise InputValidationError("n must be at least 1")
        self.n = n
        self.kind: list[np.ndarray] = []
        self.src: list[np.ndarray] = []
        self.pos: list[np.ndarray] = []
        self.size = 0
        self.runs: list[_Run] = []
        self.loose_tags: dict[int, tuple] = {}
        self.passes: list[dict] = []

    def _emit(self, kind, src, pos) -> None:
        self.kind.append(np.asarray(kind, dtype=np.int8).ravel())
        self.src.append(np.asarray(src, dtype=np.int64).reshape(-1, 2))
        self.pos.append(np.asarray(pos, dtype=np.int64).ravel())
        self.size += self.kind[-1].size

    def single(self, kind, pos, tag, s0=-1, s1=-1) -> int:
        g = self.size
        self._emit([kind], [[s0, s1]], [pos])
        self.loose_tags[g] = tag
        return g

    def add_pass(self, M: Machine, family: KnowledgeFamily, closure: KnowledgeFamily,
                 ext: Optional[np.ndarray], direction: str, emit_outputs: bool,
                 label: str = "", pad: bool = True) -> dict:
        """Append one standard pass; returns its signal tables by position.

        ext, when given, is an (n, |A|) array of gate ids (-1 = never) that
        replaces INPUT gates.  Modules are emitted in processing order.
        """
        n = self.n
        plan = _PassPlan(M, family, closure, ext is None, emit_outputs, label, pad)
        order = np.arange(1, n + 1) if direction == LTR else np.arange(n, 0, -1)
        virt = self.single(K.CONST1, int(order[0]), (label, 0, "const", "start"))
        prev_avail = tuple(bool(s >> M.q0 & 1) for s in plan.masks)
        prev_ids = np.where(prev_avail, virt, -1).astype(np.int64)
        nF, nB = len(plan.masks), len(M.output_alphabet)
        sig_ids = np.full((n + 1, nF), -1, dtype=np.int64)
        out_ids = np.full((n + 1, nB), -1, dtype=np.int64)
        in_ids = np.full((n + 1, plan.nA), -1, dtype=np.int64)

        # decide templates, then group equal consecutive ones into runs
        keys, tpls = [], []
        for p in order:
            ext_avail = () if ext is None else tuple(bool(v) for v in ext[p - 1] >= 0)
            tpl = plan.template(prev_avail, ext_avail)
            tpls.append(tpl)
            keys.append(id(tpl))
            prev_avail = tpl.sig_avail
        j = 0
        while j < n:
            r = j
            while r < n and keys[r] == keys[j]:
                r += 1
            prev_ids = self._instantiate(tpls[j], order[j:r], prev_ids, ext, label,
                                         sig_ids, out_ids, in_ids)
            j = r
        info = {"plan": plan, "sig": sig_ids[1:], "out": out_ids[1:], "inputs": in_ids[1:],
                "direction": direction, "label": label}
        self.passes.append(info)
        return info

    def _instantiate(self, tpl: _Template, positions, prev_ids, ext, label,
                     sig_ids, out_ids, in_ids) -> np.ndarray:
        r, S = len(positions), tpl.size
        base = self.size
        rows = np.arange(r)[:, None]
        starts = base + rows * S
        src = np.full((r, S, 2), -1, dtype=np.int64)
        sig_local = np.asarray(tpl.sig, dtype=np.int64)
        for j in range(2):
            typ, idx = tpl.typ[:, j], tpl.idx[:, j]
            loc = typ == _LOCAL
            src[:, loc, j] = starts + idx[loc]
            pv = typ == _PREV
            if pv.any():
                # module 0 of the run reads prev_ids; later ones the module before
                k = idx[pv]
                src[0, pv, j] = prev_ids[k]
                if r > 1:
                    src[1:, pv, j] = starts[:-1] + sig_local[k]
            ex = typ == _EXT
            if ex.any():
                src[:, ex, j] = ext[positions[:, None] - 1, idx[ex][None, :]]
        kinds = np.broadcast_to(tpl.kind_arr, (r, S))
        pos = np.broadcast_to(positions[:, None], (r, S))
        self._emit(kinds, src, pos)
        self.runs.append(_Run(base, r, tpl, np.asarray(positions), label))
        local = lambda arr: np.where(np.asarray(arr, dtype=np.int64) >= 0,
                                     starts + np.asarray(arr, dtype=np.int64), -1)
        sig_ids[positions] = local(tpl.sig)
        out_ids[positions] = local(tpl.out)
        if tpl.inputs:
            in_ids[positions] = local(tpl.inputs)
        last = sig_local
        return np.where(last >= 0, base + (r - 1) * S + last, -1)

    def tagger(self) -> Callable[[int], tuple]:
        bases = [run.base for run in self.runs]
        runs, loose = self.runs, dict(self.loose_tags)

        def tag(g: int) -> tuple:
            if g in loose:
                return loose[g]
            i = bisect_right(bases, g) - 1
            run = runs[i]
            j, local = divmod(g - run.base, run.tpl.size)
            return (run.label, int(run.positions[j])) + run.tpl.tags[local]

        return tag

    def arrays(self):
        kind = np.concatenate(self.kind)
        src = np.concatenate(self.src)
        pos = np.concatenate(self.pos)
        return kind, src, pos


def _family(M: Machine, encoding: str) -> tuple[KnowledgeFamily, KnowledgeFamily]:
    closure = knowledge_closure(M)
    if encoding == "closure":
        return closure, closure
    if encoding == "full":
        return full_family(M), closure
    raise InputValidationError(f"encoding must be 'closure' or 'full', got {encoding!r}")


def synth_standard(M: Machine, n: int, encoding: str = "closure", wire_coeff=1) -> Circuit:
    """One knowledge-encoded module per step, module m at position m."""
    family, closure = _family(M, encoding)
    direction = M.direction if isinstance(M, Transducer) else LTR
    b = CircuitBuilder(n)
    info = b.add_pass(M, family, closure, None, direction, emit_outputs=True, label="")
    kind, src, pos = b.arrays()
    C = Circuit(kind, src, pos, n, M.input_alphabet, M.output_alphabet,
                info["inputs"], info["out"], Fraction(wire_coeff), b.tagger(),
                {"knowledge": info, "family": family})
    return C


def knowledge_gate(C: Circuit, m: int, subset) -> int:
    """Gate id of the knowledge signal for a subset at step m (-1 if absent)."""
    info, family = C.extras["knowledge"], C.extras["family"]
    M = info["plan"].M
    mask = sum(1 << M.state_id(q) for q in subset)
    try:
        i = family.masks.index(mask)
    except ValueError:
        raise InputValidationError(f"subset {sorted(subset)} is not in the family") from None
    return int(info["sig"][m - 1, i])


# ------------------------------------------------------------ prefix circuit

class _PrefixBuilder:
    def __init__(self, n: int):
        self.kind: list[int] = []
        self.src: list[tuple[int, int]] = []
        self.pos: list[int] = []
        self.tags: list[tuple] = []

    def add(self, kind, pos, tag, s0=-1, s1=-1) -> int:
        self.kind.append(kind)
        self.src.append((s0, s1))
        self.pos.append(pos)
        self.tags.append(tag)
        return len(self.kind) - 1

    def or_tree(self, leaves: list[int], pos: int, tag) -> Optional[int]:
        leaves = [g for g in leaves if g is not None]
        if not leaves:
            return None
        while len(leaves) > 1:
            nxt = [self.add(K.OR, pos, tag, leaves[i], leaves[i + 1])
                   for i in range(0, len(leaves) - 1, 2)]
            if len(leaves) % 2:
                nxt.append(leaves[-1])
            leaves = nxt
        return leaves[0]

    def both(self, a, b, pos, tag) -> Optional[int]:
        if a is None or b is None:
            return None
        return self.add(K.AND, pos, tag, a, b)


def synth_prefix(M: Automaton, n: int, wire_coeff=1) -> Circuit:
    """Brent-Kung prefix composition of one-hot transition functions.

    Element 1 is the state vector after step 1; element m > 1 is the
    |Q| x |Q| one-hot matrix of the step-m transition.  Internal gates sit
    at the position of the leftmost step they cover.
    """
    if not isinstance(M, Automaton):
        raise InputValidationError("prefix synthesis takes a Moore automaton")
    if n < 1:
        raise InputValidationError("n must be at least 1")
    bld = _PrefixBuilder(n)
    nq, nA = len(M.states), len(M.input_alphabet)
    dt = M.delta_table
    inputs = np.empty((n, nA), dtype=np.int64)
    elems = []
    for m in range(1, n + 1):
        for a in range(nA):
            inputs[m - 1, a] = bld.add(K.INPUT, m, ("in", m, M.input_alphabet[a]))
        if m == 1:
            vec = [bld.or_tree([int(inputs[0, a]) for a in range(nA) if dt[M.q0, a] == q],
                               m, ("vec", 1, M.states[q])) for q in range(nq)]
            elems.append(("v", m, vec))
        else:
            mat = [[bld.or_tree([int(inputs[m - 1, a]) for a in range(nA) if dt[p, a] == q],
                                m, ("step", m, M.states[p], M.states[q]))
                    for q in range(nq)] for p in range(nq)]
            elems.append(("f", m, mat))

    def combine(x, y):
        kx, px, vx = x
        _, _, vy = y
        tag = ("compose", px)
        if kx == "v":
            v = [bld.or_tree([bld.both(vx[q], vy[q][r], px, tag) for q in range(nq)], px, tag)
                 for r in range(nq)]
            return ("v", px, v)
        mat = [[bld.or_tree([bld.both(vx[p][q], vy[q][r], px, tag) for q in range(nq)], px, tag)
                for r in range(nq)] for p in range(nq)]
        return ("f", px, mat)

    def prefix(xs):
        if len(xs) == 1:
            return list(xs)
        pairs = [combine(xs[i], xs[i + 1]) for i in range(0, len(xs) - 1, 2)]
        if len(xs) % 2:
            pairs.append(xs[-1])
        sub = prefix(pairs)
        out = [xs[0]]
        for i in range(1, len(xs)):
            out.append(sub[i // 2] if i % 2 else combine(sub[i // 2 - 1], xs[i]))
        return out

    states = prefix(elems)
    const: dict[int, int] = {}
    outputs = np.empty((n, len(M.output_alphabet)), dtype=np.int64)
    for m in range(1, n + 1):
        vec = states[m - 1][2]
        for b, name in enumerate(M.output_alphabet):
            y = bld.or_tree([vec[q] for q in range(nq) if M.omega_table[q] == b], m,
                            ("decode", m, name))
            if y is None:
                if m not in const:
                    const[m] = bld.add(K.CONST1, m, ("const", m))
                y = bld.add(K.NOT, m, ("never", m, name), const[m])
            outputs[m - 1, b] = bld.add(K.OUTPUT, m, ("out", m, name), y)
    kind = np.asarray(bld.kind, dtype=np.int8)
    src = np.asarray(bld.src, dtype=np.int64).reshape(-1, 2)
    pos = np.asarray(bld.pos, dtype=np.int64)
    tags = bld.tags
    return Circuit(kind, src, pos, n, M.input_alphabet, M.output_alphabet, inputs, outputs,
                   Fraction(wire_coeff), tagger=lambda g: tags[g])


def single_wire(distance: int = 0) -> Circuit:
    """INPUT at position 0 feeding an OUTPUT at the given position."""
    kind = np.array([K.INPUT, K.OUTPUT], dtype=np.int8)
    src = np.array([[-1, -1], [0, -1]], dtype=np.int64)
    pos = np.array([0, distance], dtype=np.int64)
    return Circuit(kind, src, pos, 1, ("1",), ("1",), np.array([[0]]), np.array([[1]]))


__all__ = [
    "Circuit", "CircuitBuilder", "KnowledgeFamily", "knowledge_closure", "full_family",
    "synth_standard", "synth_prefix", "knowledge_gate", "logical_depth", "physical_depth",
    "cost", "load_circuit", "circuit_from_dict", "single_wire", "FAMILY_CAP",
]
