"""Compiled inner loops over materialized gate arrays.

Gate kinds are small integers; every array is indexed by gate id and ids
are topological, so a single forward scan evaluates the whole circuit.
"""

from __future__ import annotations

import os

import numba
import numpy as np
from numba import njit, prange

INPUT, CONST1, AND, OR, NOT, OUTPUT = range(6)
KIND_NAMES = ("INPUT", "CONST1", "AND", "OR", "NOT", "OUTPUT")
NEVER = np.inf

# the TBB layer on this platform is too old; the portable pool is enough
numba.config.THREADING_LAYER = os.environ.get("NUMBA_THREADING_LAYER", "workqueue")


def configure_threads() -> int:
    """Honour FSA_LAB_THREADS as a cap on numba's worker count."""
    cap = os.environ.get("FSA_LAB_THREADS")
    limit = numba.config.NUMBA_NUM_THREADS
    if cap:
        try:
            limit = max(1, min(limit, int(cap)))
        except ValueError:
            pass
    numba.set_num_threads(limit)
    return limit


@njit(cache=True)
def _settle_into(kind, s0, s1, pos, coeff, active, rise):
    for g in range(kind.size):
        k = kind[g]
        if k == 0:
            rise[g] = 0.0 if active[g] else np.inf
        elif k == 1:
            rise[g] = 0.0
        elif k == 4:
            rise[g] = np.inf
        else:
            a = s0[g]
            ra = rise[a] + coeff * abs(pos[g] - pos[a])
            if k == 5:
                rise[g] = 1.0 + ra
            else:
                b = s1[g]
                rb = rise[b] + coeff * abs(pos[g] - pos[b])
                if k == 2:
                    rise[g] = 1.0 + (ra if ra > rb else rb)
                else:
                    rise[g] = 1.0 + (ra if ra < rb else rb)


@njit(cache=True)
def settle_one(kind, s0, s1, pos, coeff, in_map, x):
    active = np.zeros(kind.size, dtype=np.bool_)
    for m in range(x.size):
        active[in_map[m, x[m]]] = True
    rise = np.empty(kind.size, dtype=np.float64)
    _settle_into(kind, s0, s1, pos, coeff, active, rise)
    return rise


@njit(cache=True, parallel=True)
def settle_batch(kind, s0, s1, pos, coeff, in_map, out_map, X):
    """Per trial: settle delay and number of steps not decoding one-hot."""
    T, n = X.shape
    delays = np.empty(T, dtype=np.float64)
    bad = np.zeros(T, dtype=np.int64)
    for t in prange(T):
        active = np.zeros(kind.size, dtype=np.bool_)
        for m in range(n):
            active[in_map[m, X[t, m]]] = True
        rise = np.empty(kind.size, dtype=np.float64)
        _settle_into(kind, s0, s1, pos, coeff, active, rise)
        worst = 0.0
        for m in range(n):
            best = np.inf
            risen = 0
            for b in range(out_map.shape[1]):
                r = rise[out_map[m, b]]
                if r < np.inf:
                    risen += 1
                if r < best:
                    best = r
            if risen != 1:
                bad[t] += 1
            if best > worst:
                worst = best
        delays[t] = worst
    return delays, bad


@njit(cache=True)
def logical_depths(kind, s0, s1):
    depth = np.zeros(kind.size, dtype=np.int64)
    for g in range(kind.size):
        k = kind[g]
        if k == 0 or k == 1:
            depth[g] = 1
        elif k == 4 or k == 5:
            depth[g] = 1 + depth[s0[g]]
        else:
            a = depth[s0[g]]
            b = depth[s1[g]]
            depth[g] = 1 + (a if a > b else b)
    return depth


@njit(cache=True)
def physical_depths(kind, s0, s1, pos, coeff):
    """Longest weighted path; returns value and its (gates, wire) parts."""
    val = np.zeros(kind.size, dtype=np.float64)
    gates = np.zeros(kind.size, dtype=np.int64)
    wire = np.zeros(kind.size, dtype=np.int64)
    for g in range(kind.size):
        k = kind[g]
        if k == 0 or k == 1:
            val[g] = 1.0
            gates[g] = 1
            continue
        best = -1
        bv = -1.0
        bw = 0
        nsrc = 1 if (k == 4 or k == 5) else 2
        for j in range(nsrc):
            src = s0[g] if j == 0 else s1[g]
            w = abs(pos[g] - pos[src])
            v = val[src] + coeff * w
            if v > bv:
                bv = v
                best = src
                bw = w
        val[g] = bv + 1.0
        gates[g] = gates[best] + 1
        wire[g] = wire[best] + bw
    return val, gates, wire


@njit(cache=True)
def suffix_determination_batch(delta, goodmask, X, q0):
    """Max over m of the shortest forcing suffix, for every row of X.

    goodmask[q] is the bitmask of states sharing q's output.  The chain of
    distinct images delta*(Q, suffix) is nested, so at most |Q| entries
    are live at any step.
    """
    T, n = X.shape
    nq = delta.shape[0]
    full = (np.uint64(1) << np.uint64(nq)) - np.uint64(1) if nq < 64 else ~np.uint64(0)
    out = np.zeros(T, dtype=np.int64)
    imgs = np.empty(nq + 1, dtype=np.uint64)
    js = np.empty(nq + 1, dtype=np.int64)
    for t in range(T):
        q = q0
        size = 0
        worst = 0
        for m in range(n):
            a = X[t, m]
            q = delta[q, a]
            # advance live images, dropping duplicates (keep smallest j)
            k = 0
            for i in range(size):
                src = imgs[i]
                img = np.uint64(0)
                for s in range(nq):
                    if (src >> np.uint64(s)) & np.uint64(1):
                        img |= np.uint64(1) << np.uint64(delta[s, a])
                if k == 0 or imgs[k - 1] != img:
                    imgs[k] = img
                    js[k] = js[i] + 1
                    k += 1
            size = k
            # prepend the empty suffix (image Q)
            for i in range(size, 0, -1):
                imgs[i] = imgs[i - 1]
                js[i] = js[i - 1]
            imgs[0] = full
            js[0] = 0
            size += 1
            if size > 1 and imgs[1] == full:
                for i in range(1, size - 1):
                    imgs[i] = imgs[i + 1]
                    js[i] = js[i + 1]
                size -= 1
            target = goodmask[q]
            ans = m + 1
            for i in range(size):
                if imgs[i] & ~target == np.uint64(0):
                    if js[i] < ans:
                        ans = js[i]
                    break
            if ans > worst:
                worst = ans
        out[t] = worst
    return out
