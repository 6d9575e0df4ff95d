"""Label graphs, subset construction and minimal deterministic automata.

A label graph is a list of edges (source, target, label) in which every
state lies on a bi-infinite path; its language (the finite label words of
paths) is factorial, so every state of the derived automata is accepting
and only missing transitions reject.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class LabelGraph:
    nstates: int
    src: np.ndarray
    tgt: np.ndarray
    lab: np.ndarray


@dataclass(frozen=True)
class Dfa:
    """Partial DFA with all states accepting; ``delta[s]`` maps label -> state."""
    start: int
    delta: tuple

    @property
    def size(self):
        return len(self.delta)

    def accepts(self, word):
        s = self.start
        for a in word:
            s = self.delta[s].get(int(a))
            if s is None:
                return False
        return True

    def words(self, n):
        """All accepted words of length ``n`` in lexicographic order."""
        layer = [((), self.start)]
        for _ in range(n):
            nxt = []
            for w, s in layer:
                for a in sorted(self.delta[s]):
                    nxt.append((w + (a,), self.delta[s][a]))
            layer = nxt
        return [w for w, _ in layer]


def determinize(graph, max_states=None):
    """Subset construction started from the set of all states."""
    succ = {}
    for s, t, a in zip(graph.src.tolist(), graph.tgt.tolist(), graph.lab.tolist()):
        succ.setdefault(s, {}).setdefault(a, set()).add(t)
    succ_mask = {s: {a: _mask(ts) for a, ts in m.items()} for s, m in succ.items()}
    start = (1 << graph.nstates) - 1
    index = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        subset = order[i]
        i += 1
        trans = {}
        s = subset
        while s:
            low = s & -s
            st = low.bit_length() - 1
            s ^= low
            for a, m in succ_mask.get(st, {}).items():
                trans[a] = trans.get(a, 0) | m
        row = {}
        for a in sorted(trans):
            m = trans[a]
            j = index.get(m)
            if j is None:
                j = len(order)
                index[m] = j
                order.append(m)
                if max_states is not None and len(order) > max_states:
                    raise OverflowError("subset construction exceeded its state cap")
            row[a] = j
        delta.append(row)
    return Dfa(0, tuple(delta))


def _mask(states):
    m = 0
    for t in states:
        m |= 1 << t
    return m


def minimize(dfa):
    """Moore partition refinement; returns the canonical minimal DFA."""
    n = dfa.size
    # an implicit dead state (index n) absorbs missing transitions
    labels = sorted({a for row in dfa.delta for a in row})
    block = [0] * n + [1]
    nblocks = 2
    while True:
        sig = {}
        new = []
        for s in range(n + 1):
            if s == n:
                key = ("dead",)
            else:
                row = dfa.delta[s]
                key = (block[s],) + tuple(block[row[a]] if a in row else block[n] for a in labels)
            if key not in sig:
                sig[key] = len(sig)
            new.append(sig[key])
        if len(sig) == nblocks:
            block = new
            break
        block = new
        nblocks = len(sig)
    dead = block[n]
    reps = {}
    for s in range(n):
        reps.setdefault(block[s], s)
    raw = {}
    for b, s in reps.items():
        if b == dead:
            continue
        raw[b] = {a: block[t] for a, t in dfa.delta[s].items() if block[t] != dead}
    return canonical(block[dfa.start], raw)


def canonical(start, raw):
    """Renumber states breadth-first from the start with labels in order."""
    num = {start: 0}
    queue = [start]
    rows = []
    k = 0
    while k < len(queue):
        s = queue[k]
        k += 1
        row = {}
        for a in sorted(raw[s]):
            t = raw[s][a]
            if t not in num:
                num[t] = len(queue)
                queue.append(t)
            row[a] = num[t]
        rows.append(row)
    return Dfa(0, tuple(rows))


def same_language(d1, d2):
    """Equality of the languages of two canonical minimal DFAs."""
    return d1.delta == d2.delta


def minimal_dfa(graph, max_states=None):
    return minimize(determinize(graph, max_states=max_states))
