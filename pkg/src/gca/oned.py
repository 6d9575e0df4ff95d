"""One-dimensional engine: trimmed de Bruijn presentations of SFTs.

An ``Sft1D`` is built from a window length ``ell`` and a set of allowed
``ell``-words.  States are (ell-1)-words, edges are the allowed ell-words,
and trimming keeps exactly the edges lying on bi-infinite paths, so that the
remaining edge words are the globally allowed ell-words.
"""

from collections import deque
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import rows as R
from .automata import LabelGraph, minimal_dfa
from .errors import NotOneDimensional
from .kernels import path_words


class Sft1D:
    def __init__(self, group, ell, words):
        self.group = group
        self.q = group.order
        self.ell = int(ell)
        words = R.unique_rows(np.asarray(words, dtype=np.int64).reshape(-1, self.ell))
        self.local_words = words
        self.local = _Graph(words, self.q, self.ell)
        keep = self.local.trim()
        self.words = words[keep]
        self.graph = _Graph(self.words, self.q, self.ell)

    # -- basic structure -----------------------------------------------
    @property
    def nstates(self):
        return self.graph.nstates

    @property
    def empty(self):
        return len(self.words) == 0

    def state_of_word(self, w):
        """Index of the state for an (ell-1)-word, or -1."""
        return self.graph.state_index(np.asarray(w, dtype=np.int64))

    def identity_state(self):
        return self.state_of_word([self.group.identity] * (self.ell - 1))

    # -- languages -----------------------------------------------------
    def language(self, n):
        """All globally allowed words of length n as sorted rows."""
        n = int(n)
        if n <= 0:
            return np.zeros((1, 0), dtype=np.int64)
        if self.empty:
            return np.zeros((0, n), dtype=np.int64)
        if n <= self.ell:
            return R.unique_rows(self.words[:, :n])
        g = self.graph
        origin, labels = path_words(g.ptr, g.sym, g.tgt, np.arange(g.nstates), n - self.ell + 1)
        return R.unique_rows(np.concatenate([g.state_words[origin], labels], axis=1))

    def count_words(self, n):
        """|L_n| without listing the words: walks in the trimmed graph spell
        distinct words once n >= ell."""
        n = int(n)
        if n <= self.ell or self.empty:
            return len(self.language(n))
        from scipy.sparse import csr_matrix
        g = self.graph
        adj = csr_matrix((np.ones(len(g.src), dtype=np.int64), (g.src, g.tgt)), shape=(g.nstates, g.nstates))
        v = np.ones(g.nstates, dtype=np.int64)
        for _ in range(n - self.ell + 1):
            v = adj @ v
        return int(v.sum())

    def follower_subgroup(self):
        """Symbols that may follow the identity state (a subgroup for group shifts)."""
        s = self.identity_state()
        if s < 0:
            return np.zeros(0, dtype=np.int64)
        g = self.graph
        return np.unique(g.sym[g.ptr[s]:g.ptr[s + 1]])

    def generators(self, n):
        """Generators of the subgroup L_n of a group shift (layered construction)."""
        cache = self.__dict__.setdefault("_gens", {})
        if n in cache:
            return cache[n]
        grp = self.group
        if n <= self.ell:
            gens, _ = R.reduce_generators(grp, self.language(n))
        else:
            prev = self.generators(n - 1)
            g = self.graph
            lifted = []
            for w in prev:
                s = g.state_index(w[len(w) - (self.ell - 1):] if self.ell > 1 else w[:0])
                e = g.ptr[s]
                lifted.append(np.append(w, g.sym[e]))
            k_gens, _ = R.reduce_generators(grp, self.follower_subgroup()[:, None])
            tail = [np.append(np.full(n - 1, grp.identity, dtype=np.int64), a) for a in k_gens[:, 0]]
            gens = np.array(lifted + tail, dtype=np.int64).reshape(-1, n)
        cache[n] = gens
        return gens

    # -- membership ----------------------------------------------------
    def run(self, cells_values, restrict=None, keep=False):
        """Subset simulation over positions lo..hi of a (possibly gappy) word.

        Starts from every state (any past is possible).  With ``keep``,
        returns the list of state sets after each position.
        """
        g = self.graph
        lo = min(c for c, _ in cells_values)
        hi = max(c for c, _ in cells_values)
        fixed = dict(cells_values)
        cur = np.ones(g.nstates, dtype=bool) if restrict is None else restrict.copy()
        emask = np.ones(len(g.src), dtype=bool)
        hist = [cur]
        for pos in range(lo, hi + 1):
            ok = cur[g.src]
            if pos in fixed:
                ok = ok & (g.sym == fixed[pos])
            ok &= emask
            nxt = np.zeros(g.nstates, dtype=bool)
            nxt[g.tgt[ok]] = True
            cur = nxt
            if keep:
                hist.append(cur)
        return hist if keep else cur

    def accepts(self, cells_values):
        if self.empty:
            return False
        if not cells_values:
            return True
        return bool(self.run(cells_values).any())

    def periodic_through(self, cells_values):
        """A cycle of the graph whose labels contain the pattern starting at
        its leftmost cell; returns (labels, lo) or None."""
        g = self.graph
        lo = min(c for c, _ in cells_values)
        hi = max(c for c, _ in cells_values)
        fixed = dict(cells_values)
        for comp in self.components():
            inside = np.zeros(g.nstates, dtype=bool)
            inside[comp] = True
            emask = inside[g.src] & inside[g.tgt]
            sets = [inside.copy()]
            cur = inside.copy()
            for pos in range(lo, hi + 1):
                ok = cur[g.src] & emask
                if pos in fixed:
                    ok &= g.sym == fixed[pos]
                nxt = np.zeros(g.nstates, dtype=bool)
                nxt[g.tgt[ok]] = True
                cur = nxt
                sets.append(cur)
            if not cur.any():
                continue
            # walk back choosing edges consistent with the stored sets
            state = int(np.argmax(cur))
            end = state
            labels = []
            for step in range(hi - lo, -1, -1):
                pos = lo + step
                ok = (g.tgt == state) & emask & sets[step][g.src]
                if pos in fixed:
                    ok &= g.sym == fixed[pos]
                e = int(np.argmax(ok))
                labels.append(int(g.sym[e]))
                state = int(g.src[e])
            labels.reverse()
            closing = self._path(end, state, emask)
            return labels + closing, lo
        return None

    def _path(self, a, b, emask):
        """Labels of a shortest path a -> b using edges in ``emask`` (empty if a == b)."""
        if a == b:
            return []
        g = self.graph
        prev = {a: None}
        dq = deque([a])
        while dq:
            s = dq.popleft()
            for e in range(g.ptr[s], g.ptr[s + 1]):
                if not emask[e]:
                    continue
                t = int(g.tgt[e])
                if t not in prev:
                    prev[t] = e
                    if t == b:
                        dq.clear()
                        break
                    dq.append(t)
        labels = []
        s = b
        while s != a:
            e = prev[s]
            labels.append(int(g.sym[e]))
            s = int(g.src[e])
        return labels[::-1]

    def dead_radius(self, cells_values, max_radius=None):
        """Least n >= 1 such that no locally admissible word on the interval
        grown by n on both sides carries the pattern (None if not found)."""
        lg = self.local
        lo = min(c for c, _ in cells_values)
        hi = max(c for c, _ in cells_values)
        fixed = dict(cells_values)
        limit = max_radius if max_radius is not None else lg.nstates + self.ell + 2
        for n in range(1, limit + 1):
            a, b = lo - n, hi + n
            if b - a + 1 < self.ell:
                continue
            # initial state: first ell-1 symbols
            if self.ell > 1:
                sw = lg.state_words
                ok = np.ones(lg.nstates, dtype=bool)
                for j in range(self.ell - 1):
                    if a + j in fixed:
                        ok &= sw[:, j] == fixed[a + j]
                cur = ok
                start = a + self.ell - 1
            else:
                cur = np.ones(lg.nstates, dtype=bool)
                start = a
            for pos in range(start, b + 1):
                m = cur[lg.src]
                if pos in fixed:
                    m &= lg.sym == fixed[pos]
                nxt = np.zeros(lg.nstates, dtype=bool)
                nxt[lg.tgt[m]] = True
                cur = nxt
            if not cur.any():
                return n
        return None

    # -- graph structure -----------------------------------------------
    def components(self):
        """Strongly connected components (lists of states) that carry edges."""
        g = self.graph
        if g.nstates == 0:
            return []
        adj = csr_matrix((np.ones(len(g.src)), (g.src, g.tgt)), shape=(g.nstates, g.nstates))
        _, lab = connected_components(adj, directed=True, connection="strong")
        comps = {}
        for s in range(g.nstates):
            comps.setdefault(int(lab[s]), []).append(s)
        out = []
        for c in comps.values():
            cs = set(c)
            if any(int(g.tgt[e]) in cs for s in c for e in range(g.ptr[s], g.ptr[s + 1])):
                out.append(c)
        out.sort()
        return out

    def component_labels(self):
        g = self.graph
        lab = np.full(g.nstates, -1, dtype=np.int64)
        for i, c in enumerate(self.components()):
            lab[c] = i
        return lab

    def period_of(self, comp):
        g = self.graph
        cs = set(comp)
        level = {comp[0]: 0}
        dq = deque([comp[0]])
        d = 0
        while dq:
            s = dq.popleft()
            for e in range(g.ptr[s], g.ptr[s + 1]):
                t = int(g.tgt[e])
                if t not in cs:
                    continue
                if t not in level:
                    level[t] = level[s] + 1
                    dq.append(t)
                else:
                    d = np.gcd(d, level[s] + 1 - level[t])
        return int(abs(d))

    def mixing_class(self):
        g = self.graph
        comps = self.components()
        lab = self.component_labels()
        within = lab[g.src] == lab[g.tgt]
        within &= lab[g.src] >= 0
        transitive = len(comps) == 1 and bool(within.all())
        mixing = transitive and self.period_of(comps[0]) == 1
        finite = bool(within.all()) and all(
            sum(g.ptr[s + 1] - g.ptr[s] for s in c) == len(c) for c in comps)
        return {"transitive": transitive, "mixing": mixing, "finite": finite}

    def cycles(self):
        """For a finite shift: the label sequence of each component's cycle."""
        g = self.graph
        out = []
        for c in self.components():
            s0 = c[0]
            labels = []
            s = s0
            while True:
                e = g.ptr[s]
                labels.append(int(g.sym[e]))
                s = int(g.tgt[e])
                if s == s0:
                    break
            out.append(labels)
        return out

    @cached_property
    def dfa(self):
        g = self.graph
        return minimal_dfa(LabelGraph(g.nstates, g.src, g.tgt, g.sym))


class _Graph:
    """CSR de Bruijn graph over the given ell-words."""

    def __init__(self, words, q, ell):
        self.q = q
        self.ell = ell
        n = len(words)
        if ell == 1:
            self.state_words = np.zeros((1, 0), dtype=np.int64)
            src = np.zeros(n, dtype=np.int64)
            tgt = np.zeros(n, dtype=np.int64)
            self._keys = None
        else:
            pre = words[:, :-1]
            suf = words[:, 1:]
            both = R.unique_rows(np.concatenate([pre, suf])) if n else np.zeros((0, ell - 1), dtype=np.int64)
            self.state_words = both
            self._keys = R.keys(both, q) if len(both) else np.zeros(0, dtype=np.int64)
            src = np.searchsorted(self._keys, R.keys(pre, q)) if n else np.zeros(0, dtype=np.int64)
            tgt = np.searchsorted(self._keys, R.keys(suf, q)) if n else np.zeros(0, dtype=np.int64)
        sym = words[:, -1] if n else np.zeros(0, dtype=np.int64)
        order = np.lexsort((sym, tgt, src)) if n else np.zeros(0, dtype=np.int64)
        self.src = np.asarray(src, dtype=np.int64)[order]
        self.tgt = np.asarray(tgt, dtype=np.int64)[order]
        self.sym = np.asarray(sym, dtype=np.int64)[order]
        self.order = order
        self.nstates = len(self.state_words)
        self.ptr = np.zeros(self.nstates + 1, dtype=np.int64)
        np.add.at(self.ptr, self.src + 1, 1)
        self.ptr = np.cumsum(self.ptr)

    def state_index(self, w):
        if self.ell == 1:
            return 0
        k = R.keys(np.asarray(w, dtype=np.int64)[None, :], self.q)
        i = int(np.searchsorted(self._keys, k[0]))
        if i < len(self._keys) and self._keys[i] == k[0]:
            return i
        return -1

    def trim(self):
        """Mask (in original word order) of edges on bi-infinite paths."""
        alive = np.ones(len(self.src), dtype=bool)
        while True:
            has_in = np.zeros(self.nstates, dtype=bool)
            has_out = np.zeros(self.nstates, dtype=bool)
            has_in[self.tgt[alive]] = True
            has_out[self.src[alive]] = True
            nxt = alive & has_in[self.src] & has_out[self.tgt]
            if (nxt == alive).all():
                break
            alive = nxt
        keep = np.zeros(len(self.src), dtype=bool)
        keep[self.order[alive]] = True
        return keep


def sft_of(x):
    """Cached trimmed automaton of a one-dimensional presentation."""
    if x.dim != 1:
        raise NotOneDimensional(f"expected a one-dimensional shift, got dimension {x.dim}")
    sft = x.__dict__.get("_sft1d")
    if sft is None:
        sizes, allowed = x.window
        sft = Sft1D(x.group, sizes[0], allowed)
        x.__dict__["_sft1d"] = sft
    return sft


def from_words(group, words, name=None):
    """One-dimensional presentation whose window is the given set of words."""
    from .shifts import GroupShiftPresentation
    words = np.asarray(words, dtype=np.int64)
    return GroupShiftPresentation.from_window(group, (words.shape[1],), words, name=name)


def trimmed_presentation(x):
    """Same shift, window replaced by its globally allowed words."""
    sft = sft_of(x)
    out = from_words(x.group, sft.words, name=x.name)
    out.__dict__["_sft1d"] = sft
    return out
