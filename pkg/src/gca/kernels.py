"""Kernel dispatch: compiled extension when available, numpy/Python otherwise.

Set ``GCA_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _pykernels
from .errors import BudgetExceeded

try:
    if os.environ.get("GCA_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

DENSE_TABLE_LIMIT = 1 << 22


def backend():
    return BACKEND


def torus_scan(arr, patterns, impl=None):
    impl = impl or _impl
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    if impl is _pykernels:
        return _pykernels.torus_scan(arr, patterns)
    flat = [(np.asarray(p.cells, dtype=np.int64).reshape(len(p.cells), -1),
             np.asarray(p.values, dtype=np.int64)) for p in patterns]
    return impl.torus_scan(arr, flat)


def path_words(ptr, sym, tgt, starts, length, impl=None):
    impl = impl or _impl
    return impl.path_words(np.asarray(ptr, dtype=np.int64), np.asarray(sym, dtype=np.int64),
                           np.asarray(tgt, dtype=np.int64), np.asarray(starts, dtype=np.int64),
                           int(length))


class Csp:
    """A finite constraint problem over variables 0..nvars-1 with values 0..q-1.

    Constraints are (variables, allowed rows).  Variables are assigned in
    index order, so callers number them in the order they want searched.
    """

    def __init__(self, q, nvars, constraints, pins=None):
        self.q = int(q)
        self.nvars = int(nvars)
        if self.q > 62:
            raise ValueError("alphabet too large for bitmask candidates")
        self.pins = [-1] * self.nvars
        for v, a in (pins or {}).items():
            self.pins[v] = int(a)
        occ_vars = [[] for _ in range(self.nvars)]
        occ_tables = [[] for _ in range(self.nvars)]
        reach = [-1] * self.nvars  # largest variable sharing a constraint
        for vs, allowed in constraints:
            vs, allowed = _dedupe_vars(vs, np.asarray(allowed, dtype=np.int64))
            order = sorted(range(len(vs)), key=lambda t: vs[t])
            svars = [vs[t] for t in order]
            rows = allowed[:, order] if len(allowed) else allowed.reshape(0, len(vs))
            for j, v in enumerate(svars):
                size = self.q ** j
                if size > DENSE_TABLE_LIMIT:
                    raise ValueError("constraint too wide for dense prefix tables")
                tab = np.zeros(size, dtype=np.int64)
                if len(rows):
                    w = self.q ** np.arange(j - 1, -1, -1, dtype=np.int64)
                    codes = rows[:, :j] @ w if j else np.zeros(len(rows), dtype=np.int64)
                    np.bitwise_or.at(tab, codes, np.left_shift(1, rows[:, j]))
                occ_vars[v].append(tuple(svars[:j]))
                occ_tables[v].append(tab)
            for v in svars:
                reach[v] = max(reach[v], svars[-1])
        self.occ_vars = occ_vars
        self.occ_tables = occ_tables
        # frontier[i]: variables < i interacting with some variable >= i
        frontier = [[] for _ in range(self.nvars + 1)]
        for u in range(self.nvars):
            for i in range(u + 1, reach[u] + 1):
                frontier[i].append(u)
        self.frontier = [tuple(f) for f in frontier]

    def solve(self, mode="first", max_nodes=None, impl=None):
        impl = impl or _impl
        if impl is _pykernels:
            tables = [[t.tolist() for t in ts] for ts in self.occ_tables]
        else:
            tables = self.occ_tables
        status, payload, nodes = impl.csp_search(self.q, self.nvars, self.occ_vars, tables,
                                                 self.pins, self.frontier, mode, max_nodes)
        self.nodes = nodes
        if status == "budget":
            raise BudgetExceeded("constraint search exceeded its node budget",
                                 frontier={"nodes": nodes})
        return payload


def _dedupe_vars(vs, allowed):
    """Fold repeated variables of a constraint (wrapping tori) into distinct ones."""
    vs = tuple(int(v) for v in vs)
    if len(set(vs)) == len(vs):
        return vs, allowed
    first = {}
    keep = []
    ok = np.ones(len(allowed), dtype=bool)
    for j, v in enumerate(vs):
        if v in first:
            ok &= allowed[:, j] == allowed[:, first[v]]
        else:
            first[v] = j
            keep.append(j)
    sub = allowed[ok][:, keep]
    if len(sub):
        sub = np.unique(sub, axis=0)
    return tuple(vs[j] for j in keep), sub


def window_filter(q, sizes, forbidden):
    """Rows over the box ``sizes`` avoiding every forbidden pattern at every
    placement inside the box.  Built cell by cell to prune early."""
    from .shifts import box_cells
    cells = box_cells(sizes)
    index = {c: i for i, c in enumerate(cells)}
    checks = [[] for _ in cells]  # by last cell index: (cols, values)
    for p in forbidden:
        arr = np.asarray(p.cells)
        lo, hi = arr.min(axis=0), arr.max(axis=0)
        room = tuple(s - int(h - l) for s, h, l in zip(sizes, hi, lo))
        if min(room) <= 0:
            continue
        for anchor in box_cells(room, tuple(-int(x) for x in lo)):
            cols = [index[tuple(a + b for a, b in zip(anchor, c))] for c in p.cells]
            checks[max(cols)].append((np.asarray(cols), np.asarray(p.values)))
    rows = np.zeros((1, 0), dtype=np.int64)
    for j in range(len(cells)):
        n = len(rows)
        rows = np.concatenate([np.repeat(rows, q, axis=0),
                               np.tile(np.arange(q, dtype=np.int64), n)[:, None]], axis=1)
        for cols, vals in checks[j]:
            bad = (rows[:, cols] == vals).all(axis=1)
            if bad.any():
                rows = rows[~bad]
        if len(rows) == 0:
            break
    return rows.reshape(-1, len(cells))
