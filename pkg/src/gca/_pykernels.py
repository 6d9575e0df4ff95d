"""Pure-Python/numpy implementations of the hot kernels.

The compiled extension ``_kernels`` exposes the same functions; see
``kernels.py`` for the selection logic.
"""

import numpy as np


def torus_scan(arr, patterns):
    """True iff no translate of any pattern occurs in the periodic array."""
    axes = tuple(range(arr.ndim))
    for p in patterns:
        hit = np.ones(arr.shape, dtype=bool)
        for c, v in zip(p.cells, p.values):
            hit &= np.roll(arr, tuple(-x for x in c), axis=axes) == v
            if not hit.any():
                break
        if hit.any():
            return False
    return True


def csp_search(q, nvars, occ_vars, occ_tables, pins, frontier, mode, max_nodes):
    """Backtracking over variables 0..nvars-1 in order.

    ``occ_vars[v]`` / ``occ_tables[v]`` list, for each constraint touching
    ``v``, the constraint variables preceding ``v`` and a dense table from the
    mixed-radix code of their values to the bitmask of allowed values of
    ``v``.  ``frontier[i]`` lists the assigned variables that still interact
    with the unassigned suffix; it keys the memo of dead (or counted)
    suffixes.

    Returns ``(status, payload, nodes)`` where status is ``"ok"`` or
    ``"budget"``; the payload is the first solution (or ``None``), the number
    of solutions, or the list of all solutions depending on ``mode``.
    """
    full = (1 << q) - 1
    assign = [0] * nvars
    memo = {}
    solutions = []
    nodes = 0
    budget_hit = False
    use_memo = mode in ("first", "count")

    def candidates(v):
        m = full if pins[v] < 0 else (1 << pins[v])
        for pv, tab in zip(occ_vars[v], occ_tables[v]):
            code = 0
            for u in pv:
                code = code * q + assign[u]
            m &= tab[code]
            if not m:
                return 0
        return m

    def rec(i):
        nonlocal nodes, budget_hit
        if i == nvars:
            if mode == "all":
                solutions.append(tuple(assign))
            elif mode == "first":
                solutions.append(tuple(assign))
            return 1
        key = None
        if use_memo:
            key = (i, tuple(assign[u] for u in frontier[i]))
            hit = memo.get(key)
            if hit is not None:
                return hit
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            budget_hit = True
            return 0
        m = candidates(i)
        total = 0
        while m:
            low = m & -m
            a = low.bit_length() - 1
            m ^= low
            assign[i] = a
            r = rec(i + 1)
            if budget_hit:
                return 0
            total += r
            if mode == "first" and total:
                return total
        if use_memo:
            memo[key] = total
        return total

    count = rec(0)
    if budget_hit:
        return "budget", None, nodes
    if mode == "first":
        return "ok", (solutions[0] if solutions else None), nodes
    if mode == "count":
        return "ok", count, nodes
    return "ok", solutions, nodes


def path_words(ptr, sym, tgt, starts, length):
    """Label sequences of all paths of ``length`` edges from each start state.

    Returns ``(origin_index, labels)`` with one row per path; ``origin_index``
    refers into ``starts``.
    """
    ptr = np.asarray(ptr, dtype=np.int64)
    sym = np.asarray(sym, dtype=np.int64)
    tgt = np.asarray(tgt, dtype=np.int64)
    origin = np.arange(len(starts), dtype=np.int64)
    state = np.asarray(starts, dtype=np.int64)
    labels = np.zeros((len(starts), 0), dtype=np.int64)
    for _ in range(length):
        deg = ptr[state + 1] - ptr[state]
        rep = np.repeat(np.arange(len(state)), deg)
        # edge index: ptr[state] + offset within the block
        offs = np.arange(len(rep)) - np.repeat(np.cumsum(deg) - deg, deg)
        e = ptr[state][rep] + offs
        labels = np.concatenate([labels[rep], sym[e][:, None]], axis=1)
        origin = origin[rep]
        state = tgt[e]
    return origin, labels
