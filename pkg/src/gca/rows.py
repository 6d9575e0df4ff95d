"""Sets of patterns on a fixed shape stored as integer arrays (one row each).

Rows are compared through keys: an int64 mixed-radix code when it fits,
otherwise a raw-bytes view.  Both sort lexicographically like the rows.
"""

import numpy as np


def fits(q, k):
    return k * np.log2(max(q, 2)) < 62


def encode(rows, q):
    rows = np.asarray(rows, dtype=np.int64)
    k = rows.shape[1] if rows.ndim == 2 else 0
    if k == 0:
        return np.zeros(len(rows), dtype=np.int64)
    if not fits(q, k):
        raise OverflowError("rows too long for integer codes")
    w = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return rows @ w


def decode(codes, q, k):
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((len(codes), k), dtype=np.int64)
    c = codes.copy()
    for j in range(k - 1, -1, -1):
        out[:, j] = c % q
        c //= q
    return out


def decode_one(code, q, k):
    vals = []
    for _ in range(k):
        vals.append(code % q)
        code //= q
    return tuple(reversed(vals))


def keys(rows, q):
    rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int64))
    if rows.ndim == 2 and fits(q, rows.shape[1]):
        return encode(rows, q)
    # big-endian bytes sort like the integer rows (entries are nonnegative)
    be = rows.astype(">i8")
    return be.view(np.dtype((np.void, 8 * rows.shape[1]))).ravel()


def unique_rows(rows, q=None):
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        raise ValueError("expected a 2D array of rows")
    if len(rows) == 0:
        return rows
    k = rows.shape[1]
    if k:
        # sorting integer codes is much faster than a row-wise unique
        radix = int(rows.max()) + 1
        if fits(radix, k):
            return decode(np.unique(encode(rows, radix)), radix, k)
    return np.unique(rows, axis=0)


def isin_rows(rows, table, q):
    rows = np.asarray(rows, dtype=np.int64)
    table = np.asarray(table, dtype=np.int64)
    if len(rows) == 0:
        return np.zeros(0, dtype=bool)
    if len(table) == 0:
        return np.zeros(len(rows), dtype=bool)
    return np.isin(keys(rows, q), keys(table, q))


def same_set(a, b, q):
    a = unique_rows(a)
    b = unique_rows(b)
    return a.shape == b.shape and bool((a == b).all())


def subset(a, b, q):
    return bool(isin_rows(a, b, q).all())


def all_rows(q, k):
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return decode(np.arange(q ** k, dtype=np.int64), q, k)


def closure(group, gens, k=None, limit=None):
    """Subgroup of ``group^k`` generated by the rows ``gens`` (sorted rows).

    Multiplication is componentwise.  ``limit`` bounds the size as a guard.
    """
    gens = np.asarray(gens, dtype=np.int64)
    if k is None:
        k = gens.shape[1]
    q = group.order
    ident = np.full((1, k), group.identity, dtype=np.int64)
    if len(gens) == 0:
        return ident
    gens = unique_rows(gens)
    gk = keys(gens, q)
    gens = gens[gk != keys(ident, q)[0]]
    if len(gens) == 0:
        return ident
    members = ident
    mkeys = keys(ident, q)
    frontier = ident
    while len(frontier):
        prod = group.mul_arrays(frontier[:, None, :], gens[None, :, :]).reshape(-1, k)
        prod = unique_rows(prod)
        pk = keys(prod, q)
        new = prod[~np.isin(pk, mkeys)]
        if len(new) == 0:
            break
        members = np.concatenate([members, new])
        mkeys = keys(members, q)
        if limit is not None and len(members) > limit:
            raise OverflowError(f"closure exceeds {limit} elements")
        frontier = new
    return unique_rows(members)


def reduce_generators(group, rows, k=None):
    """A short generating list for the subgroup generated by ``rows``.

    Greedy: repeatedly add the first row outside the current closure.
    Returns ``(generators, closure)``.
    """
    rows = np.asarray(rows, dtype=np.int64)
    if k is None:
        k = rows.shape[1]
    q = group.order
    kept = []
    current = closure(group, np.zeros((0, k), dtype=np.int64), k)
    rk = keys(rows, q) if len(rows) else None
    while len(rows):
        outside = ~np.isin(rk, keys(current, q))
        if not outside.any():
            break
        i = int(np.argmax(outside))
        kept.append(rows[i])
        current = closure(group, np.array(kept), k)
    if not kept:
        return np.zeros((0, k), dtype=np.int64), current
    return np.array(kept, dtype=np.int64), current
