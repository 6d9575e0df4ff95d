# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


def torus_scan(arr, patterns):
    cdef int64_t[::1] flat = np.ascontiguousarray(arr, dtype=np.int64).ravel()
    cdef Py_ssize_t d = arr.ndim
    cdef int64_t[::1] periods = np.asarray(arr.shape, dtype=np.int64)
    cdef int64_t[::1] strides = np.ones(d, dtype=np.int64)
    cdef Py_ssize_t a, i, j, total = flat.shape[0]
    cdef int64_t[:, ::1] cells
    cdef int64_t[::1] vals
    cdef int64_t[::1] coord = np.zeros(d, dtype=np.int64)
    cdef int64_t idx, rem, c
    cdef bint hit
    for a in range(d - 2, -1, -1):
        strides[a] = strides[a + 1] * periods[a + 1]
    for cells_arr, vals_arr in patterns:
        cells = np.ascontiguousarray(cells_arr, dtype=np.int64)
        vals = np.ascontiguousarray(vals_arr, dtype=np.int64)
        for i in range(total):
            rem = i
            for a in range(d):
                coord[a] = rem // strides[a]
                rem = rem % strides[a]
            hit = True
            for j in range(cells.shape[0]):
                idx = 0
                for a in range(d):
                    c = (coord[a] + cells[j, a]) % periods[a]
                    if c < 0:
                        c += periods[a]
                    idx += c * strides[a]
                if flat[idx] != vals[j]:
                    hit = False
                    break
            if hit:
                return False
    return True


def csp_search(int q, int nvars, occ_vars, occ_tables, pins, frontier, mode, max_nodes):
    cdef Py_ssize_t v, t, o, n_occ = 0
    pv_flat, pv_start, pv_len, tab_off, tab_list = [], [], [], [], []
    occ_start_l = [0]
    cdef Py_ssize_t off = 0
    for v in range(nvars):
        for pv, tab in zip(occ_vars[v], occ_tables[v]):
            pv_start.append(len(pv_flat))
            pv_len.append(len(pv))
            pv_flat.extend(pv)
            tab_off.append(off)
            tab_list.append(np.asarray(tab, dtype=np.int64))
            off += len(tab)
            n_occ += 1
        occ_start_l.append(n_occ)
    fr_flat, fr_start_l = [], [0]
    for v in range(nvars + 1):
        fr_flat.extend(frontier[v])
        fr_start_l.append(len(fr_flat))

    cdef int64_t[::1] occ_start = np.asarray(occ_start_l, dtype=np.int64)
    cdef int64_t[::1] pvf = np.asarray(pv_flat + [0], dtype=np.int64)
    cdef int64_t[::1] pvs = np.asarray(pv_start + [0], dtype=np.int64)
    cdef int64_t[::1] pvl = np.asarray(pv_len + [0], dtype=np.int64)
    cdef int64_t[::1] toff = np.asarray(tab_off + [0], dtype=np.int64)
    cdef int64_t[::1] tabs = (np.concatenate(tab_list) if tab_list else np.zeros(1, dtype=np.int64)).astype(np.int64)
    cdef int64_t[::1] frf = np.asarray(fr_flat + [0], dtype=np.int64)
    cdef int64_t[::1] frs = np.asarray(fr_start_l, dtype=np.int64)
    cdef int64_t[::1] pin = np.asarray(list(pins) + [0], dtype=np.int64)
    cdef int64_t[::1] assign = np.zeros(nvars + 1, dtype=np.int64)
    cdef uint64_t[::1] masks = np.zeros(nvars + 1, dtype=np.uint64)
    cdef uint64_t full = (<uint64_t>1 << q) - 1 if q < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef uint64_t m, low
    cdef int64_t code, nodes = 0, limit = -1 if max_nodes is None else max_nodes
    cdef int mode_i = 0 if mode == "first" else (1 if mode == "count" else 2)
    cdef bint use_memo = mode_i != 2
    cdef int depth = 0
    cdef bint descending = True
    cdef int a
    counts = [0] * (nvars + 1)
    keys = [None] * (nvars + 1)
    memo = {}
    solutions = []
    result = 0
    cdef object key, r
    while True:
        if descending:
            if depth == nvars:
                if mode_i != 1:
                    solutions.append(tuple(int(assign[t]) for t in range(nvars)))
                result = 1
                depth -= 1
                descending = False
                continue
            if use_memo:
                key = depth
                for t in range(frs[depth], frs[depth + 1]):
                    key = key * q + assign[frf[t]]
                key = (depth, key)
                r = memo.get(key)
                if r is not None:
                    result = r
                    depth -= 1
                    descending = False
                    continue
                keys[depth] = key
            nodes += 1
            if limit >= 0 and nodes > limit:
                return "budget", None, nodes
            if pin[depth] >= 0:
                m = (<uint64_t>1) << pin[depth]
            else:
                m = full
            for o in range(occ_start[depth], occ_start[depth + 1]):
                code = 0
                for t in range(pvs[o], pvs[o] + pvl[o]):
                    code = code * q + assign[pvf[t]]
                m &= <uint64_t>tabs[toff[o] + code]
                if m == 0:
                    break
            masks[depth] = m
            counts[depth] = 0
        else:
            if depth < 0:
                break
            counts[depth] += result
            if mode_i == 0 and counts[depth] > 0:
                result = counts[depth]
                depth -= 1
                continue
        if masks[depth] == 0:
            if use_memo:
                memo[keys[depth]] = counts[depth]
            result = counts[depth]
            depth -= 1
            descending = False
            continue
        m = masks[depth]
        low = m & (~m + 1)
        a = 0
        while (low >> a) != 1:
            a += 1
        masks[depth] = m ^ low
        assign[depth] = a
        depth += 1
        descending = True
    if mode_i == 0:
        return "ok", (solutions[0] if solutions else None), nodes
    if mode_i == 1:
        return "ok", result, nodes
    return "ok", solutions, nodes


def path_words(ptr_a, sym_a, tgt_a, starts_a, Py_ssize_t length):
    cdef int64_t[::1] ptr = np.ascontiguousarray(ptr_a, dtype=np.int64)
    cdef int64_t[::1] sym = np.ascontiguousarray(sym_a, dtype=np.int64)
    cdef int64_t[::1] tgt = np.ascontiguousarray(tgt_a, dtype=np.int64)
    cdef int64_t[::1] starts = np.ascontiguousarray(starts_a, dtype=np.int64)
    cdef Py_ssize_t ns = ptr.shape[0] - 1, s, e, k, i, depth, row
    # cnt[k, s]: number of paths with k edges from s
    cdef int64_t[:, ::1] cnt = np.zeros((length + 1, max(ns, 1)), dtype=np.int64)
    for s in range(ns):
        cnt[0, s] = 1
    for k in range(1, length + 1):
        for s in range(ns):
            for e in range(ptr[s], ptr[s + 1]):
                cnt[k, s] += cnt[k - 1, tgt[e]]
    cdef int64_t total = 0
    for i in range(starts.shape[0]):
        total += cnt[length, starts[i]]
    out_l = np.zeros((total, length), dtype=np.int64)
    org_l = np.zeros(total, dtype=np.int64)
    cdef int64_t[:, ::1] out = out_l
    cdef int64_t[::1] org = org_l
    cdef int64_t[::1] edge_at = np.zeros(length + 1, dtype=np.int64)
    cdef int64_t[::1] state_at = np.zeros(length + 1, dtype=np.int64)
    row = 0
    for i in range(starts.shape[0]):
        if length == 0:
            org[row] = i
            row += 1
            continue
        if cnt[length, starts[i]] == 0:
            continue
        depth = 0
        state_at[0] = starts[i]
        edge_at[0] = ptr[starts[i]]
        while depth >= 0:
            s = state_at[depth]
            e = edge_at[depth]
            if e >= ptr[s + 1]:
                depth -= 1
                if depth >= 0:
                    edge_at[depth] += 1
                continue
            if cnt[length - depth - 1, tgt[e]] == 0:
                edge_at[depth] += 1
                continue
            if depth == length - 1:
                for k in range(length - 1):
                    out[row, k] = sym[edge_at[k]]
                out[row, length - 1] = sym[e]
                org[row] = i
                row += 1
                edge_at[depth] += 1
                continue
            depth += 1
            state_at[depth] = tgt[e]
            edge_at[depth] = ptr[tgt[e]]
    return org_l, out_l
