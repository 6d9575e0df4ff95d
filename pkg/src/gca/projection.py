"""Slice and track projections, cuts, preimages and images of group shifts."""

from dataclasses import dataclass, field

import numpy as np

from . import rows as R
from .automata import LabelGraph, minimal_dfa, same_language
from .errors import BudgetExceeded, DimensionMismatch, Unsupported
from .groups import FiniteGroup, direct_product, make_subgroup, power_group
from .language import DEFAULT_BUDGET, allowed_rows, equal
from .oned import Sft1D, _Graph, from_words, sft_of
from .shifts import GroupShiftPresentation, box_cells, permute_axes


# -- track splits ----------------------------------------------------------

@dataclass
class TrackSplit:
    """An alphabet seen as a product ``left x right``.

    ``left_of`` / ``right_of`` map arrays of element indices to component
    indices; ``pair`` maps components back.
    """
    parent: FiniteGroup
    left_group: FiniteGroup
    right_group: FiniteGroup
    left_of: object
    right_of: object
    pair: object

    def swap(self):
        return TrackSplit(self.parent, self.right_group, self.left_group,
                          self.right_of, self.left_of, lambda b, a: self.pair(a, b))

    @classmethod
    def of_product(cls, g):
        """Split of a two-factor direct product into its factors."""
        g1, g2 = g.factors
        k = g2.order
        return cls(g, g1, g2, lambda a: np.asarray(a) // k, lambda a: np.asarray(a) % k,
                   lambda a, b: np.asarray(a) * k + np.asarray(b))

    @classmethod
    def of_power(cls, g, k):
        """``G^w`` as ``G^k x G^(w-k)`` (first k components on the left)."""
        base = g.factors[0]
        w = len(g.factors)
        q = base.order
        left = power_group(base, k) if k else _trivial_like(base)
        right = power_group(base, w - k) if w - k else _trivial_like(base)
        div = q ** (w - k)
        return cls(g, left, right, lambda a: np.asarray(a) // div, lambda a: np.asarray(a) % div,
                   lambda a, b: np.asarray(a) * div + np.asarray(b))


_TRIVIAL = {}


def _trivial_like(base):
    from .groups import trivial_group
    t = _TRIVIAL.get("t")
    if t is None:
        t = _TRIVIAL["t"] = trivial_group()
    return t


def power_split(split, n):
    """The split of ``parent^n`` into ``left^n x right^n`` (componentwise)."""
    pg = power_group(split.parent, n)
    lg = power_group(split.left_group, n)
    rg = power_group(split.right_group, n)
    qp, ql, qr = split.parent.order, split.left_group.order, split.right_group.order

    def side(fn, q_out):
        def apply(a):
            digits = R.decode(np.asarray(a, dtype=np.int64).ravel(), qp, n)
            mapped = fn(digits)
            return R.encode(mapped, q_out).reshape(np.shape(a))
        return apply

    def pair(a, b):
        da = R.decode(np.asarray(a, dtype=np.int64).ravel(), ql, n)
        db = R.decode(np.asarray(b, dtype=np.int64).ravel(), qr, n)
        return R.encode(split.pair(da, db), qp).reshape(np.shape(a))
    return TrackSplit(pg, lg, rg, side(split.left_of, ql), side(split.right_of, qr), pair)


# -- one-dimensional sofic images -------------------------------------------

def label_graph(x, apply, span):
    """Edges of the higher-block graph of ``x`` labelled by a sliding block map.

    ``apply(words)`` maps rows of length ``span`` (or longer) to labels.
    """
    sft = sft_of(x)
    L = max(sft.ell, span, 1)
    words = sft.language(L) if L > sft.ell else sft.words
    g = _Graph(words, x.group.order, L)
    ordered = words[g.order]
    labels = apply(ordered[:, L - span:])[:, -1] if span else ordered[:, -1]
    return LabelGraph(g.nstates, g.src, g.tgt, np.asarray(labels, dtype=np.int64))


def sofic_dfa(x, apply, span):
    return minimal_dfa(label_graph(x, apply, span))


def image_words(x, apply, span, n):
    """Words of length n of the image of ``x`` under a sliding block map."""
    src = sft_of(x).language(n + span - 1)
    return R.unique_rows(apply(src))


def image_1d(x, apply, span, target, max_len=None):
    """Image of a one-dimensional shift under a homomorphic sliding block map.

    Determinizes and minimizes the labelled graph, then finds the least
    window length whose SFT has the same minimal automaton.
    """
    image = sofic_dfa(x, apply, span)
    limit = max_len or max(8, 4 * (image.size + 2))
    for ell in range(1, limit + 1):
        words = image_words(x, apply, span, ell)
        cand = Sft1D(target, ell, words)
        if same_language(cand.dfa, image):
            out = from_words(target, cand.words)
            out.__dict__["_sft1d"] = cand
            out.info = {"route": "automaton", "window": ell, "dfa_states": image.size}
            return out
    raise BudgetExceeded("no finite-type presentation found for the image",
                         frontier={"window": limit, "dfa_states": image.size})


def cellwise_map(fn):
    return lambda rows: fn(np.asarray(rows, dtype=np.int64))


def cellwise_image(x, fn, target, budget=None):
    """Image of ``x`` under the cellwise map ``fn`` (array of elements -> elements)."""
    if x.dim == 0:
        return GroupShiftPresentation(target, 0, members=np.unique(fn(np.asarray(x.members.members))))
    if x.dim == 1:
        return image_1d(x, cellwise_map(fn), 1, target)
    graph = direct_product(x.group, target)
    sizes, allowed = x.window
    paired = graph_pairs(allowed, fn(allowed), target.order)
    gx = GroupShiftPresentation.from_window(graph, sizes, paired)
    return project_track(gx, TrackSplit.of_product(graph).swap(), budget)


def graph_pairs(a, b, qb):
    return np.asarray(a, dtype=np.int64) * qb + np.asarray(b, dtype=np.int64)


def same_shift(x1, x2, budget=None):
    """Equality test that uses minimal automata for one-dimensional shifts."""
    if x1.dim != x2.dim:
        raise DimensionMismatch("compared shifts differ in dimension")
    if x1.dim == 0:
        return x1.members.members == x2.members.members
    if x1.dim == 1:
        return same_language(sft_of(x1).dfa, sft_of(x2).dfa)
    return equal(x1, x2, budget)


def _side_images_equal(xq, budget):
    """The halting test: dropping the last component gives the same shift as
    dropping the first one."""
    g = xq.group
    w = len(g.factors)
    if w <= 1:
        return True
    left = TrackSplit.of_power(g, w - 1)
    right = TrackSplit.of_power(g, 1)
    if xq.dim == 0:
        a = np.asarray(xq.members.members)
        return np.array_equal(np.unique(left.left_of(a)), np.unique(right.right_of(a)))
    if xq.dim == 1:
        dl = sofic_dfa(xq, cellwise_map(left.left_of), 1)
        dr = sofic_dfa(xq, cellwise_map(right.right_of), 1)
        return same_language(dl, dr)
    yl = project_track(xq, left, budget)
    yr = project_track(xq, right.swap(), budget)
    return equal(yl, yr, budget)


def slice_halting_holds(xq, budget=None):
    return _side_images_equal(xq, budget)


# -- slice projection ---------------------------------------------------------

def strip_rows(x, w, rest_sizes, budget=None, origin=None):
    """Allowed strips of width ``w`` over the box ``rest_sizes`` re-encoded
    as patterns over ``G^w`` (one symbol per cell of the remaining axes)."""
    sizes = (w,) + tuple(rest_sizes)
    rows = allowed_rows(x, sizes, origin, budget)
    q = x.group.order
    r = int(np.prod(rest_sizes)) if rest_sizes else 1
    codes = np.zeros((len(rows), r), dtype=np.int64)
    for i0 in range(w):
        codes = codes * q + rows[:, i0 * r:(i0 + 1) * r]
    return R.unique_rows(codes)


def project_slice(x, n, budget=None):
    """The (d-1)-dimensional shift of width-n strips, over ``G^n``."""
    budget = budget or DEFAULT_BUDGET
    if x.dim == 0:
        raise DimensionMismatch("cannot slice a zero-dimensional shift")
    g = x.group
    m = x.width
    w = max(n, m)
    power = power_group(g, w)
    if x.dim == 1:
        codes = strip_rows(x, w, (), budget)[:, 0]
        out = GroupShiftPresentation(power, 0, members=codes)
        out.info = {"width": w, "shapes": 1}
    else:
        base = tuple(x.window_sizes[1:])
        xq = None
        for i in range(1, budget.max_box + 1):
            rest = tuple(b + i - 1 for b in base)
            codes = strip_rows(x, w, rest, budget)
            xq = GroupShiftPresentation.from_window(power, rest, codes)
            if _side_images_equal(xq, budget):
                xq.info = {"width": w, "shapes": i, "rest_window": rest}
                out = xq
                break
        else:
            raise BudgetExceeded("slice projection did not pass its halting test",
                                 frontier={"shapes": budget.max_box}, partial=xq)
    if n < w:
        split = TrackSplit.of_power(power, n)
        info = out.info
        out = cellwise_image(out, split.left_of, split.left_group, budget)
        out.info = dict(info, reduced_to=n)
    return out


# -- cuts, synchronization radius, track projection ---------------------------

def cut_shift(u, split):
    """{c over the right alphabet : (identity, c) in u}."""
    ident = split.left_group.identity
    if u.dim == 0:
        a = np.asarray(u.members.members)
        keep = split.left_of(a) == ident
        return GroupShiftPresentation(split.right_group, 0, members=np.unique(split.right_of(a[keep])))
    sizes, allowed = u.window
    keep = (split.left_of(allowed) == ident).all(axis=1)
    return GroupShiftPresentation.from_window(split.right_group, sizes, split.right_of(allowed[keep]))


@dataclass
class SynchronizationRadius:
    m: int
    r: int
    U: object
    certificate: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.m + 2 * self.r + 1


def radius_of_sync(x, split, budget=None, max_r=None):
    budget = budget or DEFAULT_BUDGET
    m = x.width
    u = project_slice(cut_shift(x, split), m, budget)
    chain = []
    limit = max_r or budget.max_box + 4
    for r in range(1, limit + 1):
        k = m + 2 * r
        strips = project_slice(x, k, budget)
        ps = power_split(split, k)
        c = cut_shift(strips, ps)
        inner = power_split_center(ps.right_group, split.right_group, k, r, m)
        ur = cellwise_image(c, inner, power_group(split.right_group, m), budget)
        chain.append(r)
        if same_shift(ur, u, budget):
            return SynchronizationRadius(m, r, u, {"chain": chain, "stabilized_at": r})
    raise BudgetExceeded("no synchronization radius found", frontier={"r": limit})


def power_split_center(pg, base, k, r, m):
    q = base.order

    def center(a):
        digits = R.decode(np.asarray(a, dtype=np.int64).ravel(), q, k)
        return R.encode(digits[:, r:r + m], q).reshape(np.shape(a))
    return center


def project_track(x, split, budget=None):
    """The shift of left components of ``x`` (cellwise projection), generic route."""
    budget = budget or DEFAULT_BUDGET
    g1 = split.left_group
    if x.dim == 0:
        a = np.asarray(x.members.members)
        return GroupShiftPresentation(g1, 0, members=np.unique(split.left_of(a)))
    sync = radius_of_sync(x, split, budget)
    n = sync.n
    strips = project_slice(x, n, budget)
    target = project_track(strips, power_split(split, n), budget)
    base = x.window_sizes
    xq = None
    for i in range(1, budget.max_box + 1):
        sizes = tuple(b + i - 1 for b in base)
        rows = allowed_rows(x, sizes, budget=budget)
        xq = GroupShiftPresentation.from_window(g1, sizes, R.unique_rows(split.left_of(rows)))
        if same_shift(project_slice(xq, n, budget), target, budget):
            xq.info = {"route": "generic", "r": sync.r, "n": n, "shapes": i, "sync": sync}
            return xq
    raise BudgetExceeded("track projection did not pass its halting test",
                         frontier={"shapes": budget.max_box, "n": n}, partial=xq)


# -- general projections -------------------------------------------------------

def project_general(x, k, shape, budget=None, keep_axes=None):
    """Projection onto ``shape x Z^k``: the first d-k axes are restricted to
    ``shape`` (or all axes not in ``keep_axes``), the rest stay free."""
    budget = budget or DEFAULT_BUDGET
    d = x.dim
    if not 0 <= k < d:
        raise DimensionMismatch("target dimension must satisfy 0 <= k < d")
    if keep_axes is None:
        keep_axes = tuple(range(d - k, d))
    sliced = tuple(a for a in range(d) if a not in keep_axes)
    if len(sliced) != d - k:
        raise DimensionMismatch("keep_axes must name exactly k axes")
    cells = tuple(sorted(tuple(int(v) for v in c) for c in shape))
    arr = np.asarray(cells, dtype=np.int64).reshape(len(cells), d - k)
    lo = arr.min(axis=0)
    widths = tuple(int(v) for v in arr.max(axis=0) - lo + 1)
    perm = sliced + tuple(keep_axes)
    cur = permute_axes(x, perm) if perm != tuple(range(d)) else x
    g = x.group
    # slice one axis at a time; the alphabet nests as (((G^n1)^n2)...)
    for w in widths:
        cur = project_slice(cur, w, budget)
    ebox = box_cells(widths)
    q = g.order
    total = len(ebox)
    power_e = power_group(g, total)

    def flatten(a):
        a = np.asarray(a, dtype=np.int64)
        flat = a.ravel()
        digits = np.zeros((len(flat), total), dtype=np.int64)
        # decode nested: outermost level is the last sliced axis
        strides = []
        acc = 1
        for w in widths:
            strides.append(acc)
            acc *= w
        cur_codes = flat.copy()
        # position of cell (j1..jt) in the nested encoding
        block = [1] * len(widths)
        size = q
        for lvl, w in enumerate(widths):
            block[lvl] = size
            size = size ** w
        for idx, cell in enumerate(ebox):
            # digit at nested position: level t index j_t, inner levels first
            off = 0
            mult = 1
            for lvl in range(len(widths)):
                off += (widths[lvl] - 1 - cell[lvl]) * mult
                mult *= widths[lvl]
            digits[:, idx] = (cur_codes // (q ** off)) % q
        return R.encode(digits, q).reshape(a.shape)

    cur = _relabel(cur, flatten, power_e)
    shifted = [tuple(int(v) for v in np.asarray(c) - lo) for c in cells]
    index = {c: i for i, c in enumerate(ebox)}
    pick = [index[c] for c in shifted]
    target = power_group(g, len(pick))

    def choose(a):
        a = np.asarray(a, dtype=np.int64)
        digits = R.decode(a.ravel(), q, total)
        return R.encode(digits[:, pick], q).reshape(a.shape)

    if len(pick) == total:
        cur = _relabel(cur, lambda a: np.asarray(a), target)
        return cur
    info = getattr(cur, "info", {})
    out = cellwise_image(cur, choose, target, budget)
    out.info = dict(info, shape=cells)
    return out


def _relabel(x, fn, group):
    """Same shift written over an isomorphic alphabet via the bijection ``fn``."""
    info = getattr(x, "info", {})
    if x.dim == 0:
        out = GroupShiftPresentation(group, 0, members=np.unique(fn(np.asarray(x.members.members))))
    else:
        sizes, allowed = x.window
        out = GroupShiftPresentation.from_window(group, sizes, fn(allowed))
        if x.dim == 1 and "_sft1d" in x.__dict__:
            pass
    out.info = info
    return out


# -- preimages and images -------------------------------------------------------

def preimage_shift(hom, y):
    """F^-1(Y) as a presentation over the domain group."""
    x = hom.domain
    q = x.group.order
    if y.dim != x.dim:
        raise DimensionMismatch("target shift dimension differs from the domain")
    if x.dim == 1:
        ly = y.window_sizes[0]
        sft = sft_of(x)
        L = max(ly + hom.width - 1, sft.ell)
        rows = sft.language(L)
        img = hom.apply_rows(rows)
        _, wy = y.window
        ok = np.ones(len(rows), dtype=bool)
        for s in range(img.shape[1] - ly + 1):
            ok &= R.isin_rows(img[:, s:s + ly], wy, y.group.order)
        out = from_words(x.group, rows[ok])
        return out
    ysizes, wy = y.window
    nb = np.asarray(hom.neighborhood, dtype=np.int64)
    lo, hi = nb.min(axis=0), nb.max(axis=0)
    xs = x.window_sizes
    sizes = tuple(max(int(a + h - l), b) for a, h, l, b in zip(ysizes, hi, lo, xs))
    origin = tuple(int(v) for v in lo)
    rows = allowed_rows(x, sizes, origin)
    cells = box_cells(sizes, origin)
    index = {c: i for i, c in enumerate(cells)}
    ok = np.ones(len(rows), dtype=bool)
    room = tuple(s - int(h - l) for s, h, l in zip(sizes, hi, lo))
    out_cells_all = box_cells(room)
    img = np.zeros((len(rows), len(out_cells_all)), dtype=np.int64)
    oindex = {c: i for i, c in enumerate(out_cells_all)}
    for j, u in enumerate(out_cells_all):
        code = np.zeros(len(rows), dtype=np.int64)
        for c in hom.neighborhood:
            code = code * q + rows[:, index[tuple(a + b for a, b in zip(u, c))]]
        img[:, j] = hom.table[code]
    yroom = tuple(r - s + 1 for r, s in zip(room, ysizes))
    ycells = box_cells(ysizes)
    if min(yroom) > 0:
        for a in box_cells(yroom):
            cols = [oindex[tuple(s + t for s, t in zip(a, c))] for c in ycells]
            ok &= R.isin_rows(img[:, cols], wy, y.group.order)
    # re-anchor the window at the origin
    return GroupShiftPresentation.from_window(x.group, sizes, rows[ok])


def kernel_shift(hom):
    y = GroupShiftPresentation.identity_shift(hom.target, hom.dim)
    return preimage_shift(hom, y)


def graph_shift(hom):
    """{(c, F(c))} over ``G x H`` as a window presentation."""
    x = hom.domain
    g, h = x.group, hom.target
    prod = direct_product(g, h)
    if x.dim != 1:
        raise Unsupported("graph shifts are built for one-dimensional domains")
    lo, hi = hom.span
    sft = sft_of(x)
    left = min(lo, 0)
    right = max(hi, sft.ell - 1, 0)
    L = right - left + 1
    rows = sft.language(L)
    # second track at position u (window index u - left) is defined when u + N fits
    out_cols = {}
    for u in range(left, right + 1):
        if u + lo >= left and u + hi <= right:
            out_cols[u - left] = u + lo - left
    seconds = np.zeros((len(rows), L), dtype=np.int64)
    for j, s in out_cols.items():
        seconds[:, j] = hom.apply_rows(rows[:, s:s + hom.width])[:, 0]
    free = [j for j in range(L) if j not in out_cols]
    blocks = []
    for fill in R.all_rows(h.order, len(free)):
        sec = seconds.copy()
        for j, v in zip(free, fill):
            sec[:, j] = v
        blocks.append(rows * h.order + sec)
    allowed = np.concatenate(blocks)
    return GroupShiftPresentation.from_window(prod, (L,), allowed), TrackSplit.of_product(prod)


def image_shift(hom, x=None, budget=None, route="automaton"):
    """F(X).  ``route`` is ``"automaton"`` (one-dimensional fast path) or
    ``"generic"`` (graph shift plus track projection)."""
    x = x or hom.domain
    if x is not hom.domain:
        from .homs import GroupShiftHom
        hom = GroupShiftHom(x, hom.target, hom.neighborhood, hom.table)
    if route == "automaton" and x.dim == 1:
        return image_1d(x, hom.apply_rows, hom.width, hom.target)
    if x.dim == 1:
        gx, split = graph_shift(hom)
        out = project_track(gx, split.swap(), budget)
        return out
    raise Unsupported("images in dimension >= 2 are not implemented beyond the space-time machinery")
