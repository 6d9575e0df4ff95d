"""Pattern membership, allowed-pattern subgroups and comparison of group shifts."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import rows as R
from .errors import BudgetExceeded, DimensionMismatch
from .groups import Subgroup, power_group
from .kernels import Csp
from .oned import sft_of
from .shifts import Pattern, PeriodicConfiguration, box_cells, bounding_box


@dataclass(frozen=True)
class Budget:
    max_period: int = 8
    max_box: int = 8
    max_steps: int = 2_000_000

    def __post_init__(self):
        for name in ("max_period", "max_box", "max_steps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget field {name} must be positive")

    def as_dict(self):
        return {"max_period": self.max_period, "max_box": self.max_box, "max_steps": self.max_steps}


DEFAULT_BUDGET = Budget()


@dataclass
class MemberResult:
    """``answer`` is ``"yes"`` or ``"no"``.

    A yes carries a periodic configuration through the pattern (when one was
    found); a no carries the extension radius at which every completion of
    the pattern hits a forbidden pattern.
    """
    answer: str
    certificate: object = None
    method: str = ""
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.answer == "yes"


def _check_dims(p, x):
    if x.dim == 0:
        if p.cells and p.cells[0] != ():
            raise DimensionMismatch("pattern dimension differs from the shift")
        return
    if p.cells and p.dim != x.dim:
        raise DimensionMismatch(f"pattern of dimension {p.dim} tested against a {x.dim}-dimensional shift")


def member(p, x, budget=None):
    budget = budget or DEFAULT_BUDGET
    _check_dims(p, x)
    g = x.group
    if not p.cells:
        return MemberResult("yes", None, "empty")
    if x.dim == 0:
        v = p.values[0]
        if v in x.members:
            return MemberResult("yes", PeriodicConfiguration(g, (), (v,)), "subgroup")
        return MemberResult("no", 0, "subgroup")
    if x.dim == 1:
        return _member_1d(p, x)
    if x.language is not None:
        return _member_provider(p, x, budget)
    return _member_dovetail(p, x, budget)


def _member_1d(p, x):
    sft = sft_of(x)
    cv = [(c[0], v) for c, v in zip(p.cells, p.values)]
    if sft.accepts(cv):
        found = sft.periodic_through(cv)
        cert = None
        if found is not None:
            labels, lo = found
            period = len(labels)
            vals = [0] * period
            for t, a in enumerate(labels):
                vals[(lo + t) % period] = a
            cert = PeriodicConfiguration(x.group, (period,), vals)
        return MemberResult("yes", cert, "automaton")
    return MemberResult("no", sft.dead_radius(cv), "automaton")


def _member_provider(p, x, budget):
    origin, sizes = bounding_box(p.cells)
    rows = x.language.box_language(origin, sizes)
    cells = box_cells(sizes, origin)
    index = {c: i for i, c in enumerate(cells)}
    cols = [index[c] for c in p.cells]
    ok = (rows[:, cols] == np.asarray(p.values)).all(axis=1).any()
    if not ok:
        return MemberResult("no", None, "language")
    cert = None
    try:
        small = Budget(budget.max_period, 1, min(budget.max_steps, 200_000))
        res = _member_dovetail(p, x, small, periodic_only=True)
        cert = res.certificate
    except BudgetExceeded:
        pass
    return MemberResult("yes", cert, "language")


def period_schedule(dim, max_period):
    """Period vectors ordered by maximum, then sum, then lexicographically."""
    vecs = list(itertools.product(range(1, max_period + 1), repeat=dim))
    vecs.sort(key=lambda v: (max(v), sum(v), v))
    return vecs


def torus_csp(x, periods, pins=()):
    """Constraint problem for configurations of ``x`` with the given periods.

    Returns ``None`` when the pins conflict modulo the periods.
    """
    sizes, allowed = x.window
    cells = box_cells(periods)
    index = {c: i for i, c in enumerate(cells)}
    wcells = box_cells(sizes)
    cons = []
    for u in cells:
        vs = [index[tuple((a + b) % k for a, b, k in zip(u, w, periods))] for w in wcells]
        cons.append((vs, allowed))
    pin = {}
    for c, v in pins:
        key = index[tuple(a % k for a, k in zip(c, periods))]
        if pin.get(key, v) != v:
            return None, cells
        pin[key] = v
    return Csp(x.group.order, len(cells), cons, pin), cells


def box_csp(x, origin, sizes, pins=()):
    wsizes, allowed = x.window
    cells = box_cells(sizes, origin)
    index = {c: i for i, c in enumerate(cells)}
    room = tuple(s - w + 1 for s, w in zip(sizes, wsizes))
    cons = []
    if min(room) > 0:
        wcells = box_cells(wsizes)
        for a in box_cells(room, origin):
            vs = [index[tuple(x0 + y0 for x0, y0 in zip(a, w))] for w in wcells]
            cons.append((vs, allowed))
    pin = {index[c]: v for c, v in pins}
    return Csp(x.group.order, len(cells), cons, pin), cells


def _member_dovetail(p, x, budget, periodic_only=False):
    pins = list(zip(p.cells, p.values))
    if x.dim == 2:
        found = torus_by_transfer(x, pins, budget)
        if found is not None:
            periods, values, steps = found
            if values is not None:
                cert = PeriodicConfiguration(x.group, periods, values)
                return MemberResult("yes", cert, "transfer", {"steps": steps, "periods": periods})
            if periodic_only:
                raise BudgetExceeded("no periodic configuration within budget",
                                     frontier={"period": budget.max_period})
            return _box_search(p, x, budget, steps)
    periods = iter(period_schedule(x.dim, budget.max_period))
    radius = 0
    origin, psizes = bounding_box(p.cells)
    steps = 0
    last_period = None
    period_done = False
    box_done = periodic_only
    while not (period_done and box_done):
        if not period_done:
            k = next(periods, None)
            if k is None:
                period_done = True
            else:
                last_period = k
                csp, cells = torus_csp(x, k, pins)
                if csp is not None:
                    sol = csp.solve("first", max_nodes=max(1, budget.max_steps - steps))
                    steps += csp.nodes
                    if sol is not None:
                        cert = PeriodicConfiguration(x.group, k, sol)
                        return MemberResult("yes", cert, "torus", {"steps": steps, "periods": k})
        if not box_done:
            radius += 1
            if radius > budget.max_box:
                box_done = True
            else:
                o = tuple(a - radius for a in origin)
                s = tuple(b + 2 * radius for b in psizes)
                csp, _ = box_csp(x, o, s, pins)
                sol = csp.solve("first", max_nodes=max(1, budget.max_steps - steps))
                steps += csp.nodes
                if sol is None:
                    return MemberResult("no", radius, "box", {"steps": steps})
        if steps >= budget.max_steps:
            break
    raise BudgetExceeded("membership undecided within budget",
                         frontier={"period": last_period, "box_radius": min(radius, budget.max_box),
                                   "steps": steps})


def _box_search(p, x, budget, steps=0):
    pins = list(zip(p.cells, p.values))
    origin, psizes = bounding_box(p.cells)
    for radius in range(1, budget.max_box + 1):
        o = tuple(a - radius for a in origin)
        s = tuple(b + 2 * radius for b in psizes)
        csp, _ = box_csp(x, o, s, pins)
        sol = csp.solve("first", max_nodes=max(1, budget.max_steps - steps))
        steps += csp.nodes
        if sol is None:
            return MemberResult("no", radius, "box", {"steps": steps})
    raise BudgetExceeded("membership undecided within budget",
                         frontier={"period": budget.max_period, "box_radius": budget.max_box,
                                   "steps": steps})


SLAB_EDGE_LIMIT = 200_000


def _slab_graph(x, b, budget):
    """Height-h cylinder patterns of column period b, as edges between
    (h-1)-row slabs.  Returns None when the cylinder is too large to list."""
    cache = x.__dict__.setdefault("_slabs", {})
    if b in cache:
        return cache[b]
    (h, w), allowed = x.window
    cells = box_cells((h, b))
    index = {c: i for i, c in enumerate(cells)}
    wcells = box_cells((h, w))
    cons = [([index[(di, (j + dj) % b)] for di, dj in wcells], allowed) for j in range(b)]
    csp = Csp(x.group.order, len(cells), cons)
    try:
        sols = csp.solve("all", max_nodes=min(budget.max_steps, 4 * SLAB_EDGE_LIMIT))
    except BudgetExceeded:
        cache[b] = None
        return None
    if len(sols) > SLAB_EDGE_LIMIT:
        cache[b] = None
        return None
    q = x.group.order
    pats = np.asarray(sols, dtype=np.int64).reshape(len(sols), h, b)
    if h == 1:
        src = np.zeros(len(pats), dtype=np.int64)
        tgt = src.copy()
        nstates = 1
    else:
        top = R.keys(pats[:, :-1].reshape(len(pats), -1), q)
        bot = R.keys(pats[:, 1:].reshape(len(pats), -1), q)
        states, inv = np.unique(np.concatenate([top, bot]), return_inverse=True)
        src, tgt = inv[:len(pats)], inv[len(pats):]
        nstates = len(states)
    graph = (nstates, src, tgt, pats[:, 0, :])
    cache[b] = graph
    return graph


def torus_by_transfer(x, pins, budget):
    """Search two-dimensional tori as closed walks in slab graphs.

    Returns ``(periods, values, steps)`` with ``values`` None when no torus
    within ``budget.max_period`` contains the pins, or ``None`` when some
    slab graph is too large (callers then fall back to the generic search).
    """
    from scipy.sparse import csr_matrix
    steps = 0
    graphs = {}
    for a, b in period_schedule(2, budget.max_period):
        if b not in graphs:
            graphs[b] = _slab_graph(x, b, budget)
        graph = graphs[b]
        if graph is None:
            return None
        nstates, src, tgt, first = graph
        ne = len(src)
        if ne == 0:
            continue
        # pins by row residue
        by_row = {}
        clash = False
        for (i, j), v in pins:
            key = (i % a, j % b)
            if by_row.get(key, v) != v:
                clash = True
            by_row[key] = v
        if clash:
            continue
        masks = []
        for t in range(a):
            ok = np.ones(ne, dtype=bool)
            for (i, j), v in by_row.items():
                if i == t:
                    ok &= first[:, j] == v
            masks.append(ok)
        starts = np.unique(src[masks[0]])
        if len(starts) == 0:
            continue
        ns = len(starts)
        reach = [csr_matrix((np.ones(ns, dtype=np.int8), (np.arange(ns), starts)), shape=(ns, nstates))]
        for t in range(a):
            m = masks[t]
            step = csr_matrix((np.ones(int(m.sum()), dtype=np.int8), (src[m], tgt[m])),
                              shape=(nstates, nstates))
            nxt = reach[-1] @ step
            nxt.data[:] = 1
            reach.append(nxt)
            steps += int(m.sum()) + nxt.nnz
        final = reach[-1].tocsr()
        hit = [k for k in range(ns) if final[k, starts[k]]]
        if not hit:
            continue
        k = hit[0]
        state = int(starts[k])
        rows = [None] * a
        for t in range(a - 1, -1, -1):
            prev = reach[t].tocsr()[k].toarray().ravel() > 0
            cand = np.nonzero(masks[t] & (tgt == state) & prev[src])[0]
            e = int(cand[0])
            rows[t] = first[e]
            state = int(src[e])
        values = np.concatenate(rows)
        return (a, b), tuple(int(v) for v in values), steps
    return (None, None, steps)


def allowed_rows(x, sizes, origin=None, budget=None):
    """Globally allowed patterns on the box ``sizes`` (rows in lex cell order)."""
    budget = budget or DEFAULT_BUDGET
    sizes = tuple(int(s) for s in sizes)
    if x.dim == 0:
        return np.asarray(x.members.members, dtype=np.int64)[:, None]
    if len(sizes) != x.dim:
        raise DimensionMismatch("box rank differs from the dimension")
    if origin is None:
        origin = (0,) * x.dim
    if x.dim == 1:
        return sft_of(x).language(sizes[0])
    if x.language is not None:
        return x.language.box_language(tuple(origin), sizes)
    cache = x.__dict__.setdefault("_box_cache", {})
    if sizes in cache:
        return cache[sizes]
    rows = _generic_box_language(x, sizes, budget)
    cache[sizes] = rows
    return rows


def _generic_box_language(x, sizes, budget):
    g = x.group
    q = g.order
    csp, cells = box_csp(x, (0,) * x.dim, sizes)
    cand = np.asarray(csp.solve("all", max_nodes=budget.max_steps), dtype=np.int64).reshape(-1, len(cells))
    # the language is a subgroup: members grow a closure, non-members rule out whole cosets
    lang = np.full((1, len(cells)), g.identity, dtype=np.int64)
    bad = []
    lang_keys = R.keys(lang, q)
    ck = R.keys(cand, q)
    todo = ~np.isin(ck, lang_keys)
    for i in np.nonzero(todo)[0]:
        row = cand[i]
        if np.isin(R.keys(row[None, :], q), lang_keys)[0]:
            continue
        if any(np.isin(R.keys(g.mul_arrays(g.inv_array(b)[None, :], row[None, :]), q), lang_keys)[0]
               for b in bad):
            continue
        res = member(Pattern(g, cells, tuple(row)), x, budget)
        if res:
            lang = R.closure(g, np.concatenate([lang, row[None, :]]))
            lang_keys = R.keys(lang, q)
        else:
            bad.append(row)
    return lang


def allowed_patterns(x, shape, budget=None):
    """The subgroup of ``G^shape`` formed by the patterns of L(x) on ``shape``."""
    g = x.group
    if x.dim == 0:
        return x.members
    cells = tuple(sorted(tuple(c) for c in shape))
    power = power_group(g, cells)
    origin, sizes = bounding_box(cells)
    rows = allowed_rows(x, sizes, origin, budget)
    bcells = box_cells(sizes, origin)
    index = {c: i for i, c in enumerate(bcells)}
    sub = R.unique_rows(rows[:, [index[c] for c in cells]])
    codes = R.encode(sub, g.order)
    return Subgroup(power, tuple(int(c) for c in codes))


def compare(x1, x2, budget=None):
    if x1.dim != x2.dim or x1.group.order != x2.group.order:
        raise DimensionMismatch("compared shifts must share group and dimension")
    s12 = contained(x1, x2, budget)
    s21 = contained(x2, x1, budget)
    return {"subset_12": s12, "subset_21": s21, "equal": s12 and s21}


def contained(x1, x2, budget=None):
    """Is x1 a subset of x2?  Every window of x1 must be locally allowed in x2."""
    if x1.dim == 0:
        return set(x1.members.members) <= set(x2.members.members)
    sizes, allowed = x2.window
    rows = allowed_rows(x1, sizes, budget=budget)
    return R.subset(rows, allowed, x1.group.order)


def equal(x1, x2, budget=None):
    return compare(x1, x2, budget)["equal"]


def mixing_class_1d(x):
    return sft_of(x).mixing_class()
