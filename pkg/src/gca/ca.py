"""Group cellular automata: space-time shifts, traces, limit sets and deciders."""

import math
import time
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import rows as R
from .errors import BudgetExceeded, EmptyAutomaton, NotOneDimensional, Unsupported
from .groups import preset
from .homs import GroupShiftHom, endomorphism_witness, verify_hom
from .language import DEFAULT_BUDGET, Budget
from .oned import from_words, sft_of
from .projection import image_shift, kernel_shift, project_general, same_shift
from .shifts import GroupShiftPresentation, Pattern, PeriodicConfiguration, box_cells

MAX_TRANSIENT = 64


@dataclass
class DecisionReport:
    property: str
    verdict: object  # True, False or "budget_exceeded"
    certificate: object = None
    stats: dict = field(default_factory=dict)

    def as_dict(self):
        return {"property": self.property, "verdict": self.verdict,
                "certificate": _describe(self.certificate), "stats": self.stats}


@dataclass
class EntropyEstimate:
    value: float
    block_counts: list
    method: str = "spectral"


def _describe(cert):
    if cert is None:
        return None
    if isinstance(cert, Pattern):
        return {"pattern": {"cells": [list(c) for c in cert.cells], "values": cert.labels()}}
    if isinstance(cert, PeriodicConfiguration):
        return {"configuration": {"periods": list(cert.periods),
                                  "rows": [cert.group.label(v) for v in cert.values]}}
    if isinstance(cert, dict):
        return {k: _describe(v) if isinstance(v, (Pattern, PeriodicConfiguration)) else v
                for k, v in cert.items()}
    return cert


def _need_1d(f):
    if f.dim != 1:
        raise NotOneDimensional("this analysis is implemented for one-dimensional automata")


def _restricted(f, x):
    """The same local rule with domain ``x``."""
    if x is f.domain:
        return f
    return GroupShiftHom(x, f.target, f.neighborhood, f.table, name=f.name)


# -- iterated images -------------------------------------------------------

def image_chain(f, budget=None, limit=MAX_TRANSIENT):
    """[X, F(X), F^2(X), ...] until two consecutive terms agree (the repeated
    term is not duplicated)."""
    _need_1d(f)
    cache = f.__dict__.get("_chain")
    if cache is not None:
        return cache
    cur = f.domain
    chain = [cur]
    for _ in range(limit):
        nxt = image_shift(_restricted(f, cur), cur, budget)
        if same_shift(nxt, cur):
            f.__dict__["_chain"] = chain
            return chain
        chain.append(nxt)
        cur = nxt
    raise BudgetExceeded("image chain did not stabilize", frontier={"steps": limit}, partial=chain)


def transient_length(f, budget=None):
    """Least k with F^(k+1)(X) = F^k(X)."""
    return len(image_chain(f, budget)) - 1


def iterated_image(f, k, budget=None):
    chain = image_chain(f, budget)
    return chain[min(k, len(chain) - 1)]


# -- space-time shift --------------------------------------------------------

class SpacetimeLanguage:
    """Box languages of the orbit shift of a one-dimensional CA.

    Rows of a box pattern are forward images of words of the limit set, which
    is exactly the set of time-0 rows of bi-infinite orbits.
    """

    def __init__(self, f, limit):
        self.f = f
        self.limit = limit
        self.cache = {}

    def box_language(self, origin, sizes):
        sizes = tuple(int(s) for s in sizes)
        if sizes in self.cache:
            return self.cache[sizes]
        sx, st = sizes
        lo, hi = self.f.span
        left = -min(0, (st - 1) * lo)
        right = max(0, (st - 1) * hi)
        base = sft_of(self.limit).language(sx + left + right)
        rows = [base]
        cur = base
        for _ in range(st - 1):
            cur = self.f.apply_rows(cur)
            rows.append(cur)
        # after t steps the word starts t*lo cells further right
        cols = [r[:, left + t * lo:left + t * lo + sx] for t, r in enumerate(rows)]
        stack = np.stack(cols, axis=2)  # (n, sx, st): space-major, time-minor
        out = R.unique_rows(stack.reshape(len(base), sx * st))
        self.cache[sizes] = out
        return out


def spacetime_shift(f, budget=None, with_language=True):
    """Orbit shift of F in dimension d+1, time as the last axis.

    Forbidden: the spatial forbidden patterns of X at time 0, and for each
    allowed neighborhood pattern q and each wrong symbol a, the pattern q at
    time 0 together with a above the origin.
    """
    x = f.domain
    d = x.dim
    g = x.group
    pats = []
    for p in x.forbidden:
        pats.append(Pattern(g, tuple(c + (0,) for c in p.cells), p.values))
    nb = f.neighborhood
    k = len(nb)
    above = (0,) * d + (1,)
    for code in np.nonzero(f.table >= 0)[0]:
        vals = R.decode_one(int(code), g.order, k)
        cells = [c + (0,) for c in nb]
        right = int(f.table[code])
        for a in range(g.order):
            if a == right:
                continue
            pats.append(Pattern(g, tuple(cells) + (above,), tuple(vals) + (a,)))
    language = None
    if with_language and d == 1:
        language = SpacetimeLanguage(f, iterated_image(f, MAX_TRANSIENT, budget))
    name = f"ST({f.name})" if f.name else None
    return GroupShiftPresentation(g, d + 1, forbidden=pats, language=language, name=name)


def trace_shift(f, shape=((0,),), budget=None):
    """Sequences of states seen in ``shape`` over time, over G^shape."""
    st = spacetime_shift(f, budget)
    d = f.dim
    return project_general(st, 1, shape, budget, keep_axes=(d,))


def limit_set(f, budget=None, route="projection"):
    """The limit set; ``route`` is ``"projection"`` (slice the orbit shift at
    time 0) or ``"images"`` (iterate images until stable)."""
    _need_1d(f)
    if route == "images":
        out = iterated_image(f, MAX_TRANSIENT, budget)
        out.__dict__.setdefault("info", {"route": "images"})
        return out
    st = spacetime_shift(f, budget)
    try:
        proj = project_general(st, 1, ((0,),), budget, keep_axes=(0,))
    except BudgetExceeded:
        out = iterated_image(f, MAX_TRANSIENT, budget)
        out.info = {"route": "images", "fallback": True}
        return out
    out = GroupShiftPresentation.from_window(f.group, *proj.window)
    out.info = dict(getattr(proj, "info", {}), route="projection")
    return out


# -- deciders ----------------------------------------------------------------

def _periodic_cert(x, word):
    from .language import member
    res = member(Pattern.word(x.group, word), x)
    return res.certificate


def _timed(fn):
    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.stats.setdefault("seconds", round(time.perf_counter() - t, 4))
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def decide_injective(f, budget=None):
    """Injective iff the kernel is the identity shift; a no comes with a
    non-identity periodic kernel configuration."""
    _need_1d(f)
    ker = kernel_shift(f)
    sft = sft_of(ker)
    ident = f.group.identity
    nonid = [w for w in sft.words if (w != ident).any()]
    if not nonid:
        return DecisionReport("injective", True, None, {"kernel_words": len(sft.words)})
    cert = _periodic_cert(ker, nonid[0])
    return DecisionReport("injective", False, cert, {"kernel_words": len(sft.words)})


def _distinguishing_word(big, small, max_len=64):
    """A word allowed in ``big`` but not in ``small``."""
    a, b = sft_of(big), sft_of(small)
    for n in range(1, max_len + 1):
        la, lb = a.language(n), b.language(n)
        miss = ~R.isin_rows(la, lb, big.group.order)
        if miss.any():
            return la[int(np.argmax(miss))]
    return None


@_timed
def decide_surjective(f, budget=None, route="projection"):
    omega = limit_set(f, budget, route)
    ok = same_shift(omega, f.domain)
    cert = None
    if not ok:
        w = _distinguishing_word(f.domain, omega)
        cert = Pattern.word(f.group, w)
    return DecisionReport("surjective", ok, cert, {"route": getattr(omega, "info", {}).get("route")})


@_timed
def decide_nilpotent(f, budget=None):
    omega = limit_set(f, budget)
    lang = sft_of(omega).language(1)[:, 0]
    ok = bool((lang == f.group.identity).all())
    if ok:
        cert = {"steps": transient_length(f, budget)}
    else:
        a = int(next(v for v in lang if v != f.group.identity))
        torus = jointly_periodic_sample(f, Pattern.word(f.group, [a]), budget)
        cert = PeriodicConfiguration(f.group, torus.periods[:1], torus.array()[:, 0])
    return DecisionReport("nilpotent", ok, cert)


def _minimal_period(labels):
    n = len(labels)
    for p in range(1, n + 1):
        if n % p == 0 and all(labels[i] == labels[(i + p) % n] for i in range(n)):
            return p
    return n


def _same_power(f, a, b):
    """Do F^a and F^b agree on X?  Compared on generators of a word group."""
    x = f.domain
    lo, hi = f.span
    w = hi - lo + 1
    k = max(a, b)
    # room for the window shrink and for the drift of an off-centre neighborhood
    n = max(sft_of(x).ell, 1) + k * (w - 1) + k * max(abs(lo), abs(hi)) + 1
    gens = sft_of(x).generators(n)
    if len(gens) == 0:
        return True
    ra = f.iterate_rows(gens, a)
    rb = f.iterate_rows(gens, b)
    # after t steps, output index i sits at absolute position i - t*lo
    start = max(-a * lo, -b * lo)
    stop = min(-a * lo + ra.shape[1], -b * lo + rb.shape[1])
    if stop <= start:
        raise ValueError("generator words too short to compare powers")
    return bool(np.array_equal(ra[:, start + a * lo:stop + a * lo], rb[:, start + b * lo:stop + b * lo]))


def column_words(f, t, limit=1 << 18):
    """Length-t time columns of orbits at one cell, as a subgroup of G^t.

    Built from generators of the limit-set words, so it never goes through
    the trace automaton.  Returns None when the group exceeds ``limit``.
    """
    lo, hi = f.span
    left = -min(0, (t - 1) * lo)
    right = max(0, (t - 1) * hi)
    omega = iterated_image(f, MAX_TRANSIENT)
    gens = sft_of(omega).generators(1 + left + right)
    cols = [gens[:, left:left + 1]]
    cur = gens
    for s in range(1, t):
        cur = f.apply_rows(cur)
        cols.append(cur[:, left + s * lo:left + s * lo + 1])
    words = np.concatenate(cols, axis=1)
    try:
        return R.closure(f.group, words, t, limit=limit)
    except OverflowError:
        return None


def trace_counts(f, budget=None, limit=1 << 18):
    """Column word counts at lengths t and 2t with q^(2t) kept small."""
    q = f.group.order
    t = max(2, int(6 // max(math.log2(q), 1)))
    out = []
    for n in (t, 2 * t):
        words = column_words(f, n, limit)
        out.append(None if words is None else len(words))
    return out


@_timed
def decide_eventual_periodicity(f, budget=None):
    """Eventually periodic iff the single-cell trace is finite; reports (n, p)
    with F^(n+p) = F^n and whether F is periodic (injective and eventually
    periodic)."""
    tr = trace_shift(f, ((0,),), budget)
    sft = sft_of(tr)
    finite = sft.mixing_class()["finite"]
    counts = trace_counts(f, budget)
    stats = {"trace_window": tr.window_sizes[0], "trace_counts": counts}
    if None not in counts:
        stats["counts_agree"] = finite == (counts[0] == counts[1])
    if not finite:
        return DecisionReport("eventually_periodic", False, None, stats)
    n = transient_length(f, budget)
    periods = [_minimal_period(c) for c in sft.cycles()]
    p = reduce(lambda a, b: a * b // math.gcd(a, b), periods, 1)
    stats["recheck"] = _same_power(f, n + p, n)
    inj = decide_injective(f).verdict
    cert = {"preperiod": n, "period": p, "periodic": bool(inj)}
    return DecisionReport("eventually_periodic", True, cert, stats)


@_timed
def decide_sensitivity_class(f, budget=None):
    ep = decide_eventual_periodicity(f, budget)
    label = "equicontinuous" if ep.verdict is True else "sensitive"
    return DecisionReport("sensitivity_class", label, ep.certificate, dict(ep.stats))


def finite_support_config(word, pad, ident):
    return [ident] * pad + list(int(v) for v in word) + [ident] * pad


@_timed
def decide_preinjective_1d(f, budget=None):
    """Not pre-injective iff some path of the kernel automaton leaves the
    identity state and comes back after a non-identity label."""
    if f.dim != 1:
        raise Unsupported("pre-injectivity is decided only in dimension one")
    ker = kernel_shift(f)
    sft = sft_of(ker)
    ident = f.group.identity
    s0 = sft.identity_state()
    g = sft.graph
    lab = sft.component_labels()
    comp = lab[s0]
    inside = (lab[g.src] == comp) & (lab[g.tgt] == comp)
    bad = np.nonzero(inside & (g.sym != ident))[0]
    if len(bad) == 0:
        return DecisionReport("pre_injective", True, None, {"kernel_states": sft.nstates})
    e = int(bad[0])
    mask = inside
    head = sft._path(s0, int(g.src[e]), mask)
    tail = sft._path(int(g.tgt[e]), s0, mask)
    core = head + [int(g.sym[e])] + tail
    pad = max(sft.ell - 1, 1)
    word = finite_support_config(core, pad, ident)
    cert = {"asymptotic_kernel_word": Pattern.word(f.group, word, start=-pad)}
    return DecisionReport("pre_injective", False, cert, {"kernel_states": sft.nstates})


def shape_schedule(max_size):
    """{0}, {0,1}, {-1,0,1}, {-1,0,1,2}, ..."""
    out = []
    lo, hi = 0, 0
    while hi - lo + 1 <= max_size:
        out.append(tuple((i,) for i in range(lo, hi + 1)))
        if (hi - lo) % 2 == 0:
            hi += 1
        else:
            lo -= 1
    return out


@_timed
def semidecide_nonmixing(f, mode="transitive", budget=None, max_size=3):
    """Search windows whose trace is not transitive (or not mixing)."""
    if mode not in ("transitive", "mixing"):
        raise ValueError("mode is 'transitive' or 'mixing'")
    tried = []
    for shape in shape_schedule(max_size):
        tr = trace_shift(f, shape, budget)
        cls = sft_of(tr).mixing_class()
        tried.append(len(shape))
        if not cls[mode]:
            return DecisionReport(f"non_{mode}", True, {"window": [c[0] for c in shape]},
                                  {"tried": tried})
    return DecisionReport(f"non_{mode}", "no_witness_within_budget", None, {"tried": tried})


# -- entropy -----------------------------------------------------------------

def spectral_radius(src, tgt, n, tol=1e-13, max_iter=100_000):
    """Largest eigenvalue of a nonnegative adjacency matrix, SCC by SCC,
    via power iteration on A + I."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components
    if n == 0 or len(src) == 0:
        return 0.0
    adj = csr_matrix((np.ones(len(src)), (src, tgt)), shape=(n, n))
    _, lab = connected_components(adj, directed=True, connection="strong")
    best = 0.0
    for c in np.unique(lab):
        idx = np.nonzero(lab == c)[0]
        sub = adj[idx][:, idx]
        if sub.nnz == 0:
            continue
        m = sub + csr_matrix(np.eye(len(idx)))
        v = np.ones(len(idx)) / len(idx)
        lam = 0.0
        for _ in range(max_iter):
            u = m @ v
            new = u.sum()
            u /= new
            if abs(new - lam) < tol * max(1.0, new) and np.abs(u - v).max() < tol:
                lam = new
                break
            v, lam = u, new
        best = max(best, lam - 1.0)
    return best


def entropy_1d(x, tol=1e-12, max_block=8):
    if x.dim != 1:
        raise NotOneDimensional("entropy is computed for one-dimensional shifts")
    sft = sft_of(x)
    if sft.empty:
        raise EmptyAutomaton("the shift is empty")
    g = sft.graph
    lam = spectral_radius(g.src, g.tgt, g.nstates, tol)
    counts = [sft.count_words(n) for n in range(1, max_block + 1)]
    value = math.log(lam) if lam > 0 else 0.0
    # group shifts grow by a constant factor per symbol once the follower group settles
    exact = math.log(counts[-1] / counts[-2]) if len(counts) > 1 else value
    if abs(exact - value) < 1e-6:
        value = exact
    return EntropyEstimate(max(value, 0.0), counts, "spectral")


def goe_entropy_check(f, tol=1e-8, budget=None):
    _need_1d(f)
    hx = entropy_1d(f.domain).value
    himg = entropy_1d(image_shift(f, f.domain, budget)).value
    hker = entropy_1d(kernel_shift(f)).value
    surj = decide_surjective(f, budget).verdict
    pre = decide_preinjective_1d(f).verdict
    return {"h_domain": hx, "h_image": himg, "h_kernel": hker,
            "addition_holds": abs(hx - himg - hker) < tol,
            "surjective": surj, "pre_injective": pre,
            "moore_holds": (not surj) or pre}


# -- jointly periodic points -----------------------------------------------------

def periodic_points(x, period):
    """All configurations of a 1D shift with the given period, as rows."""
    sft = sft_of(x)
    g = sft.graph
    if g.nstates == 0:
        return np.zeros((0, period), dtype=np.int64)
    from .kernels import path_words
    origin, labels = path_words(g.ptr, g.sym, g.tgt, np.arange(g.nstates), period)
    # a closed walk returns to its start state: last ell-1 labels spell it
    ell = sft.ell
    if ell == 1:
        return R.unique_rows(labels)
    k = ell - 1
    seq = np.concatenate([g.state_words[origin], labels], axis=1)
    end = seq[:, -k:]
    ok = (end == g.state_words[origin]).all(axis=1)
    return R.unique_rows(labels[ok])


def apply_cyclic(f, rows):
    rows = np.asarray(rows, dtype=np.int64)
    q = f.group.order
    code = np.zeros(rows.shape, dtype=np.int64)
    for c in f.neighborhood:
        code = code * q + np.roll(rows, -c[0], axis=1)
    return f.table[code]


def jointly_periodic_sample(f, p, budget=None, max_points=1 << 20):
    """An orbit torus (space period a, time period b) whose time-0 row contains p."""
    _need_1d(f)
    budget = budget or DEFAULT_BUDGET
    vals = dict((c[0], v) for c, v in zip(p.cells, p.values))
    sft = sft_of(f.domain)
    g = sft.graph
    from scipy.sparse import csr_matrix
    adj = csr_matrix((np.ones(len(g.src)), (g.src, g.tgt)), shape=(g.nstates, g.nstates))
    paths = np.ones(g.nstates)
    # spatial periods beyond the budget are allowed while the walk count stays small
    for a in range(1, max(budget.max_period, 64) + 1):
        paths = adj @ paths
        if paths.sum() > max_points:
            break
        pts = periodic_points(f.domain, a)
        if len(pts) == 0:
            continue
        steps = max(1, math.ceil(a * math.log2(max(f.group.order, 2))))
        cur = pts
        for _ in range(steps):
            cur = apply_cyclic(f, cur)
        ok = np.ones(len(cur), dtype=bool)
        for pos, v in vals.items():
            ok &= cur[:, pos % a] == v
        if not ok.any():
            continue
        start = cur[int(np.argmax(ok))]
        orbit = [start]
        row = apply_cyclic(f, start[None, :])[0]
        while not np.array_equal(row, start):
            orbit.append(row)
            row = apply_cyclic(f, row[None, :])[0]
            if len(orbit) > f.group.order ** a:
                raise BudgetExceeded("orbit did not close")
        arr = np.stack(orbit, axis=1)  # space-major, time-minor
        return PeriodicConfiguration(f.group, (a, len(orbit)), arr.ravel())
    raise BudgetExceeded("no jointly periodic configuration found",
                         frontier={"period": budget.max_period})


# -- battery -------------------------------------------------------------------

def analyze(f, budget=None, cross_check=False):
    """Run the full decision battery; returns a list of DecisionReports."""
    reports = []

    def run(name, fn, *args):
        try:
            reports.append(fn(*args))
        except BudgetExceeded as exc:
            reports.append(DecisionReport(name, "budget_exceeded", None, {"frontier": exc.frontier}))

    run("injective", decide_injective, f, budget)
    run("surjective", decide_surjective, f, budget)
    run("nilpotent", decide_nilpotent, f, budget)
    run("eventually_periodic", decide_eventual_periodicity, f, budget)
    ep = reports[-1]
    if ep.verdict is True:
        reports.append(DecisionReport("periodic", ep.certificate["periodic"], ep.certificate))
    elif ep.verdict is False:
        reports.append(DecisionReport("periodic", False, None))
    run("sensitivity_class", decide_sensitivity_class, f, budget)
    if f.dim == 1:
        run("pre_injective", decide_preinjective_1d, f, budget)
    run("non_transitive", semidecide_nonmixing, f, "transitive", budget)
    run("non_mixing", semidecide_nonmixing, f, "mixing", budget)
    if cross_check:
        from .crosscheck import check_certificates
        checks = dict(check_certificates(f, reports))
        for rep in reports:
            if rep.property in checks:
                rep.stats["certificate_verified"] = checks[rep.property]
    return reports


# -- example zoo -------------------------------------------------------------------

def _rule(x, nb, fn, name):
    return verify_hom(GroupShiftHom.from_function(x, x.group, nb, fn, name=name))


def zoo():
    """The seven standard small examples, keyed E1..E7."""
    z2, z4 = preset("Z2"), preset("Z4")
    full2 = GroupShiftPresentation.full(z2, 1, name="FULLZ2")
    full4 = GroupShiftPresentation.full(z4, 1, name="FULLZ4")
    two = from_words(z2, np.array([[0, 0], [1, 1]]), name="TWOPOINT")
    return {
        "E1": _rule(full2, [(0,), (1,)], lambda v: (v[0] + v[1]) % 2, "XOR"),
        "E2": _rule(two, [(0,)], lambda v: 0, "TWOPOINT"),
        "E3": _rule(full2, [(1,)], lambda v: v[0], "SHIFT"),
        "E4": _rule(full2, [(0,)], lambda v: v[0], "IDENTITY"),
        "E5": _rule(full4, [(0,)], lambda v: (2 * v[0]) % 4, "DOUBLE"),
        "E6": _rule(full2, [(0,)], lambda v: 0, "ZERO"),
        "E7": _rule(full2, [(-1,), (0,), (1,)], lambda v: (v[0] + v[1] + v[2]) % 2, "XOR3"),
    }
