"""Brute-force reference over periodic configurations.

Everything here works from raw data only: the group's multiplication table,
the forbidden patterns of a presentation and the rule table of a map.  No
automata, projections or constraint search are used.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .shifts import PeriodicConfiguration

ENUM_LIMIT = 1 << 21


@dataclass
class Found:
    certificate: PeriodicConfiguration

    def __bool__(self):
        return True


@dataclass
class NotFoundUpTo:
    K: int
    skipped: list = field(default_factory=list)

    def __bool__(self):
        return False


def _all_arrays(q, shape):
    n = int(np.prod(shape))
    grid = np.indices((q,) * n, dtype=np.int8).reshape(n, -1).T
    return grid.reshape((-1,) + tuple(shape))


def _bad_mask(arrs, forbidden, q):
    """Which tori (stacked along axis 0) contain a forbidden pattern anywhere."""
    dims = arrs.ndim - 1
    axes = tuple(range(1, dims + 1))
    bad = np.zeros(len(arrs), dtype=bool)
    by_shape = {}
    for p in forbidden:
        by_shape.setdefault(p.cells, []).append(p.values)
    for cells, vals in by_shape.items():
        code = np.zeros(arrs.shape, dtype=np.int64)
        for c in cells:
            code = code * q + np.roll(arrs, tuple(-x for x in c), axis=axes)
        table = np.zeros(q ** len(cells), dtype=bool)
        for v in vals:
            k = 0
            for a in v:
                k = k * q + a
            table[k] = True
        hit = table[code]
        bad |= hit.reshape(len(arrs), -1).any(axis=1)
    return bad


class TorusEnsemble:
    """All configurations of a presentation with periods up to ``K``."""

    def __init__(self, x, K):
        self.x = x
        self.K = int(K)
        self.q = x.group.order
        self.dim = x.dim
        self.skipped = []
        self._forbidden = list(x.forbidden)
        self._cache = {}

    def period_vectors(self):
        return list(itertools.product(range(1, self.K + 1), repeat=self.dim))

    def tori(self, periods):
        periods = tuple(periods)
        if periods in self._cache:
            return self._cache[periods]
        if self.q ** int(np.prod(periods)) > ENUM_LIMIT:
            self.skipped.append(periods)
            self._cache[periods] = None
            return None
        arrs = _all_arrays(self.q, periods)
        keep = ~_bad_mask(arrs, self._forbidden, self.q)
        out = arrs[keep]
        self._cache[periods] = out
        return out

    def __iter__(self):
        for k in self.period_vectors():
            arrs = self.tori(k)
            if arrs is None:
                continue
            for a in arrs:
                yield PeriodicConfiguration.from_array(self.x.group, a)


_ENSEMBLES = {}


def clear_cache():
    _ENSEMBLES.clear()


def ensemble(x, K):
    key = (id(x), K)
    ens = _ENSEMBLES.get(key)
    if ens is None or ens.x is not x:
        ens = _ENSEMBLES[key] = TorusEnsemble(x, K)
    return ens


def oracle_member(p, x, K):
    ens = ensemble(x, K)
    for k in ens.period_vectors():
        arrs = ens.tori(k)
        if arrs is None or len(arrs) == 0:
            continue
        ok = np.ones(len(arrs), dtype=bool)
        for c, v in zip(p.cells, p.values):
            idx = (slice(None),) + tuple(a % m for a, m in zip(c, k))
            ok &= arrs[idx] == v
        if ok.any():
            return Found(PeriodicConfiguration.from_array(x.group, arrs[int(np.argmax(ok))]))
    return NotFoundUpTo(K, list(ens.skipped))


def apply_on_tori(f, arrs):
    """Rule applied to every torus in a stack (any dimension)."""
    q = f.group.order
    axes = tuple(range(1, arrs.ndim))
    code = np.zeros(arrs.shape, dtype=np.int64)
    for c in f.neighborhood:
        code = code * q + np.roll(arrs, tuple(-x for x in c), axis=axes)
    return f.table[code]


def _words(arrs, length):
    """All cyclic length-ell words read off 1D tori."""
    k = arrs.shape[1]
    reps = -(-length // k) + 1
    ext = np.tile(arrs, (1, reps))
    out = set()
    for s in range(k):
        for row in ext[:, s:s + length]:
            out.add(tuple(int(v) for v in row))
    return out


def oracle_image_words(f, length, K):
    ens = ensemble(f.domain, K)
    out = set()
    for (k,) in ens.period_vectors():
        arrs = ens.tori((k,))
        if arrs is None or len(arrs) == 0:
            continue
        out |= _words(apply_on_tori(f, arrs), length)
    return sorted(out)


def oracle_domain_words(x, length, K):
    ens = ensemble(x, K)
    out = set()
    for (k,) in ens.period_vectors():
        arrs = ens.tori((k,))
        if arrs is not None and len(arrs):
            out |= _words(arrs, length)
    return sorted(out)


def _codes(arrs, q):
    flat = arrs.reshape(len(arrs), -1)
    code = np.zeros(len(arrs), dtype=np.int64)
    for j in range(flat.shape[1]):
        code = code * q + flat[:, j]
    return code


def torus_dynamics(f, periods, K=None):
    """Injectivity, nilpotency, preperiod and period of F on one torus class.

    On a finite set injective and surjective coincide.
    """
    ens = ensemble(f.domain, K or max(periods))
    arrs = ens.tori(periods)
    if arrs is None:
        return None
    q = f.group.order
    src = _codes(arrs, q)  # ascending: tori are enumerated in lexicographic order
    dst = _codes(apply_on_tori(f, arrs), q)
    injective = len(np.unique(dst)) == len(src)
    nxt = np.searchsorted(src, dst)
    ident = int(np.searchsorted(src, _codes(np.full((1,) + arrs.shape[1:], f.group.identity), q)[0]))
    alive = np.ones(len(src), dtype=bool)
    steps = 0
    while True:
        image = np.zeros(len(src), dtype=bool)
        image[nxt[alive]] = True
        if (image == alive).all():
            break
        alive = image
        steps += 1
    eventual = np.nonzero(alive)[0]
    nilpotent = len(eventual) == 1 and int(eventual[0]) == ident
    back = np.zeros(len(eventual), dtype=np.int64)
    cur = eventual.copy()
    t = 0
    while (back == 0).any():
        cur = nxt[cur]
        t += 1
        back[(cur == eventual) & (back == 0)] = t
    period = 1
    for length in np.unique(back):
        period = period * int(length) // int(np.gcd(period, int(length)))
    return {"injective": bool(injective), "surjective": bool(injective),
            "nilpotent": bool(nilpotent), "preperiod": steps, "period": int(period),
            "size": len(src)}


PROPERTIES = ("injective-on-tori", "surjective-on-tori", "nilpotent-on-tori")


def oracle_decide(f, prop, K):
    """Verdict of ``prop`` on every torus class with periods up to K.

    Returns True/False, or None when no torus class could be enumerated.
    """
    key = {"injective-on-tori": "injective", "surjective-on-tori": "surjective",
           "nilpotent-on-tori": "nilpotent"}.get(prop)
    if key is None:
        raise ValueError(f"unknown oracle property {prop!r}")
    seen = False
    for k in ensemble(f.domain, K).period_vectors():
        dyn = torus_dynamics(f, k, K)
        if dyn is None:
            continue
        seen = True
        if not dyn[key]:
            return False
    return True if seen else None


def oracle_eventual_period(f, K):
    """(max preperiod, lcm of periods) over torus classes up to K."""
    n, p = 0, 1
    for k in ensemble(f.domain, K).period_vectors():
        dyn = torus_dynamics(f, k, K)
        if dyn is None:
            continue
        n = max(n, dyn["preperiod"])
        p = p * dyn["period"] // np.gcd(p, dyn["period"])
    return n, int(p)


def oracle_asymptotic_kernel_word(f, K):
    """A word w (length <= K, non-identity) with 1..1 w 1..1 in X and mapped to
    the identity configuration; None if there is none up to K.  1D only."""
    x = f.domain
    g = x.group
    q = g.order
    e = g.identity
    forb = list(x.forbidden)
    span = max([max(c[0] for c in p.cells) - min(c[0] for c in p.cells) for p in forb] + [0])
    lo = min(c[0] for c in f.neighborhood)
    hi = max(c[0] for c in f.neighborhood)
    pad = max(span, hi - lo, 1) + 1
    for n in range(1, K + 1):
        if q ** n > ENUM_LIMIT:
            break
        words = _all_arrays(q, (n,)).astype(np.int64)
        words = words[(words[:, 0] != e) & (words[:, -1] != e)]
        if len(words) == 0:
            continue
        full = np.concatenate([np.full((len(words), pad), e), words, np.full((len(words), pad), e)], axis=1)
        # identity padding stands in for the infinite tails: read it cyclically
        tori = np.concatenate([full, np.full((len(words), pad), e)], axis=1)
        ok = ~_bad_mask(tori, forb, q)
        img = apply_on_tori(f, tori)
        ok &= (img == e).all(axis=1)
        if ok.any():
            return [int(v) for v in words[int(np.argmax(ok))]]
    return None
