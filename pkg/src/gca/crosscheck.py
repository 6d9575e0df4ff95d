"""Agreement between decided properties and the brute-force oracle, plus
independent re-verification of certificates.

The oracle only sees tori with periods up to K, so each comparison is
one-sided: a pair of verdicts is compared only where the oracle's answer is
forced by the decided one.
"""

from dataclasses import dataclass, field

import numpy as np

from .oracle import (oracle_asymptotic_kernel_word, oracle_decide, oracle_eventual_period,
                     oracle_member)
from .shifts import Pattern, PeriodicConfiguration, torus_member


@dataclass
class Agreement:
    conclusive: int = 0
    agreements: int = 0
    disagreements: list = field(default_factory=list)

    def record(self, prop, ok, detail=None):
        self.conclusive += 1
        if ok:
            self.agreements += 1
        else:
            self.disagreements.append((prop, detail))


def _by_name(reports):
    return {r.property: r for r in reports}


def _period_fits(cert, K):
    return isinstance(cert, PeriodicConfiguration) and max(cert.periods) <= K


def oracle_agreement(f, reports, K=8, agreement=None):
    agg = agreement or Agreement()
    rep = _by_name(reports)
    x = f.domain

    inj = rep.get("injective")
    if inj is not None and inj.verdict in (True, False):
        o = oracle_decide(f, "injective-on-tori", K)
        if inj.verdict is True:
            agg.record("injective", o is not False, o)
        elif _period_fits(inj.certificate, K):
            agg.record("injective", o is False, o)

    sur = rep.get("surjective")
    if sur is not None and sur.verdict is False and isinstance(sur.certificate, Pattern):
        if oracle_member(sur.certificate, x, K):
            agg.record("surjective", oracle_decide(f, "surjective-on-tori", K) is False)
    if inj is not None and inj.verdict is True and sur is not None:
        agg.record("surjunctive", sur.verdict is True)

    nil = rep.get("nilpotent")
    if nil is not None and nil.verdict in (True, False):
        o = oracle_decide(f, "nilpotent-on-tori", K)
        if nil.verdict is True:
            agg.record("nilpotent", o is not False, o)
        elif _period_fits(nil.certificate, K):
            agg.record("nilpotent", o is False, o)

    ep = rep.get("eventually_periodic")
    if ep is not None and ep.verdict is True:
        n, p = ep.certificate["preperiod"], ep.certificate["period"]
        on, op = oracle_eventual_period(f, K)
        agg.record("eventually_periodic", on <= n and p % op == 0, (on, op, n, p))

    pre = rep.get("pre_injective")
    if pre is not None and pre.verdict in (True, False):
        w = oracle_asymptotic_kernel_word(f, K)
        if w is not None:
            agg.record("pre_injective", pre.verdict is False, w)
        elif pre.verdict is False:
            core = _core_length(pre.certificate["asymptotic_kernel_word"], f.group.identity)
            if core <= K:
                agg.record("pre_injective", False, "oracle found no word within its range")
    return agg


def _core_length(p, ident):
    idx = [i for i, v in enumerate(p.values) if v != ident]
    return idx[-1] - idx[0] + 1 if idx else 0


# -- certificate re-verification ---------------------------------------------------

def check_certificates(f, reports, K=8):
    """Re-verify every certificate with checks independent of the decider.

    Returns a list of (property, ok) pairs.
    """
    from .language import member
    from .projection import kernel_shift
    out = []
    x = f.domain
    g = f.group
    e = g.identity
    for r in reports:
        c = r.certificate
        if r.property == "injective" and r.verdict is False:
            ker = kernel_shift(f)
            ok = (isinstance(c, PeriodicConfiguration) and not c.is_identity()
                  and torus_member(c, x) and f.apply_config(c).is_identity())
            out.append(("injective", bool(ok and torus_member(c, ker))))
        elif r.property == "surjective" and r.verdict is False:
            from .ca import limit_set
            omega = limit_set(f, route="images")
            ok = bool(member(c, x)) and not bool(member(c, omega))
            out.append(("surjective", ok))
        elif r.property == "nilpotent":
            if r.verdict is True:
                ok = _maps_to_identity(f, c["steps"], K)
            else:
                ok = (isinstance(c, PeriodicConfiguration) and not c.is_identity()
                      and torus_member(c, x) and _on_cycle(f, c))
            out.append(("nilpotent", bool(ok)))
        elif r.property == "pre_injective" and r.verdict is False:
            word = c["asymptotic_kernel_word"]
            out.append(("pre_injective", _finite_kernel_word_ok(f, word)))
        elif r.property == "eventually_periodic" and r.verdict is True:
            n, p = c["preperiod"], c["period"]
            out.append(("eventually_periodic", _power_agrees_on_tori(f, n, p, K)))
    return out


def _tori(x, K):
    from .oracle import ensemble
    ens = ensemble(x, K)
    for k in ens.period_vectors():
        arrs = ens.tori(k)
        if arrs is not None and len(arrs):
            yield arrs


def _maps_to_identity(f, steps, K):
    from .oracle import apply_on_tori
    for arrs in _tori(f.domain, K):
        cur = arrs
        for _ in range(steps):
            cur = apply_on_tori(f, cur)
        if (cur != f.group.identity).any():
            return False
    return True


def _power_agrees_on_tori(f, n, p, K):
    from .oracle import apply_on_tori
    for arrs in _tori(f.domain, K):
        cur = arrs
        for _ in range(n):
            cur = apply_on_tori(f, cur)
        nxt = cur
        for _ in range(p):
            nxt = apply_on_tori(f, nxt)
        if not np.array_equal(cur, nxt):
            return False
    return True


def _on_cycle(f, c):
    start = c
    cur = f.apply_config(c)
    for _ in range(f.group.order ** len(c.values)):
        if cur.values == start.values:
            return True
        cur = f.apply_config(cur)
    return False


def _finite_kernel_word_ok(f, word):
    """Pad the finite word with identity on both sides, read it on a torus long
    enough that the padding acts as infinite tails, and check it lies in X,
    maps to the identity and is not the identity."""
    e = f.group.identity
    vals = list(word.values)
    if all(v == e for v in vals):
        return False
    span = max([max(c[0] for c in p.cells) - min(c[0] for c in p.cells)
                for p in f.domain.forbidden] + [0])
    lo, hi = f.span
    pad = max(span, hi - lo) + 1
    arr = [e] * pad + vals + [e] * pad
    c = PeriodicConfiguration(f.group, (len(arr),), arr)
    return bool(torus_member(c, f.domain) and f.apply_config(c).is_identity())
