"""Shift homomorphisms given by a neighborhood and a local rule table."""

import itertools

import numpy as np

from . import rows as R
from .errors import NotEndomorphism, NotGroupHom, ValidationError
from .groups import FiniteGroup
from .shifts import Pattern, PeriodicConfiguration, box_cells, bounding_box


class GroupShiftHom:
    """``F(c)_u = f(c restricted to u + N)`` from a group shift over ``G`` into ``H``.

    ``table`` is indexed by the mixed-radix code of an N-pattern (cells of N
    in lexicographic order) and holds the image element, or -1 where the
    pattern is not allowed in the domain.
    """

    def __init__(self, domain, target, neighborhood, table, name=None):
        self.domain = domain
        self.target = target
        self.neighborhood = tuple(sorted(tuple(int(x) for x in c) for c in neighborhood))
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name
        q = domain.group.order
        if len(self.table) != q ** len(self.neighborhood):
            raise ValidationError("rule table size does not match the neighborhood")

    @property
    def group(self):
        return self.domain.group

    @property
    def dim(self):
        return self.domain.dim

    @property
    def is_ca(self):
        return self.target.order == self.group.order and self.target.same_table(self.group)

    @classmethod
    def from_function(cls, domain, target, neighborhood, fn, allowed=None, name=None):
        """Tabulate ``fn(values tuple) -> element`` on the allowed N-patterns."""
        nb = tuple(sorted(tuple(c) for c in neighborhood))
        q = domain.group.order
        table = np.full(q ** len(nb), -1, dtype=np.int64)
        if allowed is None:
            from .language import allowed_patterns
            allowed = allowed_patterns(domain, nb).members
        for code in allowed:
            vals = R.decode_one(int(code), q, len(nb))
            table[code] = fn(vals)
        return cls(domain, target, nb, table, name=name)

    # -- 1D geometry ---------------------------------------------------
    @property
    def span(self):
        """(lo, hi) of the neighborhood along axis 0 (one-dimensional use)."""
        xs = [c[0] for c in self.neighborhood]
        return min(xs), max(xs)

    @property
    def width(self):
        lo, hi = self.span
        return hi - lo + 1

    def apply_rows(self, rows):
        """Image of 1D words: output position u reads input u + (N - lo)."""
        rows = np.asarray(rows, dtype=np.int64)
        lo, hi = self.span
        w = hi - lo + 1
        n_out = rows.shape[1] - w + 1
        if n_out <= 0:
            return np.zeros((len(rows), 0), dtype=np.int64)
        q = self.group.order
        offs = [c[0] - lo for c in self.neighborhood]
        code = np.zeros((len(rows), n_out), dtype=np.int64)
        for o in offs:
            code = code * q + rows[:, o:o + n_out]
        return self.table[code]

    def iterate_rows(self, rows, k):
        for _ in range(k):
            rows = self.apply_rows(rows)
        return rows

    # -- configurations --------------------------------------------------
    def apply_config(self, c):
        arr = c.array()
        q = self.group.order
        axes = tuple(range(arr.ndim))
        code = np.zeros(arr.shape, dtype=np.int64)
        for cell in self.neighborhood:
            code = code * q + np.roll(arr, tuple(-x for x in cell), axis=axes)
        out = self.table[code]
        if (out < 0).any():
            raise ValidationError("configuration contains a pattern outside the rule's domain")
        return PeriodicConfiguration(self.target, c.periods, out.ravel())

    def __repr__(self):
        return f"GroupShiftHom({self.name or ''} N={self.neighborhood})"


def allowed_codes(hom):
    return np.nonzero(hom.table >= 0)[0]


def verify_hom(hom, check_endomorphism=None):
    """Exhaustive homomorphism check on the allowed N-patterns.

    For cellular automata (target group equals the domain group) the
    endomorphism contract F(X) <= X is also checked.  Returns ``hom``.
    """
    from .language import allowed_patterns
    g = hom.group
    h = hom.target
    k = len(hom.neighborhood)
    allowed = allowed_patterns(hom.domain, hom.neighborhood).members
    codes = np.asarray(allowed, dtype=np.int64)
    if (hom.table[codes] < 0).any():
        bad = int(codes[np.argmax(hom.table[codes] < 0)])
        raise ValidationError(f"rule undefined on allowed pattern {R.decode_one(bad, g.order, k)}")
    rows = R.decode(codes, g.order, k)
    vals = hom.table[codes]
    for i in range(len(codes)):
        prod = g.mul_arrays(rows[i][None, :], rows)
        pc = R.encode(prod, g.order)
        lhs = hom.table[pc]
        rhs = h.mul_arrays(np.full(len(codes), vals[i]), vals)
        miss = lhs != rhs
        if miss.any():
            j = int(np.argmax(miss))
            p = Pattern(g, hom.neighborhood, tuple(rows[i]))
            q = Pattern(g, hom.neighborhood, tuple(rows[j]))
            raise NotGroupHom(_fmt(p), _fmt(q))
    if check_endomorphism is None:
        check_endomorphism = hom.is_ca
    if check_endomorphism:
        witness = endomorphism_witness(hom)
        if witness is not None:
            raise NotEndomorphism(witness)
    return hom


def _fmt(p):
    return "".join(p.labels()) if p.dim == 1 else str(p)


def endomorphism_witness(hom):
    """A pattern of F(X) that is not allowed in X, or None."""
    x = hom.domain
    if x.dim == 1:
        from .oned import sft_of
        sft = sft_of(x)
        ell = sft.ell
        src = sft.generators(ell + hom.width - 1)
        img = hom.apply_rows(src)
        ok = R.isin_rows(img, sft.words, x.group.order)
        if not ok.all():
            w = img[int(np.argmax(~ok))]
            return Pattern.word(x.group, w)
        return None
    # general dimension: image of every allowed box around the window
    from .language import allowed_rows
    sizes, window = x.window
    lo = np.min(np.asarray(hom.neighborhood), axis=0)
    hi = np.max(np.asarray(hom.neighborhood), axis=0)
    big = tuple(int(s + h - l) for s, h, l in zip(sizes, hi, lo))
    origin = tuple(int(l) for l in lo)
    rows = allowed_rows(x, big, origin)
    cells = box_cells(big, origin)
    index = {c: i for i, c in enumerate(cells)}
    q = x.group.order
    out_cells = box_cells(sizes)
    cols = []
    for u in out_cells:
        code_cols = [index[tuple(a + b for a, b in zip(u, c))] for c in hom.neighborhood]
        cols.append(code_cols)
    img = np.zeros((len(rows), len(out_cells)), dtype=np.int64)
    for j, cc in enumerate(cols):
        code = np.zeros(len(rows), dtype=np.int64)
        for c in cc:
            code = code * q + rows[:, c]
        img[:, j] = hom.table[code]
    ok = R.isin_rows(img, window, q)
    if not ok.all():
        return Pattern(x.group, out_cells, tuple(img[int(np.argmax(~ok))]))
    return None


# -- rule construction helpers -------------------------------------------

def rule_from_table(domain, target, neighborhood, entries):
    """Build from explicit (input tuple, output) entries; missing allowed inputs are an error."""
    nb = tuple(sorted(tuple(c) for c in neighborhood))
    q = domain.group.order
    table = np.full(q ** len(nb), -1, dtype=np.int64)
    for inputs, out in entries:
        code = 0
        for v in inputs:
            code = code * q + int(v)
        table[code] = int(out)
    return GroupShiftHom(domain, target, nb, table)


def compile_expression(expr, group, target, nvars):
    """Compile a word like ``x0 * x1^-1 * x2^2`` into a function of the variables.

    Tokens: ``x<i>`` variables, ``e``/``1`` for the identity, ``*`` for the
    product, ``^k`` integer powers (k may be negative).
    """
    import re
    toks = re.findall(r"x\d+|\^-?\d+|\*|[()]|\S+", expr.replace(" ", ""))
    terms = []
    i = 0
    while i < len(toks):
        t = toks[i]
        if t == "*":
            i += 1
            continue
        if t.startswith("x"):
            var = int(t[1:])
            if var >= nvars:
                raise ValidationError(f"variable {t} outside the neighborhood")
            item = ("var", var)
        elif t in ("e", "1"):
            item = ("id", None)
        else:
            raise ValidationError(f"cannot parse token {t!r} in rule expression")
        power = 1
        if i + 1 < len(toks) and toks[i + 1].startswith("^"):
            power = int(toks[i + 1][1:])
            i += 1
        terms.append((item, power))
        i += 1
    if target.order != group.order:
        raise ValidationError("expression rules need the same group on both sides")

    def fn(vals):
        acc = group.identity
        for (kind, var), power in terms:
            if kind == "id":
                continue
            acc = group.mul(acc, group.power(vals[var], power))
        return acc
    return fn


def compose_1d(f2, f1):
    """The block map of ``f2 o f1`` (one-dimensional, same domain group)."""
    lo1, hi1 = f1.span
    lo2, hi2 = f2.span
    lo, hi = lo1 + lo2, hi1 + hi2
    nb = tuple((i,) for i in range(lo, hi + 1))
    q = f1.group.order
    table = np.full(q ** len(nb), -1, dtype=np.int64)
    from .oned import sft_of
    words = sft_of(f1.domain).language(hi - lo + 1)
    mid = f1.apply_rows(words)
    out = f2.apply_rows(mid)[:, 0]
    codes = R.encode(words, q)
    table[codes] = out
    return GroupShiftHom(f1.domain, f2.target, nb, table)
