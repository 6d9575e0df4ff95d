"""Cells, shapes, patterns, periodic configurations and forbidden-pattern
presentations of group shifts.

Cells are plain integer tuples.  Shapes are tuples of cells kept in
lexicographic order.  Throughout, axis 0 is the axis that gets sliced by
the projection code.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DomainTooSmall, NotPowerAlphabet, ShapeMismatch
from .groups import FiniteGroup, Subgroup, is_power_of, make_subgroup, power_group
from . import rows as R


def make_shape(cells):
    cells = [tuple(int(x) for x in c) for c in cells]
    if len(set(cells)) != len(cells):
        raise ValueError("shape has duplicate cells")
    return tuple(sorted(cells))


def box_cells(sizes, origin=None):
    """Cells of the box prod [origin_i, origin_i + sizes_i) in lex order."""
    if origin is None:
        origin = (0,) * len(sizes)
    ranges = [range(o, o + s) for o, s in zip(origin, sizes)]
    return tuple(itertools.product(*ranges))


def bounding_box(cells):
    """(origin, sizes) of the smallest box containing the cells."""
    arr = np.asarray(cells, dtype=np.int64)
    lo = arr.min(axis=0)
    hi = arr.max(axis=0)
    return tuple(int(x) for x in lo), tuple(int(x) for x in hi - lo + 1)


def shift_cells(cells, t):
    return tuple(tuple(a + b for a, b in zip(c, t)) for c in cells)


@dataclass(frozen=True)
class Pattern:
    group: FiniteGroup = field(compare=False, repr=False)
    cells: tuple
    values: tuple

    def __post_init__(self):
        if len(self.cells) != len(self.values):
            raise ValueError("cells and values differ in length")
        order = sorted(range(len(self.cells)), key=lambda i: self.cells[i])
        if any(self.cells[order[i]] == self.cells[order[i + 1]] for i in range(len(order) - 1)):
            raise ValueError("pattern has duplicate cells")
        object.__setattr__(self, "cells", tuple(tuple(int(x) for x in self.cells[i]) for i in order))
        object.__setattr__(self, "values", tuple(int(self.values[i]) for i in order))

    @classmethod
    def from_mapping(cls, group, mapping):
        items = sorted(mapping.items())
        return cls(group, tuple(c for c, _ in items), tuple(v for _, v in items))

    @classmethod
    def word(cls, group, symbols, start=0):
        """1D pattern from a sequence of element indices or labels."""
        vals = [group.index(s) if not isinstance(s, (int, np.integer)) else int(s) for s in symbols]
        return cls(group, tuple((start + i,) for i in range(len(vals))), tuple(vals))

    @property
    def dim(self):
        return len(self.cells[0]) if self.cells else 0

    @property
    def shape(self):
        return self.cells

    def mapping(self):
        return dict(zip(self.cells, self.values))

    def translate(self, t):
        return pattern_translate(self, t)

    def canonical(self):
        """Translate so that the lexicographically least cell is the origin."""
        if not self.cells:
            return self
        return pattern_translate(self, self.cells[0])

    def is_identity(self):
        return all(v == self.group.identity for v in self.values)

    def labels(self):
        return [self.group.label(v) for v in self.values]

    def __str__(self):
        if self.dim == 1 and all(self.cells[i + 1][0] == self.cells[i][0] + 1 for i in range(len(self.cells) - 1)):
            return "".join(self.labels()) if all(len(x) == 1 for x in self.labels()) else " ".join(self.labels())
        return "{" + ", ".join(f"{c}:{self.group.label(v)}" for c, v in zip(self.cells, self.values)) + "}"


def pattern_combine(kind, p, q=None):
    """Cellwise product (``kind='product'``) or cellwise inverse (``'inverse'``)."""
    g = p.group
    if kind == "inverse":
        return Pattern(g, p.cells, tuple(g.inverse(v) for v in p.values))
    if kind != "product":
        raise ValueError(f"unknown combination {kind!r}")
    if q is None or q.cells != p.cells or q.group.order != g.order:
        raise ShapeMismatch("patterns must share group and shape")
    return Pattern(g, p.cells, tuple(g.mul(a, b) for a, b in zip(p.values, q.values)))


def pattern_translate(p, t):
    """Apply the translation pulling cell ``t`` to the origin."""
    neg = tuple(-x for x in t)
    return Pattern(p.group, shift_cells(p.cells, neg), p.values)


def hat_lift(p, base=None):
    """Spread a pattern over ``G^n`` (dimension d-1) into a width-n pattern over ``G``.

    The new leading coordinate runs over 1..n (component order of the power).
    """
    g = p.group
    if g.factors is None or (base is not None and not is_power_of(g, base)):
        raise NotPowerAlphabet(f"{g.name} is not a power alphabet")
    base = base or g.factors[0]
    if any(f is not base and f.order != base.order for f in g.factors):
        raise NotPowerAlphabet(f"{g.name} has mixed factors")
    cells, vals = [], []
    for c, v in zip(p.cells, p.values):
        for i, comp in enumerate(g.components(v)):
            cells.append((i + 1,) + tuple(c))
            vals.append(comp)
    return Pattern(base, tuple(cells), tuple(vals))


def unlift(p, power):
    """Inverse of :func:`hat_lift`: fold the leading coordinate into ``power``."""
    n = len(power.factors)
    buckets = {}
    for c, v in zip(p.cells, p.values):
        if not 1 <= c[0] <= n:
            raise ShapeMismatch("leading coordinate outside 1..n")
        buckets.setdefault(c[1:], [None] * n)[c[0] - 1] = v
    cells, vals = [], []
    for c, comps in sorted(buckets.items()):
        if any(x is None for x in comps):
            raise ShapeMismatch("lifted pattern is not a full strip")
        cells.append(c)
        vals.append(power.compose(comps))
    return Pattern(power, tuple(cells), tuple(vals))


@dataclass(frozen=True)
class PeriodicConfiguration:
    group: FiniteGroup = field(compare=False, repr=False)
    periods: tuple
    values: tuple  # row-major over the fundamental box

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(k) for k in self.periods))
        object.__setattr__(self, "values", tuple(int(v) for v in np.asarray(self.values).ravel()))
        if any(k <= 0 for k in self.periods):
            raise ValueError("periods must be positive")
        if len(self.values) != int(np.prod(self.periods)):
            raise ValueError("fundamental box size does not match the periods")

    @classmethod
    def from_array(cls, group, arr):
        arr = np.asarray(arr)
        return cls(group, arr.shape, tuple(arr.ravel()))

    @property
    def dim(self):
        return len(self.periods)

    def array(self):
        return np.asarray(self.values, dtype=np.int64).reshape(self.periods)

    def at(self, cell):
        idx = tuple(int(c) % k for c, k in zip(cell, self.periods))
        return int(self.array()[idx])

    def restrict(self, cells):
        arr = self.array()
        vals = tuple(int(arr[tuple(c % k for c, k in zip(cell, self.periods))]) for cell in cells)
        return Pattern(self.group, tuple(cells), vals)

    def contains_at_origin(self, p):
        return all(self.at(c) == v for c, v in zip(p.cells, p.values))

    def is_identity(self):
        return all(v == self.group.identity for v in self.values)


class GroupShiftPresentation:
    """Forbidden-pattern presentation of a group shift in dimension ``dim``.

    For ``dim == 0`` the shift is just a subgroup (``members``).  For
    ``dim >= 1`` either an explicit forbidden list is given or a window
    (box sizes plus the set of allowed box patterns); each form is derived
    from the other on demand.  ``language`` may carry a provider object with
    a ``box_language(origin, sizes)`` method that returns the globally allowed
    box patterns; the generic engines use it in preference to search.
    """

    def __init__(self, group, dim, forbidden=None, members=None, *, window=None,
                 language=None, name=None):
        self.group = group
        self.dim = int(dim)
        self.name = name
        self.language = language
        self._window = None
        self._forbidden = None
        if self.dim == 0:
            if members is None:
                members = make_subgroup(group, range(group.order))
            if not isinstance(members, Subgroup):
                members = make_subgroup(group, members)
            self.members = members
            return
        self.members = None
        if window is not None:
            sizes, allowed = window
            sizes = tuple(int(s) for s in sizes)
            if len(sizes) != self.dim:
                raise DimensionMismatch("window rank differs from dimension")
            allowed = R.unique_rows(np.asarray(allowed, dtype=np.int64).reshape(-1, int(np.prod(sizes))))
            self._window = (sizes, allowed)
        else:
            pats = []
            seen = set()
            for p in forbidden or ():
                if p.dim != self.dim:
                    raise DimensionMismatch(f"pattern of dimension {p.dim} in a {self.dim}-dimensional shift")
                c = p.canonical()
                key = (c.cells, c.values)
                if key not in seen:
                    seen.add(key)
                    pats.append(c)
            pats.sort(key=lambda q: (len(q.cells), q.cells, q.values))
            self._forbidden = tuple(pats)

    # -- presentations -------------------------------------------------
    @property
    def forbidden(self):
        if self.dim == 0:
            return ()
        if self._forbidden is None:
            sizes, allowed = self._window
            cells = box_cells(sizes)
            k = len(cells)
            total = self.group.order ** k
            if total > 2 ** 22:
                raise DomainTooSmall("window complement too large to list explicitly")
            allowed_codes = set(R.encode(allowed, self.group.order).tolist())
            pats = []
            for code in range(total):
                if code not in allowed_codes:
                    vals = R.decode_one(code, self.group.order, k)
                    pats.append(Pattern(self.group, cells, vals))
            self._forbidden = tuple(pats)
        return self._forbidden

    @property
    def has_explicit_forbidden(self):
        return self._forbidden is not None

    @property
    def window_sizes(self):
        if self._window is not None:
            return self._window[0]
        if not self._forbidden:
            return (1,) * self.dim
        sizes = [1] * self.dim
        for p in self._forbidden:
            _, s = bounding_box(p.cells)
            sizes = [max(a, b) for a, b in zip(sizes, s)]
        return tuple(sizes)

    @property
    def width(self):
        """Extent of the window along the slicing axis."""
        return self.window_sizes[0] if self.dim else 0

    @property
    def window(self):
        """(sizes, allowed rows) with allowed = box patterns containing no
        forbidden pattern at any placement inside the box."""
        if self._window is None:
            sizes = self.window_sizes
            from .kernels import window_filter
            self._window = (sizes, window_filter(self.group.order, sizes, self._forbidden))
        return self._window

    @property
    def window_cells(self):
        return box_cells(self.window_sizes)

    @classmethod
    def from_window(cls, group, sizes, allowed, name=None, language=None):
        return cls(group, len(sizes), window=(sizes, allowed), name=name, language=language)

    @classmethod
    def full(cls, group, dim, name=None):
        if dim == 0:
            return cls(group, 0, name=name)
        return cls(group, dim, forbidden=(), name=name)

    @classmethod
    def identity_shift(cls, group, dim, name=None):
        """The one-point shift containing only the all-identity configuration."""
        if dim == 0:
            return cls(group, 0, members=[group.identity], name=name)
        cell = ((0,) * dim,)
        return cls(group, dim, forbidden=[Pattern(group, cell, (a,)) for a in range(group.order)
                                          if a != group.identity], name=name)

    def with_language(self, language):
        out = GroupShiftPresentation.__new__(GroupShiftPresentation)
        out.__dict__.update(self.__dict__)
        out.language = language
        return out

    def __repr__(self):
        if self.dim == 0:
            return f"GroupShiftPresentation(dim=0, {self.group.name}, members={len(self.members)})"
        nf = len(self._forbidden) if self._forbidden is not None else "window"
        return f"GroupShiftPresentation(dim={self.dim}, {self.group.name}, forbidden={nf}, window={self.window_sizes})"


def normalize(x, target):
    """Rewrite every forbidden pattern as its extensions to the shape ``target``.

    Each pattern is placed at every translate that fits inside ``target`` and
    completed in all possible ways, so the presented shift does not change.
    """
    if x.dim == 0:
        return x
    target = make_shape(target)
    tset = set(target)
    g = x.group
    out = set()
    for p in x.forbidden:
        placed_any = False
        for anchor in target:
            t = tuple(a - b for a, b in zip(anchor, p.cells[0]))
            moved = shift_cells(p.cells, t)
            if not all(c in tset for c in moved):
                continue
            placed_any = True
            fixed = dict(zip(moved, p.values))
            free = [c for c in target if c not in fixed]
            for fill in itertools.product(range(g.order), repeat=len(free)):
                vals = dict(fixed)
                vals.update(zip(free, fill))
                out.add(tuple(vals[c] for c in target))
        if not placed_any:
            raise DomainTooSmall(f"pattern {p} does not fit in the target domain")
    pats = [Pattern(g, target, v) for v in sorted(out)]
    return GroupShiftPresentation(g, x.dim, forbidden=pats, name=x.name)


def torus_member(c, x):
    """Does the periodic configuration ``c`` avoid every forbidden pattern of ``x``?"""
    if c.dim != x.dim:
        raise DimensionMismatch("configuration and shift differ in dimension")
    if x.dim == 0:
        return c.values[0] in x.members
    arr = c.array()
    if x.has_explicit_forbidden:
        from .kernels import torus_scan
        return torus_scan(arr, x.forbidden)
    sizes, allowed = x.window
    rows = torus_windows(arr, sizes)
    return bool(R.isin_rows(rows, allowed, x.group.order).all())


def torus_windows(arr, sizes):
    """All box windows of a periodic array (wrapping), one row per anchor cell."""
    cols = [np.roll(arr, tuple(-o for o in off), axis=tuple(range(arr.ndim))).ravel()
            for off in box_cells(sizes)]
    return np.stack(cols, axis=1)


def groupness_check(x, radius=None):
    """Test whether the allowed patterns on the box {0..r}^d form a subgroup.

    Returns ``(ok, witness)``; the witness is a pair of allowed patterns
    whose product is not allowed, or a single pattern whose inverse is not.
    Passing is only a necessary condition for presenting a group shift.
    """
    from .language import allowed_rows
    if x.dim == 0:
        return True, None
    r = x.width + 1 if radius is None else radius
    sizes = (r + 1,) * x.dim
    g = x.group
    rows = allowed_rows(x, sizes)
    cells = box_cells(sizes)
    codes = R.encode(rows, g.order)
    cs = set(codes.tolist())
    ident = np.full((1, rows.shape[1]), g.identity, dtype=np.int64)
    if R.encode(ident, g.order)[0] not in cs:
        return False, (Pattern(g, cells, tuple(ident[0])),)
    inv = g.inv_array(rows)
    bad = ~np.isin(R.encode(inv, g.order), codes)
    if bad.any():
        i = int(np.argmax(bad))
        return False, (Pattern(g, cells, tuple(rows[i])),)
    for i in range(len(rows)):
        prod = g.mul_arrays(rows[i][None, :], rows)
        miss = ~np.isin(R.encode(prod, g.order), codes)
        if miss.any():
            j = int(np.argmax(miss))
            return False, (Pattern(g, cells, tuple(rows[i])), Pattern(g, cells, tuple(rows[j])))
    return True, None


def permute_axes(x, perm, language=None):
    """Presentation of the shift with coordinates reordered: new axis i is old axis perm[i]."""
    if x.dim == 0:
        return x
    perm = tuple(perm)
    if x.has_explicit_forbidden:
        pats = [Pattern(x.group, tuple(tuple(c[j] for j in perm) for c in p.cells), p.values)
                for p in x.forbidden]
        out = GroupShiftPresentation(x.group, x.dim, forbidden=pats, name=x.name)
    else:
        sizes, allowed = x.window
        old = box_cells(sizes)
        new_sizes = tuple(sizes[j] for j in perm)
        new_cells = box_cells(new_sizes)
        # position in the old row for each new cell
        index = {c: i for i, c in enumerate(old)}
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        cols = [index[tuple(nc[inv[j]] for j in range(len(perm)))] for nc in new_cells]
        out = GroupShiftPresentation.from_window(x.group, new_sizes, allowed[:, cols], name=x.name)
    if language is not None:
        out.language = language
    elif x.language is not None:
        out.language = PermutedLanguage(x.language, perm)
    return out


class PermutedLanguage:
    """Language provider seen through a coordinate permutation."""

    def __init__(self, inner, perm):
        self.inner = inner
        self.perm = tuple(perm)

    def box_language(self, origin, sizes):
        perm = self.perm
        d = len(perm)
        inv = [0] * d
        for i, j in enumerate(perm):
            inv[j] = i
        old_origin = tuple(origin[inv[j]] for j in range(d))
        old_sizes = tuple(sizes[inv[j]] for j in range(d))
        rows = self.inner.box_language(old_origin, old_sizes)
        old_cells = box_cells(old_sizes, old_origin)
        index = {c: i for i, c in enumerate(old_cells)}
        cols = [index[tuple(nc[inv[j]] for j in range(d))] for nc in box_cells(sizes, origin)]
        return R.unique_rows(rows[:, cols])


def strip_power(group, n):
    return power_group(group, n)
