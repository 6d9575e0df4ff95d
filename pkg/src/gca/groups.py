"""Finite groups given by Cayley tables, their products and powers, subgroups.

Elements are always dense integer indices ``0..order-1``; labels are only
used for display and file formats.  Product groups (direct products and
powers) encode a tuple of components in mixed radix with the first factor
most significant, so that numeric order equals lexicographic tuple order.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NoIdentity, NoInverse, NonAssociative, NotHomomorphism, PowerTooLarge

TABLE_CAP = 4096
POWER_LIMIT = 2 ** 40


class FiniteGroup:
    """A finite group.

    Either backed by a materialized multiplication table or, for large
    product groups, by componentwise multiplication in the factors.
    """

    def __init__(self, order, table=None, *, identity=0, inverse=None, labels=None,
                 factors=None, name=None, is_abelian=None, shape=None):
        self.order = int(order)
        self.name = name or f"G{order}"
        self.factors = tuple(factors) if factors is not None else None
        # for powers G^D: the cells of D in lexicographic order
        self.shape = tuple(shape) if shape is not None else None
        if self.factors is not None:
            strides = [1] * len(self.factors)
            for i in range(len(self.factors) - 2, -1, -1):
                strides[i] = strides[i + 1] * self.factors[i + 1].order
            self.strides = tuple(strides)
        else:
            self.strides = None
        self._table = None
        if table is not None:
            self._table = np.asarray(table, dtype=np.int64)
        self.identity = int(identity)
        if inverse is not None:
            self._inv = np.asarray(inverse, dtype=np.int64)
        else:
            self._inv = None
        self._labels = tuple(labels) if labels is not None else None
        self._abelian = is_abelian
        self._table_py = None

    # -- structure -----------------------------------------------------
    @property
    def materialized(self):
        return self._table is not None

    @property
    def table(self):
        """The Cayley table as an integer array (``None`` when lazy)."""
        return self._table

    @property
    def mul_table(self):
        """Cayley table as nested tuples, for tight pure-Python loops."""
        if self._table_py is None and self._table is not None:
            self._table_py = tuple(tuple(int(x) for x in row) for row in self._table)
        return self._table_py

    @property
    def inv(self):
        if self._inv is None:
            self._inv = self.inv_array(np.arange(self.order))
        return self._inv

    @property
    def labels(self):
        if self._labels is None:
            self._labels = tuple(self.label(a) for a in range(self.order))
        return self._labels

    def label(self, a):
        if self._labels is not None:
            return self._labels[a]
        if self.factors is not None:
            comps = self.components(a)
            return "(" + ",".join(f.label(c) for f, c in zip(self.factors, comps)) + ")"
        return str(a)

    def index(self, label):
        """Element index for a label (accepts ints as well)."""
        if isinstance(label, (int, np.integer)):
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown element label {label!r} in group {self.name}") from None

    @property
    def is_abelian(self):
        if self._abelian is None:
            if self.factors is not None:
                self._abelian = all(f.is_abelian for f in self.factors)
            else:
                t = self._table
                self._abelian = bool((t == t.T).all())
        return self._abelian

    # -- arithmetic ----------------------------------------------------
    def mul(self, a, b):
        if self._table is not None:
            return int(self._table[a, b])
        ca, cb = self.components(a), self.components(b)
        return self.compose(f.mul(x, y) for f, x, y in zip(self.factors, ca, cb))

    def inverse(self, a):
        if self._inv is None and self._table is None:
            # lazy groups can be far too large for a full inverse table
            return int(self.inv_array(np.asarray(a)))
        return int(self.inv[a])

    def power(self, a, k):
        if k < 0:
            a, k = self.inverse(a), -k
        r = self.identity
        for _ in range(k):
            r = self.mul(r, a)
        return r

    def mul_arrays(self, a, b):
        """Elementwise product of two broadcastable index arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._table is not None:
            return self._table[a, b]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for f, s in zip(self.factors, self.strides):
            out += f.mul_arrays((a // s) % f.order, (b // s) % f.order) * s
        return out

    def inv_array(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self._inv is not None:
            return self._inv[a]
        if self._table is not None:
            e = self.identity
            inv = np.argmax(self._table == e, axis=1)
            self._inv = inv
            return inv[a]
        out = np.zeros(a.shape, dtype=np.int64)
        for f, s in zip(self.factors, self.strides):
            out += f.inv_array((a // s) % f.order) * s
        return out

    # -- product structure ---------------------------------------------
    def components(self, a):
        if self.factors is None:
            raise TypeError(f"group {self.name} has no product structure")
        return tuple((a // s) % f.order for f, s in zip(self.factors, self.strides))

    def compose(self, comps):
        if self.factors is None:
            raise TypeError(f"group {self.name} has no product structure")
        return int(sum(int(c) * s for c, s in zip(comps, self.strides)))

    def components_array(self, a):
        """Split an index array into a trailing axis of factor components."""
        a = np.asarray(a, dtype=np.int64)
        return np.stack([(a // s) % f.order for f, s in zip(self.factors, self.strides)], axis=-1)

    def compose_array(self, comps):
        comps = np.asarray(comps, dtype=np.int64)
        return comps @ np.asarray(self.strides, dtype=np.int64)

    def project(self, a, i):
        """Projection of element ``a`` onto factor ``i``."""
        return self.components(a)[i]

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def same_table(self, other):
        """Relabel-identity comparison: identical Cayley tables."""
        if self.order != other.order or self.identity != other.identity:
            return False
        x = np.arange(self.order)
        return bool((self.mul_arrays(x[:, None], x[None, :]) == other.mul_arrays(x[:, None], x[None, :])).all())


def _materialize(order, factors, strides):
    x = np.arange(order, dtype=np.int64)
    a, b = x[:, None], x[None, :]
    out = np.zeros((order, order), dtype=np.int64)
    for f, s in zip(factors, strides):
        out += f.mul_arrays((a // s) % f.order, (b // s) % f.order) * s
    return out


def _product_group(factors, name, shape=None, cap=TABLE_CAP):
    g = FiniteGroup(1, factors=factors, name=name, shape=shape)
    order = 1
    for f in factors:
        order *= f.order
    g.order = order
    g.identity = g.compose(f.identity for f in factors)
    if order <= cap:
        g._table = _materialize(order, g.factors, g.strides)
    return g


def verify_group(table, labels=None, name=None):
    """Validate raw Cayley data and return a :class:`FiniteGroup`.

    ``table`` may hold element indices or labels.  Without explicit labels,
    the first row is taken as the label order (identity-first convention).
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("Cayley table must be square and nonempty")
    if labels is None:
        if all(isinstance(x, (int, np.integer)) for r in rows for x in r):
            labels = [str(i) for i in range(n)]
            idx = {i: i for i in range(n)}
            lookup = lambda x: idx.get(int(x), -1)  # noqa: E731
        else:
            labels = [str(x) for x in rows[0]]
            if len(set(labels)) != n:
                raise ValueError("first row of the Cayley table repeats a label")
            pos = {lab: i for i, lab in enumerate(labels)}
            lookup = lambda x: pos.get(str(x), -1)  # noqa: E731
    else:
        labels = [str(x) for x in labels]
        pos = {lab: i for i, lab in enumerate(labels)}
        lookup = lambda x: int(x) if isinstance(x, (int, np.integer)) else pos.get(str(x), -1)  # noqa: E731
    t = np.array([[lookup(x) for x in r] for r in rows], dtype=np.int64)
    if (t < 0).any() or (t >= n).any():
        raise ValueError("Cayley table contains unknown elements")

    x = np.arange(n)
    left = t[t[:, :, None], x[None, None, :]]          # (ab)c
    right = t[x[:, None, None], t[None, :, :]]         # a(bc)
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        raise NonAssociative(labels[a], labels[b], labels[c])

    ident = None
    for e in range(n):
        if (t[e] == x).all() and (t[:, e] == x).all():
            ident = e
            break
    if ident is None:
        raise NoIdentity()
    inv = []
    for a in range(n):
        cand = np.nonzero((t[a] == ident) & (t[:, a] == ident))[0]
        if len(cand) == 0:
            raise NoInverse(labels[a])
        inv.append(int(cand[0]))
    return FiniteGroup(n, t, identity=ident, inverse=inv, labels=labels, name=name or f"G{n}")


def cyclic_group(n):
    t = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(n, t, identity=0, inverse=[(-i) % n for i in range(n)],
                       labels=[str(i) for i in range(n)], name=f"Z{n}", is_abelian=True)


def trivial_group():
    return FiniteGroup(1, [[0]], identity=0, inverse=[0], labels=["e"], name="Z1", is_abelian=True)


def _from_elements(elements, op, labels, name):
    pos = {e: i for i, e in enumerate(elements)}
    t = [[pos[op(a, b)] for b in elements] for a in elements]
    return verify_group(t, labels=labels, name=name)


def _dihedral(n, name):
    # elements r^i s^j encoded as (i, j); s r = r^-1 s
    elems = [(i, j) for j in range(2) for i in range(n)]

    def op(a, b):
        i1, j1 = a
        i2, j2 = b
        return ((i1 + (i2 if j1 == 0 else -i2)) % n, (j1 + j2) % 2)

    def lab(e):
        i, j = e
        r = "" if i == 0 else ("r" if i == 1 else f"r{i}")
        s = "s" if j else ""
        return (r + s) or "e"
    return _from_elements(elems, op, [lab(e) for e in elems], name)


def _quaternion():
    # unit quaternions as (sign, basis) with basis in 1,i,j,k
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, b) for b in "1ijk" for s in (1, -1)]

    def op(x, y):
        s, b = prod[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    labels = [("" if s > 0 else "-") + b for s, b in elems]
    return _from_elements(elems, op, labels, "Q8")


def preset(name):
    """Shipped groups: Z1..Z8 cyclic, Z2xZ2, S3, D4, Q8."""
    key = name.replace("×", "x").replace(" ", "")
    if key.startswith("Z") and key[1:].isdigit():
        n = int(key[1:])
        return trivial_group() if n == 1 else cyclic_group(n)
    if key == "Z2xZ2":
        g = direct_product(cyclic_group(2), cyclic_group(2))
        g._labels = ("00", "01", "10", "11")
        g.name = "Z2xZ2"
        return g
    if key == "S3":
        return _dihedral(3, "S3")
    if key == "D4":
        return _dihedral(4, "D4")
    if key == "Q8":
        return _quaternion()
    raise KeyError(f"unknown group preset {name!r}")


PRESETS = ("Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8")


def direct_product(g1, g2, cap=TABLE_CAP):
    """Componentwise product ``g1 x g2``; ``project(a, 0/1)`` recovers the factors."""
    return _product_group((g1, g2), f"{g1.name}x{g2.name}", cap=cap)


def power_group(g, shape, limit=POWER_LIMIT, cap=TABLE_CAP):
    """The power ``g^D`` with components ordered by the sorted cells of ``D``.

    ``shape`` is either a number of factors or a collection of cells.
    """
    if isinstance(shape, (int, np.integer)):
        cells = tuple((i,) for i in range(int(shape)))
    else:
        cells = tuple(sorted(tuple(c) for c in shape))
    k = len(cells)
    if k == 0:
        raise ValueError("power over an empty shape")
    order = g.order ** k
    if order > limit:
        raise PowerTooLarge(order, limit)
    key = (id(g), cells, cap)
    cached = _POWERS.get(key)
    if cached is not None and cached.factors[0] is g:
        return cached
    out = _product_group((g,) * k, f"{g.name}^{k}", shape=cells, cap=cap)
    _POWERS[key] = out
    return out


_POWERS = {}


def is_power_of(group, base):
    return group.factors is not None and all(f is base for f in group.factors)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple

    @property
    def order(self):
        return len(self.members)

    def __contains__(self, a):
        return a in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cached_set", s)
        return s

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent.order == other.parent.order and self.members == other.members

    def __hash__(self):
        return hash((self.parent.order, self.members))

    def labels(self):
        return [self.parent.label(a) for a in self.members]


def make_subgroup(parent, members):
    if isinstance(members, np.ndarray):
        return Subgroup(parent, tuple(np.unique(members.astype(np.int64)).tolist()))
    return Subgroup(parent, tuple(sorted(int(a) for a in set(members))))


def subgroup_closure(g, seed):
    """Smallest subgroup of ``g`` containing ``seed``."""
    elems = {g.identity}
    gens = [int(a) for a in set(seed) if a != g.identity]
    frontier = [g.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = g.mul(a, s)
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    return make_subgroup(g, elems)


def full_subgroup(g):
    return Subgroup(g, tuple(range(g.order)))


def trivial_subgroup(g):
    return Subgroup(g, (g.identity,))


def _as_map(hom):
    if callable(hom):
        return hom
    if isinstance(hom, dict):
        return hom.__getitem__
    seq = list(hom)
    return seq.__getitem__


def check_homomorphism(domain_members, parent, hom, target):
    """Exhaustive check; raises :class:`NotHomomorphism` with a witness pair."""
    f = _as_map(hom)
    members = list(domain_members)
    for a, b in itertools.product(members, repeat=2):
        if f(parent.mul(a, b)) != target.mul(f(a), f(b)):
            raise NotHomomorphism(parent.label(a), parent.label(b))


def subgroup_image(h, hom, target):
    """Image of the subgroup ``h`` under an elementwise homomorphism into ``target``."""
    check_homomorphism(h.members, h.parent, hom, target)
    f = _as_map(hom)
    return make_subgroup(target, (f(a) for a in h.members))


def endomorphisms(g):
    """All endomorphisms of a small group as lists (brute force over generator images)."""
    gens = _small_generating_set(g)
    found = []
    for imgs in itertools.product(range(g.order), repeat=len(gens)):
        m = _extend_hom(g, gens, imgs)
        if m is not None:
            found.append(m)
    return found


def _small_generating_set(g):
    gens = []
    cur = trivial_subgroup(g)
    for a in range(g.order):
        if a not in cur:
            gens.append(a)
            cur = subgroup_closure(g, gens)
            if cur.order == g.order:
                break
    return gens


def _extend_hom(g, gens, imgs):
    # breadth-first spread of the images of words in the generators
    m = {g.identity: g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s, t in zip(gens, imgs):
                b = g.mul(a, s)
                v = g.mul(m[a], t)
                if b in m:
                    if m[b] != v:
                        return None
                else:
                    m[b] = v
                    nxt.append(b)
        frontier = nxt
    table = [m[a] for a in range(g.order)]
    for a in range(g.order):
        for b in range(g.order):
            if table[g.mul(a, b)] != g.mul(table[a], table[b]):
                return None
    return table
