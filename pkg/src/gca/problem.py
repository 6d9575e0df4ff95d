"""JSON problem files: groups, shifts, maps, configurations and patterns.

Unknown keys are rejected.  Element values may be written as labels
(strings) or indices (integers).

Example::

    {"groups": {"Z2": {"preset": "Z2"}},
     "shifts": {"FULL": {"group": "Z2", "dim": 1, "forbidden": []}},
     "maps": {"XOR": {"domain": "FULL", "neighborhood": [[0], [1]], "rule": "x0*x1"}}}
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GcaError, GroupError, NotEndomorphism, NotGroupHom, ParseError, ValidationError
from .groups import direct_product, power_group, preset, verify_group
from .homs import GroupShiftHom, compile_expression, verify_hom
from .language import Budget
from .shifts import GroupShiftPresentation, Pattern, PeriodicConfiguration

TOP_KEYS = {"groups", "shifts", "maps", "configs", "patterns", "defaults"}
GROUP_KEYS = {"preset", "cayley", "labels", "product", "power"}
SHIFT_KEYS = {"group", "dim", "forbidden", "window", "kernel_of", "members"}
MAP_KEYS = {"domain", "target", "neighborhood", "rule", "table"}
CONFIG_KEYS = {"group", "shift", "periods", "rows"}
PATTERN_KEYS = {"group", "cells", "values"}
WINDOW_KEYS = {"sizes", "allowed"}
DEFAULT_KEYS = {"budget"}
BUDGET_KEYS = {"max_period", "max_box", "max_steps"}


@dataclass
class ProblemFile:
    groups: dict = field(default_factory=dict)
    shifts: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    configs: dict = field(default_factory=dict)
    patterns: dict = field(default_factory=dict)
    budget: Budget = field(default_factory=Budget)
    source: object = None


def _strict(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise ValidationError(f"{where}: unknown key(s) {sorted(extra)}", witness=sorted(extra))


def _ref(table, name, kind, where):
    if name not in table:
        raise ValidationError(f"{where}: unresolved {kind} reference {name!r}", witness=name)
    return table[name]


def _element(group, v, where):
    if isinstance(v, bool):
        raise ValidationError(f"{where}: boolean is not a group element")
    if isinstance(v, int):
        if not 0 <= v < group.order:
            raise ValidationError(f"{where}: element index {v} out of range", witness=v)
        return v
    try:
        return group.index(str(v))
    except (KeyError, ValueError, GroupError):
        raise ValidationError(f"{where}: unknown element {v!r} of {group.name}", witness=v) from None


def parse_text(text, source=None):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return build(raw, source)


def parse_problem(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_text(text, source=str(path))


def build(raw, source=None):
    _strict(raw, TOP_KEYS, "problem")
    pf = ProblemFile(source=source)
    for name, entry in raw.get("groups", {}).items():
        pf.groups[name] = _build_group(name, entry, pf)
    if "defaults" in raw:
        _strict(raw["defaults"], DEFAULT_KEYS, "defaults")
        b = raw["defaults"].get("budget", {})
        _strict(b, BUDGET_KEYS, "defaults.budget")
        try:
            pf.budget = Budget(**b)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"defaults.budget: {exc}") from None
    shifts = raw.get("shifts", {})
    maps = raw.get("maps", {})
    # shifts may depend on maps (kernels) and maps on shifts: resolve lazily
    building = set()

    def get_shift(name, where):
        if name in pf.shifts:
            return pf.shifts[name]
        entry = _ref(shifts, name, "shift", where)
        if ("shift", name) in building:
            raise ValidationError(f"{where}: cyclic reference through shift {name!r}", witness=name)
        building.add(("shift", name))
        pf.shifts[name] = _build_shift(name, entry, pf, get_map)
        return pf.shifts[name]

    def get_map(name, where):
        if name in pf.maps:
            return pf.maps[name]
        entry = _ref(maps, name, "map", where)
        if ("map", name) in building:
            raise ValidationError(f"{where}: cyclic reference through map {name!r}", witness=name)
        building.add(("map", name))
        pf.maps[name] = _build_map(name, entry, pf, get_shift)
        return pf.maps[name]

    for name in shifts:
        get_shift(name, f"shifts.{name}")
    for name in maps:
        get_map(name, f"maps.{name}")
    for name, entry in raw.get("configs", {}).items():
        where = f"configs.{name}"
        _strict(entry, CONFIG_KEYS, where)
        if "shift" in entry:
            g = _ref(pf.shifts, entry["shift"], "shift", where).group
        else:
            g = _ref(pf.groups, entry.get("group"), "group", where)
        vals = [_element(g, v, where) for v in _flatten(entry.get("rows", []))]
        try:
            pf.configs[name] = PeriodicConfiguration(g, tuple(entry.get("periods", ())), vals)
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from None
    for name, entry in raw.get("patterns", {}).items():
        pf.patterns[name] = pattern_from_json(pf, entry, f"patterns.{name}")
    return pf


def _flatten(rows):
    for r in rows:
        if isinstance(r, list):
            yield from _flatten(r)
        else:
            yield r


def pattern_from_json(pf, entry, where="pattern"):
    _strict(entry, PATTERN_KEYS, where)
    g = _ref(pf.groups, entry.get("group"), "group", where)
    cells = [tuple(int(a) for a in c) for c in entry.get("cells", [])]
    vals = [_element(g, v, where) for v in entry.get("values", [])]
    try:
        return Pattern(g, tuple(cells), tuple(vals))
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _build_group(name, entry, pf):
    where = f"groups.{name}"
    _strict(entry, GROUP_KEYS, where)
    try:
        if "preset" in entry:
            return preset(entry["preset"])
        if "product" in entry:
            parts = [_ref(pf.groups, p, "group", where) for p in entry["product"]]
            out = parts[0]
            for p in parts[1:]:
                out = direct_product(out, p)
            return out
        if "power" in entry:
            pw = entry["power"]
            _strict(pw, {"of", "cells"}, f"{where}.power")
            base = _ref(pf.groups, pw.get("of"), "group", where)
            cells = pw.get("cells", [])
            if isinstance(cells, int):
                return power_group(base, cells)
            return power_group(base, [tuple(int(a) for a in c) for c in cells])
        if "cayley" in entry:
            return verify_group(entry["cayley"], entry.get("labels"), name=name)
    except GroupError as exc:
        raise ValidationError(f"{where}: {exc}", witness=str(exc)) from None
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}: needs one of preset, product or cayley")


def _build_shift(name, entry, pf, get_map):
    where = f"shifts.{name}"
    _strict(entry, SHIFT_KEYS, where)
    if "kernel_of" in entry:
        from .projection import kernel_shift
        from .oned import trimmed_presentation
        f = get_map(entry["kernel_of"], where)
        ker = kernel_shift(f)
        if ker.dim == 1:
            ker = trimmed_presentation(ker)
        ker.name = name
        return ker
    g = _ref(pf.groups, entry.get("group"), "group", where)
    dim = entry.get("dim")
    if not isinstance(dim, int) or dim < 0:
        raise ValidationError(f"{where}: dim must be a nonnegative integer")
    if dim == 0:
        members = [_element(g, v, where) for v in entry.get("members", range(g.order))]
        return GroupShiftPresentation(g, 0, members=members, name=name)
    if "window" in entry:
        w = entry["window"]
        _strict(w, WINDOW_KEYS, f"{where}.window")
        sizes = tuple(int(s) for s in w["sizes"])
        ncell = int(np.prod(sizes))
        rows = [[_element(g, v, where) for v in r] for r in w["allowed"]]
        if any(len(r) != ncell for r in rows):
            raise ValidationError(f"{where}: window rows must have {ncell} entries")
        return GroupShiftPresentation.from_window(g, sizes, np.asarray(rows, dtype=np.int64).reshape(-1, ncell),
                                                  name=name)
    pats = []
    for i, p in enumerate(entry.get("forbidden", [])):
        cells = [tuple(int(a) for a in c) for c in p["cells"]]
        if any(len(c) != dim for c in cells):
            raise ValidationError(f"{where}.forbidden[{i}]: cell dimension differs from {dim}")
        vals = [_element(g, v, where) for v in p["values"]]
        pats.append(Pattern(g, tuple(cells), tuple(vals)))
    return GroupShiftPresentation(g, dim, forbidden=pats, name=name)


def _build_map(name, entry, pf, get_shift):
    where = f"maps.{name}"
    _strict(entry, MAP_KEYS, where)
    x = get_shift(entry.get("domain"), where)
    target = _ref(pf.groups, entry["target"], "group", where) if "target" in entry else x.group
    nb = [tuple(int(a) for a in c) for c in entry.get("neighborhood", [])]
    if not nb or any(len(c) != x.dim for c in nb):
        raise ValidationError(f"{where}: neighborhood cells must match the domain dimension")
    order = sorted(range(len(nb)), key=lambda i: nb[i])
    try:
        if "rule" in entry:
            fn = compile_expression(entry["rule"], x.group, target, len(nb))

            def sorted_fn(vals, fn=fn):
                # expression variables follow the neighborhood as written
                orig = [0] * len(vals)
                for pos, i in enumerate(order):
                    orig[i] = vals[pos]
                return fn(orig)
            hom = GroupShiftHom.from_function(x, target, nb, sorted_fn, name=name)
        elif "table" in entry:
            q = x.group.order
            table = np.full(q ** len(nb), -1, dtype=np.int64)
            for row in entry["table"]:
                ins = [_element(x.group, v, where) for v in row["in"]]
                code = 0
                for i in order:
                    code = code * q + ins[i]
                table[code] = _element(target, row["out"], where)
            hom = GroupShiftHom(x, target, nb, table, name=name)
        else:
            raise ValidationError(f"{where}: needs a rule expression or a table")
        return verify_hom(hom)
    except NotGroupHom as exc:
        raise ValidationError(f"{where}: NotGroupHom: {exc}", witness=list(exc.pair)) from None
    except NotEndomorphism as exc:
        raise ValidationError(f"{where}: NotEndomorphism: {exc}", witness=str(exc)) from None
    except ValidationError:
        raise
    except GcaError as exc:
        raise ValidationError(f"{where}: {exc}") from None


# -- serialization ------------------------------------------------------------------

EXPLICIT_LIMIT = 4096


def shift_to_json(x, group_name):
    """Presentation as a problem-file shift entry (forbidden list when small)."""
    if x.dim == 0:
        return {"group": group_name, "dim": 0, "members": [x.group.label(v) for v in x.members]}
    sizes, allowed = x.window
    ncell = int(np.prod(sizes))
    if x.has_explicit_forbidden or x.group.order ** ncell - len(allowed) <= EXPLICIT_LIMIT:
        return {"group": group_name, "dim": x.dim,
                "forbidden": [{"cells": [list(c) for c in p.cells], "values": p.labels()}
                              for p in x.forbidden]}
    return {"group": group_name, "dim": x.dim,
            "window": {"sizes": list(sizes), "allowed": [[x.group.label(int(v)) for v in r] for r in allowed]}}


def pattern_to_json(p, group_name):
    return {"group": group_name, "cells": [list(c) for c in p.cells], "values": p.labels()}


def config_to_json(c, group_name):
    return {"group": group_name, "periods": list(c.periods), "rows": [c.group.label(v) for v in c.values]}


class GroupCatalog:
    """Names groups for output.  Powers are emitted by reference to their base
    (their labels are derived from it); everything else as a labelled table."""

    def __init__(self, known=None):
        self.names = {}
        self.entries = {}
        for name, g in (known or {}).items():
            self.names.setdefault(id(g), name)

    def name(self, g):
        key = id(g)
        name = self.names.get(key)
        if name is not None and name in self.entries:
            return name
        if g.shape is not None and g._labels is None and all(f is g.factors[0] for f in g.factors):
            entry = {"power": {"of": self.name(g.factors[0]), "cells": [list(c) for c in g.shape]}}
        else:
            entry = group_to_json(g)
        if name is None:
            name = g.name
            while name in self.entries:
                name += "'"
            self.names[key] = name
        self.entries[name] = entry
        return name


def group_to_json(g):
    return {"cayley": [[g.label(int(v)) for v in r] for r in g.mul_table], "labels": list(g.labels)}
