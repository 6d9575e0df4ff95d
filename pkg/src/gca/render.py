"""Space-time pictures of one-dimensional orbits.

Row t holds F^t(c0) over one spatial period.  The identity element is drawn
white; other elements get fixed gray levels (text: a fixed glyph list).
"""

import numpy as np

from .errors import ConfigNotInShift, NotOneDimensional
from .shifts import torus_member

GLYPHS = ".#ox+*=%@&abcdefghijklmnopqrstuvwxyz"


def orbit_rows(f, c0, steps):
    """Array of shape (steps, period) holding the orbit of a periodic configuration."""
    if f.dim != 1 or c0.dim != 1:
        raise NotOneDimensional("orbit rendering needs a one-dimensional automaton")
    if not torus_member(c0, f.domain):
        raise ConfigNotInShift("the initial configuration is not in the domain")
    rows = []
    cur = c0
    for _ in range(steps):
        rows.append(cur.values)
        cur = f.apply_config(cur)
    return np.asarray(rows, dtype=np.int64).reshape(steps, c0.periods[0])


def _rank(group):
    """Palette position of each element: identity first, the rest by index."""
    order = [group.identity] + [a for a in range(group.order) if a != group.identity]
    pos = np.empty(group.order, dtype=np.int64)
    pos[order] = np.arange(group.order)
    return pos


def gray_levels(group):
    n = group.order
    pos = _rank(group)
    if n == 1:
        return np.full(1, 255, dtype=np.int64)
    return 255 - (pos * 255) // (n - 1)


def render_text(rows, group):
    pos = _rank(group)
    glyphs = GLYPHS if group.order <= len(GLYPHS) else None
    out = []
    for r in rows:
        if glyphs:
            out.append("".join(glyphs[pos[v]] for v in r))
        else:
            out.append(" ".join(str(int(pos[v])) for v in r))
    return "\n".join(out) + "\n"


def render_pgm(rows, group):
    """Plain (P2) portable graymap."""
    levels = gray_levels(group)
    h, w = rows.shape
    body = "\n".join(" ".join(str(int(levels[v])) for v in r) for r in rows)
    return f"P2\n{w} {h}\n255\n{body}\n"


def render_orbit(f, c0, steps, fmt="text"):
    rows = orbit_rows(f, c0, steps)
    if fmt == "text":
        return render_text(rows, f.group)
    if fmt == "pgm":
        return render_pgm(rows, f.group)
    raise ValueError(f"unknown format {fmt!r}")
