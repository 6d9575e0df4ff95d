"""Deterministic corpus of small verified one-dimensional group CAs.

Local rules are products of group endomorphisms applied to the cells of a
neighborhood inside {-1, 0, 1}.  Domains are full shifts and kernels of
other corpus maps.  Candidates failing verification are skipped.
"""

import itertools
import random
from dataclasses import dataclass

from .errors import GcaError
from .groups import endomorphisms, preset
from .homs import GroupShiftHom, verify_hom
from .oned import sft_of, trimmed_presentation
from .projection import kernel_shift
from .shifts import GroupShiftPresentation

CORPUS_GROUPS = ("Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3")
NEIGHBORHOODS = tuple(
    tuple((i,) for i in combo)
    for r in (1, 2, 3) for combo in itertools.combinations((-1, 0, 1), r))


@dataclass
class CorpusEntry:
    name: str
    group: str
    hom: GroupShiftHom
    domain_kind: str  # "full" or "kernel"
    recipe: dict


def product_rule(group, maps):
    """x -> maps[0](x0) * maps[1](x1) * ... (maps are lists of images)."""
    def fn(vals):
        acc = group.identity
        for m, v in zip(maps, vals):
            acc = group.mul(acc, m[v])
        return acc
    return fn


def _random_map(rng, group, endos, domain):
    nb = rng.choice(NEIGHBORHOODS)
    idx = [rng.randrange(len(endos)) for _ in nb]
    fn = product_rule(group, [endos[i] for i in idx])
    hom = GroupShiftHom.from_function(domain, group, nb, fn)
    return hom, {"neighborhood": [c[0] for c in nb], "endomorphisms": idx}


def build_corpus(size=210, seed=20240607, kernel_share=0.3, max_tries=20000):
    rng = random.Random(seed)
    out = []
    per_group = {g: 0 for g in CORPUS_GROUPS}
    quota = -(-size // len(CORPUS_GROUPS))
    groups = {name: preset(name) for name in CORPUS_GROUPS}
    endos = {name: endomorphisms(g) for name, g in groups.items()}
    fulls = {name: GroupShiftPresentation.full(g, 1, name=f"FULL{name}") for name, g in groups.items()}
    seen = set()
    tries = 0
    while len(out) < size and tries < max_tries:
        tries += 1
        name = rng.choice([g for g in CORPUS_GROUPS if per_group[g] < quota] or list(CORPUS_GROUPS))
        g = groups[name]
        domain = fulls[name]
        kind = "full"
        recipe = {}
        if rng.random() < kernel_share:
            try:
                h, hrec = _random_map(rng, g, endos[name], domain)
                verify_hom(h, check_endomorphism=False)
            except GcaError:
                continue
            ker = trimmed_presentation(kernel_shift(h))
            if sft_of(ker).empty:
                continue
            domain, kind = ker, "kernel"
            recipe["kernel_of"] = hrec
        try:
            f, frec = _random_map(rng, g, endos[name], domain)
            verify_hom(f)
        except GcaError:
            continue
        recipe.update(frec)
        key = (name, kind, repr(recipe))
        if key in seen:
            continue
        seen.add(key)
        label = f"{name}-{kind}-{len(out):03d}"
        f.name = label
        out.append(CorpusEntry(label, name, f, kind, recipe))
        per_group[name] += 1
    return out
