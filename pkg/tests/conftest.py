from __future__ import annotations

import itertools

from doap.instances import GeneratorSpec, generate

# Kinds that exercise different geometry: spread-out points, degenerate
# collinear input, hull-ordered points, tight clusters, and a non-embeddable
# metric from a shortest-path closure.
ALL_KINDS = ("euclidean_uniform", "collinear", "convex_polygon", "clustered", "random_metric")


def make_corpus(count: int, n_lo: int, n_hi: int, seed: int = 0, kinds=ALL_KINDS):
    """Deterministic mixed corpus: `count` instances with n in [n_lo, n_hi]."""
    out = []
    kind_cycle = itertools.cycle(kinds)
    for idx in range(count):
        kind = next(kind_cycle)
        n = n_lo + (seed + 7 * idx) % (n_hi - n_lo + 1)
        if kind == "convex_polygon":
            spec = GeneratorSpec(kind=kind, n=n, seed=seed + idx, params={"spread": 3.0 + (idx % 5)})
        elif kind == "clustered":
            spec = GeneratorSpec(kind=kind, n=n, seed=seed + idx, params={"clusters": 1 + idx % 4})
        else:
            spec = GeneratorSpec(kind=kind, n=n, seed=seed + idx)
        out.append((spec, generate(spec)))
    return out
