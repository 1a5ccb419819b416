"""Random small representations for exhaustive cross-checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .model import Arrow, Quiver, Representation
from .oracle import gaussian_binomial


def random_instance(
    rng: random.Random,
    max_total_dim: int = 8,
    max_arrows: int = 3,
    primes: tuple[int, ...] = (2, 3),
    max_candidates: int = 60_000,
    nontrivial: bool = True,
):
    """A random (representation, dimension vector) pair.

    Loops and parallel arrows are allowed.  Instances whose ambient
    product of Grassmannians has more than ``max_candidates`` points over
    the largest prime are redrawn; with ``nontrivial`` so are instances
    whose ambient space is a point or where no arrow can carry a relation.
    """
    q = max(primes)
    while True:
        n_vertices = rng.randint(1, 3)
        total = rng.randint(n_vertices, max_total_dim)
        cuts = sorted(rng.sample(range(1, total), n_vertices - 1)) if n_vertices > 1 else []
        dims = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        vertices = tuple(f"v{k}" for k in range(n_vertices))
        e = {v: rng.randint(0, d) for v, d in zip(vertices, dims)}
        size = 1
        for v, d in zip(vertices, dims):
            size *= gaussian_binomial(d, e[v], q)
        if size > max_candidates or (nontrivial and size == 1):
            continue
        arrows = []
        matrices = {}
        for k in range(rng.randint(1, max_arrows)):
            s, t = rng.choice(vertices), rng.choice(vertices)
            name = "abc"[k] if k < 3 else f"x{k}"
            arrows.append(Arrow(name, s, t))
            rows, cols = dims[vertices.index(t)], dims[vertices.index(s)]
            density = rng.choice((0.3, 0.5, 0.8))
            matrices[name] = [
                [Fraction(rng.randint(-2, 2)) if rng.random() < density else Fraction(0) for _ in range(cols)]
                for _ in range(rows)
            ]
        if nontrivial and not any(e[a.source] >= 1 and e[a.target] < dims[vertices.index(a.target)] for a in arrows):
            continue
        rep = Representation(
            Quiver(vertices, tuple(arrows)), dict(zip(vertices, dims)), matrices, name="random"
        )
        return rep, e
