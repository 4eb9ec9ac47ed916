"""Seeded random instances for cross-checking solvers."""

from __future__ import annotations

import random

from .nets import Activation, Instance, LabeledPoint


def random_instance(rng: random.Random, dims=(1, 2), sizes=range(2, 6), ks=(1, 2),
                    values=range(-2, 3), activation=Activation.RELU) -> Instance:
    """Integer points and labels drawn from ``values``; coordinates are distinct."""
    d = rng.choice(list(dims))
    n = rng.choice(list(sizes))
    k = rng.choice(list(ks))
    vals = list(values)
    if n > len(vals) ** d:
        raise ValueError(f"cannot draw {n} distinct points from {len(vals)}**{d} positions")
    xs = set()
    while len(xs) < n:
        xs.add(tuple(rng.choice(vals) for _ in range(d)))
    pts = [LabeledPoint(x, rng.choice(vals)) for x in sorted(xs)]
    rng.shuffle(pts)
    return Instance(d, pts, k, activation=activation)


def random_corpus(seed: int, count: int, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_instance(rng, **kwargs) for _ in range(count)]
