"""Shared generators and independent reference oracles for the test suite.

Everything here is deliberately naive (unpruned enumeration, cofactor
expansion, explicit pseudo-inverses, exact branching recursions) so that it
stays independent of the library code paths it is used to check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from weaksub.matroids import (
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    max_weight_base,
    random_base,
)


def random_matroid(rng, max_n: int = 10, variant: str | None = None) -> Matroid:
    """Random small matroid of a uniformly chosen (or given) variant."""
    if variant is None:
        variant = ("uniform", "partition", "graphic", "contraction")[
            int(rng.integers(4))
        ]
    if variant == "uniform":
        n = int(rng.integers(1, max_n + 1))
        return UniformMatroid(n, int(rng.integers(0, n + 1)))
    if variant == "partition":
        n = int(rng.integers(2, max_n + 1))
        num_blocks = int(rng.integers(1, min(4, n) + 1))
        cuts = sorted(rng.choice(range(1, n), size=num_blocks - 1, replace=False)) if num_blocks > 1 else []
        bounds = [0, *cuts, n]
        blocks = tuple(
            frozenset(range(bounds[i], bounds[i + 1])) for i in range(num_blocks)
        )
        capacities = tuple(int(rng.integers(0, len(b) + 1)) for b in blocks)
        return PartitionMatroid(blocks, capacities)
    if variant == "graphic":
        num_vertices = int(rng.integers(2, 7))
        num_edges = int(rng.integers(1, max_n + 1))
        edges = []
        for _ in range(num_edges):
            u = int(rng.integers(num_vertices))
            v = int(rng.integers(num_vertices))
            edges.append((u, v))  # self-loops and parallel edges on purpose
        return GraphicMatroid(num_vertices, tuple(edges))
    base = random_matroid(rng, max_n=max_n, variant="graphic" if rng.random() < 0.5 else "uniform")
    if base.rank() == 0:
        return base
    contracted = sorted(random_base(base, rng))[: int(rng.integers(1, base.rank() + 1))]
    return base.contract(contracted)


def all_subsets(elements) -> list[frozenset[int]]:
    elems = sorted(elements)
    return [
        frozenset(c) for size in range(len(elems) + 1) for c in combinations(elems, size)
    ]


def independent_sets_unpruned(matroid: Matroid) -> list[frozenset[int]]:
    """All independent sets by filtering the full power set (no pruning)."""
    return [s for s in all_subsets(matroid.elements) if matroid.is_independent(s)]


def all_bases(matroid: Matroid) -> list[frozenset[int]]:
    k = matroid.rank()
    return [s for s in independent_sets_unpruned(matroid) if len(s) == k]


def exact_random_base_distribution(matroid: Matroid) -> dict[frozenset[int], Fraction]:
    """Exact output law of the sequential uniform-feasible-element process."""
    dist: dict[frozenset[int], Fraction] = {}

    def recurse(current: frozenset[int], pool: list[int], prob: Fraction) -> None:
        feasible = [e for e in pool if matroid.is_independent(current | {e})]
        if not feasible:
            dist[current] = dist.get(current, Fraction(0)) + prob
            return
        share = prob / len(feasible)
        for e in feasible:
            recurse(current | {e}, [x for x in feasible if x != e], share)

    recurse(frozenset(), sorted(matroid.elements), Fraction(1))
    return dist


def exact_rrg_expectation_modular(weights, matroid: Matroid) -> float:
    """Exact E[f(final set)] of residual random greedy for a modular objective.

    For modular f the per-round marginals never change, so each round's
    candidate base is deterministic and the run is a finite branching
    process that can be enumerated outright.
    """
    w = {e: float(weights[e]) for e in matroid.elements}
    k = matroid.rank()
    total = 0.0

    def recurse(current: frozenset[int], prob: float) -> None:
        nonlocal total
        if len(current) == k:
            total += prob * sum(w[e] for e in current)
            return
        residual = matroid.contract(current) if current else matroid
        candidates = sorted(max_weight_base(residual, w))
        share = prob / len(candidates)
        for u in candidates:
            recurse(current | {u}, share)

    recurse(frozenset(), 1.0)
    return total


def lstsq_value_by_pinv(design: np.ndarray, response: np.ndarray, subset) -> float:
    """Normalized regression log-likelihood via explicit normal equations."""
    cols = sorted(subset)
    if not cols:
        return 0.0
    sub = design[:, cols]
    beta = np.linalg.pinv(sub.T @ sub) @ (sub.T @ response)
    resid = response - sub @ beta
    return float(response @ response - resid @ resid)


def det_by_cofactor(matrix: np.ndarray) -> float:
    """Determinant by first-row cofactor expansion (exponential, tiny inputs)."""
    m = np.asarray(matrix, dtype=float)
    size = m.shape[0]
    if size == 0:
        return 1.0
    if size == 1:
        return float(m[0, 0])
    total = 0.0
    for j in range(size):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += ((-1.0) ** j) * m[0, j] * det_by_cofactor(minor)
    return total
