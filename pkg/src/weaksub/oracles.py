"""Value-oracle contract, marginals, normalization, and brute-force estimators.

A ValueOracle is the only way algorithms see an objective: a deterministic
set-to-real map with a query counter. The estimators here (submodularity
ratio, monotonicity) are exhaustive by design and refuse inputs too large to
enumerate rather than silently sampling.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

from .matroids import Matroid, as_elements, iter_independent_sets

__all__ = [
    "ValueOracle",
    "GammaEstimate",
    "marginal",
    "normalize",
    "estimate_gamma_restricted",
    "check_monotone",
]

#: Marginals below this are treated as zero when estimating the
#: submodularity ratio; the defining inequality is vacuous (or sign-flipped)
#: for monotone functions on such pairs.
POSITIVE_TOL = 1e-12


class ValueOracle:
    """Deterministic set-function evaluation with query accounting.

    ``queries`` counts evaluate calls; the increment is lock-protected so
    concurrent read-only use keeps an exact tally. ``flags`` collects solver
    warnings (e.g. non-convergence) raised while evaluating; algorithm run
    traces surface them.
    """

    def __init__(self, fn: Callable[[frozenset[int]], float], name: str = ""):
        self._fn = fn
        self.name = name
        self.queries = 0
        self.flags: list[str] = []
        self._lock = threading.Lock()

    def evaluate(self, subset: Iterable[int]) -> float:
        with self._lock:
            self.queries += 1
        return float(self._fn(as_elements(subset)))

    __call__ = evaluate

    def __repr__(self) -> str:
        label = self.name or "anonymous"
        return f"ValueOracle({label}, queries={self.queries})"


@dataclass(frozen=True)
class GammaEstimate:
    """Brute-forced submodularity ratio with the pair attaining the minimum."""

    gamma: float
    witness_pair: tuple[frozenset[int], frozenset[int]] | None
    pairs_checked: int

    def to_json(self) -> dict:
        a, b = self.witness_pair if self.witness_pair else (None, None)
        return {
            "gamma": self.gamma,
            "witness_a": sorted(a) if a is not None else None,
            "witness_b": sorted(b) if b is not None else None,
            "pairs_checked": self.pairs_checked,
        }


def marginal(f: ValueOracle, u: int, a: Iterable[int]) -> float:
    """Marginal contribution f(a + u) - f(a); costs exactly two queries."""
    a_set = as_elements(a)
    if u in a_set:
        raise ValueError(f"element {u} is already in the set")
    return f.evaluate(a_set | {u}) - f.evaluate(a_set)


def normalize(f: ValueOracle) -> ValueOracle:
    """Oracle computing f(S) - f(empty), caching f(empty) on first use."""
    base: list[float] = []

    def shifted(s: frozenset[int]) -> float:
        if not base:
            base.append(f.evaluate(frozenset()))
        if not s:
            return 0.0
        return f.evaluate(s) - base[0]

    name = f"normalized({f.name})" if f.name else "normalized"
    return ValueOracle(shifted, name=name)


def _split_unions(
    unions: Iterable[frozenset[int]],
) -> Iterable[tuple[frozenset[int], frozenset[int]]]:
    # Every (A, B) with A | B == U, each pair produced for exactly one U:
    # B must contain U \ A and may additionally contain any subset of A.
    for u_set in unions:
        members = sorted(u_set)
        for a_size in range(len(members) + 1):
            for a_tuple in combinations(members, a_size):
                a = frozenset(a_tuple)
                forced = u_set - a
                for opt_size in range(len(a_tuple) + 1):
                    for opt in combinations(a_tuple, opt_size):
                        yield a, forced | frozenset(opt)


def estimate_gamma_restricted(
    f: ValueOracle,
    matroid: Matroid,
    max_union_size: int,
    *,
    restricted: bool = True,
    pair_cap: int = 2_000_000,
) -> GammaEstimate:
    """Exhaustive submodularity-ratio estimate over a family of set pairs.

    In restricted mode the family is all (A, B) whose union is independent
    in ``matroid`` and has at most ``max_union_size`` elements; the unrestricted
    flag drops the independence requirement (pass ``max_union_size = n`` to
    scan every pair of subsets). The ratio of a pair is
    ``sum_{u in B} f(u | A) / f(B | A)``; pairs whose denominator is not
    positive are skipped, and the minimum ratio is clamped to 1.

    Raises ValueError if the ground set exceeds 20 elements or the pair
    family exceeds ``pair_cap``; this estimator never samples.
    """
    n = matroid.n
    if n > 20:
        raise ValueError(f"ground set too large to enumerate (n={n} > 20)")

    values: dict[frozenset[int], float] = {}

    def value(s: frozenset[int]) -> float:
        if s not in values:
            values[s] = f.evaluate(s)
        return values[s]

    if restricted:
        unions = list(iter_independent_sets(matroid, max_size=max_union_size))
    else:
        elems = sorted(matroid.elements)
        unions = [
            frozenset(c)
            for size in range(min(max_union_size, len(elems)) + 1)
            for c in combinations(elems, size)
        ]

    total_pairs = sum(3 ** len(u) for u in unions)
    if total_pairs > pair_cap:
        raise ValueError(
            f"{total_pairs} candidate pairs exceed the cap of {pair_cap}"
        )

    best = 1.0
    witness: tuple[frozenset[int], frozenset[int]] | None = None
    checked = 0
    for a, b in _split_unions(unions):
        denom = value(a | b) - value(a)
        if denom <= POSITIVE_TOL:
            continue
        checked += 1
        fa = value(a)
        total = sum(value(a | {u}) - fa for u in b - a)
        ratio = total / denom
        if ratio < best:
            best = ratio
            witness = (a, b)
    return GammaEstimate(gamma=min(best, 1.0), witness_pair=witness, pairs_checked=checked)


def check_monotone(
    f: ValueOracle, n: int, tol: float = 1e-9
) -> tuple[bool, tuple[frozenset[int], frozenset[int]] | None]:
    """Exhaustively test f(A) <= f(B) + tol over all nested pairs A <= B.

    Returns (True, None) or (False, first violating pair found). Refuses
    ground sets larger than 15 elements.
    """
    if n > 15:
        raise ValueError(f"ground set too large to enumerate (n={n} > 15)")
    values = [0.0] * (1 << n)
    for mask in range(1 << n):
        values[mask] = f.evaluate(e for e in range(n) if mask >> e & 1)
    for mask in range(1 << n):
        sub = mask
        while True:
            sub = (sub - 1) & mask
            if values[sub] > values[mask] + tol:
                a = frozenset(e for e in range(n) if sub >> e & 1)
                b = frozenset(e for e in range(n) if mask >> e & 1)
                return False, (a, b)
            if sub == 0:
                break
    return True, None
