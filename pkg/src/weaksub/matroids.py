"""Matroid oracles: independence, rank, contraction, bases, and base exchange.

Four concrete variants are provided (uniform, partition, graphic, and lazy
contraction of any of them), all answering independence queries through a
common interface. Derived operations (rank of a subset, max-weight base,
random base, exchange bijection between bases) are implemented once on top
of the independence oracle.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Matroid",
    "UniformMatroid",
    "PartitionMatroid",
    "GraphicMatroid",
    "ContractedMatroid",
    "CountingMatroid",
    "ExchangeMap",
    "as_elements",
    "max_weight_base",
    "random_base",
    "exchange_map",
    "iter_independent_sets",
    "matroid_from_json",
]


def as_elements(subset: Iterable[int]) -> frozenset[int]:
    """Normalize any iterable of element ids to a frozenset of ints."""
    return frozenset(int(e) for e in subset)


class Matroid(ABC):
    """A ground set of integer element ids plus an independence oracle.

    Instances are immutable after construction and safe to share across
    threads. ``is_independent`` is the oracle every derived operation
    reduces to.
    """

    @property
    @abstractmethod
    def n(self) -> int:
        """Number of elements in the ground set."""

    @property
    @abstractmethod
    def elements(self) -> Sequence[int]:
        """Ground-set element ids in ascending order."""

    @abstractmethod
    def _independent(self, s: frozenset[int]) -> bool:
        """Independence test on a validated subset."""

    @abstractmethod
    def rank(self) -> int:
        """Size of every base, computed structurally (no oracle queries)."""

    def _check_ids(self, s: frozenset[int]) -> None:
        if s and not s <= self._id_universe():
            bad = sorted(s - self._id_universe())
            raise ValueError(f"element ids out of range: {bad}")

    def _id_universe(self) -> frozenset[int]:
        return frozenset(self.elements)

    def is_independent(self, subset: Iterable[int]) -> bool:
        s = as_elements(subset)
        self._check_ids(s)
        return self._independent(s)

    def rank_of(self, subset: Iterable[int]) -> int:
        """Size of a maximal independent subset of ``subset`` (greedy)."""
        s = as_elements(subset)
        self._check_ids(s)
        chosen: set[int] = set()
        for e in sorted(s):
            if self._independent(frozenset(chosen | {e})):
                chosen.add(e)
        return len(chosen)

    def contract(self, subset: Iterable[int]) -> "Matroid":
        """Matroid on the remaining elements whose bases complete ``subset``.

        Raises ValueError if ``subset`` is not independent.
        """
        s = as_elements(subset)
        if not self.is_independent(s):
            raise ValueError("cannot contract a dependent set")
        if isinstance(self, ContractedMatroid):
            return ContractedMatroid(self.base, self.contracted | s)
        return ContractedMatroid(self, s)

    def to_json(self) -> dict:
        raise ValueError(f"{type(self).__name__} is runtime-only and has no JSON form")


@dataclass(frozen=True)
class UniformMatroid(Matroid):
    """Independent sets are all subsets of size at most ``k``."""

    size: int
    k: int

    def __post_init__(self) -> None:
        if self.size < 0 or self.k < 0:
            raise ValueError("ground-set size and rank bound must be non-negative")

    @property
    def n(self) -> int:
        return self.size

    @property
    def elements(self) -> Sequence[int]:
        return range(self.size)

    def _id_universe(self) -> frozenset[int]:
        return frozenset(range(self.size))

    def _independent(self, s: frozenset[int]) -> bool:
        return len(s) <= self.k

    def rank(self) -> int:
        return min(self.size, self.k)

    def to_json(self) -> dict:
        return {"variant": "uniform", "n": self.size, "k": self.k}


@dataclass(frozen=True)
class PartitionMatroid(Matroid):
    """Ground set split into disjoint blocks, each with a capacity."""

    blocks: tuple[frozenset[int], ...]
    capacities: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(as_elements(b) for b in self.blocks))
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))
        if len(self.blocks) != len(self.capacities):
            raise ValueError("one capacity per block is required")
        if any(c < 0 for c in self.capacities):
            raise ValueError("capacities must be non-negative")
        total = sum(len(b) for b in self.blocks)
        union = frozenset().union(*self.blocks) if self.blocks else frozenset()
        if len(union) != total:
            raise ValueError("blocks must be pairwise disjoint")
        if union != frozenset(range(total)):
            raise ValueError("blocks must cover a contiguous ground set 0..n-1")

    @classmethod
    def from_intervals(cls, n: int, length: int, capacity: int = 1) -> "PartitionMatroid":
        """Consecutive blocks of ``length`` elements, each with one capacity."""
        if length < 1:
            raise ValueError("interval length must be positive")
        blocks = [frozenset(range(lo, min(lo + length, n))) for lo in range(0, n, length)]
        return cls(tuple(blocks), tuple(capacity for _ in blocks))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def elements(self) -> Sequence[int]:
        return range(self.n)

    @cached_property
    def _block_of(self) -> dict[int, int]:
        return {e: i for i, b in enumerate(self.blocks) for e in b}

    def _id_universe(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def _independent(self, s: frozenset[int]) -> bool:
        used = [0] * len(self.blocks)
        for e in s:
            i = self._block_of[e]
            used[i] += 1
            if used[i] > self.capacities[i]:
                return False
        return True

    def rank(self) -> int:
        return sum(min(c, len(b)) for c, b in zip(self.capacities, self.blocks))

    def to_json(self) -> dict:
        return {
            "variant": "partition",
            "blocks": [sorted(b) for b in self.blocks],
            "capacities": list(self.capacities),
        }


@dataclass(frozen=True)
class GraphicMatroid(Matroid):
    """Elements are edges of a multigraph; independent sets are forests.

    Parallel edges are allowed; a self-loop is dependent as a singleton.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "edges", tuple((int(u), int(v)) for u, v in self.edges)
        )
        if self.num_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) has endpoints outside the vertex range")

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def elements(self) -> Sequence[int]:
        return range(len(self.edges))

    def _id_universe(self) -> frozenset[int]:
        return frozenset(range(len(self.edges)))

    def _independent(self, s: frozenset[int]) -> bool:
        # Fresh union-find with path compression per query; stateless and
        # O(|s| alpha), cheap at the scales this library targets.
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = x
            while parent.setdefault(root, root) != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for e in s:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[rv] = ru
        return True

    @cached_property
    def _structural_rank(self) -> int:
        parent = list(range(self.num_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        components = self.num_vertices
        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
                components -= 1
        return self.num_vertices - components

    def rank(self) -> int:
        return self._structural_rank

    def to_json(self) -> dict:
        return {
            "variant": "graphic",
            "num_vertices": self.num_vertices,
            "edges": [list(e) for e in self.edges],
        }


class ContractedMatroid(Matroid):
    """Lazy contraction: queries delegate to the base matroid.

    ``contracted`` must be independent in ``base``; this is verified with a
    single base-oracle query at construction. A subset that intersects the
    contracted set is reported dependent rather than rejected.
    """

    def __init__(self, base: Matroid, contracted: Iterable[int]):
        self.base = base
        self.contracted = as_elements(contracted)
        base._check_ids(self.contracted)
        if not base._independent(self.contracted):
            raise ValueError("contracted set must be independent in the base matroid")
        self._elements = tuple(sorted(frozenset(base.elements) - self.contracted))

    @property
    def n(self) -> int:
        return len(self._elements)

    @property
    def elements(self) -> Sequence[int]:
        return self._elements

    def _check_ids(self, s: frozenset[int]) -> None:
        # Ids inside the contracted set are legal queries (answered False).
        self.base._check_ids(s)

    def _id_universe(self) -> frozenset[int]:
        return frozenset(self._elements)

    def _independent(self, s: frozenset[int]) -> bool:
        if s & self.contracted:
            return False
        return self.base.is_independent(s | self.contracted)

    def rank(self) -> int:
        return self.base.rank() - len(self.contracted)

    def __repr__(self) -> str:
        return f"ContractedMatroid({self.base!r}, {sorted(self.contracted)})"


class CountingMatroid(Matroid):
    """Wrapper that counts every independence query reaching the base oracle.

    Contractions of a counting wrapper keep routing their queries through it,
    so one wrapper audits a whole run.
    """

    def __init__(self, inner: Matroid):
        self.inner = inner
        self.queries = 0

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def elements(self) -> Sequence[int]:
        return self.inner.elements

    def _check_ids(self, s: frozenset[int]) -> None:
        self.inner._check_ids(s)

    def _id_universe(self) -> frozenset[int]:
        return self.inner._id_universe()

    def _independent(self, s: frozenset[int]) -> bool:
        self.queries += 1
        return self.inner._independent(s)

    def rank(self) -> int:
        return self.inner.rank()


@dataclass(frozen=True)
class ExchangeMap:
    """Bijection from A-minus-B onto B-minus-A between two bases A and B.

    For every pair ``(u, v)`` the set ``(B + u) - v`` is independent.
    """

    pairs: tuple[tuple[int, int], ...]

    @cached_property
    def _mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def __getitem__(self, u: int) -> int:
        return self._mapping[u]

    def __contains__(self, u: int) -> bool:
        return u in self._mapping

    def __len__(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def max_weight_base(matroid: Matroid, weights: Mapping[int, float]) -> frozenset[int]:
    """Base of ``matroid`` maximizing total weight (matroid greedy, exact).

    Elements are scanned in non-increasing weight order, ties broken by
    ascending id. Negative-weight elements are still added when needed to
    complete a base: the result is always a base, not merely a max-weight
    independent set.
    """
    elems = list(matroid.elements)
    missing = [e for e in elems if e not in weights]
    if missing:
        raise ValueError(f"weights missing for elements: {missing[:5]}")
    target = matroid.rank()
    chosen: set[int] = set()
    for e in sorted(elems, key=lambda e: (-float(weights[e]), e)):
        if len(chosen) == target:
            break
        if matroid._independent(frozenset(chosen | {e})):
            chosen.add(e)
    if len(chosen) != target:
        raise RuntimeError("greedy failed to complete a base; oracle is inconsistent")
    return frozenset(chosen)


def _random_base_steps(
    matroid: Matroid, rng
) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (feasible candidates, chosen element) per step of the random fill.

    Each step picks uniformly among the elements whose addition keeps the
    current set independent; an element that becomes infeasible stays
    infeasible and is dropped from the pool.
    """
    current: set[int] = set()
    pool = sorted(matroid.elements)
    while True:
        feasible = [e for e in pool if matroid._independent(frozenset(current | {e}))]
        if not feasible:
            return
        idx = min(int(rng.random() * len(feasible)), len(feasible) - 1)
        u = feasible[idx]
        current.add(u)
        pool = [e for e in feasible if e != u]
        yield tuple(feasible), u


def random_base(matroid: Matroid, rng) -> frozenset[int]:
    """Sample a base by repeatedly adding a uniformly random feasible element.

    This is the sequential process used as the Random baseline. It is
    uniform over bases only in symmetric cases (for example uniform
    matroids); for general matroids the distribution is merely supported on
    all bases.
    """
    return frozenset(u for _, u in _random_base_steps(matroid, rng))


def exchange_map(matroid: Matroid, a: Iterable[int], b: Iterable[int]) -> ExchangeMap:
    """Exchange bijection g from A-minus-B onto B-minus-A with (B+u)-g(u) independent.

    Built from the bipartite exchange graph (edge (u, v) present iff ``(B + u) - v`` is
    independent) via augmenting-path matching; a perfect matching always
    exists when ``a`` and ``b`` are bases. Left vertices and their neighbor
    lists are processed in ascending id order, so the result is
    deterministic.
    """
    a_set = as_elements(a)
    b_set = as_elements(b)
    target = matroid.rank()
    for name, s in (("a", a_set), ("b", b_set)):
        if len(s) != target or not matroid.is_independent(s):
            raise ValueError(f"{name} is not a base of the matroid")
    left = sorted(a_set - b_set)
    right = sorted(b_set - a_set)
    neighbors = {
        u: [v for v in right if matroid.is_independent((b_set - {v}) | {u})] for u in left
    }

    match_of_right: dict[int, int] = {}

    def try_augment(u: int, visited: set[int]) -> bool:
        for v in neighbors[u]:
            if v in visited:
                continue
            visited.add(v)
            if v not in match_of_right or try_augment(match_of_right[v], visited):
                match_of_right[v] = u
                return True
        return False

    for u in left:
        if not try_augment(u, set()):
            raise RuntimeError(
                "no perfect exchange matching between the given bases; "
                "the independence oracle is inconsistent"
            )
    pairs = tuple(sorted((u, v) for v, u in match_of_right.items()))
    return ExchangeMap(pairs)


def iter_independent_sets(
    matroid: Matroid, max_size: int | None = None
) -> Iterator[frozenset[int]]:
    """Enumerate every independent set of size at most ``max_size`` exactly once.

    Walks the subset lattice depth-first, extending only by larger element
    ids; downward closure guarantees every independent set is reached
    through its sorted prefix chain.
    """
    elems = sorted(matroid.elements)
    limit = matroid.rank() if max_size is None else min(max_size, matroid.rank())

    def grow(current: set[int], start: int) -> Iterator[frozenset[int]]:
        yield frozenset(current)
        if len(current) >= limit:
            return
        for idx in range(start, len(elems)):
            e = elems[idx]
            if matroid._independent(frozenset(current | {e})):
                current.add(e)
                yield from grow(current, idx + 1)
                current.remove(e)

    yield from grow(set(), 0)


def matroid_from_json(doc: dict) -> Matroid:
    """Rebuild a matroid from its JSON document (contractions never serialize)."""
    variant = doc.get("variant")
    if variant == "uniform":
        return UniformMatroid(int(doc["n"]), int(doc["k"]))
    if variant == "partition":
        return PartitionMatroid(
            tuple(frozenset(b) for b in doc["blocks"]),
            tuple(int(c) for c in doc["capacities"]),
        )
    if variant == "graphic":
        return GraphicMatroid(
            int(doc["num_vertices"]), tuple((int(u), int(v)) for u, v in doc["edges"])
        )
    raise ValueError(f"unknown matroid variant: {variant!r}")
