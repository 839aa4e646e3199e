"""Selection algorithms over (value oracle, matroid) pairs.

Residual random greedy grows a solution for rank-many rounds; each round
weights the remaining elements by their marginal value, extracts a
max-weight base of the contracted matroid, and adds one uniformly random
element of it. Alongside it live the deterministic greedy and random
baselines, a brute-force optimum for small instances, the padded variant
(extra free elements, distribution-equivalent output), and an analysis mode
that tracks a shrinking subset of a given optimum via exchange bijections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .matroids import (
    ContractedMatroid,
    CountingMatroid,
    ExchangeMap,
    Matroid,
    as_elements,
    exchange_map,
    iter_independent_sets,
    max_weight_base,
    _random_base_steps,
)
from .oracles import ValueOracle

__all__ = [
    "IterationRecord",
    "RunTrace",
    "AnalysisTrace",
    "residual_random_greedy",
    "standard_greedy",
    "random_baseline",
    "brute_force_opt",
    "padded_variant",
    "rrg_with_analysis",
]


@dataclass(frozen=True)
class IterationRecord:
    """One algorithm round: candidates considered, element chosen, new state."""

    index: int
    candidate_base: tuple[int, ...]
    chosen: int
    solution: tuple[int, ...]
    value: float
    value_queries: int
    independence_queries: int


@dataclass
class RunTrace:
    """Full record of a run; query counts are totals for this run only."""

    algorithm: str
    initial_value: float
    iterations: list[IterationRecord]
    final_set: frozenset[int]
    final_value: float
    value_queries: int
    independence_queries: int
    solver_flags: list[str] = field(default_factory=list)

    def values(self) -> list[float]:
        """Objective trajectory f(S_0), f(S_1), ..., f(S_k)."""
        return [self.initial_value] + [rec.value for rec in self.iterations]

    def to_jsonl(self) -> str:
        lines = []
        for rec in self.iterations:
            lines.append(
                json.dumps(
                    {
                        "iteration": rec.index,
                        "candidate_base": list(rec.candidate_base),
                        "chosen": rec.chosen,
                        "solution": list(rec.solution),
                        "value": rec.value,
                        "value_queries": rec.value_queries,
                        "independence_queries": rec.independence_queries,
                    }
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")

    def to_csv_text(self) -> str:
        rows = ["iteration,chosen,value,value_queries_cum,independence_queries_cum"]
        rows.append(f"0,,{self.initial_value:.17g},1,0")
        for rec in self.iterations:
            rows.append(
                f"{rec.index},{rec.chosen},{rec.value:.17g},"
                f"{rec.value_queries},{rec.independence_queries}"
            )
        return "\n".join(rows) + "\n"


@dataclass
class AnalysisTrace:
    """Shrinking optimum subsets maintained alongside a greedy run.

    ``opt_sets[i]`` has k - i elements and its union with the run's i-th
    solution is a base; ``removed[i]`` is the element dropped at round i + 1
    and ``exchange_maps[i]`` the bijection that selected it.
    """

    opt_sets: list[frozenset[int]]
    removed: list[int]
    exchange_maps: list[ExchangeMap]


def _draw(rng, candidates: tuple[int, ...]) -> int:
    # Rejection-free index draw over the sorted candidate list.
    idx = min(int(rng.random() * len(candidates)), len(candidates) - 1)
    return candidates[idx]


def _rrg_engine(
    f: ValueOracle,
    matroid: Matroid,
    rng,
    label: str,
    pre_draw: Callable[[int, frozenset[int], tuple[int, ...]], None] | None = None,
    post_draw: Callable[[int, int], None] | None = None,
) -> RunTrace:
    counting = CountingMatroid(matroid)
    k = matroid.rank()
    queries_before = f.queries
    flags_before = len(f.flags)
    current_set: frozenset[int] = frozenset()
    current_value = f.evaluate(())
    initial_value = current_value
    records: list[IterationRecord] = []
    for i in range(1, k + 1):
        residual: Matroid = (
            ContractedMatroid(counting, current_set) if current_set else counting
        )
        remaining = list(residual.elements)
        values = {u: f.evaluate(current_set | {u}) for u in remaining}
        weights = {u: values[u] - current_value for u in remaining}
        candidates = tuple(sorted(max_weight_base(residual, weights)))
        if pre_draw is not None:
            pre_draw(i, current_set, candidates)
        chosen = _draw(rng, candidates)
        if post_draw is not None:
            post_draw(i, chosen)
        current_set = current_set | {chosen}
        current_value = values[chosen]
        records.append(
            IterationRecord(
                index=i,
                candidate_base=candidates,
                chosen=chosen,
                solution=tuple(sorted(current_set)),
                value=current_value,
                value_queries=f.queries - queries_before,
                independence_queries=counting.queries,
            )
        )
    assert len(current_set) == k and matroid.is_independent(current_set)
    return RunTrace(
        algorithm=label,
        initial_value=initial_value,
        iterations=records,
        final_set=current_set,
        final_value=current_value,
        value_queries=f.queries - queries_before,
        independence_queries=counting.queries,
        solver_flags=list(f.flags[flags_before:]),
    )


def residual_random_greedy(f: ValueOracle, matroid: Matroid, rng) -> RunTrace:
    """Randomized greedy for matroid-constrained maximization.

    Runs rank-many rounds; round i computes the marginals of all remaining
    elements once (reused as the round's weights), takes a max-weight base
    of the matroid contracted by the current solution, and adds a uniformly
    random element of that base. Uses at most 2nk + 2 value queries and
    O(nk) independence queries.
    """
    return _rrg_engine(f, matroid, rng, "rrg")


def standard_greedy(f: ValueOracle, matroid: Matroid) -> RunTrace:
    """Deterministic greedy: repeatedly add the feasible element with the
    largest marginal value (ties broken by smallest id) until the solution
    is a base. ``candidate_base`` records each round's feasible elements.
    """
    counting = CountingMatroid(matroid)
    queries_before = f.queries
    flags_before = len(f.flags)
    current_set: frozenset[int] = frozenset()
    current_value = f.evaluate(())
    initial_value = current_value
    pool = sorted(matroid.elements)
    records: list[IterationRecord] = []
    index = 0
    while True:
        feasible = [
            e for e in pool if counting._independent(frozenset(current_set | {e}))
        ]
        if not feasible:
            break
        index += 1
        values = {u: f.evaluate(current_set | {u}) for u in feasible}
        chosen = max(feasible, key=lambda u: (values[u] - current_value, -u))
        current_set = current_set | {chosen}
        current_value = values[chosen]
        pool = [e for e in feasible if e != chosen]
        records.append(
            IterationRecord(
                index=index,
                candidate_base=tuple(feasible),
                chosen=chosen,
                solution=tuple(sorted(current_set)),
                value=current_value,
                value_queries=f.queries - queries_before,
                independence_queries=counting.queries,
            )
        )
    assert len(current_set) == matroid.rank() and matroid.is_independent(current_set)
    return RunTrace(
        algorithm="greedy",
        initial_value=initial_value,
        iterations=records,
        final_set=current_set,
        final_value=current_value,
        value_queries=f.queries - queries_before,
        independence_queries=counting.queries,
        solver_flags=list(f.flags[flags_before:]),
    )


def random_baseline(matroid: Matroid, f: ValueOracle, rng) -> RunTrace:
    """Random-base baseline with the objective evaluated along the way.

    The trajectory is the sequential uniform-feasible-element process; f is
    evaluated exactly rank + 1 times (including the empty set).
    """
    counting = CountingMatroid(matroid)
    queries_before = f.queries
    flags_before = len(f.flags)
    current_set: frozenset[int] = frozenset()
    current_value = f.evaluate(())
    initial_value = current_value
    records: list[IterationRecord] = []
    index = 0
    for feasible, chosen in _random_base_steps(counting, rng):
        index += 1
        current_set = current_set | {chosen}
        current_value = f.evaluate(current_set)
        records.append(
            IterationRecord(
                index=index,
                candidate_base=feasible,
                chosen=chosen,
                solution=tuple(sorted(current_set)),
                value=current_value,
                value_queries=f.queries - queries_before,
                independence_queries=counting.queries,
            )
        )
    assert len(current_set) == matroid.rank() and matroid.is_independent(current_set)
    return RunTrace(
        algorithm="random",
        initial_value=initial_value,
        iterations=records,
        final_set=current_set,
        final_value=current_value,
        value_queries=f.queries - queries_before,
        independence_queries=counting.queries,
        solver_flags=list(f.flags[flags_before:]),
    )


def brute_force_opt(f: ValueOracle, matroid: Matroid) -> tuple[frozenset[int], float]:
    """Exact optimum over all independent sets; small instances only (n <= 20).

    Walks the pruned subset lattice (downward closure lets the walk extend
    independent sets only) and returns the first maximizer encountered in
    that deterministic order.
    """
    if matroid.n > 20:
        raise ValueError(f"ground set too large to enumerate (n={matroid.n} > 20)")
    best_set: frozenset[int] = frozenset()
    best_value = f.evaluate(())
    for s in iter_independent_sets(matroid):
        if not s:
            continue
        value = f.evaluate(s)
        if value > best_value:
            best_value = value
            best_set = s
    return best_set, best_value


class _PaddedMatroid(Matroid):
    """Ground set extended by free elements that never affect independence."""

    def __init__(self, base: Matroid, num_pads: int):
        self.base = base
        start = (max(base.elements) + 1) if base.n else 0
        self.pads = frozenset(range(start, start + num_pads))
        self._elements = tuple(sorted(base.elements)) + tuple(sorted(self.pads))

    @property
    def n(self) -> int:
        return len(self._elements)

    @property
    def elements(self):
        return self._elements

    def _id_universe(self) -> frozenset[int]:
        return frozenset(self._elements)

    def _independent(self, s: frozenset[int]) -> bool:
        return self.base._independent(s - self.pads)

    def rank(self) -> int:
        return self.base.rank() + len(self.pads)


def padded_variant(f: ValueOracle, matroid: Matroid, k_prime: int, rng) -> RunTrace:
    """Residual random greedy on the instance padded with ``k_prime`` free elements.

    The objective ignores the padding (f(S) = f(S minus pads)) and any set's
    independence is decided by its non-pad part, so the run lasts
    rank + k_prime rounds; the returned trace has the padding stripped from
    ``final_set`` while the per-iteration records keep the raw padded run.
    The distribution of the stripped output matches the unpadded algorithm.
    """
    if k_prime < 0:
        raise ValueError("k_prime must be non-negative")
    padded = _PaddedMatroid(matroid, k_prime)
    pads = padded.pads
    wrapper = ValueOracle(
        lambda s: f.evaluate(s - pads), name=f"padded({f.name})" if f.name else "padded"
    )
    flags_before = len(f.flags)
    trace = _rrg_engine(wrapper, padded, rng, "rrg-padded")
    trace.final_set = trace.final_set - pads
    trace.solver_flags.extend(f.flags[flags_before:])
    return trace


def rrg_with_analysis(
    f: ValueOracle, matroid: Matroid, opt: Iterable[int], rng
) -> tuple[RunTrace, AnalysisTrace]:
    """Greedy run instrumented with a shrinking subset of a given optimal base.

    Before each round's random draw, an exchange bijection between the
    round's candidate base and the current optimum subset (both bases of the
    contracted matroid) is fixed; the drawn element then evicts its image.
    Fixing the bijection before the draw keeps the evicted element uniform
    over the tracked subset, which is what makes the tracked values
    comparable to theory. The greedy trace is bit-identical to an
    uninstrumented run with the same seed.
    """
    opt_set = as_elements(opt)
    if matroid.n > 20:
        raise ValueError(f"analysis mode is limited to n <= 20 (n={matroid.n})")
    k = matroid.rank()
    if len(opt_set) != k or not matroid.is_independent(opt_set):
        raise ValueError("opt must be a base of the matroid")

    opt_sets: list[frozenset[int]] = [opt_set]
    removed: list[int] = []
    maps: list[ExchangeMap] = []

    def pre_draw(i: int, current: frozenset[int], candidates: tuple[int, ...]) -> None:
        residual = ContractedMatroid(matroid, current) if current else matroid
        maps.append(exchange_map(residual, candidates, opt_sets[-1]))

    def post_draw(i: int, chosen: int) -> None:
        previous = opt_sets[-1]
        evicted = chosen if chosen in previous else maps[-1][chosen]
        removed.append(evicted)
        opt_sets.append(previous - {evicted})

    trace = _rrg_engine(f, matroid, rng, "rrg", pre_draw=pre_draw, post_draw=post_draw)

    for i, tracked in enumerate(opt_sets):
        solution = (
            frozenset() if i == 0 else frozenset(trace.iterations[i - 1].solution)
        )
        union = solution | tracked
        assert len(tracked) == k - i
        assert len(union) == k and matroid.is_independent(union)
    return trace, AnalysisTrace(opt_sets=opt_sets, removed=removed, exchange_maps=maps)
