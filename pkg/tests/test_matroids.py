import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    all_bases,
    exact_random_base_distribution,
    independent_sets_unpruned,
    random_matroid,
)
from weaksub.matroids import (
    ContractedMatroid,
    CountingMatroid,
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
    exchange_map,
    iter_independent_sets,
    matroid_from_json,
    max_weight_base,
    random_base,
)

TRIANGLE = GraphicMatroid(3, ((0, 1), (1, 2), (0, 2)))


def test_uniform_basics():
    m = UniformMatroid(5, 3)
    assert m.rank() == 3
    assert m.is_independent({0, 1, 2})
    assert not m.is_independent({0, 1, 2, 3})
    assert UniformMatroid(3, 7).rank() == 3


def test_partition_capacity():
    m = PartitionMatroid((frozenset({0, 1}), frozenset({2, 3})), (1, 1))
    assert m.is_independent({0, 2})
    assert not m.is_independent({0, 1})
    assert m.rank() == 2


def test_partition_validation():
    with pytest.raises(ValueError):
        PartitionMatroid((frozenset({0, 1}), frozenset({1, 2})), (1, 1))
    with pytest.raises(ValueError):
        PartitionMatroid((frozenset({0, 2}),), (1,))
    with pytest.raises(ValueError):
        PartitionMatroid((frozenset({0, 1}),), (1, 1))


def test_graphic_cycle():
    assert not TRIANGLE.is_independent({0, 1, 2})
    assert TRIANGLE.is_independent({0, 1})
    path = GraphicMatroid(4, ((0, 1), (1, 2), (2, 3)))
    assert path.rank() == 3
    assert TRIANGLE.rank_of({0, 1, 2}) == 2


def test_graphic_self_loop_and_parallel():
    m = GraphicMatroid(3, ((0, 0), (0, 1), (0, 1)))
    assert not m.is_independent({0})
    assert m.is_independent({1})
    assert not m.is_independent({1, 2})
    assert m.rank() == 1


def test_contraction_queries():
    m = UniformMatroid(4, 2).contract({0})
    assert m.is_independent({1})
    assert not m.is_independent({1, 2})
    assert not m.is_independent({0, 1})  # touches the contracted set: false, no error
    assert m.rank() == 1
    assert list(m.elements) == [1, 2, 3]


def test_contract_rank_and_identity():
    assert UniformMatroid(4, 2).contract({3}).rank() == 1
    m = GraphicMatroid(4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)))
    ident = m.contract(())
    for s in independent_sets_unpruned(m):
        assert ident.is_independent(s) == m.is_independent(s)
    assert ident.rank() == m.rank()


def test_contract_triangle_makes_parallel():
    contracted = TRIANGLE.contract({0})
    assert contracted.is_independent({1})
    assert contracted.is_independent({2})
    assert not contracted.is_independent({1, 2})


def test_contract_dependent_raises():
    with pytest.raises(ValueError):
        TRIANGLE.contract({0, 1, 2})
    with pytest.raises(ValueError):
        ContractedMatroid(TRIANGLE, {0, 1, 2})


def test_out_of_range_ids():
    with pytest.raises(ValueError):
        UniformMatroid(3, 2).is_independent({5})
    with pytest.raises(ValueError):
        TRIANGLE.contract({0}).is_independent({9})


def test_max_weight_base_examples():
    assert max_weight_base(TRIANGLE, {0: 5.0, 1: 3.0, 2: 4.0}) == {0, 2}
    assert max_weight_base(UniformMatroid(4, 2), {0: 3, 1: 1, 2: 2, 3: 0}) == {0, 2}
    # negative weights are still used to complete a base
    assert max_weight_base(UniformMatroid(3, 2), {0: 5.0, 1: -1.0, 2: -2.0}) == {0, 1}
    with pytest.raises(ValueError):
        max_weight_base(UniformMatroid(3, 2), {0: 1.0, 1: 2.0})


def test_max_weight_base_ties_prefer_small_ids():
    assert max_weight_base(UniformMatroid(4, 2), {0: 1, 1: 1, 2: 1, 3: 1}) == {0, 1}


@pytest.mark.parametrize("seed", range(12))
def test_max_weight_base_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    matroid = random_matroid(rng, max_n=8)
    if matroid.rank() == 0:
        return
    weights = {e: float(rng.normal()) for e in matroid.elements}
    found = max_weight_base(matroid, weights)
    assert matroid.is_independent(found) and len(found) == matroid.rank()
    best = max(sum(weights[e] for e in b) for b in all_bases(matroid))
    assert sum(weights[e] for e in found) == pytest.approx(best)


def test_max_weight_base_random_partition_vs_bases():
    rng = np.random.default_rng(7)
    matroid = PartitionMatroid(
        (frozenset(range(0, 4)), frozenset(range(4, 7)), frozenset(range(7, 10))),
        (2, 1, 1),
    )
    for _ in range(5):
        weights = {e: float(rng.normal()) for e in matroid.elements}
        found = max_weight_base(matroid, weights)
        best = max(sum(weights[e] for e in b) for b in all_bases(matroid))
        assert sum(weights[e] for e in found) == pytest.approx(best)


def test_random_base_uniform_matroid_frequencies():
    matroid = UniformMatroid(3, 2)
    rng = np.random.default_rng(42)
    counts = Counter(tuple(sorted(random_base(matroid, rng))) for _ in range(10_000))
    assert set(counts) == {(0, 1), (0, 2), (1, 2)}
    for freq in counts.values():
        assert abs(freq / 10_000 - 1 / 3) < 0.02


def test_random_base_free_matroid():
    matroid = UniformMatroid(5, 5)
    rng = np.random.default_rng(1)
    for _ in range(20):
        assert random_base(matroid, rng) == frozenset(range(5))


def test_random_base_triangle_matches_exact_process_distribution():
    exact = exact_random_base_distribution(TRIANGLE)
    assert all(len(b) == 2 for b in exact)
    rng = np.random.default_rng(3)
    draws = 10_000
    counts = Counter(random_base(TRIANGLE, rng) for _ in range(draws))
    for base, prob in exact.items():
        p = float(prob)
        tol = 4 * np.sqrt(p * (1 - p) / draws) + 1e-9
        assert abs(counts[base] / draws - p) < tol


def test_exchange_map_single_pair_and_identity():
    matroid = UniformMatroid(3, 2)
    assert exchange_map(matroid, {0, 1}, {1, 2}).pairs == ((0, 2),)
    assert exchange_map(matroid, {0, 1}, {0, 1}).pairs == ()
    with pytest.raises(ValueError):
        exchange_map(matroid, {0}, {1, 2})


def _check_exchange_invariants(matroid, a, b):
    mapping = exchange_map(matroid, a, b)
    domain = [u for u, _ in mapping.pairs]
    codomain = [v for _, v in mapping.pairs]
    assert sorted(domain) == sorted(a - b)
    assert sorted(set(codomain)) == sorted(b - a)  # injective and onto
    for u, v in mapping.pairs:
        assert matroid.is_independent((b | {u}) - {v})


def test_exchange_map_validity_on_seeded_base_pairs():
    # 100 seeded instances spread across all matroid variants
    checked = 0
    seed = 0
    while checked < 100:
        seed += 1
        rng = np.random.default_rng(seed)
        matroid = random_matroid(rng, max_n=9)
        if matroid.rank() < 2:
            continue
        a = random_base(matroid, rng)
        b = random_base(matroid, rng)
        _check_exchange_invariants(matroid, a, b)
        checked += 1


def test_downward_closure_on_seeded_pairs():
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        matroid = random_matroid(rng, max_n=8)
        s = random_base(matroid, rng)
        for e in s:
            assert matroid.is_independent(s - {e})


def test_exchange_axiom_exhaustive():
    specs = [
        UniformMatroid(6, 3),
        PartitionMatroid(
            (frozenset({0, 1, 2}), frozenset({3, 4}), frozenset({5, 6, 7})), (1, 2, 1)
        ),
        GraphicMatroid(5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3), (0, 0))),
        UniformMatroid(9, 4).contract({2, 5}),
    ]
    for matroid in specs:
        independents = independent_sets_unpruned(matroid)
        for a in independents:
            for b in independents:
                if len(a) >= len(b):
                    continue
                assert any(matroid.is_independent(a | {u}) for u in b - a)


def test_contraction_consistency_exhaustive():
    specs = [
        UniformMatroid(6, 4),
        GraphicMatroid(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3))),
        PartitionMatroid((frozenset({0, 1, 2}), frozenset({3, 4, 5})), (2, 1)),
    ]
    for matroid in specs:
        for s in independent_sets_unpruned(matroid):
            contracted = matroid.contract(s)
            rest = [e for e in matroid.elements if e not in s]
            for mask in range(1 << len(rest)):
                t = frozenset(rest[i] for i in range(len(rest)) if mask >> i & 1)
                assert contracted.is_independent(t) == matroid.is_independent(s | t)


def test_rank_of_monotone_and_submodular():
    specs = [
        UniformMatroid(6, 3),
        GraphicMatroid(4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3))),
        PartitionMatroid((frozenset({0, 1, 2, 3}), frozenset({4, 5, 6})), (2, 1)),
    ]
    for matroid in specs:
        subsets = independent_sets_unpruned(UniformMatroid(matroid.n, matroid.n))
        ranks = {s: matroid.rank_of(s) for s in subsets}
        for a in subsets:
            for b in subsets:
                assert ranks[a & b] + ranks[a | b] <= ranks[a] + ranks[b]
                if a <= b:
                    assert ranks[a] <= ranks[b]


def test_rank_of_matches_exhaustive_max_independent_subset():
    rng = np.random.default_rng(5)
    for _ in range(20):
        matroid = random_matroid(rng, max_n=7)
        independents = independent_sets_unpruned(matroid)
        for s in independents[:: max(1, len(independents) // 10)]:
            brute = max(
                len(t) for t in independents if t <= s
            )
            assert matroid.rank_of(s) == brute


def test_iter_independent_sets_matches_unpruned():
    rng = np.random.default_rng(9)
    for _ in range(15):
        matroid = random_matroid(rng, max_n=8)
        pruned = set(iter_independent_sets(matroid))
        assert pruned == set(independent_sets_unpruned(matroid))


def test_counting_matroid_counts_through_contraction():
    counter = CountingMatroid(TRIANGLE)
    assert counter.queries == 0
    counter.is_independent({0, 1})
    assert counter.queries == 1
    contracted = ContractedMatroid(counter, frozenset({0}))
    assert counter.queries == 2  # construction validates independence
    contracted.is_independent({1})
    assert counter.queries == 3


def test_json_round_trip():
    specs = [
        UniformMatroid(5, 2),
        PartitionMatroid((frozenset({0, 1}), frozenset({2, 3, 4})), (1, 2)),
        GraphicMatroid(4, ((0, 1), (1, 2), (0, 1))),
    ]
    for matroid in specs:
        doc = json.loads(json.dumps(matroid.to_json()))
        back = matroid_from_json(doc)
        assert type(back) is type(matroid)
        assert list(back.elements) == list(matroid.elements)
        for s in independent_sets_unpruned(matroid):
            assert back.is_independent(s) == matroid.is_independent(s)


def test_contraction_has_no_json_form():
    with pytest.raises(ValueError):
        UniformMatroid(4, 2).contract({0}).to_json()
    with pytest.raises(ValueError):
        matroid_from_json({"variant": "transversal"})


def test_degenerate_matroids():
    empty = UniformMatroid(0, 0)
    assert empty.rank() == 0
    assert empty.is_independent(())
    assert list(iter_independent_sets(empty)) == [frozenset()]
    zero_rank = UniformMatroid(4, 0)
    assert zero_rank.rank() == 0
    assert not zero_rank.is_independent({0})
    assert max_weight_base(zero_rank, {e: 1.0 for e in range(4)}) == frozenset()
    with_empty_block = PartitionMatroid(
        (frozenset({0, 1}), frozenset()), (1, 0)
    )
    assert with_empty_block.rank() == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_matroid_axioms_property(seed):
    rng = np.random.default_rng(seed)
    matroid = random_matroid(rng, max_n=6)
    independents = independent_sets_unpruned(matroid)
    assert frozenset() in independents
    for s in independents:
        for e in s:
            assert matroid.is_independent(s - {e})
    for a in independents:
        for b in independents:
            if len(a) < len(b):
                assert any(matroid.is_independent(a | {u}) for u in b - a)
